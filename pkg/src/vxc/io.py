"""JSON round-tripping with rationals written as "p/q" strings.

Output is deterministic: keys are sorted and every list keeps the order of
the underlying object.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from . import exact as ex
from .lattice import Lattice
from .lifts import Lift, VerifyReport
from .polytope import AffineMap, Polytope


class FormatError(ValueError):
    pass


def _q(x) -> str:
    return ex.fmt(x)


def _qv(v):
    return [_q(x) for x in v]


def _qm(M):
    return [_qv(r) for r in M]


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise FormatError(f"not a rational: {s!r}")
    try:
        return ex.frac(s)
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise FormatError(f"not a rational: {s!r}") from err


def parse_vector(text: str) -> tuple:
    """``"1/2, 0, -3"`` or ``"1/2 0 -3"``."""
    parts = text.replace(",", " ").split()
    return tuple(parse_rational(p) for p in parts)


def parse_matrix(text: str) -> tuple:
    """Rows separated by ``;``."""
    return tuple(parse_vector(r) for r in text.split(";") if r.strip())


def _vec(data, where):
    if not isinstance(data, list):
        raise FormatError(f"{where}: expected a list")
    return tuple(parse_rational(x) for x in data)


def _mat(data, where):
    if not isinstance(data, list):
        raise FormatError(f"{where}: expected a list of rows")
    return tuple(_vec(r, f"{where}[{i}]") for i, r in enumerate(data))


# --- encoders ---------------------------------------------------------------------

def lattice_to_json(L: Lattice) -> dict:
    out = {"type": "lattice", "label": L.label, "rank": L.rank, "gram": _qm(L.gram)}
    if L.basis is not None:
        out["basis"] = _qm(L.basis)
    if L.weights is not None:
        out["weights"] = _qv(L.weights)
    return out


def polytope_to_json(P: Polytope) -> dict:
    out = {"type": "polytope", "dim": P.dim}
    if P.ineqs is not None:
        out["ineqs"] = [{"a": _qv(a), "b": _q(b)} for a, b in P.ineqs]
        out["irredundant"] = P.irredundant
    if P.eqs:
        out["eqs"] = [{"a": _qv(a), "b": _q(b)} for a, b in P.eqs]
    if P.vertices is not None:
        out["vertices"] = _qm(P.vertices)
    return out


def lift_to_json(L: Lift) -> dict:
    out = {"type": "lift", "q": polytope_to_json(L.q),
           "proj": {"matrix": _qm(L.proj.matrix), "offset": _qv(L.proj.offset)},
           "facet_count": L.facet_count, "meta": L.meta}
    if L.target is not None:
        out["target"] = polytope_to_json(L.target)
    return out


def report_to_json(r: VerifyReport) -> dict:
    return {"type": "verify_report", "exact": r.exact, "facet_count": r.facet_count,
            "missed_vertices": _qm(r.missed_vertices),
            "escaped_vertices": _qm(r.escaped_vertices)}


def to_json(obj) -> dict:
    if isinstance(obj, Lattice):
        return lattice_to_json(obj)
    if isinstance(obj, Polytope):
        return polytope_to_json(obj)
    if isinstance(obj, Lift):
        return lift_to_json(obj)
    if isinstance(obj, VerifyReport):
        return report_to_json(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(data) -> str:
    if not isinstance(data, (dict, list)):
        data = to_json(data)
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


# --- decoders ---------------------------------------------------------------------

def lattice_from_json(d: dict) -> Lattice:
    try:
        gram = _mat(d["gram"], "gram")
        if "basis" in d:
            basis = _mat(d["basis"], "basis")
        elif "embedding" in d:
            # ambient × rank, columns are basis vectors
            basis = ex.transpose(_mat(d["embedding"], "embedding"))
        else:
            basis = None
        weights = _vec(d["weights"], "weights") if "weights" in d else None
    except KeyError as err:
        raise FormatError(f"lattice: missing field {err}") from err
    try:
        return Lattice(gram, basis, weights, d.get("label", ""))
    except ValueError as err:
        raise FormatError(f"lattice: {err}") from err


def _rows(data, where):
    if not isinstance(data, list):
        raise FormatError(f"{where}: expected a list")
    out = []
    for i, r in enumerate(data):
        if not isinstance(r, dict) or "a" not in r or "b" not in r:
            raise FormatError(f"{where}[{i}]: expected {{a, b}}")
        out.append((_vec(r["a"], f"{where}[{i}].a"), parse_rational(r["b"])))
    return tuple(out)


def polytope_from_json(d: dict) -> Polytope:
    if "dim" not in d:
        raise FormatError("polytope: missing field 'dim'")
    ineqs = _rows(d["ineqs"], "ineqs") if "ineqs" in d else None
    eqs = _rows(d.get("eqs", []), "eqs")
    verts = _mat(d["vertices"], "vertices") if "vertices" in d else None
    try:
        return Polytope(int(d["dim"]), ineqs, eqs, verts, bool(d.get("irredundant", False)))
    except ValueError as err:
        raise FormatError(f"polytope: {err}") from err


def lift_from_json(d: dict) -> Lift:
    try:
        q = polytope_from_json(d["q"])
        proj = AffineMap(_mat(d["proj"]["matrix"], "proj.matrix"),
                         _vec(d["proj"]["offset"], "proj.offset"))
    except KeyError as err:
        raise FormatError(f"lift: missing field {err}") from err
    target = polytope_from_json(d["target"]) if "target" in d else None
    try:
        return Lift(q, proj, target, dict(d.get("meta", {})))
    except ValueError as err:
        raise FormatError(f"lift: {err}") from err


def from_json(d: dict):
    kind = d.get("type") if isinstance(d, dict) else None
    if kind is None and isinstance(d, dict) and "gram" in d:
        kind = "lattice"
    decoders = {"lattice": lattice_from_json, "polytope": polytope_from_json,
                "lift": lift_from_json}
    if kind not in decoders:
        raise FormatError(f"unknown or missing object type {kind!r}")
    return decoders[kind](d)


def load(path) -> object:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise FormatError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from err
    try:
        return from_json(data)
    except FormatError as err:
        raise FormatError(f"{path}: {err}") from err


def save(obj, path) -> None:
    Path(path).write_text(dumps(obj))
