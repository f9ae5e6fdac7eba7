"""JSON codecs for lattices, set functions, measures and compact sets.

Rationals travel as ``"p/q"`` strings.  Finite subsets travel as
``"{a,b}"`` strings (``"{}"`` for the empty set) so they can be used as
object keys.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .exceptions import ConfigError
from .intervals import IntervalUnion, MeasureModel
from .lattice import FiniteLattice, build_lattice
from .measure import DiscreteMeasure
from .representation import ADJOINED_BOTTOM, FiniteSpaceModel
from .setfun import SetFunction


def rational_str(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise ConfigError(f"not a rational: {s!r}")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except ValueError as e:
            raise ConfigError(f"not a rational: {s!r}") from e
    raise ConfigError(f"rationals are written as \"p/q\" strings, got {s!r}")


def set_str(s) -> str:
    return "{" + ",".join(sorted(map(str, s))) + "}"


def parse_set(s: str) -> frozenset:
    s = s.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ConfigError(f"not a set literal: {s!r}")
    body = s[1:-1].strip()
    return frozenset(p.strip() for p in body.split(",")) if body else frozenset()


def element_str(x) -> str:
    if x is ADJOINED_BOTTOM:
        return "ADJOINED_BOTTOM"
    if isinstance(x, frozenset):
        return set_str(x)
    return str(x)


def _decode_element(x):
    if isinstance(x, str) and x.startswith("{"):
        return parse_set(x)
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    raise ConfigError(f"unsupported element id {x!r}")


def load_json(path_or_obj):
    if isinstance(path_or_obj, (dict, list)):
        return path_or_obj
    try:
        return json.loads(Path(path_or_obj).read_text())
    except FileNotFoundError as e:
        raise ConfigError(f"no such file: {path_or_obj}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path_or_obj}: invalid JSON ({e})") from e


# ---------------------------------------------------------------------------
# lattices


def lattice_to_json(L: FiniteLattice) -> dict:
    n = len(L)
    leq = [[i, j] for i in range(n) for j in range(n) if i != j and L.leq_matrix[i, j]]
    return {"elements": [element_str(x) if isinstance(x, frozenset) else x for x in L.elements], "leq": leq}


def lattice_from_json(obj, base: Path | None = None) -> tuple:
    """``(lattice, model)``; ``model`` is set for ``{"ground": [...]}`` descriptions."""
    if isinstance(obj, str):
        p = Path(obj)
        if base is not None and not p.is_absolute():
            p = base / p
        return lattice_from_json(load_json(p), p.parent)
    if not isinstance(obj, dict):
        raise ConfigError("a lattice is an object with elements and leq, or a ground set")
    if "ground" in obj:
        model = FiniteSpaceModel([str(r) for r in obj["ground"]])
        return model.compacts, model
    try:
        elements = [_decode_element(x) for x in obj["elements"]]
        pairs = [(elements[i], elements[j]) for i, j in obj["leq"]]
    except (KeyError, IndexError, TypeError) as e:
        raise ConfigError(f"malformed lattice description: {e}") from e
    return build_lattice(elements, pairs), None


def _element_lookup(L: FiniteLattice) -> dict:
    return {element_str(x): x for x in L.elements}


# ---------------------------------------------------------------------------
# set functions


def setfunction_to_json(f: SetFunction, model: FiniteSpaceModel | None = None) -> dict:
    lat = {"ground": list(model.ground)} if model is not None else lattice_to_json(f.lattice)
    return {
        "lattice": lat,
        "direction": f.direction,
        "values": {element_str(x): rational_str(v) for x, v in f.values.items()},
    }


def setfunction_from_json(obj, base: Path | None = None, *, normalize: bool = True) -> tuple:
    """``(SetFunction, model)`` from the set-function file format."""
    if isinstance(obj, (str, Path)):
        p = Path(obj)
        return setfunction_from_json(load_json(p), p.parent, normalize=normalize)
    if "lattice" not in obj and "model" not in obj:
        raise ConfigError("a set function needs a lattice (inline, file name, or ground set)")
    L, model = lattice_from_json(obj.get("lattice", obj.get("model")), base)
    look = _element_lookup(L)
    values = {}
    for k, v in obj.get("values", {}).items():
        if k not in look:
            raise ConfigError(f"value given for unknown element {k!r}")
        values[look[k]] = parse_rational(v)
    return SetFunction(L, values, obj.get("direction", "inc"), normalize=normalize), model


# ---------------------------------------------------------------------------
# measures


def measure_to_json(m: DiscreteMeasure) -> dict:
    return {
        "carrier_kind": m.carrier_kind,
        "weights": {element_str(c): rational_str(w) for c, w in m.support_weights().items()},
    }


def measure_from_json(obj, lattice: FiniteLattice | None = None) -> DiscreteMeasure:
    obj = load_json(obj)
    kind = obj.get("carrier_kind", "elements")
    look = _element_lookup(lattice) if lattice is not None else {}
    weights = {}
    for k, v in obj.get("weights", {}).items():
        if k == "ADJOINED_BOTTOM":
            c = ADJOINED_BOTTOM
        elif k in look:
            c = look[k]
        else:
            c = _decode_element(k)
        weights[c] = parse_rational(v)
    return DiscreteMeasure(list(weights), weights, carrier_kind=kind, signed=bool(obj.get("signed", False)))


# ---------------------------------------------------------------------------
# compact sets


def intervals_to_json(q: IntervalUnion) -> dict:
    return {"intervals": [[rational_str(p), rational_str(r)] for p, r in q.intervals]}


def intervals_from_json(obj) -> IntervalUnion:
    obj = load_json(obj)
    try:
        return IntervalUnion(tuple((parse_rational(p), parse_rational(r)) for p, r in obj["intervals"]))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"malformed interval union: {e}") from e


def measure_model_to_json(m: MeasureModel) -> dict:
    return {
        "pieces": [[[rational_str(a), rational_str(b)], rational_str(h)] for (a, b), h in m.pieces],
        "atoms": {rational_str(x): rational_str(w) for x, w in m.atoms},
    }


def measure_model_from_json(obj) -> MeasureModel:
    obj = load_json(obj)
    try:
        pieces = tuple(((parse_rational(a), parse_rational(b)), parse_rational(h)) for (a, b), h in obj.get("pieces", []))
        atoms = {parse_rational(x): parse_rational(w) for x, w in obj.get("atoms", {}).items()}
    except (TypeError, ValueError) as e:
        raise ConfigError(f"malformed measure model: {e}") from e
    return MeasureModel(pieces, tuple(atoms.items()))


def compact_from_json(obj):
    """A finite subset (``{"set": [...]}`` or ``"{a,b}"``) or an interval union."""
    obj = load_json(obj) if not isinstance(obj, str) or not obj.startswith("{") else obj
    if isinstance(obj, str):
        return parse_set(obj)
    if "set" in obj:
        return frozenset(str(r) for r in obj["set"])
    if "intervals" in obj:
        return intervals_from_json(obj)
    raise ConfigError("a compact is {\"set\": [...]} or {\"intervals\": [...]}")


def compact_to_json(q):
    if isinstance(q, IntervalUnion):
        return intervals_to_json(q)
    return {"set": sorted(map(str, q))}
