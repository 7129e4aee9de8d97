"""JSON formats for algebras and presentations.

Algebra files::

    {"name": ..., "dim": n, "field_order": m, "labels": [...],
     "unit": [coeff, ...], "sc": [[i, j, k, coeff], ...]}

Presentation files::

    {"name": ..., "generators": [...], "field_order": m,
     "relations": [[[word, coeff], ...], ...],
     "orientation": {"order": "deglex", "precedence": [...]}}

A coefficient is a list of ``[power, num, den]`` triples meaning
sum(num/den * z**power) with z a primitive m-th root of unity.  Zero is
the empty list.  Words are lists of generator names.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from gmpy2 import mpq

from .algebra import FDAlgebra
from .cyclotomic import CyclotomicField, field
from .errors import ParseError
from .freealg import NCPoly, Presentation

__all__ = [
    "coeff_to_json",
    "coeff_from_json",
    "algebra_to_json",
    "algebra_from_json",
    "dump_algebra",
    "parse_algebra_file",
    "presentation_to_json",
    "presentation_from_json",
    "parse_presentation_file",
    "canonical_json",
    "fixture_path",
    "load_fixture",
]


def canonical_json(obj) -> str:
    """Deterministic serialisation used for every emitted file and report."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def coeff_to_json(c, F: CyclotomicField) -> list:
    out = []
    for k, q in enumerate(F.coeffs(F(c))):
        if q:
            out.append([k, int(q.numerator), int(q.denominator)])
    return out


def coeff_from_json(data, F: CyclotomicField, where: str = "coefficient"):
    if not isinstance(data, list):
        raise ParseError(f"{where}: expected a list of [power, num, den] triples")
    total = F.zero
    for t, item in enumerate(data):
        if not (isinstance(item, list) and len(item) == 3 and all(isinstance(v, int) and not isinstance(v, bool) for v in item)):
            raise ParseError(f"{where}[{t}]: expected [power, num, den] with integers")
        k, num, den = item
        if den == 0:
            raise ParseError(f"{where}[{t}]: zero denominator")
        total = total + F.zeta(k) * F(mpq(num, den))
    return total


# algebras ------------------------------------------------------------------------


def algebra_to_json(A: FDAlgebra) -> dict:
    F = A.field
    sc = [[i, j, k, coeff_to_json(c, F)] for i, j, k, c in A.sc_entries]
    return {
        "name": A.name,
        "dim": A.dim,
        "field_order": F.order,
        "labels": list(A.labels),
        "unit": [coeff_to_json(c, F) for c in A.unit],
        "sc": sc,
    }


def _require(data: dict, key: str, kind, path: str):
    if key not in data:
        raise ParseError(f"missing key {key!r}", path=path)
    value = data[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(f"key {key!r} has the wrong type", path=path)
    return value


def algebra_from_json(data, path: str = "<data>", check: bool = True) -> FDAlgebra:
    """Build and validate an algebra; associativity and unit errors pass through."""
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", path=path)
    n = _require(data, "dim", int, path)
    m = _require(data, "field_order", int, path)
    if n < 1 or m < 1:
        raise ParseError("dim and field_order must be positive", path=path)
    F = field(m)
    labels = data.get("labels") or [f"b{i}" for i in range(n)]
    if not isinstance(labels, list) or len(labels) != n or not all(isinstance(s, str) for s in labels):
        raise ParseError("labels must be a list of dim strings", path=path)
    unit_raw = _require(data, "unit", list, path)
    if len(unit_raw) != n:
        raise ParseError("unit must have dim coefficients", path=path)
    unit = [coeff_from_json(c, F, f"unit[{i}]") for i, c in enumerate(unit_raw)]
    products: dict = {}
    for t, entry in enumerate(_require(data, "sc", list, path)):
        if not (isinstance(entry, list) and len(entry) == 4):
            raise ParseError(f"sc[{t}] must be [i, j, k, coeff]", path=path)
        i, j, k, c = entry
        for v in (i, j, k):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                raise ParseError(f"sc[{t}]: index out of range", path=path)
        if k in products.get((i, j), {}):
            raise ParseError(f"sc[{t}]: duplicate entry ({i},{j},{k})", path=path)
        products.setdefault((i, j), {})[k] = coeff_from_json(c, F, f"sc[{t}]")
    name = data.get("name") or Path(path).stem
    return FDAlgebra(F, labels, unit, products, name=str(name), check=check)


def _load(path) -> tuple[dict, str]:
    path = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path=path) from exc
    try:
        return json.loads(text), path
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path=path, position=f"line {exc.lineno}, column {exc.colno}") from exc


def parse_algebra_file(path) -> FDAlgebra:
    data, path = _load(path)
    return algebra_from_json(data, path)


def dump_algebra(A: FDAlgebra, path=None) -> str:
    text = canonical_json(algebra_to_json(A))
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# presentations -------------------------------------------------------------------


def presentation_to_json(P: Presentation) -> dict:
    F = P.field
    rels = []
    for rel in P.relations:
        terms = sorted(rel.terms.items(), key=lambda t: (len(t[0]), t[0]))
        rels.append([[list(w), coeff_to_json(c, F)] for w, c in terms])
    return {
        "name": P.name,
        "generators": list(P.generators),
        "field_order": F.order,
        "relations": rels,
        "orientation": {"order": "deglex", "precedence": list(P.precedence)},
    }


def presentation_from_json(data, path: str = "<data>") -> Presentation:
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", path=path)
    gens = _require(data, "generators", list, path)
    if not gens or not all(isinstance(g, str) and g for g in gens) or len(set(gens)) != len(gens):
        raise ParseError("generators must be distinct non-empty strings", path=path)
    m = _require(data, "field_order", int, path)
    if m < 1:
        raise ParseError("field_order must be positive", path=path)
    F = field(m)
    orient = data.get("orientation", {"order": "deglex", "precedence": gens})
    if not isinstance(orient, dict) or orient.get("order", "deglex") != "deglex":
        raise ParseError("only deglex orientation is supported", path=path)
    prec = orient.get("precedence", gens)
    if not isinstance(prec, list) or sorted(prec) != sorted(gens):
        raise ParseError("precedence must list every generator once", path=path)
    rels = []
    for r, rel in enumerate(_require(data, "relations", list, path)):
        if not isinstance(rel, list):
            raise ParseError(f"relations[{r}] must be a term list", path=path)
        terms: dict = {}
        for t, term in enumerate(rel):
            if not (isinstance(term, list) and len(term) == 2 and isinstance(term[0], list)):
                raise ParseError(f"relations[{r}][{t}] must be [word, coeff]", path=path)
            word = tuple(term[0])
            if any(g not in gens for g in word):
                raise ParseError(f"relations[{r}][{t}]: unknown generator", path=path)
            terms[word] = terms.get(word, F.zero) + coeff_from_json(term[1], F, f"relations[{r}][{t}]")
        rels.append(NCPoly(F, terms))
    name = data.get("name") or Path(path).stem
    return Presentation(F, tuple(gens), rels, tuple(prec), str(name))


def parse_presentation_file(path) -> Presentation:
    data, path = _load(path)
    return presentation_from_json(data, path)


# bundled fixtures -----------------------------------------------------------------


def fixture_path(name: str) -> Path:
    """Path of a bundled data file; ``name`` may omit the .json suffix."""
    if not name.endswith(".json"):
        name += ".json"
    return Path(str(resources.files("ncgeom") / "data" / name))


def load_fixture(name: str):
    path = fixture_path(name)
    data, p = _load(path)
    if "generators" in data:
        return presentation_from_json(data, p)
    return algebra_from_json(data, p)

