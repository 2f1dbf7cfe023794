"""YAML text formats for polytopes, semitoric polygons and ingredient lists.

Every number is written as an integer or a ``"p/q"`` string; Taylor
coefficients may also use ``"a + b*pi"``. Floats are rejected on input.

    name: square
    dim: 2
    vertices: [[0, 0], [2, 0], [2, 2], [0, 2]]

A semitoric file adds ``cuts: [{lambda: "1", epsilon: 1, k: 0}]`` and
optionally ``heights``; the polygon may be given by ``halfspaces:
[{normal: [0, 1], offset: 0}, ...]`` instead of vertices when it is
unbounded. An ingredient file also carries ``taylor``: one
``{degree, coeffs: [[i, j, "p/q"], ...]}`` block per cut.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import yaml

from .geometry import (
    ConvexPolytope, HalfSpace, polytope_from_halfspaces, polytope_from_vertices,
)
from .metrics import IngredientList, TaylorTruncation
from .semitoric import (
    CutLine, PrimitiveSemitoricPolygon, SemitoricHeights, canonical_orbit,
    validate_primitive,
)
from .symbolic import fmt_rat, parse_pilinear, parse_rat

__all__ = [
    "ParseError", "Document", "parse_document", "load_document",
    "dump_polytope", "dump_semitoric", "dump_ingredients", "parse_config",
]


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Document:
    kind: str                     # "polytope" | "semitoric" | "ingredients"
    name: str
    polytope: ConvexPolytope
    cuts: tuple = ()
    heights: tuple | None = None
    taylor: tuple = ()

    def primitive(self) -> PrimitiveSemitoricPolygon:
        return validate_primitive(self.polytope, self.cuts)

    def semitoric_heights(self) -> SemitoricHeights:
        prim = self.primitive()
        if self.heights is None:
            if prim.mf:
                raise ParseError("heights: required for a semitoric computation")
            return SemitoricHeights(())
        return SemitoricHeights.make(prim, self.heights)

    def ingredients(self) -> IngredientList:
        prim = self.primitive()
        return IngredientList(canonical_orbit(prim), self.semitoric_heights(), self.taylor)


def _rat(x, field):
    try:
        return parse_rat(x, field)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _int(x, field):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{field}: expected an integer, got {x!r}")
    return x


def _list(x, field):
    if not isinstance(x, list):
        raise ParseError(f"{field}: expected a list")
    return x


def _polygon(doc) -> ConvexPolytope:
    if "vertices" in doc:
        pts = []
        for i, v in enumerate(_list(doc["vertices"], "vertices")):
            pts.append(tuple(_rat(c, f"vertices[{i}][{j}]")
                             for j, c in enumerate(_list(v, f"vertices[{i}]"))))
        if not pts:
            raise ParseError("vertices: empty list")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise ParseError("vertices: points of different lengths")
        dim = dims.pop()
        if "dim" in doc and _int(doc["dim"], "dim") != dim:
            raise ParseError(f"dim: says {doc['dim']} but vertices have {dim} coordinates")
        return polytope_from_vertices(pts)
    if "halfspaces" in doc:
        hs = []
        for i, h in enumerate(_list(doc["halfspaces"], "halfspaces")):
            if not isinstance(h, dict) or "normal" not in h or "offset" not in h:
                raise ParseError(f"halfspaces[{i}]: need normal and offset")
            n = tuple(_rat(c, f"halfspaces[{i}].normal[{j}]")
                      for j, c in enumerate(_list(h["normal"], f"halfspaces[{i}].normal")))
            hs.append(HalfSpace.make(n, _rat(h["offset"], f"halfspaces[{i}].offset")))
        dim = _int(doc.get("dim", len(hs[0].normal) if hs else 2), "dim")
        return polytope_from_halfspaces(hs, dim)
    raise ParseError("need either vertices or halfspaces")


def _cuts(doc):
    out = []
    for i, c in enumerate(_list(doc.get("cuts", []), "cuts")):
        if not isinstance(c, dict) or "lambda" not in c:
            raise ParseError(f"cuts[{i}]: need lambda")
        lam = _rat(c["lambda"], f"cuts[{i}].lambda")
        eps = _int(c.get("epsilon", 1), f"cuts[{i}].epsilon")
        k = _int(c.get("k", 0), f"cuts[{i}].k")
        try:
            out.append(CutLine(lam, eps, k))
        except ValueError as exc:
            raise ParseError(f"cuts[{i}]: {exc}") from None
    return tuple(out)


def _taylor(block, field) -> TaylorTruncation:
    if not isinstance(block, dict) or "degree" not in block:
        raise ParseError(f"{field}: need degree and coeffs")
    deg = _int(block["degree"], f"{field}.degree")
    coeffs = {}
    for i, row in enumerate(_list(block.get("coeffs", []), f"{field}.coeffs")):
        row = _list(row, f"{field}.coeffs[{i}]")
        if len(row) != 3:
            raise ParseError(f"{field}.coeffs[{i}]: expected [i, j, value]")
        a, b = _int(row[0], f"{field}.coeffs[{i}][0]"), _int(row[1], f"{field}.coeffs[{i}][1]")
        try:
            coeffs[(a, b)] = parse_pilinear(row[2], f"{field}.coeffs[{i}][2]")
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    try:
        return TaylorTruncation.make(deg, coeffs)
    except ValueError as exc:
        raise ParseError(f"{field}: {exc}") from None


def parse_document(text: str) -> Document:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}: " if mark is not None else ""
        raise ParseError(f"{where}{getattr(exc, 'problem', exc)}") from None
    if not isinstance(doc, dict):
        raise ParseError("expected a mapping at the top level")
    name = str(doc.get("name", ""))
    poly = _polygon(doc)
    cuts = _cuts(doc)
    heights = None
    if "heights" in doc:
        heights = tuple(_rat(h, f"heights[{i}]") for i, h in enumerate(_list(doc["heights"], "heights")))
    taylor = ()
    if "taylor" in doc:
        blocks = doc["taylor"]
        if isinstance(blocks, dict):
            blocks = [blocks]
        taylor = tuple(_taylor(b, f"taylor[{i}]") for i, b in enumerate(_list(blocks, "taylor")))
    if "taylor" in doc:
        kind = "ingredients"
    elif "cuts" in doc or heights is not None or not poly.bounded:
        kind = "semitoric"
    else:
        kind = "polytope"
    if "kind" in doc:
        kind = str(doc["kind"])
        if kind not in ("polytope", "semitoric", "ingredients"):
            raise ParseError(f"kind: unknown document kind {kind!r}")
    return Document(kind, name, poly, cuts, heights, taylor)


def load_document(path) -> Document:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return parse_document(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


# -- output -------------------------------------------------------------------

def _num(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else fmt_rat(x)


def _poly_block(poly: ConvexPolytope) -> dict:
    if poly.bounded:
        return {"dim": poly.dim, "vertices": [[_num(c) for c in v] for v in poly.vertices]}
    return {"dim": poly.dim,
            "halfspaces": [{"normal": list(h.normal), "offset": _num(h.offset)} for h in poly.facets]}


def _dump(d) -> str:
    return yaml.safe_dump(d, sort_keys=False, default_flow_style=None)


def dump_polytope(poly: ConvexPolytope, name: str = "") -> str:
    d = {"name": name} if name else {}
    d.update(_poly_block(poly))
    return _dump(d)


def _semitoric_dict(poly, cuts, heights, name):
    d = {"name": name} if name else {}
    d["kind"] = "semitoric"
    d.update(_poly_block(poly))
    d["cuts"] = [{"lambda": _num(c.lam), "epsilon": c.epsilon, "k": c.k} for c in cuts]
    if heights is not None:
        d["heights"] = [_num(h) for h in heights]
    return d


def dump_semitoric(prim: PrimitiveSemitoricPolygon, heights=None, name: str = "") -> str:
    hs = heights.h if isinstance(heights, SemitoricHeights) else heights
    return _dump(_semitoric_dict(prim.polygon, prim.cuts, hs, name))


def dump_ingredients(ing: IngredientList, name: str = "") -> str:
    prim = ing.orbit.representative
    d = _semitoric_dict(prim.polygon, prim.cuts, ing.heights.h, name)
    d["kind"] = "ingredients"
    d["taylor"] = [{"degree": t.degree,
                    "coeffs": [[i, j, _num(v.a) if v.b == 0 else str(v)] for (i, j), v in t.coeffs]}
                   for t in ing.taylor]
    return _dump(d)


def parse_config(text: str) -> dict:
    """``key = value`` (or ``key: value``) lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        for sep in ("=", ":"):
            if sep in line:
                key, val = line.split(sep, 1)
                out[key.strip().replace("-", "_")] = val.strip()
                break
        else:
            raise ParseError(f"config line {n}: expected key = value")
    return out
