"""Encoded datasets for the single and serial cases, plus the per-case check runner."""

from __future__ import annotations

import json
from importlib import resources
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping, Sequence

from . import serial
from .brackets import BracketGraph, find_relations, random_assignment, relation_from_poly, verify_syzygy
from .crosshair import crosshair_search, verify_order
from .groebner import COPRIME, GradedRing, IdealBasis, buchberger, ci_series, hilbert_series_quotient
from .order import OrderMatrix
from .poly import FactoredRatFunc, HilbertSeries, Mono, Poly, VarContext, parse_poly, ratfunc_equal, ratfunc_normalize, series_expand

MultiDeg = tuple[int, ...]


class CaseError(ValueError):
    """Unknown case id or inconsistent case data."""


# ---------------------------------------------------------------------------
# helpers


def _edge(k: int, color: int, *ends: str) -> tuple:
    return (k, "alt", color, list(ends))


def _graph(vertices: Sequence[str], edges: Sequence[tuple], n: int = 5) -> BracketGraph:
    return BracketGraph.build(n, list(vertices), list(edges))


def graph_multidegree(g: BracketGraph, keys: Sequence[tuple]) -> MultiDeg:
    """Number of tensor letters of each key used by the graph."""
    c = Counter((e.kind, e.k, e.color) for e in g.edges if e.kind != "dummy")
    return tuple(c[k] for k in keys)


def mono_multidegree(m: Mono, degrees: Sequence[MultiDeg]) -> MultiDeg:
    out = [0] * len(degrees[0])
    for e, d in zip(m, degrees):
        for i, x in enumerate(d):
            out[i] += e * x
    return tuple(out)


def relation_degree(f: Poly, degrees: Mapping[str, MultiDeg]) -> MultiDeg:
    """Common multidegree of all terms; raises CaseError when f is not homogeneous."""
    degs = [degrees[n] for n in f.ctx.names]
    found = {mono_multidegree(m, degs) for m in f.terms}
    if len(found) != 1:
        raise CaseError(f"relation is not homogeneous: degrees {sorted(found)}")
    return found.pop()


def _ratfunc(grading: VarContext, num: Sequence[Mono], den: Sequence[Mono]) -> FactoredRatFunc:
    one = Poly.const(grading, 1)
    top = one
    for m in num:
        top = top * (one - Poly.monomial(grading, m))
    return FactoredRatFunc.build(grading, top, [(m, 1) for m in den])


def _univariate(num: Sequence[int], den: Sequence[int]) -> FactoredRatFunc:
    g = VarContext.of(["t"])
    return _ratfunc(g, [(d,) for d in num], [(d,) for d in den])


# ---------------------------------------------------------------------------
# case records


@dataclass
class CaseData:
    case_id: str
    grading: VarContext
    degrees: dict[str, MultiDeg]
    relations: dict[str, Poly] = field(default_factory=dict)
    target: FactoredRatFunc | None = None
    graphs: dict[str, BracketGraph] = field(default_factory=dict)
    tensor_keys: tuple = ()
    notes: list[str] = field(default_factory=list)
    aux_degrees: dict[str, MultiDeg] = field(default_factory=dict)  # symbols used only inside relations

    def __post_init__(self):
        for name, f in self.relations.items():
            try:
                relation_degree(f, {**self.degrees, **self.aux_degrees})
            except CaseError as e:
                raise CaseError(f"{self.case_id} relation {name}: {e}") from None

    @property
    def names(self) -> list[str]:
        return list(self.degrees)

    def ctx(self) -> VarContext:
        return VarContext.of(self.names)

    def total_degrees(self) -> list[int]:
        return [sum(d) for d in self.degrees.values()]

    def relation_degrees(self) -> dict[str, MultiDeg]:
        return {k: relation_degree(f, {**self.degrees, **self.aux_degrees}) for k, f in self.relations.items()}

    def sampler(self, n: int = 5) -> Callable[[int], dict]:
        keys = list(self.tensor_keys)
        return lambda seed: random_assignment(keys, n, seed)


def _parse_relations(names: Sequence[str], rels: Mapping[str, str]) -> dict[str, Poly]:
    ctx = VarContext.of(list(names))
    return {k: parse_poly(ctx, v) for k, v in rels.items()}


# U1: SL_5 on 2 Lambda^2 + Lambda^3 + Lambda^4; letters Lambda^2 (colors 1, 2), Lambda^3, Lambda^4
U1_KEYS = (("alt", 2, 1), ("alt", 2, 2), ("alt", 3, 1), ("alt", 4, 1))


def u1_graphs() -> dict[str, BracketGraph]:
    E = _edge
    G: dict[str, BracketGraph] = {}
    for a, b in ((1, 2), (2, 1)):
        G[f"g{a}{b}{b}"] = _graph(["v0", "v1"], [E(4, 1, *["v0"] * 4), E(2, a, "v0", "v1"), E(2, b, "v1", "v1"), E(2, b, "v1", "v1")])
    for a, b in ((1, 1), (2, 2), (1, 2)):
        G[f"g{a}{b}"] = _graph(["v0", "v1"], [E(2, a, "v0", "v0"), E(2, b, "v0", "v0"), E(3, 1, "v0", "v1", "v1"), E(3, 1, "v1", "v1", "v1")])
    G["g"] = _graph(["v0", "v1"], [E(4, 1, *["v0"] * 4), E(3, 1, "v0", "v1", "v1"), E(3, 1, "v1", "v1", "v1")])
    for a in (1, 2):
        G[f"g{a}"] = _graph(["v0"], [E(3, 1, "v0", "v0", "v0"), E(2, a, "v0", "v0")])
    G["g112122"] = _graph(
        ["v0", "v1", "v2"],
        [E(2, 1, "v0", "v0"), E(2, 1, "v0", "v0"), E(2, 2, "v0", "v1"), E(3, 1, "v1", "v1", "v1"), E(2, 1, "v1", "v2"), E(2, 2, "v2", "v2"), E(2, 2, "v2", "v2")],
    )
    for name, (c1, c2, c3) in {"g1122": (1, 1, 2), "g2122": (2, 1, 2), "g1211": (1, 2, 1)}.items():
        G[name] = _graph(
            ["v0", "v1", "v2"],
            [E(4, 1, *["v0"] * 4), E(2, c1, "v0", "v1"), E(3, 1, "v1", "v1", "v1"), E(2, c2, "v1", "v2"), E(2, c3, "v2", "v2"), E(2, c3, "v2", "v2")],
        )
    G["g21"] = _graph(
        ["v0", "v1", "v2"],
        [E(4, 1, *["v0"] * 4), E(2, 1, "v0", "v1"), E(3, 1, "v1", "v1", "v1"), E(2, 2, "v1", "v2"), E(4, 1, *["v2"] * 4)],
    )
    return G


U1_RELATIONS = {
    "R1": "16*g1122*g2*g211 - 6*g2^2*g211^2 - 3*g1*g1122*g122 - 8*g11*g122^2 - 8*g12*g122*g211"
          " - 3*g112122*g21 - 16*g1122^2 - 16*g1211*g2122",
    "R2": "2*g*g112122 - 4*g12*g1122 - 2*g2122*g11 - 2*g1211*g22 - g122*g2*g11 + g211*g1*g22 - 2*g211*g2*g12",
}


def case_u1() -> CaseData:
    G = u1_graphs()
    degrees = {k: graph_multidegree(g, U1_KEYS) for k, g in G.items()}
    return CaseData(
        "U1",
        VarContext.of("a1 a2 b c"),
        degrees,
        _parse_relations(list(degrees), U1_RELATIONS),
        _univariate([10, 12], [2, 2, 3, 4, 4, 4, 4, 4, 5, 6, 6, 6, 7]),
        G,
        U1_KEYS,
    )


# U2: SL_5 on 3 Lambda^2 + Lambda^4
U2_KEYS = (("alt", 2, 1), ("alt", 2, 2), ("alt", 2, 3), ("alt", 4, 1))
U2_LISTED = ("122", "322", "233", "133", "123", "213")
U2_EXTRA = ("211", "311")
U2_LONG = ("12311", "12322", "13233", "11233", "11322", "22133")


def u2_graphs(short: Sequence[str] = U2_LISTED + U2_EXTRA) -> dict[str, BracketGraph]:
    E = _edge
    G: dict[str, BracketGraph] = {}
    for s in short:
        a, b, c = map(int, s)
        G["f" + s] = _graph(["v0", "v1"], [E(4, 1, *["v0"] * 4), E(2, a, "v0", "v1"), E(2, b, "v1", "v1"), E(2, c, "v1", "v1")])
    for s in U2_LONG:
        a, b, c, d, e = map(int, s)
        G["f" + s] = _graph(["v0", "v1"], [E(2, a, "v0", "v0"), E(2, b, "v0", "v0"), E(2, c, "v0", "v1"), E(2, d, "v1", "v1"), E(2, e, "v1", "v1")])
    return G


U2_RELATIONS = {
    "R1": "-2*f122*f13233 - 2*f322*f11233 + f233*f11322 - f133*f12322 + 2*f123*f22133",
    "R2": "2*f211*f13233 - 2*f311*f22133 + f133*f11322 - f233*f12311 + 2*f213*f11233",
    "R3": "2*f311*f12322 - 2*f211*f22133 + f122*f11233 + f322*f12311 - 2*(f213 + f123)*f11322",
}


def case_u2() -> CaseData:
    G = u2_graphs()
    degrees = {k: graph_multidegree(g, U2_KEYS) for k, g in G.items()}
    return CaseData(
        "U2",
        VarContext.of("a1 a2 a3 c"),
        degrees,
        _parse_relations(list(degrees), U2_RELATIONS),
        _univariate([9, 9, 9], [4] * 8 + [5] * 6),
        G,
        U2_KEYS,
        ["generator list extended by f211, f311, which the relations use"],
    )


def u2_reconciliation() -> list[str]:
    """Which f_abc index sets make all three relations homogeneous and match the series."""
    names = set()
    for rel in U2_RELATIONS.values():
        names |= {tok for tok in rel.replace("(", " ").replace(")", " ").replace("*", " ").replace("+", " ").replace("-", " ").split() if tok.startswith("f") and len(tok) == 4}
    used = sorted(n[1:] for n in names)
    lines = [f"short generators referenced by relations: {' '.join(used)}"]
    lines.append(f"listed short generators: {' '.join(U2_LISTED)}")
    missing = sorted(set(used) - set(U2_LISTED))
    lines.append(f"referenced but not listed: {' '.join(missing) or '-'}")
    cands = sorted({"".join(map(str, t)) for t in _triples()} - set(U2_LISTED))
    ok = []
    for extra in combinations(cands, 2):
        if not set(missing) <= set(extra):
            continue
        G = u2_graphs(U2_LISTED + extra)
        degrees = {k: graph_multidegree(g, U2_KEYS) for k, g in G.items()}
        try:
            _parse_and_check(degrees)
        except (CaseError, KeyError):
            continue
        ok.append(extra)
    for extra in ok:
        lines.append(f"homogeneous 8-element set: listed + {' '.join(extra)}")
    lines.append(f"degree-4 generators with this set: {len(U2_LISTED) + 2}, matching the 8 factors (1-t^4)")
    return lines


def _triples():
    for a in range(1, 4):
        for b in range(1, 4):
            for c in range(b, 4):
                yield (a, b, c)


def _parse_and_check(degrees):
    for f in _parse_relations(list(degrees), U2_RELATIONS).values():
        relation_degree(f, degrees)


# U3: degrees in the Z^4 grading of four copies of C^7; h has degree 0 there and is kept only in the relations
def u3_degrees() -> dict[str, MultiDeg]:
    e = lambda *idx: tuple(sum(1 for i in idx if i == j) for j in range(1, 5))
    d: dict[str, MultiDeg] = {}
    for a in (1, 2, 3):
        d[f"h{a}"] = e(a, 4)
    for a, b in ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)):
        d[f"h{a}{b}"] = e(a, b)
    for a, b in ((1, 2), (1, 3), (2, 3)):
        d[f"ht{a}{b}"] = e(a, b, 4)
    d["h123"] = e(1, 2, 3)
    d["ht"] = e(4, 4)
    d["h123123"] = e(1, 1, 2, 2, 3, 3)
    d["ht123"] = e(1, 2, 3, 4)
    return d


U3_RELATIONS = {
    "R1": "h13^2*h22 - 2*h12*h13*h23 + h11*h23^2 + h33*h12^2 - h11*h22*h33 - 8*h123^2 + h*h123123",
    "R2": "h3^2*h12^2 - 2*h2*h3*h12*h13 + h2^2*h13^2 - h3^2*h11*h22 + 2*h1*h3*h13*h22 + 2*h2*h3*h11*h23"
          " - 2*h1*h3*h12*h23 - 2*h1*h2*h13*h23 + h1^2*h23^2 - 2*h2^2*h11*h33 + 4*h1*h2*h12*h33"
          " - 2*h1^2*h22*h33 - 4*h23*ht12*ht13 + 2*h22*ht13^2 + 4*h13*ht12*ht23 - 4*h12*ht13*ht23"
          " + 2*h11*ht23^2 - 8*h3*ht12*h123 + 8*h2*ht13*h123 - 8*h1*ht23*h123 + 4*ht12^2*h33"
          " - 16*ht123^2 + 32*h123123*ht",
}


def u3_g2_series() -> FactoredRatFunc:
    g = VarContext.of("t1 t2 t3 t4")
    e = lambda *idx: tuple(sum(1 for i in idx if i == j) for j in range(1, 5))
    den = [e(i, j) for i in range(1, 5) for j in range(i, 5)]
    den += [tuple(1 - int(k == j) for j in range(1, 5)) for k in range(1, 5)]
    den += [e(1, 2, 3, 4)]
    return _ratfunc(g, [e(1, 1, 2, 2, 3, 3, 4, 4)], den)


def case_u3() -> CaseData:
    degrees = u3_degrees()
    aux = {"h": (0, 0, 0, 0)}
    rels = _parse_relations(list(degrees) + list(aux), U3_RELATIONS)
    return CaseData(
        "U3", VarContext.of("t1 t2 t3 t4"), degrees, rels, u3_g2_series(),
        notes=["h has degree 0 in this grading and is left out of the generator degrees"],
        aux_degrees=aux,
    )


def u3_syzygy_degrees() -> list[MultiDeg]:
    return [(2, 2, 2, 2), (2, 2, 2, 0)]


# ---------------------------------------------------------------------------
# W1 at p = 2: the i-invariants (two Lambda^4 loops joined by a Lambda^2 edge)

W1P2_KEYS = tuple(("alt", 2, c) for c in (1, 2)) + tuple(("alt", 4, c) for c in range(1, 5))


def w1_p2_graphs() -> dict[str, BracketGraph]:
    """i_abe joins the 4-forms a and b by a 2-edge of color e; j_xyc hangs the 4-form c off a two-loop vertex."""
    G = {}
    for a, b in combinations(range(1, 5), 2):
        for c in (1, 2):
            G[f"i{a}{b}{c}"] = _graph(["v0", "v1"], [_edge(4, a, *["v0"] * 4), _edge(4, b, *["v1"] * 4), _edge(2, c, "v0", "v1")])
    for c in range(1, 5):
        for name, link in (("j12", 2), ("j21", 1)):
            G[f"{name}{c}"] = _graph(
                ["v0", "v1"],
                [_edge(2, 1, "v0", "v0"), _edge(2, 2, "v0", "v0"), _edge(2, link, "v0", "v1"), _edge(4, c, *["v1"] * 4)],
            )
    return G


def _w1_p2_relation(a: int, b: int, c: int) -> str:
    return (
        f"i{a}{b}1*j12{c} - i{a}{c}1*j12{b} + i{b}{c}1*j12{a}"
        f" + i{a}{b}2*j21{c} - i{a}{c}2*j21{b} + i{b}{c}2*j21{a}"
    )


W1P2_RELATIONS = {f"R{a}{b}{c}": _w1_p2_relation(a, b, c) for a, b, c in combinations(range(1, 5), 3)}


def case_w1_p2() -> CaseData:
    G = w1_p2_graphs()
    degrees = {k: graph_multidegree(g, W1P2_KEYS) for k, g in G.items()}
    return CaseData(
        "W1(2)",
        VarContext.of("a1 a2 c1 c2 c3 c4"),
        degrees,
        _parse_relations(list(degrees), W1P2_RELATIONS),
        None,
        G,
        W1P2_KEYS,
    )


# ---------------------------------------------------------------------------
# A-lemma algebras: covariant degrees, factor series and quotient presentations


def _lemma_grading(case: str) -> VarContext:
    return VarContext.of({"A1": "t1 t2 s1 s2 s3 s4", "A2": "t1 t2 s1 s2 s3 r", "A3": "t s r1 r2"}[case])


def covariant_degree(case: str, p: int, name: str) -> MultiDeg:
    """Multidegree of a covariant symbol such as ``x1_3`` (x^(1)_3), ``xs_2`` (x*_2), ``yo_4``."""
    g = _lemma_grading(case)
    kind, k = name.rsplit("_", 1)
    k = int(k)
    d = dict.fromkeys(g.names, 0)
    if case == "A3":
        if kind == "ytri":
            d["s"] = k
            return tuple(d.values())
        t, sa = "t", {"x1": ["r1"], "x2": ["r2"], "xs": ["r1", "r2"], "x": []}
    elif kind.startswith("x"):
        t, sa = "t1", {"x1": ["s1"], "x2": ["s2"], "xs": ["s1", "s2"], "x": []}
    elif case == "A1":
        t, sa = "t2", {"y1": ["s3"], "y2": ["s4"], "ys": ["s3", "s4"], "y": []}
    else:
        t, sa = "t2", {"y1": ["s3"], "yo": ["r"], "yd": ["r", "s3"], "y": []}
    if kind not in sa:
        raise CaseError(f"unknown covariant {name} for {case}")
    d[t] = k if kind in ("x", "y") else k - 1
    for v in sa[kind]:
        d[v] += 1
    return tuple(d.values())


@dataclass
class LemmaAlgebra:
    case: str
    p: int
    grading: VarContext
    free: list[str]
    matrices: dict[str, tuple[list[str], list[str]]]  # outer products rows x cols
    symmetric: dict[str, tuple[str, list[str]]]  # scalar * v v^T, upper entries only
    trinomials: list[tuple[str, str, str]]  # (first, second, pattern)

    def entry_vars(self) -> dict[str, MultiDeg]:
        out: dict[str, MultiDeg] = {}
        deg = lambda n: covariant_degree(self.case, self.p, n)
        add = lambda a, b: tuple(x + y for x, y in zip(a, b))
        for v in self.free:
            out[v] = deg(v)
        for m, (rows, cols) in self.matrices.items():
            for i, r in enumerate(rows, 1):
                for j, c in enumerate(cols, 1):
                    out[f"{m}_{i}{j}"] = add(deg(r), deg(c))
        for m, (scal, vec) in self.symmetric.items():
            for i in range(1, len(vec) + 1):
                for j in range(i, len(vec) + 1):
                    out[f"{m}_{i}{j}"] = add(deg(scal), add(deg(vec[i - 1]), deg(vec[j - 1])))
        return out


def lemma_algebra(case: str, p: int) -> LemmaAlgebra:
    if p < 2:
        raise CaseError("lemma algebras need p >= 2")
    ks = range(0, p - 2)
    if case == "A1":
        mats = {
            "f1": (["x1_2", "x2_2"], ["y1_1", "y2_1", f"y_{p}"]),
            "f2": (["x_1", "xs_3"], [f"y1_{p + 1}", f"y2_{p + 1}", "ys_1"]),
            "g1": (["y1_2", "y2_2"], ["x1_1", "x2_1", f"x_{p}"]),
            "g2": (["y_1", "ys_3"], [f"x1_{p + 1}", f"x2_{p + 1}", "xs_1"]),
        }
        for k in ks:
            mats[f"h{k}"] = ([f"x_{2 + k}", f"xs_{4 + k}"], [f"y1_{p - k}", f"y2_{p - k}"])
            mats[f"i{k}"] = ([f"y_{2 + k}", f"ys_{4 + k}"], [f"x1_{p - k}", f"x2_{p - k}"])
        return LemmaAlgebra(case, p, _lemma_grading(case), ["xs_2", "ys_2"], mats, {}, [("f1", "f2", "rc"), ("g1", "g2", "rc")])
    if case == "A2":
        mats = {
            "d": (["yo_" + str(p), f"y1_{p + 1}"], ["x_1", "xs_3"]),
            "e": ([f"y_{p}", "y1_1"], ["x1_2", "x2_2"]),
            "f": (["yo_1", "y1_2"], ["x1_1", "x2_1", f"x_{p}"]),
            "g": (["y_1", "yd_2"], [f"x1_{p + 1}", f"x2_{p + 1}", "xs_1"]),
        }
        for k in ks:
            mats[f"h{k}"] = ([f"x_{2 + k}", f"xs_{4 + k}"], [f"yo_{p - k - 1}", f"y1_{p - k}"])
            mats[f"i{k}"] = ([f"x1_{p - k}", f"x2_{p - k}"], [f"y_{2 + k}", f"yd_{3 + k}"])
        return LemmaAlgebra(case, p, _lemma_grading(case), ["xs_2", f"yo_{p + 1}", "yd_1"], mats, {}, [("f", "g", "rc")])
    if case == "A3":
        sym = {
            "f": ("ytri_1", ["x1_1", "x2_1", f"x_{p}"]),
            "g": ("ytri_2", [f"x1_{p + 1}", f"x2_{p + 1}", "xs_1"]),
        }
        for k in range(1, p):
            sym[f"h{k}"] = (f"ytri_{2 * k + 1}", [f"x_{p - k}", f"xs_{p + 2 - k}"])
            sym[f"i{k}"] = (f"ytri_{2 * k + 2}", [f"x1_{p + 1 - k}", f"x2_{p + 1 - k}"])
        return LemmaAlgebra(case, p, _lemma_grading(case), ["xs_2", f"ytri_{2 * p + 1}"], {}, sym, [("f", "g", "sym")])
    raise CaseError(f"unknown lemma algebra {case!r}")


def lemma_ideal(alg: LemmaAlgebra) -> tuple[GradedRing, list[Poly]]:
    degs = alg.entry_vars()
    ctx = VarContext.of(list(degs))
    ring = GradedRing(ctx, alg.grading, degs)
    X = lambda n: Poly.var(ctx, n)
    p = alg.p
    gens: list[Poly] = []
    for m, (rows, cols) in alg.matrices.items():
        for i1, i2 in combinations(range(1, len(rows) + 1), 2):
            for j1, j2 in combinations(range(1, len(cols) + 1), 2):
                gens.append(X(f"{m}_{i1}{j1}") * X(f"{m}_{i2}{j2}") - X(f"{m}_{i1}{j2}") * X(f"{m}_{i2}{j1}"))
    for m, (_, vec) in alg.symmetric.items():
        n = len(vec)
        E = lambda i, j: X(f"{m}_{min(i, j)}{max(i, j)}")
        for i1, i2 in combinations(range(1, n + 1), 2):
            for j1, j2 in combinations(range(1, n + 1), 2):
                below = sum(1 for r, c in ((i1, j1), (i1, j2), (i2, j1), (i2, j2)) if r > c)
                if below <= 1:
                    f = E(i1, j1) * E(i2, j2) - E(i1, j2) * E(i2, j1)
                    if f and f not in gens and -f not in gens:
                        gens.append(f)
    for a_name, b_name, kind in alg.trinomials:
        if kind == "rc":
            for a in (1, 2):
                for b in (1, 2):
                    A = lambda j: X(f"{a_name}_{a}{j}")
                    B = lambda j: X(f"{b_name}_{b}{j}")
                    gens.append(A(3) * B(3) - A(1) * B(2) * p + A(2) * B(1) * p)
        else:
            S = lambda m, i, j: X(f"{m}_{min(i, j)}{max(i, j)}")
            for a in (1, 2, 3):
                for b in (1, 2, 3):
                    gens.append(
                        S(a_name, a, 3) * S(b_name, b, 3) - S(a_name, a, 2) * S(b_name, 1, b) * p + S(a_name, 1, a) * S(b_name, 2, b) * p
                    )
    out = []
    for f in gens:
        if f and f not in out:
            out.append(f)
    return ring, out


def lemma_factor_series(case: str, p: int) -> HilbertSeries:
    """Product of the per-block series of the lemma algebra, normalized."""
    if p < 2:
        raise CaseError("lemma algebras need p >= 2")
    g = _lemma_grading(case)
    M = lambda **kw: tuple(kw.get(n, 0) for n in g.names)
    blocks: list[tuple[list[Mono], list[Mono]]] = []
    if case == "A1":
        blocks.append(([], [M(t1=1, s1=1, s2=1), M(t2=1, s3=1, s4=1)]))
        blocks.append((
            [M(t1=2, t2=p, s1=1, s3=1, s4=1), M(t1=2, t2=p, s2=1, s3=1, s4=1)],
            [M(t1=1, s1=1, s3=1), M(t1=1, s1=1, s4=1), M(t1=1, s2=1, s3=1), M(t1=1, s2=1, s4=1),
             M(t1=1, t2=p, s1=1), M(t1=1, t2=p, s2=1), M(t1=1, t2=p, s3=1), M(t1=1, t2=p, s4=1), M(t1=1, s3=1, s4=1)],
        ))
        blocks.append((
            [M(t1=p, t2=2, s1=1, s2=1, s3=1), M(t1=p, t2=2, s1=1, s2=1, s4=1)],
            [M(t2=1, s1=1, s3=1), M(t2=1, s2=1, s3=1), M(t2=1, s1=1, s4=1), M(t2=1, s2=1, s4=1),
             M(t1=p, t2=1, s3=1), M(t1=p, t2=1, s4=1), M(t1=p, t2=1, s1=1), M(t1=p, t2=1, s2=1), M(t2=1, s1=1, s2=1)],
        ))
        for k in range(0, p - 2):
            a, b = 2 + k, p - k - 1
            blocks.append((
                [M(t1=5 + 2 * k, t2=2 * p - 2 * k - 2, s1=1, s2=1, s3=1, s4=1)],
                [M(t1=a, t2=b, s3=1), M(t1=a, t2=b, s4=1), M(t1=a + 1, t2=b, s1=1, s2=1, s3=1), M(t1=a + 1, t2=b, s1=1, s2=1, s4=1)],
            ))
            blocks.append((
                [M(t2=5 + 2 * k, t1=2 * p - 2 * k - 2, s1=1, s2=1, s3=1, s4=1)],
                [M(t2=a, t1=b, s1=1), M(t2=a, t1=b, s2=1), M(t2=a + 1, t1=b, s1=1, s3=1, s4=1), M(t2=a + 1, t1=b, s2=1, s3=1, s4=1)],
            ))
    elif case == "A2":
        blocks.append(([], [M(t1=1, s1=1, s2=1), M(t2=p, r=1), M(s3=1, r=1)]))
        blocks.append((
            [M(t1=3, t2=2 * p - 1, s1=1, s2=1, s3=1, r=1)],
            [M(t1=1, t2=p - 1, r=1), M(t1=1, t2=p, s3=1), M(t1=2, t2=p - 1, s1=1, s2=1, r=1), M(t1=2, t2=p, s1=1, s2=1, s3=1)],
        ))
        blocks.append((
            [M(t1=2, t2=p, s1=1, s2=1, s3=1)],
            [M(t1=1, t2=p, s1=1), M(t1=1, t2=p, s2=1), M(t1=1, s1=1, s3=1), M(t1=1, s2=1, s3=1)],
        ))
        blocks.append((
            [M(t1=p, t2=2, s1=1, s2=1, s3=1), M(t1=p, t2=1, s1=1, s2=1, r=1)],
            [M(s1=1, r=1), M(s2=1, r=1), M(t1=p, r=1), M(t2=1, s1=1, s3=1), M(t2=1, s2=1, s3=1),
             M(t1=p, t2=1, s3=1), M(t1=p, t2=1, s1=1), M(t1=p, t2=1, s2=1), M(t2=1, s1=1, s2=1)],
        ))
        for k in range(0, p - 2):
            blocks.append((
                [M(t1=2 * k + 5, t2=2 * p - 2 * k - 3, s1=1, s2=1, s3=1, r=1)],
                [M(t1=2 + k, t2=p - k - 1, s3=1), M(t1=3 + k, t2=p - k - 1, s1=1, s2=1, s3=1),
                 M(t1=2 + k, t2=p - k - 2, r=1), M(t1=3 + k, t2=p - k - 2, s1=1, s2=1, r=1)],
            ))
            blocks.append((
                [M(t1=2 * p - 2 * k - 2, t2=2 * k + 4, s1=1, s2=1, s3=1, r=1)],
                [M(t1=p - k - 1, t2=2 + k, s1=1), M(t1=p - k - 1, t2=2 + k, s2=1),
                 M(t1=p - k - 1, t2=2 + k, s1=1, s3=1, r=1), M(t1=p - k - 1, t2=2 + k, s2=1, s3=1, r=1)],
            ))
    elif case == "A3":
        blocks.append(([], [M(t=1, r1=1, r2=1), M(s=2 * p + 1)]))
        blocks.append((
            [M(s=3, t=2 * p, r1=2, r2=2)],
            [M(s=1, t=2 * p), M(s=1, r2=1, t=p), M(s=1, r2=2), M(s=1, r1=1, t=p), M(s=1, r1=1, r2=1), M(s=1, r1=2)],
        ))
        for k in range(1, p):
            blocks.append((
                [M(s=4 * k + 2, t=4 * p - 4 * k + 2, r1=2, r2=2)],
                [M(s=2 * k + 1, t=2 * p - 2 * k), M(s=2 * k + 1, t=2 * p - 2 * k + 1, r1=1, r2=1), M(s=2 * k + 1, t=2 * p - 2 * k + 2, r1=2, r2=2)],
            ))
            blocks.append((
                [M(s=4 * k + 4, t=4 * p - 4 * k, r1=2, r2=2)],
                [M(s=2 * k + 2, t=2 * p - 2 * k, r1=2), M(s=2 * k + 2, t=2 * p - 2 * k, r1=1, r2=1), M(s=2 * k + 2, t=2 * p - 2 * k, r2=2)],
            ))
    else:
        raise CaseError(f"unknown lemma algebra {case!r}")
    value = _ratfunc(g, [], [])
    for num, den in blocks:
        value = value * _ratfunc(g, num, den)
    return HilbertSeries(ratfunc_normalize(value), "factor-product")


def check_entry_degrees(case: str, p: int) -> list[str]:
    """Denominator factors of the factor series that match no generator degree (empty when consistent)."""
    degs = set(lemma_algebra(case, p).entry_vars().values())
    hs = lemma_factor_series(case, p)
    return [str(m) for m, _, _ in hs.value.factors if m not in degs]


def lemma_quotient_series(case: str, p: int, budget: int = 20000) -> HilbertSeries:
    if p not in (2, 3):
        raise CaseError("lemma quotient series is supported for p in {2, 3}")
    missing = check_entry_degrees(case, p)
    if missing:
        raise CaseError(f"factor-series denominators without a generator: {missing}")
    alg = lemma_algebra(case, p)
    ring, gens = lemma_ideal(alg)
    basis = IdealBasis(tuple(gens), ring)
    # grading rows give a degree-compatible order; identity completion breaks ties
    order = OrderMatrix.of([[sum(d) for d in ring.degree_matrix()]]).complete()
    return hilbert_series_quotient(ring, basis, order, budget)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class CaseReport:
    case: str
    checks: list[Check] = field(default_factory=list)
    info: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(ok), detail))
        return bool(ok)

    def to_text(self) -> str:
        lines = [f"case {self.case}"]
        lines += [f"  note: {x}" for x in self.info]
        for c in self.checks:
            lines.append(f"  [{'PASS' if c.ok else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        lines.append(f"result {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        return {"case": self.case, "ok": self.ok, "checks": {c.name: c.ok for c in self.checks}}

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


def _series_agree(a: FactoredRatFunc, b: FactoredRatFunc, degree: int) -> tuple[bool, bool]:
    exact = ratfunc_equal(ratfunc_normalize(a), ratfunc_normalize(b))
    names = list(a.ctx.names)
    expanded = series_expand(a, names, degree) == series_expand(b, names, degree)
    return exact, expanded


def _syzygy_checks(rep: CaseReport, data: CaseData, trials: int):
    sampler = data.sampler()
    for name, f in data.relations.items():
        rel = relation_from_poly(f)
        r = verify_syzygy(rel, data.graphs, sampler, trials=max(trials, len(rel)))
        rep.add(f"syzygy {name}", r.confirmed, r.summary())


def run_u1(trials: int = 10, syzygies: bool = True) -> CaseReport:
    data = case_u1()
    rep = CaseReport("U1")
    degs = data.relation_degrees()
    rep.add("relations homogeneous", True, " ".join(f"{k}={v}" for k, v in degs.items()))
    tot = sorted(sum(d) for d in degs.values())
    rep.add("relation degrees match numerator", tot == [10, 12], str(tot))
    hs = ci_series([(d,) for d in data.total_degrees()], [(10,), (12,)])
    exact, exp = _series_agree(hs.value, data.target, 20)
    rep.add("ci series equals stated series", exact and exp, "exact and to degree 20")
    if syzygies:
        _syzygy_checks(rep, data, trials)
        _relation_space_checks(rep, data)
    return rep


def _mono_text(m) -> str:
    return "*".join(nm if e == 1 else f"{nm}^{e}" for nm, e in m)


def _relation_space_checks(rep: CaseReport, data: CaseData):
    """Compare each stated relation with the relations found among all monomials of its degree."""
    sampler = data.sampler()
    for name, deg in data.relation_degrees().items():
        found = find_relations(data.graphs, data.degrees, deg, sampler)
        rep.add(f"relation space in degree of {name} is one-dimensional", len(found) == 1, f"dimension {len(found)}")
        if len(found) != 1:
            continue
        stated = {tuple(sorted(m)) for m in relation_from_poly(data.relations[name])}
        got = {tuple(sorted(m)) for m in found[0]}
        only_stated = sorted(_mono_text(m) for m in stated - got)
        only_found = sorted(_mono_text(m) for m in got - stated)
        if only_stated or only_found:
            rep.info.append(
                f"{name}: stated-only monomials {' '.join(only_stated) or '-'}; computed-only monomials {' '.join(only_found) or '-'}"
            )


def run_u2(trials: int = 10, syzygies: bool = True) -> CaseReport:
    data = case_u2()
    rep = CaseReport("U2")
    rep.info += u2_reconciliation()
    rep.add("relations homogeneous", True, " ".join(f"{k}={v}" for k, v in data.relation_degrees().items()))
    ctx = data.ctx()
    ring = GradedRing.univariate(ctx, data.total_degrees())
    basis = IdealBasis(tuple(f.rename(ctx) if f.ctx != ctx else f for f in data.relations.values()), ring)
    order = OrderMatrix.of([data.total_degrees()]).complete()
    hs = hilbert_series_quotient(ring, basis, order)
    exact, exp = _series_agree(hs.value, data.target, 20)
    rep.add("quotient series equals stated series", exact, f"certificate {hs.tag}, basis size {hs.stats.get('basis_size')}")
    rep.add("series expansions agree to degree 20", exp)
    if syzygies:
        _syzygy_checks(rep, data, trials)
        _relation_space_checks(rep, data)
    return rep


def run_u3() -> CaseReport:
    data = case_u3()
    rep = CaseReport("U3")
    rep.info += data.notes
    degs = data.relation_degrees()
    rep.add("relations homogeneous", True, " ".join(f"{k}={v}" for k, v in degs.items()))
    rep.add("relation degrees are the syzygy degrees", sorted(degs.values()) == sorted(u3_syzygy_degrees()))
    rep.add("generator count", len(data.degrees) == 16, str(len(data.degrees)))
    hs = ci_series(list(data.degrees.values()), u3_syzygy_degrees(), data.grading)
    exact, exp = _series_agree(hs.value, data.target, 8)
    rep.add("ci series equals the G2 series", exact and exp, "exact and to total degree 8")
    return rep


def run_w1_p2(trials: int = 10) -> CaseReport:
    data = case_w1_p2()
    rep = CaseReport("W1(2)")
    rep.add("relations homogeneous", True, " ".join(f"{k}={v}" for k, v in data.relation_degrees().items()))
    rep.add("relation count is 4", len(data.relations) == 4, str(len(data.relations)))
    _syzygy_checks(rep, data, trials)
    return rep


def run_serial(case: str, p: int, budget: int = 64) -> tuple[CaseReport, OrderMatrix | None, object]:
    rep = CaseReport(f"{case}({p})")
    run = serial.SerialRun.build(case, p)
    fam = run.family
    n_rel = len(serial.relation_range(case, p))
    rep.info.append(f"{len(fam.variables)} variables, {n_rel} relations")
    if case == "W1":
        rep.add("relation count is 2p-4", n_rel == 2 * p - 4, str(n_rel))
    if case == "W3":
        rep.info.append("supports: counterdiagonal products through each diagonal square")
    try:
        order, trace = crosshair_search(fam, run.prelude, budget)
    except Exception as e:  # stall, budget, designation errors
        rep.add("crosshair search", False, f"{type(e).__name__}: {e}")
        return rep, None, getattr(e, "trace", None)
    rep.add("crosshair search", True, f"{len(trace.rounds)} rows")
    for r in trace.rounds:
        rep.info.append(f"row {r.index} ({r.kind}): filtered {' '.join(sorted(r.filtered, key=lambda s: int(s[1:]))) or '-'}")
    bad = verify_order(order, fam)
    rep.add("designations strictly leading", not bad, f"{len(bad)} violations")
    if case in ("W1", "W2"):
        remaining = set(fam.designated)
        ok = True
        for r in trace.rounds:
            if r.kind == "sieve":
                top = max(remaining, key=lambda s: int(s[1:]))
                ok &= top in r.filtered
            remaining -= r.filtered
        rep.add("each sieve row filters the highest remaining index", ok)
    if case == "W1":
        hits = [serial.relation_id(case, 2 * p - r.index + 1) in r.filtered for r in trace.rounds if r.kind == "sieve"]
        rep.add("row v filters f_(2p-v+1)", all(hits), f"{sum(hits)}/{len(hits)} sieve rows")
    if case == "W3":
        first = trace.first_sieve()
        want = {serial.relation_id("W3", 3), serial.relation_id("W3", 2 * p)}
        rep.add("first sieve row filters r_3^2 and s_(2p)12^2", first is not None and want <= first.filtered)
    leads = list(fam.designated.values())
    disjoint = all(not any(a and b for a, b in zip(x, y)) for x, y in combinations(leads, 2))
    if case == "W1":
        rep.add("leading monomials pairwise coprime", disjoint)
        ctx = VarContext.of(list(fam.variables))
        polys = [Poly(ctx, {m: 1 for m in fam.supports[f]}) for f in sorted(fam.supports)]
        gb = buchberger(polys, order)
        rep.add("coprime-criterion certificate", gb.certificate == COPRIME, gb.certificate or "")
    return rep, order, trace


def run_lemma(case: str, p: int, degree: int = 12) -> CaseReport:
    rep = CaseReport(f"{case}({p})")
    missing = check_entry_degrees(case, p)
    rep.add("denominator degrees are generator degrees", not missing, " ".join(missing))
    fs = lemma_factor_series(case, p)
    qs = lemma_quotient_series(case, p)
    exact, exp = _series_agree(qs.value, fs.value, degree)
    rep.add("quotient series equals factor series", exact, f"certificate {qs.tag}")
    rep.add(f"expansions agree to total degree {degree}", exp)
    rep.info.append("trinomial coefficient p taken as given")
    return rep


CASES = ("U1", "U2", "U3", "W1", "W2", "W3", "A1", "A2", "A3")


def parse_case(case_id: str) -> tuple[str, int | None]:
    s = case_id.strip().upper().replace(" ", "")
    if "(" in s:
        base, rest = s.split("(", 1)
        p = int(rest.rstrip(")"))
    else:
        base, p = s, None
    if base not in CASES:
        raise CaseError(f"unknown case {case_id!r}; choose from {', '.join(CASES)}")
    if base[0] in "WA" and p is None:
        raise CaseError(f"case {base} needs p, e.g. {base}(4)")
    return base, p


def run_case(case_id: str, p: int | None = None, trials: int = 10) -> CaseReport:
    base, q = parse_case(case_id if p is None else f"{case_id}({p})")
    if base == "U1":
        return run_u1(trials)
    if base == "U2":
        return run_u2(trials)
    if base == "U3":
        return run_u3()
    if base == "W1" and q == 2:
        return run_w1_p2(trials)
    if base[0] == "W":
        return run_serial(base, q)[0]
    return run_lemma(base, q)


# ---------------------------------------------------------------------------
# shipped graph files

GRAPH_CASES = {"U1": u1_graphs, "U2": u2_graphs, "W1(2)": w1_p2_graphs}


def _graph_file(case: str) -> str:
    return case.replace("(", "p").replace(")", "") + ".json"


def graphs_to_json(case: str) -> str:
    G = GRAPH_CASES[case]()
    return json.dumps({k: g.to_json() for k, g in G.items()}, indent=1, sort_keys=True) + "\n"


def load_shipped_graphs(case: str) -> dict[str, BracketGraph]:
    if case not in GRAPH_CASES:
        raise CaseError(f"no graph file for {case}")
    text = resources.files("slninv").joinpath("data", _graph_file(case)).read_text()
    return {k: BracketGraph.from_json(v) for k, v in json.loads(text).items()}
