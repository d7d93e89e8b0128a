"""Bracket monomials as hypergraphs: umbral evaluation, exchange relation, syzygy checks.

A graph has one vertex per bracket (an epsilon tensor with ``n`` slots) and one
hyperedge per tensor letter.  Evaluation is the complete contraction.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations, product
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
import sympy

KINDS = ("alt", "sym", "dummy")
Letter = tuple[str, int, int, int]  # (kind, arity, color, shading)
TensorKey = tuple[str, int, int]  # (kind, arity, color); shadings share one tensor


class GraphError(ValueError):
    pass


class AssignmentError(ValueError):
    pass


class UnsupportedLetterError(NotImplementedError):
    pass


class InsufficientTrialsError(ValueError):
    pass


def _sign(seq: Sequence[int]) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv & 1 else 1


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class Edge:
    k: int
    kind: str
    color: int
    shading: int
    ends: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GraphError(f"unknown edge kind {self.kind!r}")
        object.__setattr__(self, "ends", tuple(sorted(self.ends)))
        if len(self.ends) != self.k:
            raise GraphError(f"{self.k}-edge with {len(self.ends)} endpoints")
        if self.kind == "dummy" and len(set(self.ends)) != 1:
            raise GraphError("dummy edges must loop at one vertex")

    @property
    def letter(self) -> Letter:
        return (self.kind, self.k, self.color, self.shading)

    def to_json(self) -> dict:
        return {"k": self.k, "kind": self.kind, "color": self.color, "shading": self.shading, "ends": list(self.ends)}


def _kind_rank(kind: str) -> int:
    return KINDS.index(kind)


def letter_key(letter: Letter) -> tuple:
    kind, k, color, shading = letter
    return (_kind_rank(kind), k, color, shading)


@dataclass(frozen=True)
class BracketGraph:
    n: int
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: (letter_key(e.letter), e.ends))))
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        deg = Counter()
        seen = set()
        for e in self.edges:
            if e.kind != "dummy":
                if e.letter in seen:
                    raise GraphError(f"letter {e.letter} used by two edges")
                seen.add(e.letter)
            if e.kind == "alt" and e.k > self.n:
                raise GraphError(f"alternating {e.k}-edge exceeds rank {self.n}")
            for v in e.ends:
                if v not in self.vertices:
                    raise GraphError(f"edge end {v!r} is not a vertex")
                deg[v] += 1
        for v in self.vertices:
            if deg[v] != self.n:
                raise GraphError(f"vertex {v!r} has {deg[v]} slots, expected {self.n}")

    @classmethod
    def build(cls, n: int, vertices: Iterable[str], edges: Iterable) -> BracketGraph:
        """Edges may be Edge objects or tuples (k, kind, color, ends); shadings are assigned per letter."""
        out = []
        used = Counter()
        for e in edges:
            if isinstance(e, Edge):
                out.append(e)
                continue
            k, kind, color, ends = e
            out.append(Edge(k, kind, color, used[(kind, k, color)], tuple(ends)))
            used[(kind, k, color)] += 1
        return cls(n, tuple(vertices), tuple(out))

    def letters(self) -> list[Letter]:
        return [e.letter for e in self.edges if e.kind != "dummy"]

    def tensor_keys(self) -> list[TensorKey]:
        return sorted({e.letter[:3] for e in self.edges if e.kind != "dummy"}, key=lambda t: letter_key(t + (0,)))

    def slots(self) -> dict[str, list[int]]:
        """Per vertex, edge indices in canonical letter order (repeated by multiplicity)."""
        out = {v: [] for v in self.vertices}
        for i, e in enumerate(self.edges):
            for v in e.ends:
                out[v].append(i)
        for v in out:
            out[v].sort(key=lambda i: letter_key(self.edges[i].letter))
        return out

    def appearances(self) -> list[list[tuple[str, int]]]:
        """For each edge, its (vertex, slot position) in appearance order."""
        app: list[list[tuple[str, int]]] = [[] for _ in self.edges]
        for v, sl in self.slots().items():
            for mu, i in enumerate(sl):
                app[i].append((v, mu))
        order = {v: j for j, v in enumerate(self.vertices)}
        for a in app:
            a.sort(key=lambda vm: (order[vm[0]], vm[1]))
        return app

    def components(self) -> list[BracketGraph]:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.edges:
            for a in e.ends[1:]:
                parent[find(a)] = find(e.ends[0])
        groups: dict[str, list[str]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        out = []
        for vs in groups.values():
            es = [e for e in self.edges if e.ends[0] in vs]
            out.append(BracketGraph(self.n, tuple(vs), tuple(es)))
        return out

    def key(self) -> tuple:
        return (self.n, self.vertices, tuple((e.letter, e.ends) for e in self.edges))

    def to_json(self) -> dict:
        return {"n": self.n, "vertices": list(self.vertices), "edges": [e.to_json() for e in self.edges]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Mapping) -> BracketGraph:
        edges = [
            Edge(int(e["k"]), e.get("kind", "alt"), int(e.get("color", 1)), int(e.get("shading", 0)), tuple(e["ends"]))
            for e in data["edges"]
        ]
        return cls(int(data["n"]), tuple(data["vertices"]), tuple(edges))

    @classmethod
    def loads(cls, text: str) -> BracketGraph:
        return cls.from_json(json.loads(text))

    def disjoint_union(self, other: BracketGraph, suffix: str = "'") -> BracketGraph:
        if other.n != self.n:
            raise GraphError("rank mismatch")
        ren = {v: v + suffix for v in other.vertices}
        if set(ren.values()) & set(self.vertices):
            raise GraphError("vertex names collide")
        top = Counter()
        for e in self.edges:
            top[e.letter[:3]] = max(top[e.letter[:3]], e.shading + 1)
        es = [Edge(e.k, e.kind, e.color, e.shading + top[e.letter[:3]], tuple(ren[v] for v in e.ends)) for e in other.edges]
        return BracketGraph(self.n, self.vertices + tuple(ren.values()), self.edges + tuple(es))


# ---------------------------------------------------------------------------
# tensors


@dataclass(frozen=True, eq=False)
class TensorValue:
    k: int
    n: int
    entries: np.ndarray  # object dtype, shape (n,)*k
    symmetry: str = "none"
    _nonzero: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.entries.shape != (self.n,) * self.k:
            raise AssignmentError(f"entries shape {self.entries.shape} does not match arity {self.k}, dimension {self.n}")
        nz = [(idx, self.entries[idx]) for idx in product(range(self.n), repeat=self.k) if self.entries[idx] != 0]
        object.__setattr__(self, "_nonzero", nz)

    def nonzero(self) -> list[tuple[tuple[int, ...], object]]:
        return self._nonzero

    def __getitem__(self, idx):
        return self.entries[tuple(idx)]

    def __eq__(self, other):
        return isinstance(other, TensorValue) and self.k == other.k and self.n == other.n and bool(np.all(self.entries == other.entries))

    def check_symmetry(self) -> bool:
        for idx in product(range(self.n), repeat=self.k):
            for a, b in combinations(range(self.k), 2):
                j = list(idx)
                j[a], j[b] = j[b], j[a]
                x, y = self.entries[idx], self.entries[tuple(j)]
                if self.symmetry == "alternating" and x != -y:
                    return False
                if self.symmetry == "symmetric" and x != y:
                    return False
        return True

    def act(self, g: np.ndarray) -> TensorValue:
        """Push forward by the matrix g on every index."""
        t = self.entries
        for axis in range(self.k):
            t = np.moveaxis(np.tensordot(g, t, axes=([1], [axis])), 0, axis)
        return TensorValue(self.k, self.n, t, self.symmetry)


def _alternating_from(k: int, n: int, value: Callable[[tuple[int, ...]], object]) -> np.ndarray:
    out = np.zeros((n,) * k, dtype=object)
    out[...] = 0
    for base in combinations(range(n), k):
        x = value(base)
        for p in permutations(range(k)):
            out[tuple(base[i] for i in p)] = _sign(p) * x
    return out


def wedge_basis(k: int, n: int) -> TensorValue:
    """Coordinate tensor of e_1 ^ ... ^ e_k with entries +-1."""
    return TensorValue(k, n, _alternating_from(k, n, lambda b: int(b == tuple(range(k)))), "alternating")


def epsilon(n: int) -> TensorValue:
    return wedge_basis(n, n)


def random_tensor(kind: str, k: int, n: int, seed: int) -> TensorValue:
    """Integer entries in [-3, 3], one draw per independent coordinate."""
    rng = np.random.default_rng(seed)
    if kind in ("alt", "alternating"):
        if k > n:
            raise ValueError("alternating arity exceeds dimension")
        return TensorValue(k, n, _alternating_from(k, n, lambda b: int(rng.integers(-3, 4))), "alternating")
    out = np.zeros((n,) * k, dtype=object)
    out[...] = 0
    if kind in ("sym", "symmetric"):
        for base in combinations_with_replacement(range(n), k):
            x = int(rng.integers(-3, 4))
            for p in set(permutations(base)):
                out[p] = x
        return TensorValue(k, n, out, "symmetric")
    if kind == "none":
        for idx in product(range(n), repeat=k):
            out[idx] = int(rng.integers(-3, 4))
        return TensorValue(k, n, out, "none")
    raise ValueError(f"unknown tensor kind {kind!r}")


Assignment = Mapping[TensorKey, TensorValue]


def random_assignment(keys: Iterable[TensorKey], n: int, seed: int) -> dict[TensorKey, TensorValue]:
    """One seeded tensor per (kind, arity, color); letters given with a shading are accepted too."""
    out = {}
    for i, key in enumerate(sorted({tuple(x[:3]) for x in keys}, key=lambda t: letter_key(t + (0,)))):
        kind, k, _ = key
        out[key] = random_tensor(kind, k, n, seed * 1009 + i)
    return out


def random_unimodular(n: int, seed: int, steps: int | None = None) -> np.ndarray:
    """Integer matrix of determinant 1 built from elementary row operations."""
    rng = np.random.default_rng(seed)
    g = np.identity(n, dtype=object)
    for _ in range(steps or 2 * n):
        i, j = rng.choice(n, size=2, replace=False)
        c = int(rng.choice([-2, -1, 1, 2]))
        g[i, :] = g[i, :] + c * g[j, :]
    return g


def act_assignment(assignment: Assignment, g: np.ndarray) -> dict[TensorKey, TensorValue]:
    return {key: t.act(g) for key, t in assignment.items()}


# ---------------------------------------------------------------------------
# evaluation


def _tensor_for(edge: Edge, n: int, assignment: Assignment) -> TensorValue:
    if edge.kind == "dummy":
        return wedge_basis(edge.k, n)
    t = assignment.get(edge.letter[:3])
    if t is None:
        raise AssignmentError(f"no tensor for letter {edge.letter}")
    if t.k != edge.k or t.n != n:
        raise AssignmentError(f"tensor for {edge.letter} has arity {t.k}, dimension {t.n}")
    want = {"alt": "alternating", "sym": "symmetric"}[edge.kind]
    if t.symmetry != want:
        raise AssignmentError(f"tensor for {edge.letter} is {t.symmetry}, expected {want}")
    return t


def super_sign(g: BracketGraph) -> int:
    """Sign of gathering the occurrences of odd letters into canonical letter order.

    Letters of alternating tensors (and dummy edges) are odd, symmetric ones even.
    Occurrences are read vertex by vertex, each bracket in canonical order.
    """
    seq = []
    slots = g.slots()
    for v in g.vertices:
        for i in slots[v]:
            e = g.edges[i]
            if e.kind != "sym":
                seq.append(letter_key(e.letter))
    return _sign(seq)


def umbral_evaluate(g: BracketGraph, assignment: Assignment):
    """Umbral image: the super sign times the complete contraction."""
    return super_sign(g) * contract(g, assignment)


def disjoint_sign(g1: BracketGraph, g2: BracketGraph) -> int:
    """umbral(g1 + g2) = disjoint_sign * umbral(g1) * umbral(g2) for the union with g1 first.

    The sign is +1 unless odd letters of the two parts interleave in the letter order
    an odd number of times; brackets anticommute for odd n, so no better rule exists.
    """
    u = g1.disjoint_union(g2)
    tail = set(u.vertices[len(g1.vertices):])
    g2s = BracketGraph(u.n, tuple(v for v in u.vertices if v in tail), tuple(e for e in u.edges if e.ends[0] in tail))
    return super_sign(u) * super_sign(g1) * super_sign(g2s)


_LABELS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _einsum_operands(g: BracketGraph, assignment: Assignment) -> tuple[str, list]:
    n = g.n
    if len(g.vertices) * n > len(_LABELS):
        raise GraphError("graph too large for einsum labels")
    labels = iter(_LABELS)
    slot_label = {}
    operands, subs = [], []
    eps = epsilon(n).entries
    for v, sl in g.slots().items():
        ls = []
        for mu in range(len(sl)):
            slot_label[(v, mu)] = next(labels)
            ls.append(slot_label[(v, mu)])
        operands.append(eps)
        subs.append("".join(ls))
    for e, app in zip(g.edges, g.appearances()):
        operands.append(_tensor_for(e, n, assignment).entries)
        subs.append("".join(slot_label[a] for a in app))
    return ",".join(subs) + "->", operands


def contract(g: BracketGraph, assignment: Assignment):
    """Complete contraction of one epsilon per vertex with one tensor per letter.

    Pairwise contraction along a greedy path; object arrays keep Python integers exact.
    """
    out = 1
    for c in g.components():
        spec, ops = _einsum_operands(c, assignment)
        out *= np.einsum(spec, *ops, optimize="greedy").item()
        if out == 0:
            return 0
    return out


def contract_by_search(g: BracketGraph, assignment: Assignment):
    """The same contraction by depth-first search over nonzero tensor entries."""
    comps = g.components()
    if len(comps) > 1:
        out = 1
        for c in comps:
            out *= contract_by_search(c, assignment)
            if out == 0:
                return 0
        return out
    n = g.n
    tensors = [_tensor_for(e, n, assignment) for e in g.edges]
    app = g.appearances()
    vidx = {v: i for i, v in enumerate(g.vertices)}
    nv = len(g.vertices)
    # edges in order of first appearance so vertices fill up early
    order = sorted(range(len(g.edges)), key=lambda i: (vidx[app[i][0][0]], app[i][0][1]))
    plan = [([(vidx[v], mu) for v, mu in app[i]], tensors[i].nonzero()) for i in order]
    slots = [[-1] * n for _ in range(nv)]
    used = [0] * nv  # bitmask of indices already placed at each vertex
    total = 0

    def rec(depth: int, acc):
        nonlocal total
        if depth == len(plan):
            s = 1
            for row in slots:
                s *= _sign(row)
            total += s * acc
            return
        places, entries = plan[depth]
        for idx, val in entries:
            ok = True
            placed = []
            for (vi, mu), i in zip(places, idx):
                bit = 1 << i
                if used[vi] & bit:
                    ok = False
                    break
                used[vi] |= bit
                slots[vi][mu] = i
                placed.append((vi, bit))
            if ok:
                rec(depth + 1, acc * val)
            for vi, bit in placed:
                used[vi] &= ~bit

    rec(0, 1)
    return total


def contraction_oracle(g: BracketGraph, assignment: Assignment):
    """Direct sum over every index tuple via a single unoptimized einsum."""
    spec, ops = _einsum_operands(g, assignment)
    return np.einsum(spec, *ops, optimize=False)


# ---------------------------------------------------------------------------
# expressions and the exchange relation


@dataclass
class GraphExpression:
    n: int
    terms: dict[tuple, tuple[BracketGraph, Fraction]] = field(default_factory=dict)

    def add(self, g: BracketGraph, c) -> None:
        if g.n != self.n:
            raise GraphError("rank mismatch in expression")
        k = g.key()
        old = self.terms.get(k, (g, Fraction(0)))[1]
        new = old + Fraction(c)
        if new:
            self.terms[k] = (g, new)
        else:
            self.terms.pop(k, None)

    def items(self) -> list[tuple[BracketGraph, Fraction]]:
        return list(self.terms.values())

    def __len__(self) -> int:
        return len(self.terms)

    def evaluate(self, assignment: Assignment) -> Fraction:
        return sum((c * umbral_evaluate(g, assignment) for g, c in self.items()), Fraction(0))


def plucker_expand(g: BracketGraph, u: Sequence[tuple[int, str]], target: str) -> GraphExpression:
    """Exchange the endpoints ``u`` = [(edge index, vertex)] with every equal-size part of ``target``.

    Returns the expression equal to ``g``: sign (-1)^|u| times the sum over
    all ways of swapping |u| slots of the target bracket with the endpoints in u.
    """
    out = GraphExpression(g.n)
    if not u:
        out.add(g, 1)
        return out
    sources = {v for _, v in u}
    if len(sources) != 1:
        raise GraphError("endpoints of u must lie on one vertex")
    x = sources.pop()
    if x == target or target not in g.vertices:
        raise GraphError("target must be another vertex")
    moved = Counter(i for i, _ in u)
    for i, m in moved.items():
        e = g.edges[i]
        if e.kind != "alt":
            raise UnsupportedLetterError(f"exchange with {e.kind} letter {e.letter} is not supported")
        if e.ends.count(x) < m:
            raise GraphError(f"edge {i} has fewer than {m} endpoints at {x!r}")
    ends = [list(e.ends) for e in g.edges]
    target_slots = [i for i, e in enumerate(g.edges) for v in e.ends if v == target]
    for part in combinations(range(len(target_slots)), len(u)):
        back = Counter(target_slots[j] for j in part)
        if any(g.edges[i].kind != "alt" for i in back):
            raise UnsupportedLetterError("exchange would move a non-alternating letter")
        new = [list(es) for es in ends]
        for i, m in moved.items():
            for _ in range(m):
                new[i].remove(x)
                new[i].append(target)
        for i, m in back.items():
            for _ in range(m):
                new[i].remove(target)
                new[i].append(x)
        edges = [Edge(e.k, e.kind, e.color, e.shading, tuple(es)) for e, es in zip(g.edges, new)]
        out.add(BracketGraph(g.n, g.vertices, tuple(edges)), (-1) ** len(u))
    return out


# ---------------------------------------------------------------------------
# syzygy verification

Monomial = tuple[tuple[str, int], ...]


@dataclass
class SyzygyReport:
    vanishes: bool
    trials: int
    values: list[Fraction]
    nullity: int | None = None
    null_vector: list[Fraction] | None = None
    support_match: bool = False
    signs_match: bool = False
    scalars: dict[str, float] | None = None

    @property
    def confirmed(self) -> bool:
        return self.vanishes or (self.nullity == 1 and self.support_match and (self.signs_match or self.scalars is not None))

    def summary(self) -> str:
        if self.vanishes:
            return f"vanishes at {self.trials} samples"
        if self.null_vector is None:
            return f"no dependency (nullity {self.nullity})"
        how = "sign pattern" if self.signs_match else ("per-generator rescaling" if self.scalars is not None else "mismatch")
        return f"nullity {self.nullity}, support {'matches' if self.support_match else 'differs'}, {how}"


def _solve_rational(A: list[list[int]], b: list[Fraction]) -> list[Fraction] | None:
    M = sympy.Matrix(A)
    rhs = sympy.Matrix(b)
    try:
        sol, params = M.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    sol = sol.subs({p: 0 for p in params})
    return [Fraction(int(x.p), int(x.q)) for x in sol]


def _solve_gf2(A: list[list[int]], b: list[int]) -> bool:
    rows = [[a & 1 for a in r] + [x & 1] for r, x in zip(A, b)]
    ncol = len(rows[0]) - 1 if rows else 0
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
        r += 1
    return all(any(row[:-1]) or not row[-1] for row in rows)


def _rescaling(names: list[str], support: list[Monomial], stated: list[Fraction], found: list[Fraction]):
    """Per-generator scalars lambda and a global mu with found = mu * stated * prod lambda^e, or None."""
    A = [[1] + [dict(m).get(nm, 0) for nm in names] for m in support]
    ratios = [f / s for f, s in zip(found, stated)]
    if not _solve_gf2(A, [int(r < 0) for r in ratios]):
        return None
    primes = sorted({p for r in ratios for x in (abs(r.numerator), r.denominator) for p in sympy.factorint(x)})
    logs = []
    for p in primes:
        col = []
        for r in ratios:
            col.append(sympy.multiplicity(p, abs(r.numerator)) - sympy.multiplicity(p, r.denominator))
        sol = _solve_rational(A, [Fraction(c) for c in col])
        if sol is None:
            return None
        logs.append((p, sol))
    out = {}
    for j, nm in enumerate(names):
        out[nm] = float(np.prod([float(p) ** float(sol[j + 1]) for p, sol in logs])) if logs else 1.0
    return out


def _monomial_value(m: Monomial, values: Mapping[str, object]):
    out = 1
    for name, e in m:
        out *= values[name] ** e
    return out


def verify_syzygy(
    relation: Mapping[Monomial, object],
    graphs: Mapping[str, BracketGraph],
    sampler: Callable[[int], Assignment],
    trials: int = 10,
    seed: int = 0,
) -> SyzygyReport:
    support = sorted(relation)
    coeffs = [Fraction(relation[m]) for m in support]
    if not support:
        return SyzygyReport(True, 0, [])
    if trials < len(support):
        raise InsufficientTrialsError(f"{trials} trials for a support of size {len(support)}")
    names = sorted({nm for m in support for nm, _ in m})
    rows, values = [], []
    s = seed
    for _ in range(trials):
        for _attempt in range(6):
            assignment = sampler(s)
            s += 1
            vals = {nm: umbral_evaluate(graphs[nm], assignment) for nm in names}
            if any(vals.values()):
                break
        row = [_monomial_value(m, vals) for m in support]
        rows.append(row)
        values.append(sum((c * x for c, x in zip(coeffs, row)), Fraction(0)))
    report = SyzygyReport(all(v == 0 for v in values), trials, values)
    if report.vanishes:
        return report
    null = sympy.Matrix(rows).nullspace()
    report.nullity = len(null)
    if len(null) == 1:
        vec = [Fraction(int(x.p), int(x.q)) for x in null[0]]
        report.null_vector = vec
        report.support_match = all(vec)
        if report.support_match:
            sgn = [(a > 0) == (b > 0) for a, b in zip(vec, coeffs)]
            report.signs_match = all(sgn) or not any(sgn)
            report.scalars = _rescaling(names, support, coeffs, vec)
    return report


def relation_from_poly(f) -> dict[Monomial, Fraction]:
    """Convert a Poly over generator names into the monomial mapping used above."""
    names = f.ctx.names
    return {tuple((names[i], e) for i, e in enumerate(m) if e): c for m, c in f.terms.items()}


def monomials_of_degree(degrees: Mapping[str, Sequence[int]], target: Sequence[int]) -> list[Monomial]:
    """All generator monomials of the given multidegree (generator degrees must be nonzero)."""
    names = sorted(degrees)
    target = tuple(target)
    out: list[Monomial] = []

    def rec(i: int, rem: tuple[int, ...], cur: list):
        if not any(rem):
            out.append(tuple(cur))
            return
        if i == len(names):
            return
        d = tuple(degrees[names[i]])
        if not any(d):
            raise ValueError(f"generator {names[i]} has degree zero")
        e, r = 0, rem
        while all(x >= 0 for x in r):
            rec(i + 1, r, cur + [(names[i], e)] if e else cur)
            e += 1
            r = tuple(a - b for a, b in zip(r, d))

    rec(0, target, [])
    return out


def find_relations(
    graphs: Mapping[str, BracketGraph],
    degrees: Mapping[str, Sequence[int]],
    target: Sequence[int],
    sampler: Callable[[int], Assignment],
    trials: int | None = None,
    seed: int = 0,
) -> list[dict[Monomial, Fraction]]:
    """Basis of the linear relations among all monomials of one multidegree, from sampled values.

    With fewer samples than monomials plus a margin the result is only an upper bound.
    """
    ms = monomials_of_degree(degrees, target)
    if not ms:
        return []
    trials = trials if trials is not None else len(ms) + 8
    rows = []
    for s in range(seed, seed + trials):
        a = sampler(s)
        vals = {nm: umbral_evaluate(g, a) for nm, g in graphs.items() if nm in degrees}
        rows.append([_monomial_value(m, vals) for m in ms])
    out = []
    for v in sympy.Matrix(rows).nullspace():
        vec = [Fraction(int(x.p), int(x.q)) for x in v]
        out.append({m: c for m, c in zip(ms, vec) if c})
    return out
