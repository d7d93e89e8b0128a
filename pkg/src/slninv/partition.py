"""Constant-term extraction for Molien-Weyl integrands of SL_n.

Every rational function is read inside one fixed field of iterated Laurent
series: a monomial is *small* when its exponent vector, ordered as
(total grading degree, torus exponents, slack exponent), is lexicographically
positive. Denominator factors are always kept oriented so that their
monomial is small, which makes each geometric expansion well defined.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce as _fold
from itertools import combinations, combinations_with_replacement
from math import gcd
from typing import Callable, Iterable, Sequence

from .poly import (
    FactoredRatFunc,
    HilbertSeries,
    Mono,
    Poly,
    VarContext,
    _divide_by_binomial,
    mono_div,
    mul_truncated,
    pole_order_at_one,
    ratfunc_normalize,
    series_expand,
    truncate,
)

log = logging.getLogger(__name__)

SLACK = "s"


class UnsupportedExponentError(ValueError):
    """A factor has exponent outside {-1, 0, 1} in the variable being eliminated."""


class CoprimalityError(ValueError):
    """Two identical denominator factors share a root in the eliminated variable."""


class InconsistencyError(RuntimeError):
    """Summing the top pole-order group did not lower the pole order."""


class ReconstructionError(ValueError):
    """The truncated series does not fit the denominator guess."""


class OracleMismatchError(AssertionError):
    """The constant-term result disagrees with direct coefficient extraction."""


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class Summand:
    kind: str  # "L" exterior, "S" symmetric, "V" standard, "Vdual" dual
    k: int
    mult: int
    grading: str = "t"


@dataclass(frozen=True)
class RepSpec:
    n: int
    summands: tuple[Summand, ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need n >= 2")
        for s in self.summands:
            if s.kind == "L" and not 1 <= s.k <= self.n - 1:
                raise ValueError(f"exterior power {s.k} out of range for SL_{self.n}")
            if s.kind == "S" and s.k < 1:
                raise ValueError("symmetric power must be >= 1")
            if s.mult < 1:
                raise ValueError("multiplicity must be positive")

    @property
    def grading_names(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(s.grading for s in self.summands)) or ("t",)

    @classmethod
    def parse(cls, n: int, text: str, grading: str = "univariate") -> RepSpec:
        """Read ``3*L2+1*L4`` style text; multigraded mode gives each term its own variable."""
        out = []
        terms = [x.strip() for x in text.split("+") if x.strip()]
        for i, term in enumerate(terms):
            m = re.fullmatch(r"(?:(\d+)\s*\*\s*)?(Vdual|V|L\d+|S\d+)", term)
            if not m:
                raise ValueError(f"cannot parse summand {term!r}")
            mult = int(m.group(1) or 1)
            word = m.group(2)
            if word in ("V", "Vdual"):
                kind, k = word, 1
            else:
                kind, k = word[0], int(word[1:])
            g = "t" if grading == "univariate" else f"t{i + 1}"
            out.append(Summand(kind, k, mult, g))
        return cls(n, tuple(out))

    def dimension(self) -> int:
        return sum(s.mult * len(weights(s, self.n)) for s in self.summands)


def _fundamental(n: int, idx: Iterable[int]) -> Mono:
    """Weight e_{i1}+...+e_{ik} in the coordinates z_1..z_{n-1} (z_n = 1/(z_1...z_{n-1}))."""
    e = [0] * (n - 1)
    for i in idx:
        if i == n - 1:
            for j in range(n - 1):
                e[j] -= 1
        else:
            e[i] += 1
    return tuple(e)


def weights(s: Summand, n: int) -> list[Mono]:
    if s.kind == "V":
        return [_fundamental(n, [i]) for i in range(n)]
    if s.kind == "Vdual":
        return [tuple(-x for x in _fundamental(n, [i])) for i in range(n)]
    if s.kind == "L":
        return [_fundamental(n, c) for c in combinations(range(n), s.k)]
    if s.kind == "S":
        return [_fundamental(n, c) for c in combinations_with_replacement(range(n), s.k)]
    raise ValueError(s.kind)


def positive_roots(n: int) -> list[Mono]:
    out = []
    for i, j in combinations(range(n), 2):
        a = _fundamental(n, [i])
        b = _fundamental(n, [j])
        out.append(tuple(x - y for x, y in zip(a, b)))
    return out


@dataclass(frozen=True)
class CTTask:
    function: FactoredRatFunc
    torus: tuple[str, ...]
    grading: tuple[str, ...]


def _ring_context(torus: Sequence[str], grading: Sequence[str]) -> VarContext:
    names = list(torus) + list(grading) + [SLACK]
    return VarContext.of(names, names)


def molien_weyl(rep: RepSpec) -> CTTask:
    """Weyl-factor numerator over one geometric factor per weight and grading variable."""
    n = rep.n
    torus = tuple(f"z{i + 1}" for i in range(n - 1))
    grading = rep.grading_names
    ctx = _ring_context(torus, grading)
    one = Poly.const(ctx, 1)
    num = one
    pad = (0,) * (len(grading) + 1)
    for r in positive_roots(n):
        num = num * (one - Poly.monomial(ctx, r + pad))
    factors = []
    for s in rep.summands:
        g = [0] * (len(grading) + 1)
        g[grading.index(s.grading)] = 1
        for w in weights(s, n):
            factors.append((w + tuple(g), Fraction(1), s.mult))
    return CTTask(FactoredRatFunc(num, tuple(factors)), torus, grading)


# ---------------------------------------------------------------------------
# field orientation


class _Field:
    """Smallness test for the fixed iterated-Laurent-series field."""

    def __init__(self, ctx: VarContext, torus: Sequence[str], grading: Sequence[str]):
        self.ctx = ctx
        self.grading_idx = [ctx.index(g) for g in grading]
        self.rest_idx = [ctx.index(z) for z in torus]
        if SLACK in ctx.names:
            self.rest_idx.append(ctx.index(SLACK))

    def key(self, m: Mono) -> tuple[int, ...]:
        return (sum(m[i] for i in self.grading_idx),) + tuple(m[i] for i in self.rest_idx)

    def is_small(self, m: Mono) -> bool:
        for x in self.key(m):
            if x:
                return x > 0
        return False

    def orient(self, num: Poly, factors: Iterable[tuple[Mono, Fraction, int]]) -> FactoredRatFunc:
        """Rewrite every factor with a small monomial, moving units into the numerator."""
        out = []
        for m, c, k in factors:
            if not any(m):
                num = num.scale(Fraction(1) / (1 - c) ** k)
                continue
            if self.is_small(m):
                out.append((m, c, k))
            else:
                # 1/(1 - cM) = -(cM)^{-1} / (1 - c^{-1} M^{-1})
                inv = tuple(-x for x in m)
                num = num.scale((-1 / c) ** k, tuple(k * x for x in inv))
                out.append((inv, 1 / c, k))
        return FactoredRatFunc(num, tuple(out))


# ---------------------------------------------------------------------------
# one-variable constant term


def inject_slack(f: FactoredRatFunc, s: str = SLACK, only: Callable[[Mono], bool] | None = None) -> FactoredRatFunc:
    """Split each repeated factor (1-cM)^m into prod_j (1 - cM s^j)."""
    si = f.ctx.index(s)
    out = []
    for m, c, k in f.factors:
        if k >= 2 and (only is None or only(m)):
            for j in range(k):
                mj = list(m)
                mj[si] += j
                out.append((tuple(mj), c, 1))
        else:
            out.append((m, c, k))
    return FactoredRatFunc(f.numerator, tuple(out))


def _lattice_reduce(f: FactoredRatFunc, zi: int) -> FactoredRatFunc:
    """Divide the exponents of variable zi by their gcd over the denominator."""
    g = _fold(gcd, (abs(m[zi]) for m, _, _ in f.factors), 0)
    if g <= 1:
        return f

    def shrink(m: Mono) -> Mono:
        return m[:zi] + (m[zi] // g,) + m[zi + 1:]

    # numerator terms with exponent not divisible by g never reach the constant term
    num = Poly(f.ctx, {shrink(m): c for m, c in f.numerator.terms.items() if m[zi] % g == 0})
    return FactoredRatFunc(num, tuple((shrink(m), c, k) for m, c, k in f.factors))


def _complete_homogeneous(ctx: VarContext, gens: list[tuple[Fraction, Mono]], d: int) -> Poly:
    """h_d of the given scaled monomials."""
    if d == 0:
        return Poly.const(ctx, 1)
    # dynamic programming over generators: h_d(x1..xr) = sum_j x_r^j h_{d-j}(x1..x_{r-1})
    layer = [Poly.const(ctx, 1)] + [Poly.zero(ctx)] * d
    for c, m in gens:
        new = []
        for e in range(d + 1):
            acc = Poly.zero(ctx)
            for j in range(e + 1):
                if layer[e - j]:
                    acc = acc + layer[e - j].scale(c**j, tuple(j * x for x in m))
            new.append(acc)
        layer = new
    return layer[d]


def constant_term_terms(f: FactoredRatFunc, z: str, fld: _Field) -> list[FactoredRatFunc]:
    """Partial-fraction constant term in z as an unsummed list of Elliott-rational terms."""
    ctx = f.ctx
    zi = ctx.index(z)
    f = fld.orient(f.numerator, f.factors)
    f = _lattice_reduce(f, zi)
    free, ups, downs = [], [], []
    for m, c, k in f.factors:
        e = m[zi]
        if e == 0:
            free.append((m, c, k))
            continue
        if e not in (1, -1):
            raise UnsupportedExponentError(f"exponent {e} of {z} in a denominator factor")
        if k > 1:
            raise CoprimalityError(f"factor repeated {k} times in {z}")
        rest = m[:zi] + (0,) + m[zi + 1:]
        (ups if e == 1 else downs).append((c, rest))

    # numerator split by z exponent
    by_k: dict[int, dict[Mono, Fraction]] = {}
    for m, c in f.numerator.terms.items():
        by_k.setdefault(m[zi], {})[m[:zi] + (0,) + m[zi + 1:]] = c
    parts = {k: Poly(ctx, t) for k, t in by_k.items()}

    out = []
    nu = len(ups)
    for i, (ci, mi) in enumerate(ups):
        inv = tuple(-x for x in mi)
        # numerator evaluated at z = 1/u_i
        num = Poly.zero(ctx)
        for k, p in parts.items():
            num = num + p.scale(ci ** (-k), tuple(k * x for x in inv))
        fac = list(free)
        for j, (cj, mj) in enumerate(ups):
            if j != i:
                fac.append((mono_div(mj, mi), cj / ci, 1))
        for cv, mv in downs:
            fac.append((tuple(a + b for a, b in zip(mv, mi)), cv * ci, 1))
        term = fld.orient(num, fac)
        if term.numerator:
            out.append(term)

    # polynomial part of the rational function in z, read at z = infinity
    big = [k for k in parts if k >= nu]
    if big:
        gens = [(1 / c, tuple(-x for x in m)) for c, m in ups] + [(c, m) for c, m in downs]
        lead_c = Fraction(1)
        lead_m = ctx.one()
        for c, m in ups:
            lead_c *= -c
            lead_m = tuple(a + b for a, b in zip(lead_m, m))
        for k in big:
            h = _complete_homogeneous(ctx, gens, k - nu)
            num = (parts[k] * h).scale(1 / lead_c, tuple(-x for x in lead_m))
            if num:
                out.append(fld.orient(num, free))
    return out


# ---------------------------------------------------------------------------
# summation with pole-order grouping


def _factor_poly(ctx: VarContext, m: Mono, c: Fraction) -> Poly:
    return Poly(ctx, {ctx.one(): 1, m: -c})


def sum_terms(terms: Sequence[FactoredRatFunc]) -> FactoredRatFunc:
    """Exact sum over the least common multiple of the factor multisets."""
    if not terms:
        raise ValueError("empty sum")
    ctx = terms[0].ctx
    if len(terms) == 1:
        return terms[0]
    lcm: dict[tuple[Mono, Fraction], int] = {}
    for t in terms:
        for m, c, k in t.factors:
            lcm[(m, c)] = max(lcm.get((m, c), 0), k)
    powers: dict[tuple[Mono, Fraction, int], Poly] = {}
    num = Poly.zero(ctx)
    for t in terms:
        have = {(m, c): k for m, c, k in t.factors}
        p = t.numerator
        for key, k in lcm.items():
            extra = k - have.get(key, 0)
            if extra:
                pk = (key[0], key[1], extra)
                if pk not in powers:
                    powers[pk] = _factor_poly(ctx, key[0], key[1]) ** extra
                p = p * powers[pk]
        num = num + p
    return FactoredRatFunc(num, tuple((m, c, k) for (m, c), k in lcm.items()))


def _is_pure_slack(ctx: VarContext, m: Mono, c: Fraction, si: int) -> bool:
    return c == 1 and m[si] != 0 and all(e == 0 for i, e in enumerate(m) if i != si)


def set_slack_to_one(f: FactoredRatFunc, s: str = SLACK) -> FactoredRatFunc:
    """Value at s = 1 of a term with no pole there."""
    ctx = f.ctx
    si = ctx.index(s)
    num = f.numerator
    scale = Fraction(1)
    vanish = 0
    rest = []
    for m, c, k in f.factors:
        if _is_pure_slack(ctx, m, c, si):
            # (1 - s^j) = (1 - s)(1 + ... + s^{j-1}); the cofactor is j at s = 1
            vanish += k
            scale *= abs(m[si]) ** k
            if m[si] < 0:
                # (1 - s^-j) = -s^-j (1 - s^j)
                scale *= (-1) ** k
        else:
            rest.append((m[:si] + (0,) + m[si + 1:], c, k))
    unit = ctx.unit(s)
    for _ in range(vanish):
        q = _divide_by_binomial(num, unit, Fraction(1))
        if q is None:
            raise InconsistencyError("numerator does not vanish to the pole order at s = 1")
        num = q
    num = num.substitute({s: 1}).scale(1 / scale)
    return _rebuild(num, rest)


def _rebuild(num: Poly, factors: list) -> FactoredRatFunc:
    ctx = num.ctx
    out = []
    for m, c, k in factors:
        if not any(m):
            num = num.scale(Fraction(1) / (1 - c) ** k)
        else:
            out.append((m, c, k))
    return FactoredRatFunc(num, tuple(out))


@dataclass
class GroupStats:
    rounds: list[tuple[int, int]] = field(default_factory=list)  # (pole order, group size)


def reduce_pole_groups(terms: Sequence[FactoredRatFunc], s: str = SLACK, stats: GroupStats | None = None) -> FactoredRatFunc:
    """Sum the terms, always combining the group of highest pole order at s = 1 first."""
    if not terms:
        raise ValueError("empty sum")
    ctx = terms[0].ctx
    terms = [ratfunc_normalize(t) for t in terms if t.numerator]
    if not terms:
        return FactoredRatFunc(Poly.zero(ctx), ())
    if s not in ctx.names:
        return ratfunc_normalize(sum_terms(terms))
    orders = [pole_order_at_one(t, s) for t in terms]
    while len(terms) > 1 or (terms and orders[0] > 0):
        top = max(orders)
        idx = [i for i, o in enumerate(orders) if o == top]
        if top > 0 and len(idx) == 1:
            raise InconsistencyError(f"lone term keeps pole order {top} at {s} = 1")
        if top == 0:
            idx = list(range(len(terms)))
        if stats is not None:
            stats.rounds.append((top, len(idx)))
        group = [terms[i] for i in idx]
        summed = sum_terms(group)
        if not summed.numerator:
            keep = [i for i in range(len(terms)) if i not in idx]
            terms = [terms[i] for i in keep]
            orders = [orders[i] for i in keep]
            if not terms:
                return FactoredRatFunc(Poly.zero(ctx), ())
            continue
        summed = ratfunc_normalize(summed)
        o = pole_order_at_one(summed, s)
        if top > 0 and o >= top:
            raise InconsistencyError(f"group of pole order {top} summed to order {o}")
        keep = [i for i in range(len(terms)) if i not in idx]
        terms = [terms[i] for i in keep] + [summed]
        orders = [orders[i] for i in keep] + [o]
    return ratfunc_normalize(set_slack_to_one(terms[0], s))


def constant_term_one_var(f: FactoredRatFunc, z: str, torus: Sequence[str] | None = None, grading: Sequence[str] | None = None) -> FactoredRatFunc:
    """Constant term in z of an Elliott-rational function, summed to one term.

    Torus and grading variables default to: z-like names are torus, the
    slack variable is slack, everything else grades.
    """
    ctx = f.ctx
    if torus is None:
        torus = [n for n in ctx.names if n.startswith("z")]
    if grading is None:
        grading = [n for n in ctx.names if n not in torus and n != SLACK]
    fld = _Field(ctx, torus, grading)
    zi = ctx.index(z)
    if not any(m[zi] for m, _, _ in f.factors):
        return f.__class__(f.numerator.filter(lambda m: m[zi] == 0), f.factors)
    terms = constant_term_terms(f, z, fld)
    if not terms:
        return FactoredRatFunc(Poly.zero(ctx), ())
    return reduce_pole_groups(terms, SLACK)


# ---------------------------------------------------------------------------
# series fallback


def euler_exponents(series: Poly, grading: Sequence[int], max_deg: int) -> dict[Mono, int]:
    """Exponents a_m with series = prod (1 - t^m)^(-a_m) up to max_deg."""
    ctx = series.ctx
    if series.coeff(ctx.one()) != 1:
        raise ReconstructionError("series must start with 1")
    cur = series
    out: dict[Mono, int] = {}
    for d in range(1, max_deg + 1):
        layer = [(m, c) for m, c in cur.terms.items() if sum(m[i] for i in grading) == d]
        for m, c in layer:
            if c.denominator != 1:
                raise ReconstructionError("non-integral series coefficient")
            a = int(c)
            out[m] = a
            # multiply by (1 - t^m)^a; negative a means dividing, done by geometric expansion
            one = Poly.const(ctx, 1)
            if a > 0:
                fac = (one - Poly.monomial(ctx, m)) ** a
            else:
                fac = series_expand(FactoredRatFunc(one, ((m, Fraction(1), -a),)), grading, max_deg)
            cur = mul_truncated(cur, fac, grading, max_deg)
    return {m: a for m, a in out.items() if a}


def series_reconstruct(coeffs: Poly, denominator_guess: Sequence[Mono], max_deg: int) -> HilbertSeries:
    """Numerator = truncated series times prod(1 - t^d), required to stop early."""
    ctx = coeffs.ctx
    grading = list(range(ctx.arity))
    guess = [tuple(d) if not isinstance(d, int) else (d,) for d in denominator_guess]
    one = Poly.const(ctx, 1)
    num = truncate(coeffs, grading, max_deg)
    for d in guess:
        num = mul_truncated(num, one - Poly.monomial(ctx, d), grading, max_deg)
    margin = max((sum(d) for d in guess), default=1)
    if num and num.degree() > max_deg - margin:
        raise ReconstructionError(
            f"numerator reaches degree {num.degree()} within {margin} of the truncation {max_deg}"
        )
    value = FactoredRatFunc.build(ctx, num, [(d, 1) for d in guess])
    return HilbertSeries(ratfunc_normalize(value), "oracle-only")


# ---------------------------------------------------------------------------
# driver


def integrand_constant_term_series(task: CTTask, max_deg: int) -> Poly:
    """Direct oracle: expand the integrand and keep torus exponent zero."""
    f = task.function
    ctx = f.ctx
    g = [ctx.index(x) for x in task.grading]
    tor = [ctx.index(z) for z in task.torus]
    num = truncate(f.numerator, g, max_deg)
    result = num
    for m, c, k in sorted(f.factors, key=lambda x: -sum(x[0][i] for i in g)):
        s = series_expand(FactoredRatFunc(Poly.const(ctx, 1), ((m, c, k),)), g, max_deg)
        result = mul_truncated(result, s, g, max_deg)
    out = result.filter(lambda m: all(m[i] == 0 for i in tor))
    return _to_grading(out, task.grading)


def _to_grading(p: Poly, grading: Sequence[str]) -> Poly:
    gctx = VarContext.of(grading)
    idx = [p.ctx.index(n) for n in grading]
    terms: dict[Mono, Fraction] = {}
    for m, c in p.terms.items():
        if any(m[i] for i in range(p.ctx.arity) if i not in idx):
            raise ValueError(f"term {m} still depends on non-grading variables")
        key = tuple(m[i] for i in idx)
        terms[key] = terms.get(key, 0) + c
    return Poly(gctx, terms)


def _ratfunc_to_grading(f: FactoredRatFunc, grading: Sequence[str]) -> FactoredRatFunc:
    idx = [f.ctx.index(n) for n in grading]
    num = _to_grading(f.numerator, grading)
    facs = []
    for m, c, k in f.factors:
        if any(m[i] for i in range(f.ctx.arity) if i not in idx):
            raise ValueError("factor still depends on non-grading variables")
        facs.append((tuple(m[i] for i in idx), c, k))
    return FactoredRatFunc(num, tuple(facs))


def _count_factors(f: FactoredRatFunc, zi: int) -> int:
    return sum(k for m, _, k in f.factors if m[zi])


def eliminate_torus(task: CTTask, order: Sequence[str] | None = None, stats: dict | None = None) -> FactoredRatFunc:
    """Iterated constant terms, one torus variable at a time."""
    f = task.function
    ctx = f.ctx
    fld = _Field(ctx, task.torus, task.grading)
    left = list(task.torus)
    stats = stats if stats is not None else {}
    stats.setdefault("steps", [])
    while left:
        if order is not None:
            z = order[len(task.torus) - len(left)]
        else:
            # fewest factors first
            z = min(left, key=lambda v: (_count_factors(f, ctx.index(v)), v))
        left.remove(z)
        zi = ctx.index(z)
        f = fld.orient(f.numerator, f.factors)
        if any(k > 1 and m[zi] for m, _, k in f.factors):
            f = inject_slack(f, SLACK, only=lambda m, zi=zi: m[zi] != 0)
        terms = constant_term_terms(f, z, fld)
        gs = GroupStats()
        f = reduce_pole_groups(terms, SLACK, gs) if terms else FactoredRatFunc(Poly.zero(ctx), ())
        stats["steps"].append({"var": z, "terms": len(terms), "groups": gs.rounds, "factors": len(f.factors)})
        log.debug("eliminated %s: %d terms, %d factors", z, len(terms), len(f.factors))
    return f


def hilbert_series_invariants(
    rep: RepSpec,
    max_check_degree: int = 10,
    order: Sequence[str] | None = None,
    oracle: bool = True,
) -> HilbertSeries:
    task = molien_weyl(rep)
    stats: dict = {}
    try:
        raw = eliminate_torus(task, order, stats)
    except UnsupportedExponentError as e:
        log.info("falling back to series reconstruction: %s", e)
        return oracle_only(task, max_check_degree)
    value = ratfunc_normalize(_ratfunc_to_grading(raw, task.grading))
    hs = HilbertSeries(value, "constant-term", stats)
    if oracle:
        check_against_oracle(hs, task, max_check_degree)
        stats["checked_degree"] = max_check_degree
    return hs


def check_against_oracle(hs: HilbertSeries, task: CTTask, max_deg: int) -> None:
    expected = integrand_constant_term_series(task, max_deg)
    got = hs.expand(max_deg)
    if got != expected:
        raise OracleMismatchError(f"series disagree to degree {max_deg}: {got - expected}")


def oracle_only(task: CTTask, max_deg: int) -> HilbertSeries:
    series = integrand_constant_term_series(task, max_deg)
    grading = list(range(series.ctx.arity))
    exps = euler_exponents(series, grading, max_deg)
    guess = [m for m, a in exps.items() if a > 0 for _ in range(a)]
    hs = series_reconstruct(series, guess, max_deg)
    return HilbertSeries(hs.value, "oracle-only", {"euler_exponents": exps})
