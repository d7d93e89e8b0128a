"""Exact sparse Laurent polynomials and factored rational functions.

Coefficients are :class:`fractions.Fraction`; monomials are integer exponent
tuples indexed by a :class:`VarContext`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

Mono = tuple[int, ...]


class ContextError(ValueError):
    """Operands live over different variable contexts."""


class NonExpandableError(ValueError):
    """A denominator factor has non-positive degree in the grading."""


@dataclass(frozen=True)
class VarContext:
    names: tuple[str, ...]
    laurent: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @classmethod
    def of(cls, names: str | Iterable[str], laurent: Iterable[str] = ()) -> VarContext:
        if isinstance(names, str):
            names = names.replace(",", " ").split()
        return cls(tuple(names), frozenset(laurent))

    @property
    def arity(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def unit(self, name: str, power: int = 1) -> Mono:
        e = [0] * self.arity
        e[self.index(name)] = power
        return tuple(e)

    def one(self) -> Mono:
        return (0,) * self.arity

    def check_mono(self, m: Mono) -> None:
        if len(m) != self.arity:
            raise ValueError(f"monomial {m} has wrong arity for {self.names}")
        for n, e in zip(self.names, m):
            if e < 0 and n not in self.laurent:
                raise ValueError(f"negative exponent on polynomial variable {n}")


def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Mono, b: Mono) -> Mono:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Mono, b: Mono) -> bool:
    """True if a | b in the polynomial sense."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_str(m: Mono, names: Sequence[str]) -> str:
    parts = []
    for n, e in zip(names, m):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts) if parts else "1"


class Poly:
    """Immutable sparse polynomial: a map from exponent tuples to Fractions."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: VarContext, terms: Mapping[Mono, Fraction | int] | None = None):
        self.ctx = ctx
        clean = {}
        for m, c in (terms or {}).items():
            if c:
                m = tuple(m)
                clean[m] = clean.get(m, 0) + Fraction(c)
                if not clean[m]:
                    del clean[m]
        self.terms: dict[Mono, Fraction] = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def _raw(cls, ctx: VarContext, terms: dict[Mono, Fraction]) -> Poly:
        # trusted constructor: terms already nonzero
        p = cls.__new__(cls)
        p.ctx = ctx
        p.terms = dict(sorted(terms.items()))
        p._hash = None
        return p

    @classmethod
    def zero(cls, ctx: VarContext) -> Poly:
        return cls._raw(ctx, {})

    @classmethod
    def const(cls, ctx: VarContext, c: Fraction | int) -> Poly:
        return cls(ctx, {ctx.one(): c})

    @classmethod
    def monomial(cls, ctx: VarContext, m: Mono, c: Fraction | int = 1) -> Poly:
        return cls(ctx, {tuple(m): c})

    @classmethod
    def var(cls, ctx: VarContext, name: str) -> Poly:
        return cls(ctx, {ctx.unit(name): 1})

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: Poly) -> None:
        if self.ctx != other.ctx:
            raise ContextError(f"{self.ctx.names} vs {other.ctx.names}")

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.ctx, other)
        return NotImplemented

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def __mul__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Mono, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw(self.ctx, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Fraction | int, m: Mono | None = None) -> Poly:
        """Return c * x^m * self."""
        if not c:
            return Poly.zero(self.ctx)
        if m is None:
            return Poly._raw(self.ctx, {k: v * c for k, v in self.terms.items()})
        return Poly._raw(self.ctx, {mono_mul(k, m): v * c for k, v in self.terms.items()})

    # -- comparison / inspection -------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.ctx, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx, tuple(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def coeff(self, m: Mono) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    @property
    def support(self) -> list[Mono]:
        return list(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, weights: Sequence[int] | None = None) -> int:
        """Maximal weighted degree (total degree by default)."""
        if not self.terms:
            raise ValueError("degree of zero polynomial")
        w = weights or [1] * self.ctx.arity
        return max(sum(a * b for a, b in zip(m, w)) for m in self.terms)

    def is_homogeneous(self, weights: Sequence[int]) -> bool:
        degs = {sum(a * b for a, b in zip(m, weights)) for m in self.terms}
        return len(degs) <= 1

    def filter(self, pred) -> Poly:
        return Poly._raw(self.ctx, {m: c for m, c in self.terms.items() if pred(m)})

    def substitute(self, values: Mapping[str, Fraction | int]) -> Poly:
        """Substitute numbers for some variables (they keep a zero exponent)."""
        idx = [(self.ctx.index(n), Fraction(v)) for n, v in values.items()]
        out: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            m = list(m)
            for i, v in idx:
                c = c * v ** m[i]
                m[i] = 0
            m = tuple(m)
            out[m] = out.get(m, 0) + c
        return Poly(self.ctx, out)

    def rename(self, ctx: VarContext) -> Poly:
        """Move into a context with the same variables (possibly a superset)."""
        pos = [ctx.index(n) for n in self.ctx.names]
        out = {}
        for m, c in self.terms.items():
            e = [0] * ctx.arity
            for i, x in zip(pos, m):
                e[i] = x
            out[tuple(e)] = c
        return Poly._raw(ctx, out)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda mc: (-sum(mc[0]), mc[0])):
            ms = mono_str(m, self.ctx.names)
            if ms == "1":
                s = str(c)
            elif c == 1:
                s = ms
            elif c == -1:
                s = "-" + ms
            else:
                s = f"{c}*{ms}"
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")

    # -- text format ---------------------------------------------------------

    def to_text(self) -> str:
        return "".join(
            f"{c}  {' '.join(map(str, m))}\n" for m, c in self.terms.items()
        )

    @classmethod
    def from_text(cls, ctx: VarContext, text: str) -> Poly:
        terms: dict[Mono, Fraction] = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            c, *exps = line.split()
            m = tuple(int(e) for e in exps)
            ctx.check_mono(m)
            terms[m] = terms.get(m, 0) + Fraction(c)
        return cls(ctx, terms)


def parse_poly(ctx: VarContext, expr: str) -> Poly:
    """Parse a human-written expression such as ``x^2 - 3/2*y``."""
    import sympy

    syms = sympy.symbols(ctx.names)
    local = dict(zip(ctx.names, syms))
    e = sympy.sympify(expr.replace("^", "**"), locals=local)
    e = sympy.expand(e)
    num, den = sympy.fraction(sympy.together(e))
    if den.free_symbols:
        # Laurent monomial denominators only
        den_poly = sympy.Poly(den, *syms)
        if len(den_poly.terms()) != 1:
            raise ValueError(f"not a Laurent polynomial: {expr}")
    else:
        den_poly = None
    P = sympy.Poly(num, *syms)
    shift: Mono = ctx.one()
    dc = Fraction(1)
    if den_poly is not None:
        (shift, dcoef), = den_poly.terms()
        dc = Fraction(int(dcoef.p), int(dcoef.q))
    else:
        dc = Fraction(int(sympy.Rational(den).p), int(sympy.Rational(den).q))
    terms = {}
    for m, c in P.terms():
        c = sympy.Rational(c)
        terms[mono_div(m, shift)] = Fraction(int(c.p), int(c.q)) / dc
    p = Poly(ctx, terms)
    for m in p.terms:
        ctx.check_mono(m)
    return p


# ---------------------------------------------------------------------------
# factored rational functions


Factor = tuple[Mono, Fraction, int]


def _merge_factors(factors: Iterable[tuple[Mono, Fraction | int, int]]) -> tuple[Factor, ...]:
    acc: dict[tuple[Mono, Fraction], int] = {}
    for m, c, k in factors:
        c = Fraction(c)
        if c == 0:
            raise ValueError("factor with zero coefficient")
        if k <= 0:
            raise ValueError("factor multiplicity must be positive")
        key = (tuple(m), c)
        acc[key] = acc.get(key, 0) + k
    return tuple(sorted((m, c, k) for (m, c), k in acc.items()))


@dataclass(frozen=True)
class FactoredRatFunc:
    """numerator / prod (1 - c*M)^mult."""

    numerator: Poly
    factors: tuple[Factor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", _merge_factors(self.factors))
        for m, _, _ in self.factors:
            self.ctx.check_mono(m)

    @property
    def ctx(self) -> VarContext:
        return self.numerator.ctx

    @classmethod
    def build(cls, ctx: VarContext, numerator: Poly | int, den: Iterable[tuple]) -> FactoredRatFunc:
        """den entries are (M, mult) or (M, c, mult)."""
        if not isinstance(numerator, Poly):
            numerator = Poly.const(ctx, numerator)
        fs = []
        for d in den:
            if len(d) == 2:
                fs.append((tuple(d[0]), Fraction(1), d[1]))
            else:
                fs.append((tuple(d[0]), Fraction(d[1]), d[2]))
        return cls(numerator, tuple(fs))

    def factor_poly(self, m: Mono, c: Fraction) -> Poly:
        return Poly(self.ctx, {self.ctx.one(): 1, m: -c}) if m != self.ctx.one() else Poly.const(self.ctx, 1 - c)

    def denominator(self) -> Poly:
        d = Poly.const(self.ctx, 1)
        for m, c, k in self.factors:
            d = d * self.factor_poly(m, c) ** k
        return d

    def __mul__(self, other: FactoredRatFunc) -> FactoredRatFunc:
        return FactoredRatFunc(self.numerator * other.numerator, self.factors + other.factors)

    def to_text(self) -> str:
        lines = ["NUM", self.numerator.to_text().rstrip("\n"), "DEN"]
        for m, c, k in self.factors:
            lines.append(f"{c}  {' '.join(map(str, m))}  {k}")
        return "\n".join(line for line in lines if line) + "\n"

    @classmethod
    def from_text(cls, ctx: VarContext, text: str) -> FactoredRatFunc:
        num_lines, den_lines, cur = [], [], None
        for line in text.splitlines():
            s = line.split("#", 1)[0].strip()
            if s == "NUM":
                cur = num_lines
            elif s == "DEN":
                cur = den_lines
            elif s:
                if cur is None:
                    raise ValueError("text must start with NUM")
                cur.append(s)
        num = Poly.from_text(ctx, "\n".join(num_lines))
        factors = []
        for s in den_lines:
            c, *rest = s.split()
            *exps, k = rest
            factors.append((tuple(int(e) for e in exps), Fraction(c), int(k)))
        return cls(num, tuple(factors))

    def __str__(self) -> str:
        den = " * ".join(
            f"(1 - {'' if c == 1 else str(c) + '*'}{mono_str(m, self.ctx.names)})"
            + (f"^{k}" if k > 1 else "")
            for m, c, k in self.factors
        )
        return f"({self.numerator}) / ({den or '1'})"


@dataclass(frozen=True)
class HilbertSeries:
    """A Hilbert series value with a tag describing how it was obtained."""

    value: FactoredRatFunc
    tag: str = "exact"
    stats: dict = field(default_factory=dict, compare=False)

    def expand(self, max_degree: int) -> Poly:
        return series_expand(self.value, list(self.value.ctx.names), max_degree)


def read_ratfunc_file(text: str) -> FactoredRatFunc:
    """Parse the text format, taking variable names from an optional ``VARS`` line."""
    names = None
    laurent: list[str] = []
    body = []
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("VARS"):
            names = s.split()[1:]
        elif s.startswith("LAURENT"):
            laurent = s.split()[1:]
        else:
            body.append(line)
    if names is None:
        # infer arity from the first term line
        for s in body:
            s = s.split("#", 1)[0].strip()
            if s and s not in ("NUM", "DEN"):
                names = [f"x{i + 1}" for i in range(len(s.split()) - 1)]
                break
    ctx = VarContext.of(names or [], laurent)
    return FactoredRatFunc.from_text(ctx, "\n".join(body))


# ---------------------------------------------------------------------------
# truncated series


def _grade(m: Mono, grading: Sequence[int]) -> int:
    return sum(m[i] for i in grading)


def mul_truncated(a: Poly, b: Poly, grading: Sequence[int], max_deg: int) -> Poly:
    """Product of a and b with terms of grading degree > max_deg discarded."""
    out: dict[Mono, Fraction] = {}
    bt = [(m, c, _grade(m, grading)) for m, c in b.terms.items()]
    for m1, c1 in a.terms.items():
        g1 = _grade(m1, grading)
        for m2, c2, g2 in bt:
            if g1 + g2 > max_deg:
                continue
            m = tuple(x + y for x, y in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return Poly._raw(a.ctx, {m: c for m, c in out.items() if c})


def truncate(p: Poly, grading: Sequence[int], max_deg: int) -> Poly:
    return p.filter(lambda m: _grade(m, grading) <= max_deg)


def _grading_indices(ctx: VarContext, grading: Sequence[str | int]) -> list[int]:
    return [g if isinstance(g, int) else ctx.index(g) for g in grading]


def geometric_factor_series(ctx: VarContext, m: Mono, c: Fraction, mult: int, deg_m: int, max_deg: int) -> Poly:
    """Truncated expansion of (1 - c*M)^(-mult)."""
    terms = {}
    k = 0
    while k * deg_m <= max_deg:
        terms[tuple(k * e for e in m)] = comb(mult + k - 1, k) * c**k
        k += 1
    return Poly(ctx, terms)


def series_expand(f: FactoredRatFunc, grading: Sequence[str | int], max_total_degree: int) -> Poly:
    """Truncate the power series of f to grading degree <= max_total_degree."""
    ctx = f.ctx
    g = _grading_indices(ctx, grading)
    for m, c, _ in f.factors:
        if _grade(m, g) <= 0:
            raise NonExpandableError(
                f"factor (1 - {c}*{mono_str(m, ctx.names)}) has grading degree {_grade(m, g)}"
            )
    result = truncate(f.numerator, g, max_total_degree)
    # expand heavy factors last so the running product stays small
    for m, c, k in sorted(f.factors, key=lambda x: -_grade(x[0], g)):
        s = geometric_factor_series(ctx, m, c, k, _grade(m, g), max_total_degree)
        result = mul_truncated(result, s, g, max_total_degree)
    return result


# ---------------------------------------------------------------------------
# normalization


def _divide_by_binomial(num: Poly, m: Mono, c: Fraction) -> Poly | None:
    """Exact quotient num / (1 - c*x^m), or None when it does not divide.

    Monomials split into lines a + j*m; along each line the division is a
    one-variable running sum, and it is exact iff every line sum closes.
    """
    if not num:
        return num
    if not any(m):
        return num.scale(1 / (1 - c)) if c != 1 else None
    piv = next(i for i, e in enumerate(m) if e)
    step = m[piv]
    lines: dict[Mono, dict[int, Fraction]] = {}
    for a, coef in num.terms.items():
        j = a[piv] // step
        rep = tuple(x - j * y for x, y in zip(a, m))
        lines.setdefault(rep, {})[j] = coef
    quot: dict[Mono, Fraction] = {}
    for rep, line in lines.items():
        lo, hi = min(line), max(line)
        q = Fraction(0)
        for j in range(lo, hi + 1):
            # p_j = q_j - c*q_{j-1}
            q = line.get(j, 0) + c * q
            if j == hi:
                break
            if q:
                quot[tuple(x + j * y for x, y in zip(rep, m))] = q
        # the top coefficient must equal -c * q_{hi-1}
        if q:
            return None
    return Poly(num.ctx, quot)


def ratfunc_normalize(f: FactoredRatFunc) -> FactoredRatFunc:
    """Cancel denominator factors that divide the numerator."""
    num = f.numerator
    remaining: list[Factor] = []
    for m, c, k in sorted(f.factors, key=lambda x: (-sum(abs(e) for e in x[0]), x)):
        left = k
        while left and num:
            q = _divide_by_binomial(num, m, c)
            if q is None:
                break
            num = q
            left -= 1
        if left:
            remaining.append((m, c, left))
    return FactoredRatFunc(num, tuple(remaining))


def _vanishing_order_at_one(p: Poly, si: int) -> int:
    """Order of vanishing of p, as a polynomial in variable si, at si = 1."""
    if not p:
        raise ValueError("zero numerator")
    order = 0
    cur = p
    while True:
        at_one: dict[Mono, Fraction] = {}
        for m, c in cur.terms.items():
            key = m[:si] + (0,) + m[si + 1:]
            at_one[key] = at_one.get(key, 0) + c
        if any(at_one.values()):
            return order
        # differentiate in s
        d = {}
        for m, c in cur.terms.items():
            if m[si]:
                nm = m[:si] + (m[si] - 1,) + m[si + 1:]
                d[nm] = d.get(nm, 0) + c * m[si]
        cur = Poly(p.ctx, d)
        order += 1


def pole_order_at_one(f: FactoredRatFunc, s: str) -> int:
    """Pole order at s = 1, counting factors that vanish identically there."""
    si = f.ctx.index(s)
    den = 0
    for m, c, k in f.factors:
        if c == 1 and m[si] != 0 and all(e == 0 for i, e in enumerate(m) if i != si):
            den += k
    return max(den - _vanishing_order_at_one(f.numerator, si), 0)


def ratfunc_equal(f: FactoredRatFunc, g: FactoredRatFunc) -> bool:
    """Exact equality of values over the least common factored denominator."""
    fm = {(m, c): k for m, c, k in f.factors}
    gm = {(m, c): k for m, c, k in g.factors}
    lhs, rhs = f.numerator, g.numerator
    for key in set(fm) | set(gm):
        a, b = fm.get(key, 0), gm.get(key, 0)
        if a < b:
            lhs = lhs * f.factor_poly(*key) ** (b - a)
        elif b < a:
            rhs = rhs * g.factor_poly(*key) ** (a - b)
    return lhs == rhs


def ratfunc_specialize(f: FactoredRatFunc, keep: Sequence[str]) -> FactoredRatFunc:
    """Set every variable outside ``keep`` to 1 and move to the context of ``keep``."""
    ctx = VarContext.of(keep, [n for n in keep if n in f.ctx.laurent])
    idx = [f.ctx.index(n) for n in keep]
    terms: dict[Mono, Fraction] = {}
    for m, c in f.numerator.terms.items():
        key = tuple(m[i] for i in idx)
        terms[key] = terms.get(key, 0) + c
    factors = []
    for m, c, k in f.factors:
        key = tuple(m[i] for i in idx)
        if not any(key):
            raise NonExpandableError(f"factor (1 - {c}*{mono_str(m, f.ctx.names)}) becomes constant")
        factors.append((key, c, k))
    return FactoredRatFunc(Poly(ctx, terms), tuple(factors))
