from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import XYZ, polys, small_fraction
from slninv.poly import (
    ContextError,
    FactoredRatFunc,
    NonExpandableError,
    Poly,
    VarContext,
    mul_truncated,
    parse_poly,
    pole_order_at_one,
    ratfunc_equal,
    ratfunc_normalize,
    ratfunc_specialize,
    read_ratfunc_file,
    series_expand,
    truncate,
)

T = VarContext.of("t")
TZ = VarContext.of("t z", laurent=["z"])
TS = VarContext.of("t s")


def univariate(num: dict[int, int], den: list[tuple[int, int]]) -> FactoredRatFunc:
    return FactoredRatFunc.build(T, Poly(T, {(e,): c for e, c in num.items()}), [((d,), k) for d, k in den])


@st.composite
def ratfuncs(draw):
    num = draw(polys(XYZ, max_terms=3))
    dens = draw(st.lists(st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)), st.integers(1, 2)), max_size=3))
    dens = [(m, k) for m, k in dens if sum(m) > 0]
    return FactoredRatFunc.build(XYZ, num, dens)


@pytest.mark.invariant
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a - a == Poly.zero(XYZ)


@pytest.mark.invariant
@given(ratfuncs(), ratfuncs())
def test_series_is_multiplicative_up_to_truncation(f, g):
    d = 5
    g_idx = [0, 1, 2]
    lhs = series_expand(f * g, "xyz", d)
    rhs = truncate(mul_truncated(series_expand(f, "xyz", d), series_expand(g, "xyz", d), g_idx, d), g_idx, d)
    assert lhs == rhs


@pytest.mark.invariant
@given(polys(XYZ, max_terms=3), st.lists(st.tuples(st.sampled_from([(1, 0, 0), (0, 1, 1), (2, 0, 1)]), st.integers(1, 2)), max_size=3), st.data())
def test_normalize_preserves_series(num, dens, data):
    f = FactoredRatFunc.build(XYZ, num, dens)
    # force some cancellation by multiplying in a subset of the factors
    extra = data.draw(st.lists(st.sampled_from([d[0] for d in dens]), max_size=2)) if dens else []
    for m in extra:
        num = num * f.factor_poly(m, Fraction(1))
    g = FactoredRatFunc.build(XYZ, num, dens)
    h = ratfunc_normalize(g)
    assert series_expand(h, "xyz", 6) == series_expand(g, "xyz", 6)
    assert ratfunc_equal(h, g)


def test_u2_series_prefix():
    f = univariate({0: 1, 9: -3, 18: 3, 27: -1}, [(4, 8), (5, 6)])
    got = series_expand(f, ["t"], 9)
    assert got == Poly(T, {(0,): 1, (4,): 8, (5,): 6, (8,): 36, (9,): 45})


def test_torus_factor_constant_part():
    f = FactoredRatFunc.build(TZ, 1, [((1, 1), 1), ((1, -1), 1)])
    got = series_expand(f, ["t"], 5)
    z0 = got.filter(lambda m: m[1] == 0)
    assert z0 == Poly(TZ, {(0, 0): 1, (2, 0): 1, (4, 0): 1})


def test_laurent_only_where_declared():
    with pytest.raises(ValueError):
        FactoredRatFunc.build(T, 1, [((-1,), 1)])


def test_nonexpandable_factor():
    f = FactoredRatFunc.build(TZ, 1, [((0, 1), 1)])
    with pytest.raises(NonExpandableError):
        series_expand(f, ["t"], 3)


def test_context_mismatch():
    with pytest.raises(ContextError):
        Poly.var(T, "t") + Poly.var(TS, "t")


def test_pole_order():
    ts = FactoredRatFunc.build(TS, 1, [((0, 1), 2), ((1, 1), 1)])
    assert pole_order_at_one(ts, "s") == 2
    # (1 - s) in the numerator cancels one order
    num = Poly(TS, {(0, 0): 1, (0, 1): -1})
    assert pole_order_at_one(FactoredRatFunc.build(TS, num, [((0, 1), 2)]), "s") == 1
    assert pole_order_at_one(FactoredRatFunc.build(TS, num, [((0, 1), 1)]), "s") == 0


def test_normalize_cancels_binomials():
    # (1 - t^9)^3 / (1 - t^3)^3 = (1 + t^3 + t^6)^3
    f = univariate({0: 1, 9: -3, 18: 3, 27: -1}, [(3, 3)])
    h = ratfunc_normalize(f)
    assert h.factors == ()
    assert h.numerator == Poly(T, {(0,): 1, (3,): 1, (6,): 1}) ** 3


def test_ratfunc_equal_across_denominators():
    a = univariate({0: 1}, [(2, 1)])
    b = univariate({0: 1, 2: 1}, [(4, 1)])
    assert ratfunc_equal(a, b)
    assert not ratfunc_equal(a, univariate({0: 1}, [(1, 1)]))


@given(polys())
def test_poly_text_round_trip(p):
    assert Poly.from_text(XYZ, p.to_text()) == p


@given(ratfuncs())
def test_ratfunc_text_round_trip(f):
    assert FactoredRatFunc.from_text(XYZ, f.to_text()) == f


def test_read_ratfunc_file_with_vars():
    text = "VARS t\nNUM\n1  0\n-1  2\nDEN\n1  1  2\n"
    f = read_ratfunc_file(text)
    assert series_expand(f, ["t"], 4) == Poly(f.ctx, {(0,): 1, (1,): 2, (2,): 2, (3,): 2, (4,): 2})


def test_parse_poly():
    p = parse_poly(XYZ, "x^2 - 3/2*y + z*x")
    assert p == Poly(XYZ, {(2, 0, 0): 1, (0, 1, 0): Fraction(-3, 2), (1, 0, 1): 1})


@given(polys(), small_fraction)
def test_scale_and_substitute(p, c):
    vals = {"x": 2, "y": Fraction(1, 3), "z": -1}
    assert (p * c).substitute(vals) == p.substitute(vals) * c


def test_specialize_drops_variables():
    f = FactoredRatFunc.build(TS, Poly(TS, {(0, 0): 1, (1, 2): 3}), [((1, 1), 2)])
    g = ratfunc_specialize(f, ["t"])
    assert g == univariate({0: 1, 1: 3}, [(1, 2)])
    with pytest.raises(NonExpandableError):
        ratfunc_specialize(FactoredRatFunc.build(TS, 1, [((0, 1), 1)]), ["t"])
