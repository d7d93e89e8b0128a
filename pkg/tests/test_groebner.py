from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import XYZ, polys, small_fraction
from slninv.cases import case_u2
from slninv.groebner import (
    COPRIME,
    GradedRing,
    HomogeneityError,
    IdealBasis,
    IncompleteError,
    buchberger,
    ci_series,
    hilbert_series_quotient,
    monomial_hilbert_numerator,
    reduce,
    reduced_basis,
    s_polynomial,
)
from slninv.order import OrderMatrix
from slninv.poly import Poly, VarContext, parse_poly, ratfunc_equal, series_expand

XY = VarContext.of("x y")
GREVLEX = OrderMatrix.of([[1, 1, 1], [1, 1, 0], [1, 0, 0]])
LEX = OrderMatrix.identity(3)
WEIGHTED = OrderMatrix.of([[1, 1, 1], [0, 0, 1]]).complete()
RING = GradedRing.univariate(XYZ, [1, 1, 1])


def p(expr: str, ctx=XY) -> Poly:
    return parse_poly(ctx, expr)


@st.composite
def homogeneous(draw, deg):
    monos = [(a, b, deg - a - b) for a in range(deg + 1) for b in range(deg + 1 - a)]
    coeffs = draw(st.lists(small_fraction, min_size=len(monos), max_size=len(monos)))
    return Poly(XYZ, dict(zip(monos, coeffs)))


@st.composite
def homogeneous_ideals(draw):
    degs = draw(st.lists(st.integers(1, 3), min_size=1, max_size=3))
    gens = [draw(homogeneous(d)) for d in degs]
    gens = [g for g in gens if g]
    assume(gens)
    return gens


def test_s_polynomial_example():
    lex = OrderMatrix.identity(2)
    assert s_polynomial(p("x^2 - y"), p("x*y - 1"), lex) == p("x - y^2")


def test_reduce_example():
    lex = OrderMatrix.identity(2)
    assert reduce(p("x^2*y"), [p("x^2 - y")], lex) == p("y^2")


def test_groebner_basis_example():
    lex = OrderMatrix.identity(2)
    gb = reduced_basis(buchberger([p("x^2 - y"), p("x*y - 1")], lex), lex)
    assert set(gb.generators) == {p("x - y^2"), p("y^3 - 1")}


def test_coprime_certificate():
    gb = buchberger([p("x^2 + y", XYZ), p("z^3 + y^2", XYZ)], LEX)
    assert gb.certificate == COPRIME


def test_budget_exhaustion_keeps_partial():
    gens = [p("x^2 - y*z", XYZ), p("x*y - z^2", XYZ), p("y^2 - x*z", XYZ) + p("z^2", XYZ)]
    with pytest.raises(IncompleteError) as e:
        buchberger(gens, GREVLEX, budget=0)
    assert len(e.value.partial) >= 3


def test_ideal_basis_rejects_inhomogeneous():
    with pytest.raises(HomogeneityError):
        IdealBasis((p("x^2 - y", XYZ),), RING)


@pytest.mark.invariant
@given(homogeneous_ideals())
def test_spolys_reduce_to_zero(gens):
    gb = buchberger(gens, GREVLEX)
    for f, g in combinations(gb.generators, 2):
        assert not reduce(s_polynomial(f, g, GREVLEX), gb, GREVLEX)


@pytest.mark.invariant
@given(homogeneous_ideals(), st.lists(polys(XYZ, max_terms=3), min_size=3, max_size=3), polys(XYZ, max_terms=2))
def test_membership(gens, hs, outsider):
    gb = buchberger(gens, GREVLEX)
    member = sum((h * g for h, g in zip(hs, gens)), Poly.zero(XYZ))
    assert not reduce(member, gb, GREVLEX)
    r = reduce(outsider, gb, GREVLEX)
    # the remainder differs from the input by an ideal member
    assert not reduce(outsider - r, gb, GREVLEX)


@pytest.mark.invariant
@given(homogeneous_ideals())
def test_hilbert_series_is_order_independent(gens):
    basis = IdealBasis(tuple(gens), RING)
    series = [series_expand(hilbert_series_quotient(RING, basis, o).value, ["t"], 12) for o in (GREVLEX, LEX, WEIGHTED)]
    assert series[0] == series[1] == series[2]


def test_hilbert_series_of_square():
    ring = GradedRing.univariate(VarContext.of("x"), [1])
    hs = hilbert_series_quotient(ring, IdealBasis((p("x^2", ring.ctx),), ring), OrderMatrix.identity(1))
    t = hs.value.ctx
    assert hs.value.factors == ()
    assert hs.value.numerator == Poly(t, {(0,): 1, (1,): 1})


@pytest.mark.invariant
def test_pivot_choice_does_not_matter():
    # a monomial ideal whose generators share several variables
    gens = [(2, 1, 0), (1, 2, 0), (0, 1, 2), (1, 0, 1)]
    degs = [(1,), (1,), (1,)]
    t = VarContext.of("t")
    a = monomial_hilbert_numerator(gens, degs, t)
    b = monomial_hilbert_numerator([tuple(reversed(g)) for g in gens], degs, t)
    assert a == b


@pytest.mark.invariant
def test_u2_complete_intersection():
    data = case_u2()
    ctx = data.ctx()
    ring = GradedRing.univariate(ctx, data.total_degrees())
    basis = IdealBasis(tuple(data.relations.values()), ring)
    order = OrderMatrix.of([data.total_degrees()]).complete()
    hs = hilbert_series_quotient(ring, basis, order)
    ci = ci_series([(d,) for d in data.total_degrees()], [(9,)] * 3)
    assert ratfunc_equal(hs.value, ci.value)
    assert ratfunc_equal(hs.value, data.target)
    assert series_expand(hs.value, ["t"], 20) == series_expand(ci.value, ["t"], 20)


def test_ci_series_multigraded():
    hs = ci_series([(1, 0), (0, 1)], [(1, 1)])
    assert hs.value.ctx.names == ("t1", "t2")
    expanded = series_expand(hs.value, ["t1", "t2"], 3)
    # (1 - ab)/((1-a)(1-b)): coefficient 1 on a^i and b^j only
    assert set(expanded.terms) == {(i, 0) for i in range(4)} | {(0, j) for j in range(1, 4)}
    assert set(expanded.terms.values()) == {Fraction(1)}
