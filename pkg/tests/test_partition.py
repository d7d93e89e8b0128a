from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slninv.cases import case_u1
from slninv.poly import FactoredRatFunc, Poly, VarContext, ratfunc_equal, series_expand
from slninv.partition import (
    InconsistencyError,
    ReconstructionError,
    RepSpec,
    constant_term_one_var,
    hilbert_series_invariants,
    inject_slack,
    molien_weyl,
    positive_roots,
    reduce_pole_groups,
    series_reconstruct,
    sum_terms,
    weights,
)

T = VarContext.of("t")
TS = VarContext.of("t s", ["t", "s"])
ZTS = VarContext.of("z t s", ["z", "t", "s"])


def uni(num: dict[int, int], den: list[tuple[int, int]]) -> FactoredRatFunc:
    return FactoredRatFunc.build(T, Poly(T, {(e,): c for e, c in num.items()}), [((d,), k) for d, k in den])


@pytest.mark.invariant
@pytest.mark.parametrize(
    "n, rep, expected",
    [
        (2, "V", uni({0: 1}, [])),
        (2, "2*V", uni({0: 1}, [(2, 1)])),
        (2, "4*V", uni({0: 1, 4: -1}, [(2, 6)])),
        (2, "S2", uni({0: 1}, [(2, 1)])),
        (3, "3*V", uni({0: 1}, [(3, 1)])),
        (3, "V+Vdual", uni({0: 1}, [(2, 1)])),
    ],
)
def test_small_invariant_rings(n, rep, expected):
    hs = hilbert_series_invariants(RepSpec.parse(n, rep), 12)
    assert hs.tag == "constant-term"
    assert ratfunc_equal(hs.value, expected)


@pytest.mark.invariant
def test_elimination_order_does_not_matter():
    rep = RepSpec.parse(3, "2*V+Vdual")
    a = hilbert_series_invariants(rep, 10, order=["z1", "z2"])
    b = hilbert_series_invariants(rep, 10, order=["z2", "z1"])
    assert ratfunc_equal(a.value, b.value)


def test_sl5_rep_shape():
    rep = RepSpec.parse(5, "3*L2+1*L4")
    task = molien_weyl(rep)
    assert rep.dimension() == 35
    assert sum(k for _, _, k in task.function.factors) == 35
    assert len(positive_roots(5)) == 10
    assert len(task.function.numerator.terms) > 1


def test_sl2_weights():
    rep = RepSpec.parse(2, "V")
    assert sorted(weights(rep.summands[0], 2)) == [(-1,), (1,)]


def test_multigraded_parse():
    rep = RepSpec.parse(5, "2*L2+4*L4", "multigraded")
    assert rep.grading_names == ("t1", "t2")


@pytest.mark.parametrize("bad", ["3*L5", "2*Q1", "0*V"])
def test_repspec_errors(bad):
    with pytest.raises(ValueError):
        RepSpec.parse(5, bad)


def test_inject_slack_examples():
    f = FactoredRatFunc.build(ZTS, 1, [((1, 1, 0), 3)])
    g = inject_slack(f)
    assert sorted(g.factors) == [((1, 1, 0), 1, 1), ((1, 1, 1), 1, 1), ((1, 1, 2), 1, 1)]
    square_free = FactoredRatFunc.build(ZTS, 1, [((1, 1, 0), 1), ((0, 1, 0), 1)])
    assert inject_slack(square_free) == square_free


@pytest.mark.invariant
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2))
def test_slack_specializes_back(k, d, extra):
    # expanding the slack version and setting s = 1 reproduces the original series
    f = FactoredRatFunc.build(TS, 1, [((d, 0), k), ((extra + 1, 0), 1)])
    g = inject_slack(f)
    a = series_expand(f, ["t"], 8).substitute({"s": 1})
    b = series_expand(g, ["t"], 8).substitute({"s": 1})
    assert a == b


def test_reduce_pole_groups_examples():
    one = Poly.const(TS, 1)
    a = FactoredRatFunc.build(TS, one, [((0, 1), 1)])
    b = FactoredRatFunc.build(TS, -one, [((0, 1), 1)])
    assert not reduce_pole_groups([a, b]).numerator
    c = FactoredRatFunc.build(TS, one, [((0, 1), 1), ((1, 0), 1)])
    d = FactoredRatFunc.build(TS, -Poly.var(TS, "s"), [((0, 1), 1), ((1, 0), 1)])
    got = reduce_pole_groups([c, d])
    assert ratfunc_equal(got, FactoredRatFunc.build(TS, 1, [((1, 0), 1)]))


@pytest.mark.invariant
def test_lone_pole_is_inconsistent():
    a = FactoredRatFunc.build(TS, 1, [((0, 1), 1)])
    b = FactoredRatFunc.build(TS, 1, [((1, 0), 1)])
    with pytest.raises(InconsistencyError):
        reduce_pole_groups([a, b])


# Elliott-rational inputs in z with z-exponents in {-1, 0, 1} and distinct factors
factor_pool = [(e, d, 0) for e in (-1, 0, 1) for d in (1, 2, 3)]


@st.composite
def elliott(draw):
    facs = draw(st.lists(st.sampled_from(factor_pool), min_size=1, max_size=4, unique=True))
    num = draw(st.dictionaries(st.tuples(st.integers(-2, 2), st.integers(0, 2), st.just(0)), st.integers(-3, 3), max_size=3))
    return FactoredRatFunc.build(ZTS, Poly(ZTS, num), [(m, 1) for m in facs])


def z_constant_series(f: FactoredRatFunc, deg: int) -> Poly:
    return series_expand(f, ["t"], deg).filter(lambda m: m[0] == 0)


@pytest.mark.invariant
@given(elliott())
def test_constant_term_matches_expansion(f):
    got = constant_term_one_var(f, "z")
    assert series_expand(got, ["t"], 7) == z_constant_series(f, 7)


@pytest.mark.invariant
@given(elliott(), elliott(), st.integers(-3, 3), st.integers(-3, 3))
def test_constant_term_is_linear(f, g, a, b):
    combo = sum_terms([FactoredRatFunc(f.numerator * a, f.factors), FactoredRatFunc(g.numerator * b, g.factors)])
    lhs = series_expand(constant_term_one_var(combo, "z"), ["t"], 6)
    rhs = series_expand(constant_term_one_var(f, "z"), ["t"], 6) * a + series_expand(constant_term_one_var(g, "z"), ["t"], 6) * b
    assert lhs == rhs


def test_series_reconstruct_examples():
    s = series_expand(uni({0: 1}, [(2, 1)]), ["t"], 10)
    hs = series_reconstruct(s, [2], 10)
    assert ratfunc_equal(hs.value, uni({0: 1}, [(2, 1)]))
    with pytest.raises(ReconstructionError):
        series_reconstruct(s, [3], 10)


def test_series_reconstruct_u1():
    data = case_u1()
    s = series_expand(data.target, ["t"], 40)
    hs = series_reconstruct(s, data.total_degrees(), 40)
    one = Poly.const(T, 1)
    expected = (one - Poly.monomial(T, (10,))) * (one - Poly.monomial(T, (12,)))
    assert ratfunc_equal(hs.value, FactoredRatFunc.build(T, expected, [((d,), 1) for d in data.total_degrees()]))
    assert ratfunc_equal(hs.value, data.target)
