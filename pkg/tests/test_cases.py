import json
from itertools import combinations
from pathlib import Path

import pytest

from slninv import cases, serial
from slninv.groebner import ci_series
from slninv.poly import ratfunc_equal

GOLDEN = Path(__file__).parent / "golden"


def swap_colors(name: str) -> str:
    t = name.split("_")
    if t[0] == "i":
        t[3] = str(3 - int(t[3]))
    else:
        t[1], t[2] = t[2], t[1]
    return "_".join(t)


@pytest.mark.invariant
@pytest.mark.parametrize("p", range(4, 9))
def test_w1_color_symmetry(p):
    for k in serial.relation_range("W1", p):
        mirrored = {tuple(sorted(map(swap_colors, m))) for m in serial.support_names("W1", p, k)}
        assert mirrored == set(serial.support_names("W1", p, 2 * p + 3 - k))


def bidegree(name: str) -> tuple[int, int]:
    t = name.split("_")
    if t[0] == "i":
        return (1, 0) if t[3] == "1" else (0, 1)
    return int(t[1]), int(t[2])


def w1_support_by_filtering(p: int, k: int) -> set[tuple[str, ...]]:
    """Every product of two or three support variables with the right bidegree and index pattern."""
    V = serial.variables("W1", p)
    want = (k, 2 * p + 3 - k)
    out = set()
    for size in (2, 3):
        for combo in combinations(range(len(V)), size):
            names = [V[i] for i in combo]
            letters = sorted(n[0] for n in names)
            if tuple(map(sum, zip(*map(bidegree, names)))) != want:
                continue
            if letters == ["j", "k"] and names[0].split("_")[3] == names[1].split("_")[3]:
                out.add(tuple(sorted(names)))
            if letters == ["i", "j", "j"]:
                i = next(n for n in names if n[0] == "i").split("_")
                js = [n.split("_")[3] for n in names if n[0] == "j"]
                if sorted([i[1], i[2], *js]) == ["1", "2", "3", "4"]:
                    out.add(tuple(sorted(names)))
    return out


@pytest.mark.parametrize("p", [4, 5, 6])
def test_w1_supports_against_enumeration(p):
    for k in serial.relation_range("W1", p):
        assert set(serial.support_names("W1", p, k)) == w1_support_by_filtering(p, k)


@pytest.mark.invariant
@pytest.mark.parametrize("p", range(4, 11))
def test_w1_relation_count(p):
    assert len(serial.relation_range("W1", p)) == 2 * p - 4


def test_w2_p3_designations():
    d = serial.designation_names("W2", 3)
    assert d["g3"] == ("j_2_2_1", "m_1_3_1")
    assert d["g4"] == ("j_2_2_2", "m_2_2_2")
    assert d["g5"] == ("j_2_2_3", "m_3_1_3")


@pytest.mark.parametrize("p", range(2, 8))
def test_w3_squares(p):
    d = serial.designation_names("W3", p)
    assert len(d) == 2 * p - 2
    assert all(a == b for a, b in d.values())


@pytest.mark.parametrize("case, p", [("W1", 3), ("W2", 2), ("W3", 1), ("W4", 5)])
def test_range_errors(case, p):
    with pytest.raises(serial.RangeError):
        serial.variables(case, p)


def test_relation_index_out_of_range():
    with pytest.raises(serial.RangeError):
        serial.serial_support("W1", 5, 10)


@pytest.mark.parametrize("bad", ["X9", "W1", "A2"])
def test_case_parse_errors(bad):
    with pytest.raises(cases.CaseError):
        cases.parse_case(bad)


@pytest.mark.invariant
@pytest.mark.parametrize("case", sorted(cases.GRAPH_CASES))
def test_shipped_graphs_match_code(case):
    assert cases.load_shipped_graphs(case) == cases.GRAPH_CASES[case]()


@pytest.mark.invariant
def test_u1_relation_degrees():
    degs = cases.case_u1().relation_degrees()
    assert sorted(sum(d) for d in degs.values()) == [10, 12]


@pytest.mark.invariant
def test_u3_series_identity():
    data = cases.case_u3()
    hs = ci_series(list(data.degrees.values()), cases.u3_syzygy_degrees(), data.grading)
    assert ratfunc_equal(hs.value, data.target)


def test_w1_p2_relations_vanish():
    rep = cases.run_case("W1(2)")
    assert rep.ok, rep.to_text()


@pytest.mark.parametrize("case_id", ["A1(2)", "A2(2)", "A3(2)", "A1(3)", "A2(3)"])
def test_lemma_series(case_id):
    rep = cases.run_case(case_id)
    assert rep.ok, rep.to_text()


@pytest.mark.parametrize(
    "stem, case_id",
    [("U1", "U1"), ("U2", "U2"), ("U3", "U3"), ("W1_4", "W1(4)"), ("W1_5", "W1(5)"), ("W2_3", "W2(3)"), ("W3_2", "W3(2)")],
)
def test_reports_match_goldens(stem, case_id):
    rep = cases.run_case(case_id)
    assert rep.to_text() == (GOLDEN / f"{stem}.txt").read_text()
    assert json.loads(rep.to_json()) == json.loads((GOLDEN / f"{stem}.json").read_text())


@pytest.mark.invariant
def test_inhomogeneous_relation_rejected_at_load():
    from slninv.poly import VarContext

    with pytest.raises(cases.CaseError):
        cases.CaseData("X", VarContext.of("t"), {"a": (1,), "b": (2,)}, cases._parse_relations(["a", "b"], {"R": "a*b - a"}))
