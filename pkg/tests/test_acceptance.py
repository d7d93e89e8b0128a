"""One test per acceptance criterion; the terminal summary prints one PASS/FAIL line each.

Tolerances are exact throughout: rational-function equality after normalization,
coefficientwise series equality, exact rational zeros and exact ranks.
"""

import json
import time
from fractions import Fraction as F
from itertools import combinations
from pathlib import Path

from click.testing import CliRunner

from conftest import CRITERIA
from slninv import cases, serial
from slninv.brackets import relation_from_poly, verify_syzygy
from slninv.cli import main
from slninv.crosshair import collapsed_sieve, crosshair_search, sieve_matrix, verify_order
from slninv.groebner import COPRIME, GradedRing, IdealBasis, buchberger, ci_series, hilbert_series_quotient
from slninv.order import OrderMatrix
from slninv.partition import RepSpec, hilbert_series_invariants
from slninv.poly import FactoredRatFunc, Poly, VarContext, ratfunc_equal, series_expand

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).parent / "golden"
TRIALS = 10


def record(n: int, ok: bool, detail: str):
    CRITERIA[n] = ("PASS" if ok else "FAIL", detail)
    assert ok, f"criterion {n}: {detail}"


def uni(num: dict[int, int], den: list[tuple[int, int]]) -> FactoredRatFunc:
    t = VarContext.of("t")
    return FactoredRatFunc.build(t, Poly(t, {(e,): c for e, c in num.items()}), [((d,), k) for d, k in den])


U2_SERIES = uni({0: 1, 9: -3, 18: 3, 27: -1}, [(4, 8), (5, 6)])


def test_criterion_1_u2_complete_intersection():
    t0 = time.time()
    data = cases.case_u2()
    ring = GradedRing.univariate(data.ctx(), data.total_degrees())
    basis = IdealBasis(tuple(data.relations.values()), ring)
    assert sorted(data.total_degrees()) == [4] * 8 + [5] * 6
    hs = hilbert_series_quotient(ring, basis, OrderMatrix.of([data.total_degrees()]).complete())
    exact = ratfunc_equal(hs.value, U2_SERIES)
    expanded = series_expand(hs.value, ["t"], 20) == series_expand(U2_SERIES, ["t"], 20)
    dt = time.time() - t0
    record(1, exact and expanded and dt < 60, f"exact={exact} degree-20 expansion={expanded} certificate={hs.tag} {dt:.1f}s")


def test_criterion_2_syzygies():
    t0 = time.time()
    outcome = {}
    for data in (cases.case_u1(), cases.case_u2()):
        sampler = data.sampler()
        for name, f in data.relations.items():
            rel = relation_from_poly(f)
            rep = verify_syzygy(rel, data.graphs, sampler, trials=max(TRIALS, len(rel)))
            outcome[f"{data.case_id} {name}"] = rep
    dt = time.time() - t0
    ok = all(r.confirmed for r in outcome.values()) and dt < 300
    detail = "; ".join(f"{k}: {'confirmed' if r.confirmed else 'NOT confirmed'} ({r.summary()})" for k, r in outcome.items())
    record(2, ok, f"{detail}; {dt:.1f}s")


# reference sieve tables, level by level, rows r = 1..p, columns s = 1..p-3
S4_2 = [[[2], [1], [1], [1]], [[1], [2], [1], [1]], [[1], [1], [2], [1]], [[1], [1], [1], [2]]]
S5_2 = [
    [[2, 2], [1, 1], [1, 1], [2, 2], [1, 1]],
    [[1, 1], [2, 2], [1, 1], [1, 1], [2, 2]],
    [[1, 0], [1, 0], [2, 1], [1, 0], [1, 0]],
    [[1, 0], [1, 0], [1, 0], [2, 1], [1, 0]],
]
S5_2_ITALIC = {(1, 1, 2), (1, 4, 1), (2, 2, 2), (2, 5, 1)}  # (level, r, s)
S5_3 = [
    [[0, 1], [0, 1], [0, 1], [1, 2], [0, 1]],
    [[1, 0], [2, 1], [1, 0], [1, 0], [1, 0]],
    [[1, 0], [1, 0], [2, 1], [1, 0], [1, 0]],
    [[1, 0], [1, 0], [1, 0], [2, 1], [1, 0]],
]
H = F(1, 2)
S5_SINGLE = [
    [[2, 5 * H], [1, 3 * H], [1, 3 * H], [5 * H, 3], [1, 3 * H]],
    [[3 * H, 1], [3, 5 * H], [3 * H, 1], [3 * H, 1], [5 * H, 2]],
    [[3 * H, 0], [3 * H, 0], [3, 3 * H], [3 * H, 0], [3 * H, 0]],
    [[3 * H, 0], [3 * H, 0], [3 * H, 0], [3, 3 * H], [3 * H, 0]],
]


def _starred(render: str) -> set[tuple[int, int, int]]:
    out, level, r = set(), 0, 0
    for line in render.splitlines():
        if line.startswith("level"):
            level, r = int(line.split()[1]), 0
        elif line.strip():
            r += 1
            out |= {(level, r, s + 1) for s, cell in enumerate(line.split()) if cell.startswith("*")}
    return out


def _block(output: str, header: str) -> str:
    return output.split(header + "\n", 1)[1].split("\n# ", 1)[0]


def test_criterion_3_w1_crosshair():
    problems = []
    runner = CliRunner()
    outputs = {}
    for p in (4, 5):
        res = runner.invoke(main, ["order", "find", "--case", "W1", "--p", str(p), "--render-sieves"])
        outputs[p] = res.output
        if res.exit_code or res.output != (GOLDEN / f"order_W1_{p}.txt").read_text():
            problems.append(f"p={p} render differs from golden")
    if _starred(_block(outputs[5], "# sieve row 2")) != S5_2_ITALIC:
        problems.append("S5_2 interference entries")
    tables = {}
    for p in range(4, 11):
        t0 = time.time()
        run = serial.SerialRun.build("W1", p)
        order, trace = crosshair_search(run.family, run.prelude)
        rows = {r.index: r.row for r in trace.rounds if r.kind == "sieve"}
        if p in (4, 5):
            sv = serial.w1_sieve(p)
            tables[p] = {k: sieve_matrix(sv, row) for k, row in rows.items()}
            tables[p]["single"] = sieve_matrix(sv, collapsed_sieve(run.family, trace)[1])
        if verify_order(order, run.family):
            problems.append(f"p={p} designation not leading")
        for r in trace.rounds:
            if r.kind == "sieve" and serial.relation_id("W1", 2 * p - r.index + 1) not in r.filtered:
                problems.append(f"p={p} row {r.index} misses f{2 * p - r.index + 1}")
        leads = list(run.family.designated.values())
        if any(any(x and y for x, y in zip(a, b)) for a, b in combinations(leads, 2)):
            problems.append(f"p={p} leads share variables")
        ctx = VarContext.of(list(run.family.variables))
        polys = [Poly(ctx, {m: 1 for m in run.family.supports[k]}) for k in sorted(run.family.supports)]
        if buchberger(polys, order).certificate != COPRIME:
            problems.append(f"p={p} no coprime certificate")
        if time.time() - t0 > 60:
            problems.append(f"p={p} over one minute")
    frac = lambda t: [[[F(x) for x in row] for row in lv] for lv in t]
    if tables[4][2] != frac(S4_2):
        problems.append("S4_2 values")
    if tables[5][2] != frac(S5_2) or tables[5][3] != frac(S5_3):
        problems.append("S5_2/S5_3 values")
    if tables[5]["single"] != frac(S5_SINGLE):
        problems.append("single sieve values")
    record(3, not problems, "; ".join(problems) or "goldens, reference sieve values and interference marks match; p=4..10 searches certified")


def test_criterion_4_w2_w3_crosshair():
    problems = []
    d = serial.designation_names("W2", 3)
    if d["g3"] != ("j_2_2_1", "m_1_3_1"):
        problems.append("W2(3) designation g3")
    for case, ps in (("W2", range(3, 11)), ("W3", range(2, 11))):
        for p in ps:
            t0 = time.time()
            run = serial.SerialRun.build(case, p)
            try:
                order, trace = crosshair_search(run.family, run.prelude)
            except Exception as e:
                problems.append(f"{case}({p}) {type(e).__name__}")
                continue
            if verify_order(order, run.family):
                problems.append(f"{case}({p}) designation not leading")
            if case == "W3" and not {"h3", f"h{2 * p}"} <= trace.first_sieve().filtered:
                problems.append(f"W3({p}) first sieve row")
            if time.time() - t0 > 60:
                problems.append(f"{case}({p}) over one minute")
    record(4, not problems, "; ".join(problems) or "W2 p=3..10 and W3 p=2..10 terminate with every designation strictly leading")


def test_criterion_5_partition_floor():
    expected = {
        "V": uni({0: 1}, []),
        "2*V": uni({0: 1}, [(2, 1)]),
        "4*V": uni({0: 1, 4: -1}, [(2, 6)]),
        "S2": uni({0: 1}, [(2, 1)]),
    }
    lines, ok = [], True
    for rep, want in expected.items():
        hs = hilbert_series_invariants(RepSpec.parse(2, rep), 12)  # raises on oracle disagreement
        good = hs.tag == "constant-term" and ratfunc_equal(hs.value, want)
        ok &= good
        lines.append(f"SL2 {rep}: {'ok' if good else hs.value}")
    record(5, ok, "; ".join(lines) + " (oracle-checked to degree 12)")


def test_criterion_6_lemma_accounting():
    t0 = time.time()
    reps = [cases.run_lemma(c, 2, 12) for c in ("A1", "A2")]
    dt = time.time() - t0
    record(6, all(r.ok for r in reps) and dt < 600, f"A1(2) {reps[0].ok}, A2(2) {reps[1].ok} to total degree 12; {dt:.1f}s")


def test_criterion_7_u3_identity():
    data = cases.case_u3()
    hs = ci_series(list(data.degrees.values()), cases.u3_syzygy_degrees(), data.grading)
    ok = ratfunc_equal(hs.value, data.target)
    record(7, ok, f"{len(data.degrees)} generator multidegrees, syzygies {cases.u3_syzygy_degrees()}")


def test_criterion_8_stretch():
    """Reads the records left by scripts/stretch_molien.py; timeouts are reported, not failed."""
    parts, ok, complete = [], True, True
    for name in ("u2", "a1"):
        path = ROOT / "results" / f"stretch_{name}.json"
        if not path.exists():
            parts.append(f"{name}: no record (run scripts/stretch_molien.py)")
            complete = False
            continue
        rec = json.loads(path.read_text())
        status = rec.get("status", "?")
        oracle = rec.get("oracle_agrees")
        if oracle is False:
            ok = False
        if status != "match":
            complete = False
        if status not in ("match", "timeout", "memory", "eliminating") and not status.startswith("child exit"):
            ok = False
        steps = len(rec.get("steps") or rec.get("completed_steps") or [])
        parts.append(
            f"{name}: {status} after {rec.get('seconds')}s, {steps} torus variables eliminated, "
            f"integrand oracle agrees to degree {rec.get('oracle_degree')}: {oracle}"
        )
    if ok and not complete:
        # budget exhausted: recorded as partial progress, not a failure
        CRITERIA[8] = ("PARTIAL", "; ".join(parts))
        return
    record(8, ok, "; ".join(parts))
