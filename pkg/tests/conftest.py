from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from slninv.poly import Poly, VarContext

settings.register_profile(
    "slninv",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("slninv")

XYZ = VarContext.of("x y z")

small_fraction = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))
small_mono = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))


@st.composite
def polys(draw, ctx=XYZ, max_terms=4):
    terms = draw(st.dictionaries(small_mono, small_fraction, max_size=max_terms))
    return Poly(ctx, terms)


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion at the end of the run

CRITERIA: dict[int, tuple[str, str]] = {}  # number -> (PASS / FAIL / PARTIAL / NOT RUN, detail)
_invariant_outcomes: list[bool] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "invariant: property test backing a module invariant")


def pytest_runtest_logreport(report):
    if "invariant" in report.keywords and (report.when == "call" or report.outcome != "passed"):
        if report.when == "call" or report.failed:
            _invariant_outcomes.append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    if _invariant_outcomes:
        word = "PASS" if all(_invariant_outcomes) else "FAIL"
        CRITERIA[9] = (word, f"{sum(_invariant_outcomes)}/{len(_invariant_outcomes)} invariant tests passed")
    else:
        CRITERIA.setdefault(9, ("NOT RUN", "invariant tests were not part of this run"))
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        word, detail = CRITERIA[n]
        tr.write_line(f"criterion {n}: {word}  {detail}")
