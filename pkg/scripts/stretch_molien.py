"""Budgeted invariant Hilbert series runs for two SL_5 representations.

u2: 3 L2 + L4 with one grading variable, compared with (1-t^9)^3/((1-t^4)^8 (1-t^5)^6).
a1: 2 L2 + 4 L4 with one grading variable per copy, compared with the A1(p=2) factor series.

Each run happens in a child process under a wall-clock and memory budget.  The
child first checks the raw integrand expansion against the target to a low degree,
then eliminates the torus; every completed elimination step is logged, so a
timeout still leaves a record of how far it got.  Results go to results/stretch_<name>.json.
"""

from __future__ import annotations

import argparse
import json
import logging
import multiprocessing as mp
import resource
import time
from pathlib import Path

from slninv.cases import case_u2, lemma_factor_series
from slninv.partition import RepSpec, _ratfunc_to_grading, eliminate_torus, integrand_constant_term_series, molien_weyl
from slninv.poly import FactoredRatFunc, Poly, VarContext, ratfunc_equal, ratfunc_normalize, series_expand

RUNS = {
    "u2": ("3*L2+1*L4", "univariate", 10),
    "a1": ("L2+L2+L4+L4+L4+L4", "multigraded", 4),
}


def target(name: str) -> FactoredRatFunc:
    if name == "u2":
        return case_u2().target
    return lemma_factor_series("A1", 2).value


def rename(f: FactoredRatFunc, names) -> FactoredRatFunc:
    ctx = VarContext.of(names)
    return FactoredRatFunc(Poly(ctx, f.numerator.terms), f.factors)


def _child(name: str, mem_gb: float, progress: str, out: str):
    if mem_gb:
        lim = int(mem_gb * 2**30)
        resource.setrlimit(resource.RLIMIT_AS, (lim, lim))
    handler = logging.FileHandler(progress, mode="w")
    handler.setFormatter(logging.Formatter("%(relativeCreated)d %(message)s"))
    log = logging.getLogger("slninv.partition")
    log.addHandler(handler)
    log.setLevel(logging.DEBUG)
    text, grading, check = RUNS[name]
    rec: dict = {"run": name, "rep": text, "grading": grading}
    t0 = time.time()
    try:
        task = molien_weyl(RepSpec.parse(5, text, grading))
        want = target(name)
        names = list(want.ctx.names)
        oracle = integrand_constant_term_series(task, check)
        rec["oracle_degree"] = check
        rec["oracle_agrees"] = Poly(want.ctx, oracle.terms) == series_expand(want, names, check)
        rec["oracle_seconds"] = round(time.time() - t0, 1)
        Path(out).write_text(json.dumps({**rec, "status": "eliminating"}, indent=2) + "\n")
        stats: dict = {}
        raw = eliminate_torus(task, stats=stats)
        value = rename(ratfunc_normalize(_ratfunc_to_grading(raw, task.grading)), names)
        rec["steps"] = stats["steps"]
        rec["value"] = str(value)
        rec["status"] = "match" if ratfunc_equal(value, want) else "mismatch"
    except MemoryError:
        rec["status"] = "memory"
    except Exception as e:  # recorded, not raised: the run is advisory
        rec["status"] = f"error: {type(e).__name__}: {e}"
    rec["seconds"] = round(time.time() - t0, 1)
    Path(out).write_text(json.dumps(rec, indent=2, default=str) + "\n")


def run(name: str, timeout: float, mem_gb: float, outdir: Path) -> dict:
    outdir.mkdir(parents=True, exist_ok=True)
    out = outdir / f"stretch_{name}.json"
    progress = outdir / f"stretch_{name}.progress"
    p = mp.Process(target=_child, args=(name, mem_gb, str(progress), str(out)))
    t0 = time.time()
    p.start()
    p.join(timeout)
    if p.is_alive():
        p.terminate()
        p.join()
        rec = json.loads(out.read_text()) if out.exists() else {"run": name}
        rec["status"] = "timeout"
        rec["seconds"] = round(time.time() - t0, 1)
        rec["completed_steps"] = progress.read_text().splitlines() if progress.exists() else []
        out.write_text(json.dumps(rec, indent=2) + "\n")
    elif p.exitcode:
        rec = json.loads(out.read_text()) if out.exists() else {"run": name}
        rec["status"] = f"child exit code {p.exitcode}"
        rec["completed_steps"] = progress.read_text().splitlines() if progress.exists() else []
        out.write_text(json.dumps(rec, indent=2) + "\n")
    return json.loads(out.read_text())


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("runs", nargs="*", help=f"any of {', '.join(RUNS)} (default: all)")
    ap.add_argument("--timeout", type=float, default=3600, help="seconds per run")
    ap.add_argument("--mem-gb", type=float, default=3.0)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "results")
    a = ap.parse_args()
    unknown = set(a.runs) - set(RUNS)
    if unknown:
        ap.error(f"unknown runs: {' '.join(sorted(unknown))}")
    for name in a.runs or list(RUNS):
        rec = run(name, a.timeout, a.mem_gb, a.out)
        print(name, rec["status"], rec.get("seconds"))
