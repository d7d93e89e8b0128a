"""Run every case checklist and write the reports under results/reports/.

    python3 scripts/run_all_cases.py [--trials 10] [--max-p 6]
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from slninv.cases import run_case


def case_ids(max_p: int) -> list[str]:
    ids = ["U1", "U2", "U3", "W1(2)"]
    ids += [f"W1({p})" for p in range(4, max_p + 1)]
    ids += [f"W2({p})" for p in range(3, max_p + 1)]
    ids += [f"W3({p})" for p in range(2, max_p + 1)]
    ids += [f"{a}({p})" for a in ("A1", "A2") for p in (2, 3)] + ["A3(2)"]
    return ids


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--max-p", type=int, default=6)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "results" / "reports")
    a = ap.parse_args()
    a.out.mkdir(parents=True, exist_ok=True)
    failed = []
    for cid in case_ids(a.max_p):
        t0 = time.time()
        rep = run_case(cid, trials=a.trials)
        stem = cid.replace("(", "_").replace(")", "")
        (a.out / f"{stem}.txt").write_text(rep.to_text())
        (a.out / f"{stem}.json").write_text(rep.to_json())
        bad = [c.name for c in rep.checks if not c.ok]
        print(f"{cid:8s} {'PASS' if rep.ok else 'FAIL'} {time.time() - t0:6.1f}s {'; '.join(bad)}")
        if not rep.ok:
            failed.append(cid)
    print(f"{len(failed)} failing: {' '.join(failed) or '-'}")


if __name__ == "__main__":
    main()
