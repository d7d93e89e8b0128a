"""Crosshair searches over a range of p for the serial families, one line per run.

    python3 scripts/crosshair_sweep.py --max-p 10
"""

from __future__ import annotations

import argparse
import time

from slninv import serial
from slninv.crosshair import crosshair_search, verify_order


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--max-p", type=int, default=10)
    ap.add_argument("--families", nargs="*", default=list(serial.FAMILIES))
    a = ap.parse_args()
    print("family p variables relations rows seconds violations filtered-per-row")
    for case in a.families:
        for p in range(serial.MIN_P[case], a.max_p + 1):
            run = serial.SerialRun.build(case, p)
            t0 = time.time()
            order, trace = crosshair_search(run.family, run.prelude)
            dt = time.time() - t0
            bad = len(verify_order(order, run.family))
            per_row = "|".join(",".join(sorted(r.filtered, key=lambda s: int(s[1:]))) or "-" for r in trace.rounds)
            print(f"{case} {p} {len(run.family.variables)} {len(run.family.supports)} {len(trace.rounds)} {dt:.2f} {bad} {per_row}")


if __name__ == "__main__":
    main()
