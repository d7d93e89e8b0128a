"""Regenerate the committed golden reports and sieve renders under tests/golden/.

Run from the repository root:  python3 scripts/make_goldens.py
"""

from __future__ import annotations

import argparse
from pathlib import Path

from click.testing import CliRunner

from slninv.cli import main

CASES = {
    "U1": ["verify", "--case", "U1"],
    "U2": ["verify", "--case", "U2"],
    "U3": ["verify", "--case", "U3"],
    "W1_4": ["verify", "--case", "W1", "--p", "4"],
    "W1_5": ["verify", "--case", "W1", "--p", "5"],
    "W2_3": ["verify", "--case", "W2", "--p", "3"],
    "W3_2": ["verify", "--case", "W3", "--p", "2"],
}
SIEVES = {f"order_W1_{p}": ["order", "find", "--case", "W1", "--p", str(p), "--render-sieves"] for p in (4, 5)}


def generate(out: Path) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    runner = CliRunner()
    written = []
    for name, args in CASES.items():
        js = out / f"{name}.json"
        res = runner.invoke(main, args + ["--json", str(js)])
        (out / f"{name}.txt").write_text(res.output)
        written += [out / f"{name}.txt", js]
    for name, args in SIEVES.items():
        res = runner.invoke(main, args)
        if res.exit_code:
            raise SystemExit(f"{name} failed: {res.output}")
        (out / f"{name}.txt").write_text(res.output)
        written.append(out / f"{name}.txt")
    return written


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "tests" / "golden")
    for p in generate(ap.parse_args().out):
        print(p)
