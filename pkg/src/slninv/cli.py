"""Command-line entry point; every subcommand exits 0 iff its checks pass."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from . import cases, serial
from .brackets import BracketGraph, random_assignment, umbral_evaluate
from .crosshair import collapsed_sieve, crosshair_search, render_trace_sieves, sieve_render
from .groebner import GradedRing, IdealBasis, buchberger, ci_series, hilbert_series_quotient, reduced_basis
from .order import OrderMatrix
from .partition import OracleMismatchError, RepSpec, hilbert_series_invariants
from .poly import VarContext, parse_poly, read_ratfunc_file, series_expand


def _read_ring(path: str) -> GradedRing:
    """Lines ``name d1 d2 ...``; an optional ``GRADING t1 t2 ...`` line names the grading variables."""
    names, degs, grading = [], [], None
    for line in Path(path).read_text().splitlines():
        s = line.split("#", 1)[0].split()
        if not s:
            continue
        if s[0] == "GRADING":
            grading = s[1:]
            continue
        names.append(s[0])
        degs.append(tuple(int(x) for x in s[1:]))
    if not names:
        raise click.UsageError(f"{path}: no variables")
    k = len(degs[0])
    if grading is None:
        grading = ["t"] if k == 1 else [f"t{i + 1}" for i in range(k)]
    ctx = VarContext.of(names)
    return GradedRing(ctx, VarContext.of(grading), dict(zip(names, degs)))


def _read_ideal(path: str, ring: GradedRing) -> IdealBasis:
    """One polynomial expression per line."""
    polys = []
    for line in Path(path).read_text().splitlines():
        s = line.split("#", 1)[0].strip()
        if s:
            polys.append(parse_poly(ring.ctx, s))
    return IdealBasis(tuple(polys), ring)


def _read_order(path: str | None, ring: GradedRing) -> OrderMatrix:
    if path is None:
        return OrderMatrix.of([[sum(d) for d in ring.degree_matrix()]]).complete()
    return OrderMatrix.from_text(Path(path).read_text()).complete()


def _read_degrees(path: str) -> list[tuple[int, ...]]:
    out = []
    for line in Path(path).read_text().splitlines():
        s = line.split("#", 1)[0].split()
        if s:
            out.append(tuple(int(x) for x in s))
    return out


@click.group()
@click.option("-v", "--verbose", count=True, help="Repeat for more log output.")
def main(verbose: int):
    """Invariant-theory verification toolkit."""
    level = logging.WARNING - 10 * min(verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("--case", "case_id", required=True, help="U1, U2, U3, W1(p), W2(p), W3(p), A1(p), A2(p), A3(p)")
@click.option("--p", type=int, default=None)
@click.option("--trials", type=int, default=10, show_default=True)
@click.option("--json", "json_out", type=click.Path(dir_okay=False), default=None, help="Write the summary here.")
def verify(case_id: str, p: int | None, trials: int, json_out: str | None):
    """Run the full checklist for one case."""
    try:
        rep = cases.run_case(case_id, p, trials)
    except (cases.CaseError, serial.RangeError) as e:
        raise click.UsageError(str(e)) from None
    click.echo(rep.to_text(), nl=False)
    if json_out:
        Path(json_out).write_text(rep.to_json())
    sys.exit(0 if rep.ok else 1)


@main.group()
def order():
    """Weight-matrix orders."""


@order.command("find")
@click.option("--case", "case_id", required=True, type=click.Choice(serial.FAMILIES))
@click.option("--p", type=int, required=True)
@click.option("--render-sieves", is_flag=True, help="Print each sieve row in (r, s, t) layout (W1 only).")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the order matrix here.")
@click.option("--max-rounds", type=int, default=64, show_default=True)
def order_find(case_id: str, p: int, render_sieves: bool, out: str | None, max_rounds: int):
    """Crosshair search for a serial family."""
    try:
        run = serial.SerialRun.build(case_id, p)
    except serial.RangeError as e:
        raise click.UsageError(str(e)) from None
    try:
        mat, trace = crosshair_search(run.family, run.prelude, max_rounds)
    except Exception as e:
        click.echo(f"search failed: {type(e).__name__}: {e}", err=True)
        tr = getattr(e, "trace", None)
        if tr is not None:
            click.echo(tr.to_text(run.family), err=True, nl=False)
        sys.exit(1)
    if out:
        Path(out).write_text(mat.to_text())
    else:
        click.echo("# order matrix")
        click.echo(mat.to_text(), nl=False)
    click.echo("# trace")
    click.echo(trace.to_text(run.family), nl=False)
    if render_sieves:
        if case_id != "W1":
            raise click.UsageError("sieve renders exist for W1 only")
        sv = serial.w1_sieve(p)
        for idx, text in render_trace_sieves(sv, run.family, trace):
            click.echo(f"# sieve row {idx}")
            click.echo(text, nl=False)
        _, row = collapsed_sieve(run.family, trace)
        click.echo("# single sieve")
        click.echo(sieve_render(sv, row), nl=False)


@main.group()
def hs():
    """Hilbert series."""


@hs.command("molien")
@click.option("--n", type=int, required=True)
@click.option("--rep", "rep_text", required=True, help='e.g. "3*L2+1*L4"')
@click.option("--grading", type=click.Choice(["univariate", "multigraded"]), default="univariate", show_default=True)
@click.option("--check-degree", type=int, default=10, show_default=True)
@click.option("--expand", type=int, default=None, help="Also print the expansion to this total degree.")
def hs_molien(n: int, rep_text: str, grading: str, check_degree: int, expand: int | None):
    """Invariant Hilbert series by iterated constant terms, checked against the series oracle."""
    try:
        rep = RepSpec.parse(n, rep_text, grading)
    except ValueError as e:
        raise click.UsageError(str(e)) from None
    try:
        h = hilbert_series_invariants(rep, check_degree)
    except OracleMismatchError as e:
        click.echo(f"oracle mismatch: {e}", err=True)
        sys.exit(1)
    click.echo(f"# {h.tag}, checked to degree {check_degree}")
    click.echo(str(h.value))
    click.echo(h.value.to_text(), nl=False)
    if expand is not None:
        click.echo(str(h.expand(expand)))


@hs.command("quotient")
@click.option("--ring", "ring_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ideal", "ideal_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--order", "order_file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--budget", type=int, default=10000, show_default=True)
def hs_quotient(ring_file: str, ideal_file: str, order_file: str | None, budget: int):
    """Multigraded Hilbert series of ring / ideal."""
    ring = _read_ring(ring_file)
    basis = _read_ideal(ideal_file, ring)
    h = hilbert_series_quotient(ring, basis, _read_order(order_file, ring), budget)
    click.echo(f"# {h.tag}, basis size {h.stats.get('basis_size')}")
    click.echo(str(h.value))
    click.echo(h.value.to_text(), nl=False)


@main.command()
@click.option("--ring", "ring_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ideal", "ideal_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--order", "order_file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--budget", type=int, default=10000, show_default=True)
def gb(ring_file: str, ideal_file: str, order_file: str | None, budget: int):
    """Reduced Groebner basis."""
    ring = _read_ring(ring_file)
    basis = _read_ideal(ideal_file, ring)
    o = _read_order(order_file, ring)
    g = buchberger(basis, o, budget)
    click.echo(f"# certificate: {g.certificate or 'buchberger'}")
    for f in reduced_basis(g, o):
        click.echo(str(f))


@main.command("ci-series")
@click.option("--gens", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--syz", required=True, type=click.Path(exists=True, dir_okay=False))
def ci_series_cmd(gens: str, syz: str):
    """prod(1 - t^syz) / prod(1 - t^gen)."""
    h = ci_series(_read_degrees(gens), _read_degrees(syz))
    click.echo(str(h.value))
    click.echo(h.value.to_text(), nl=False)


@main.group()
def graph():
    """Bracket graphs."""


@graph.command("eval")
@click.option("--file", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--name", default=None, help="Pick one graph from a file holding a name -> graph mapping.")
def graph_eval(path: str, seed: int, name: str | None):
    """Umbral value at seeded random integer tensors (one tensor per kind, arity and color)."""
    data = json.loads(Path(path).read_text())
    graphs = {"graph": data} if "edges" in data else data
    if name is not None:
        graphs = {name: graphs[name]}
    parsed = {k: BracketGraph.from_json(v) for k, v in graphs.items()}
    keys = sorted({k for g in parsed.values() for k in g.tensor_keys()})
    ns = {g.n for g in parsed.values()}
    if len(ns) != 1:
        raise click.UsageError("graphs of different rank in one file")
    assignment = random_assignment(keys, ns.pop(), seed)
    for k, g in parsed.items():
        click.echo(f"{k} {umbral_evaluate(g, assignment)}")


@main.group()
def series():
    """Truncated series."""


@series.command("expand")
@click.option("--file", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--degree", type=int, required=True)
def series_expand_cmd(path: str, degree: int):
    """Expand a factored rational function (text format with a VARS line) to a total degree."""
    f = read_ratfunc_file(Path(path).read_text())
    p = series_expand(f, list(f.ctx.names), degree)
    click.echo(p.to_text(), nl=False)


if __name__ == "__main__":
    main()
