"""Row-by-row construction of a weight matrix that makes chosen monomials leading."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .order import GREATER, OrderMatrix, ShrinkTooLargeError, collapse_rows, compare
from .poly import Mono

Row = tuple[Fraction, ...]


class StallError(RuntimeError):
    """A sieve round filtered out no designated monomial."""

    def __init__(self, msg: str, trace: SearchTrace):
        super().__init__(msg)
        self.trace = trace


class BudgetError(RuntimeError):
    def __init__(self, msg: str, trace: SearchTrace):
        super().__init__(msg)
        self.trace = trace


class DesignationError(ValueError):
    pass


def _deg(row: Sequence[Fraction], m: Mono) -> Fraction:
    return sum((w * e for w, e in zip(row, m) if e), Fraction(0))


@dataclass(frozen=True)
class TargetFamily:
    variables: tuple[str, ...]
    supports: Mapping[str, frozenset[Mono]]
    designated: Mapping[str, Mono]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "supports", {k: frozenset(map(tuple, v)) for k, v in self.supports.items()})
        object.__setattr__(self, "designated", {k: tuple(v) for k, v in self.designated.items()})
        n = len(self.variables)
        for fid, m in self.designated.items():
            if fid not in self.supports:
                raise DesignationError(f"no support for {fid}")
            if m not in self.supports[fid]:
                raise DesignationError(f"designated monomial of {fid} is not in its support")
        for fid, sup in self.supports.items():
            if any(len(m) != n for m in sup):
                raise DesignationError(f"support of {fid} has wrong arity")
        if not self.targetable():
            raise DesignationError("unit weights on designated variables do not favour the designations")

    @classmethod
    def from_names(cls, variables: Sequence[str], supports: Mapping[str, Iterable[Mapping[str, int]]], designated: Mapping[str, Mapping[str, int]]) -> TargetFamily:
        idx = {v: i for i, v in enumerate(variables)}

        def mono(d: Mapping[str, int]) -> Mono:
            out = [0] * len(variables)
            for v, e in d.items():
                out[idx[v]] += e
            return tuple(out)

        return cls(
            tuple(variables),
            {k: frozenset(mono(d) for d in sup) for k, sup in supports.items()},
            {k: mono(d) for k, d in designated.items()},
        )

    def homogeneous(self) -> bool:
        return all(len({sum(m) for m in sup}) == 1 for sup in self.supports.values())

    def targetable(self) -> bool:
        """Necessary condition checked for homogeneous families only."""
        if not self.homogeneous():
            return True
        row = [Fraction(0)] * len(self.variables)
        for m in self.designated.values():
            for j, e in enumerate(m):
                if e:
                    row[j] = Fraction(1)
        for fid, m in self.designated.items():
            d = _deg(row, m)
            if any(_deg(row, c) > d for c in self.supports[fid]):
                return False
        return True

    def mono_name(self, m: Mono) -> str:
        parts = []
        for v, e in zip(self.variables, m):
            if e:
                parts.append(v if e == 1 else f"{v}^{e}")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class Round:
    index: int  # 1-based row index in the order matrix
    kind: str  # "prelude" or "sieve"
    row: Row
    filtered: frozenset[str]
    remaining: frozenset[str]


@dataclass
class SearchTrace:
    rounds: list[Round] = field(default_factory=list)
    note: str = ""

    def filtered_sets(self) -> list[frozenset[str]]:
        return [r.filtered for r in self.rounds]

    def first_sieve(self) -> Round | None:
        return next((r for r in self.rounds if r.kind == "sieve"), None)

    def to_text(self, family: TargetFamily | None = None) -> str:
        lines = []
        if self.note:
            lines.append(f"# {self.note}")
        for r in self.rounds:
            names = sorted(r.filtered, key=_natural)
            if family is not None:
                names = [f"{f}={family.mono_name(family.designated[f])}" for f in names]
            lines.append(f"row {r.index} ({r.kind}): filtered {' '.join(names) or '-'}; remaining {len(r.remaining)}")
        return "\n".join(lines) + "\n"


def _natural(s: str):
    import re

    return [int(x) if x.isdigit() else x for x in re.split(r"(\d+)", s)]


def target_row(family: TargetFamily, remaining: Iterable[str], increment: Callable[[str, int], Fraction] | None = None) -> Row:
    """+1 on every variable of a remaining designated monomial (or a custom increment)."""
    row = [Fraction(0)] * len(family.variables)
    for fid in remaining:
        for j, e in enumerate(family.designated[fid]):
            if e:
                row[j] = Fraction(1) if increment is None else row[j] + Fraction(increment(fid, j))
    return tuple(row)


def _survivors(row: Row, target: Mono, rivals: Iterable[Mono]) -> tuple[set[Mono], bool]:
    """Rivals tied with the target under row; flag set when one beats it."""
    d = _deg(row, target)
    tied, beaten = set(), False
    for c in rivals:
        dc = _deg(row, c)
        if dc == d:
            tied.add(c)
        elif dc > d:
            beaten = True
    return tied, beaten


def crosshair_round(
    family: TargetFamily,
    remaining: Iterable[str],
    competitors: Mapping[str, Iterable[Mono]] | None = None,
    increment: Callable[[str, int], Fraction] | None = None,
) -> tuple[Row, frozenset[str]]:
    """Target every remaining designation; report the ones now strictly maximal."""
    remaining = list(remaining)
    if not remaining:
        raise ValueError("no remaining targets")
    row = target_row(family, remaining, increment)
    filtered = set()
    for fid in remaining:
        target = family.designated[fid]
        rivals = competitors[fid] if competitors is not None else family.supports[fid] - {target}
        tied, beaten = _survivors(row, target, rivals)
        if not tied and not beaten:
            filtered.add(fid)
    return row, frozenset(filtered)


def crosshair_search(
    family: TargetFamily,
    prelude_rows: Sequence[Sequence] = (),
    max_rounds: int = 64,
    increment: Callable[[str, int], Fraction] | None = None,
) -> tuple[OrderMatrix, SearchTrace]:
    if max_rounds < 1:
        raise ValueError("max_rounds must be positive")
    trace = SearchTrace()
    remaining = set(family.designated)
    comp = {fid: set(family.supports[fid]) - {family.designated[fid]} for fid in remaining}
    rows: list[Row] = []

    def apply(row: Row, kind: str):
        done = set()
        for fid in sorted(remaining):
            tied, beaten = _survivors(row, family.designated[fid], comp[fid])
            if beaten:
                raise DesignationError(f"row {len(rows) + 1} puts a competitor above the designation of {fid}")
            comp[fid] = tied
            if not tied:
                done.add(fid)
        remaining.difference_update(done)
        rows.append(row)
        trace.rounds.append(Round(len(rows), kind, row, frozenset(done), frozenset(remaining)))
        return done

    for r in prelude_rows:
        apply(tuple(Fraction(x) for x in r), "prelude")
    sieves = 0
    while remaining:
        if sieves >= max_rounds:
            raise BudgetError(f"{len(remaining)} designations left after {max_rounds} sieve rounds", trace)
        row, _ = crosshair_round(family, remaining, comp, increment)
        sieves += 1
        if not apply(row, "sieve"):
            raise StallError(f"sieve round {sieves} filtered nothing", trace)
    order = OrderMatrix(tuple(rows)).complete() if rows else OrderMatrix.identity(len(family.variables))
    return order, trace


def verify_order(order: OrderMatrix, family: TargetFamily) -> list[tuple[str, Mono]]:
    """All (poly id, competitor) pairs where the designation is not strictly greater."""
    bad = []
    for fid, m in family.designated.items():
        for c in family.supports[fid]:
            if c != m and compare(order, m, c) != GREATER:
                bad.append((fid, c))
    return bad


# ---------------------------------------------------------------------------
# serial sieves


@dataclass(frozen=True)
class SerialSieve:
    """An (r, s, t)-indexed view of one weight row; entries are computed from the row."""

    rows: int
    cols: int
    levels: int
    entry: Callable[[int, int, int], Mono | None]  # 1-based indices
    poly_of: Callable[[int, int, int], str]

    def value(self, row: Sequence[Fraction], r: int, s: int, t: int) -> Fraction | None:
        m = self.entry(r, s, t)
        return None if m is None else _deg(row, m)


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def sieve_render(
    sieve: SerialSieve,
    row: Sequence[Fraction],
    family: TargetFamily | None = None,
    remaining: Iterable[str] = (),
    competitors: Mapping[str, Iterable[Mono]] | None = None,
) -> str:
    """Level-by-level text layout; entries tying a still-targeted designation are starred."""
    row = tuple(Fraction(x) for x in row)
    remaining = set(remaining)
    out = []
    for t in range(1, sieve.levels + 1):
        out.append(f"level {t}")
        for r in range(1, sieve.rows + 1):
            cells = []
            for s in range(1, sieve.cols + 1):
                v = sieve.value(row, r, s, t)
                if v is None:
                    cells.append(".")
                    continue
                text = _fmt(v)
                fid = sieve.poly_of(r, s, t)
                if family is not None and fid in remaining:
                    m = sieve.entry(r, s, t)
                    target = family.designated[fid]
                    rivals = competitors[fid] if competitors is not None else family.supports[fid]
                    if m != target and m in rivals and v >= _deg(row, target):
                        text = f"*{text}*"
                cells.append(text)
            out.append(" ".join(cells))
        out.append("")
    return "\n".join(out)


def sieve_matrix(sieve: SerialSieve, row: Sequence[Fraction]) -> list[list[list[Fraction]]]:
    """levels x rows x cols array of entry values (None where undefined)."""
    row = tuple(Fraction(x) for x in row)
    return [
        [[sieve.value(row, r, s, t) for s in range(1, sieve.cols + 1)] for r in range(1, sieve.rows + 1)]
        for t in range(1, sieve.levels + 1)
    ]


def render_trace_sieves(sieve: SerialSieve, family: TargetFamily, trace: SearchTrace) -> list[tuple[int, str]]:
    """Render every sieve row of a trace with the competitor sets as they stood before the row."""
    remaining = set(family.designated)
    comp = {fid: set(family.supports[fid]) - {family.designated[fid]} for fid in remaining}
    out = []
    for rd in trace.rounds:
        if rd.kind == "sieve":
            out.append((rd.index, sieve_render(sieve, rd.row, family, remaining, comp)))
        for fid in list(remaining):
            comp[fid], _ = _survivors(rd.row, family.designated[fid], comp[fid])
        remaining -= rd.filtered
    return out


def collapsed_sieve(family: TargetFamily, trace: SearchTrace, shrink: Fraction = Fraction(1, 2)) -> tuple[OrderMatrix, Row]:
    """Fold the sieve rows of a trace into one row and rebuild the order as prelude rows plus that row.

    Raises ShrinkTooLargeError when some designation stops leading.
    """
    prelude = [r.row for r in trace.rounds if r.kind == "prelude"]
    sieves = [r.row for r in trace.rounds if r.kind == "sieve"]
    if not sieves:
        raise ValueError("trace has no sieve rows")
    row = collapse_rows(OrderMatrix(tuple(sieves)), Fraction(shrink)).rows[0]
    order = OrderMatrix(tuple(prelude) + (row,)).complete()
    bad = verify_order(order, family)
    if bad:
        raise ShrinkTooLargeError(f"designation of {bad[0][0]} no longer leads")
    return order, row
