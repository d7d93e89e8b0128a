"""Support generators and designated leading monomials for the three odd-n serial families.

Variable names spell out their indices with underscores, e.g. ``j_2_3_1`` for the
j-invariant with indices (2, 3, 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .crosshair import SerialSieve, TargetFamily
from .poly import Mono

FAMILIES = ("W1", "W2", "W3")
MIN_P = {"W1": 4, "W2": 3, "W3": 2}


class RangeError(ValueError):
    pass


def _name(letter: str, *idx: int) -> str:
    return "_".join([letter, *map(str, idx)])


def _pairs(total: int, lo: int) -> list[tuple[int, int]]:
    return [(a, total - a) for a in range(lo, total - lo + 1)]


def _check_p(case: str, p: int):
    if case not in FAMILIES:
        raise RangeError(f"unknown serial family {case!r}")
    if p < MIN_P[case]:
        raise RangeError(f"{case} needs p >= {MIN_P[case]}, got {p}")


def variables(case: str, p: int) -> list[str]:
    _check_p(case, p)
    out: list[str] = []
    if case == "W1":
        out += [_name("i", a, b, e) for a, b in combinations(range(1, 5), 2) for e in (1, 2)]
        out += [_name("j", a, b, c) for a, b in _pairs(p + 1, 1) for c in range(1, 5)]
        out += [_name("k", a, b, c) for a, b in _pairs(p + 2, 3) for c in range(1, 5)]
    elif case == "W2":
        out += [_name("i", a, b, e) for a, b in combinations(range(1, 4), 2) for e in (1, 2)]
        out += [_name("j", a, b, c) for a, b in _pairs(p + 1, 1) for c in range(1, 4)]
        out += [_name("k", a, b, 4) for a, b in _pairs(p + 2, 3)]
        out += [_name("h", a) for a in range(1, 4)]
        out += [_name("l", a, b) for a, b in _pairs(p, 0)]
        out += [_name("m", a, b, c) for a, b in _pairs(p + 1, 1) for c in range(1, 4)]
    else:
        out += [w3_square_var(a) for a in range(3, 2 * p + 1)]
    return out


def w3_square_var(a: int) -> str:
    return _name("r", a) if a % 2 else _name("s", a, 1, 2)


def relation_range(case: str, p: int) -> range:
    _check_p(case, p)
    if case == "W1":
        return range(4, 2 * p)
    if case == "W2":
        return range(3, 2 * p)
    return range(3, 2 * p + 1)


def relation_id(case: str, k: int) -> str:
    return {"W1": "f", "W2": "g", "W3": "h"}[case] + str(k)


def _support_names(case: str, p: int, k: int) -> set[tuple[str, ...]]:
    if k not in relation_range(case, p):
        raise RangeError(f"{case} relation index {k} outside {relation_range(case, p)}")
    V = set(variables(case, p))
    out: set[tuple[str, ...]] = set()

    def add(*names: str):
        if all(n in V for n in names):
            out.add(tuple(sorted(names)))

    if case == "W1":
        tot = 2 * p + 3
        for a in range(1, p + 1):
            b, c = p + 1 - a, k - a
            for i in range(1, 5):
                add(_name("j", a, b, i), _name("k", c, tot - k - b, i))
        for (i, j) in combinations(range(1, 5), 2):
            l, m = [x for x in range(1, 5) if x not in (i, j)]
            for e in (1, 2):
                s1, s2 = k - (e == 1), tot - k - (e == 2)
                for a in range(1, p + 1):
                    b = p + 1 - a
                    add(_name("i", i, j, e), _name("j", a, b, l), _name("j", s1 - a, s2 - b, m))
    elif case == "W2":
        tot = 2 * p + 2
        for a in range(3, p):
            b = p + 2 - a
            add(_name("k", a, b, 4), _name("l", k - a, tot - k - b))
        for i, j, l in permutations(range(1, 4)):
            for a in range(1, p + 1):
                b = p + 1 - a
                add(_name("h", i), _name("j", a, b, j), _name("j", k - a, tot - k - b, l))
        jm_rows = [2] if p == 3 else range(1, p + 1)
        for l in range(1, 4):
            for a in jm_rows:
                b = p + 1 - a
                add(_name("j", a, b, l), _name("m", k - a, tot - k - b, l))
        for (i, j) in combinations(range(1, 4), 2):
            l = 6 - i - j
            for e in (1, 2):
                s1, s2 = k - (e == 1), tot - k - (e == 2)
                for a in range(1, p + 1):
                    b = p + 1 - a
                    add(_name("i", i, j, e), _name("j", a, b, l), _name("l", s1 - a, s2 - b))
    else:
        d = k - 2
        n = 2 * p - 2
        for i in range(1, d + 1):
            j = 2 * d - i
            if j <= n:
                add(w3_square_var(2 + i), w3_square_var(2 + j))
    return out


def _mono(names: tuple[str, ...], index: dict[str, int]) -> Mono:
    out = [0] * len(index)
    for n in names:
        out[index[n]] += 1
    return tuple(out)


def serial_support(case: str, p: int, k: int) -> frozenset[Mono]:
    """Monomial support of relation k over ``variables(case, p)``."""
    index = {v: i for i, v in enumerate(variables(case, p))}
    return frozenset(_mono(n, index) for n in _support_names(case, p, k))


def support_names(case: str, p: int, k: int) -> list[tuple[str, ...]]:
    return sorted(_support_names(case, p, k))


# (r, s, t) coordinates of designated products; see sieve builders below
def _w1_coords(p: int) -> dict[int, tuple[int, int, int]]:
    out = {4: (1, 1, 1), 5: (2, 1, 2), 6: (3, 1, 3), 7: (4, 1, 4)}
    for q in range(5, p + 1):
        out[2 * q - 2] = (q - 1, q - 3, 1)
        out[2 * q - 1] = (q, q - 3, 2)
    return out


# W2: ("jm", r, s, t) for j_{r(p+1-r)t} m_{(s+1)(p-s)t}; ("kl", r, s) for k_{(s+2)(p-s)4} l_{(r-1)(p+1-r)}
_W2_P3 = {3: ("jm", 2, 0, 1), 4: ("jm", 2, 1, 2), 5: ("jm", 2, 2, 3)}
_W2_BASE = {3: ("jm", 1, 1, 1), 4: ("jm", 1, 2, 2), 5: ("jm", 1, 3, 3), 6: ("kl", 4, 1), 7: ("jm", 4, 2, 1)}


def _w2_coords(p: int) -> dict[int, tuple]:
    if p == 3:
        return dict(_W2_P3)
    out = dict(_W2_BASE)
    for q in range(5, p + 1):
        out[2 * q - 2] = ("kl", q, q - 3)
        out[2 * q - 1] = ("jm", q, q - 2, 1)
    return out


def _w1_entry(p: int, r: int, s: int, t: int) -> tuple[str, str]:
    return _name("j", r, p + 1 - r, t), _name("k", s + 2, p - s, t)


def _w2_entry(p: int, c: tuple) -> tuple[str, str]:
    if c[0] == "jm":
        _, r, s, t = c
        return _name("j", r, p + 1 - r, t), _name("m", s + 1, p - s, t)
    _, r, s = c
    return _name("k", s + 2, p - s, 4), _name("l", r - 1, p + 1 - r)


def designation_names(case: str, p: int) -> dict[str, tuple[str, ...]]:
    _check_p(case, p)
    if case == "W1":
        return {relation_id(case, k): tuple(sorted(_w1_entry(p, *c))) for k, c in _w1_coords(p).items()}
    if case == "W2":
        return {relation_id(case, k): tuple(sorted(_w2_entry(p, c))) for k, c in _w2_coords(p).items()}
    return {relation_id(case, a): (w3_square_var(a), w3_square_var(a)) for a in range(3, 2 * p + 1)}


def serial_designations(case: str, p: int) -> dict[str, Mono]:
    index = {v: i for i, v in enumerate(variables(case, p))}
    return {fid: _mono(n, index) for fid, n in designation_names(case, p).items()}


def prelude_rows(case: str, p: int) -> list[tuple[Fraction, ...]]:
    V = variables(case, p)
    if case == "W1":
        return [tuple(Fraction(3 if v[0] == "k" else 1) for v in V)]
    if case == "W2":
        return [tuple(Fraction(3 if v[0] in "km" else 1) for v in V)]
    return []


def family(case: str, p: int) -> TargetFamily:
    V = variables(case, p)
    sup = {relation_id(case, k): serial_support(case, p, k) for k in relation_range(case, p)}
    return TargetFamily(tuple(V), sup, serial_designations(case, p))


def w1_sieve(p: int) -> SerialSieve:
    """p x (p-3) x 4 view: entry (r, s, t) is the product j_{r(p+1-r)t} k_{(s+2)(p-s)t}."""
    _check_p("W1", p)
    index = {v: i for i, v in enumerate(variables("W1", p))}
    return SerialSieve(
        rows=p,
        cols=p - 3,
        levels=4,
        entry=lambda r, s, t: _mono(_w1_entry(p, r, s, t), index),
        poly_of=lambda r, s, t: relation_id("W1", r + s + 2),
    )


@dataclass(frozen=True)
class SerialRun:
    case: str
    p: int
    family: TargetFamily
    prelude: list

    @classmethod
    def build(cls, case: str, p: int) -> SerialRun:
        return cls(case, p, family(case, p), prelude_rows(case, p))
