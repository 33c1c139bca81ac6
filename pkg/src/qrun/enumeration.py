"""Overpartitions, k-run predicates and exhaustive counting oracles.

An overpartition is stored canonically as strictly decreasing
``(value, multiplicity, overlined)`` triples; an overline always sits on
the last occurrence of its value.  Everything here is brute force and
meant as ground truth for the series code, so it stays small and obvious.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

__all__ = [
    "Overpartition",
    "NotLowerKRun",
    "NotUpperKRun",
    "MAX_ENUMERATION_SIZE",
    "partitions",
    "enumerate_overpartitions",
    "is_lower_k_run",
    "is_upper_k_run",
    "count_lower",
    "count_upper",
    "count_lower_by_parts",
    "count_no_k_sequence",
    "lower_to_upper",
    "upper_to_lower",
    "conjugate",
    "mono_inject_n",
    "mono_inject_k",
]

MAX_ENUMERATION_SIZE = 40


class NotLowerKRun(ValueError):
    pass


class NotUpperKRun(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Overpartition:
    """Overpartition as strictly decreasing ``(value, multiplicity, overlined)``."""

    entries: tuple[tuple[int, int, bool], ...] = ()

    def __post_init__(self):
        prev = None
        for v, mult, _ in self.entries:
            if v < 1 or mult < 1:
                raise ValueError(f"bad entry value={v} multiplicity={mult}")
            if prev is not None and v >= prev:
                raise ValueError("values must be strictly decreasing")
            prev = v

    @classmethod
    def from_parts(cls, parts, overlined=()) -> "Overpartition":
        """Build from a multiset of part sizes and the set of overlined values."""
        counts: dict[int, int] = {}
        for p in parts:
            counts[p] = counts.get(p, 0) + 1
        bars = set(overlined)
        missing = bars - counts.keys()
        if missing:
            raise ValueError(f"overlined values {sorted(missing)} are not parts")
        return cls(tuple((v, counts[v], v in bars) for v in sorted(counts, reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "Overpartition":
        """Parse ``"6' + 4' + 1 + 1 + 1'"``; a trailing ``'`` marks an overline.

        A combining overline (U+0304/U+0305) is accepted in place of ``'``.
        """
        text = text.strip()
        if not text or text == "0":
            return cls()
        parts, bars = [], []
        for tok in text.split("+"):
            m = re.fullmatch(r"\s*(\d+)\s*(['̄̅]?)\s*", tok)
            if not m:
                raise ValueError(f"cannot parse part {tok!r}")
            v = int(m.group(1))
            parts.append(v)
            if m.group(2):
                if v in bars:
                    raise ValueError(f"part {v} is overlined more than once")
                bars.append(v)
        return cls.from_parts(parts, bars)

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        out = []
        for v, mult, bar in self.entries:
            out.extend([str(v)] * (mult - 1))
            out.append(f"{v}'" if bar else str(v))
        return " + ".join(out)

    @property
    def size(self) -> int:
        return sum(v * m for v, m, _ in self.entries)

    @property
    def num_parts(self) -> int:
        return sum(m for _, m, _ in self.entries)

    @property
    def values(self) -> frozenset[int]:
        return frozenset(v for v, _, _ in self.entries)

    @property
    def overlined(self) -> frozenset[int]:
        return frozenset(v for v, _, b in self.entries if b)

    @property
    def num_overlined(self) -> int:
        return sum(1 for *_, b in self.entries if b)

    def parts(self) -> list[int]:
        """Part sizes in non-increasing order."""
        return [v for v, m, _ in self.entries for _ in range(m)]

    def with_overlines(self, bars) -> "Overpartition":
        bars = set(bars)
        return Overpartition(tuple((v, m, v in bars) for v, m, _ in self.entries))


# -- generation ------------------------------------------------------------


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` as non-increasing tuples, largest first part first."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def _grouped(parts: tuple[int, ...]) -> list[tuple[int, int]]:
    return [(v, len(list(g))) for v, g in itertools.groupby(parts)]


def enumerate_overpartitions(n: int) -> Iterator[Overpartition]:
    """Every overpartition of ``n`` exactly once.

    Partitions come in decreasing-largest-part order; within one partition
    the overline patterns run through ``itertools.product`` order, with the
    plain pattern first.
    """
    if n < 0:
        return
    if n > MAX_ENUMERATION_SIZE:
        raise ValueError(f"exhaustive enumeration is limited to n <= {MAX_ENUMERATION_SIZE}")
    for parts in partitions(n):
        groups = _grouped(parts)
        for mask in itertools.product((False, True), repeat=len(groups)):
            yield Overpartition(tuple((v, m, b) for (v, m), b in zip(groups, mask)))


# -- predicates ------------------------------------------------------------


def is_lower_k_run(lam: Overpartition, k: int) -> bool:
    """Every overlined ``m`` lies in a run ``j+1..j+k`` of overlined values
    with no part ``j`` and no overlined ``j+k+1``.  ``j = 0`` is allowed."""
    if k < 1:
        raise ValueError("k must be >= 1")
    bars, vals = lam.overlined, lam.values
    for m in bars:
        for j in range(max(0, m - k), m):
            if (
                j not in vals
                and j + k + 1 not in bars
                and all(j + i in bars for i in range(1, k + 1))
            ):
                break
        else:
            return False
    return True


def is_upper_k_run(lam: Overpartition, k: int) -> bool:
    """Like :func:`is_lower_k_run` with the boundary roles swapped: no
    overlined ``j`` and no part of any kind equal to ``j+k+1``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    bars, vals = lam.overlined, lam.values
    for m in bars:
        for j in range(max(0, m - k), m):
            if (
                j not in bars
                and j + k + 1 not in vals
                and all(j + i in bars for i in range(1, k + 1))
            ):
                break
        else:
            return False
    return True


# -- counting --------------------------------------------------------------


@lru_cache(maxsize=None)
def _overpartitions_cached(n: int) -> tuple[Overpartition, ...]:
    return tuple(enumerate_overpartitions(n))


def count_lower(n: int, k: int) -> int:
    return sum(1 for lam in _overpartitions_cached(n) if is_lower_k_run(lam, k))


def count_upper(n: int, k: int) -> int:
    return sum(1 for lam in _overpartitions_cached(n) if is_upper_k_run(lam, k))


def count_lower_by_parts(n: int, parts: int, k: int) -> int:
    return sum(
        1
        for lam in _overpartitions_cached(n)
        if lam.num_parts == parts and is_lower_k_run(lam, k)
    )


def has_k_sequence(parts, k: int) -> bool:
    vals = set(parts)
    return any(all(v + i in vals for i in range(k)) for v in vals)


def count_no_k_sequence(n: int, k: int) -> int:
    """``p_k(n)``: partitions of ``n`` where no ``k`` consecutive integers all occur."""
    return sum(1 for p in partitions(n) if not has_k_sequence(p, k))


# -- bijections and injections ----------------------------------------------


def _runs(bars: frozenset[int], k: int) -> list[int]:
    """Bottom values ``b`` of maximal overlined runs ``b..b+k-1``, assuming
    runs have exactly length ``k``."""
    return sorted(m for m in bars if m - 1 not in bars)


def _block_top(vals: frozenset[int], start: int) -> int:
    top = start
    while top + 1 in vals:
        top += 1
    return top


def _block_bottom(vals: frozenset[int], start: int) -> int:
    bot = start
    while bot - 1 in vals:
        bot -= 1
    return bot


def lower_to_upper(lam: Overpartition, k: int) -> Overpartition:
    """Shift each run of ``k`` overlines to the top of its block of consecutive values."""
    if not is_lower_k_run(lam, k):
        raise NotLowerKRun(str(lam))
    vals, bars = lam.values, lam.overlined
    new_bars: set[int] = set()
    for bottom in _runs(bars, k):
        top = _block_top(vals, bottom)
        new_bars.update(range(top - k + 1, top + 1))
    return lam.with_overlines(new_bars)


def upper_to_lower(lam: Overpartition, k: int) -> Overpartition:
    """Inverse of :func:`lower_to_upper`."""
    if not is_upper_k_run(lam, k):
        raise NotUpperKRun(str(lam))
    vals, bars = lam.values, lam.overlined
    new_bars: set[int] = set()
    for bottom in _runs(bars, k):
        low = _block_bottom(vals, bottom)
        new_bars.update(range(low, low + k))
    return lam.with_overlines(new_bars)


def conjugate(lam: Overpartition) -> Overpartition:
    """Transpose the Ferrers diagram, carrying corner marks along.

    The overline on ``m`` marks the corner cell at column ``m`` of the last
    row of length ``m``; after transposing it marks the last row of length
    ``#{parts >= m}``.
    """
    parts = lam.parts()
    if not parts:
        return Overpartition()
    conj = [sum(1 for p in parts if p >= c) for c in range(1, parts[0] + 1)]
    bars = {sum(1 for p in parts if p >= m) for m in lam.overlined}
    return Overpartition.from_parts(conj, bars)


def mono_inject_n(lam: Overpartition, k: int) -> Overpartition:
    """Upper ``k``-run overpartition of ``n`` -> one of ``n+1`` by adding a plain ``1``."""
    if not is_upper_k_run(lam, k):
        raise NotUpperKRun(str(lam))
    entries = list(lam.entries)
    if entries and entries[-1][0] == 1:
        v, m, b = entries[-1]
        entries[-1] = (1, m + 1, b)
    else:
        entries.append((1, 1, False))
    return Overpartition(tuple(entries))


def mono_inject_k(lam: Overpartition, k: int) -> Overpartition:
    """Lower ``(k+1)``-run -> lower ``k``-run by un-overlining the top of each run."""
    if not is_lower_k_run(lam, k + 1):
        raise NotLowerKRun(str(lam))
    bars = lam.overlined
    tops = {b + k for b in _runs(bars, k + 1)}
    return lam.with_overlines(bars - tops)
