"""Strict and weak integer compositions: counting, enumeration, ranking.

All orderings are ascending lexicographic on the parts tuple, so rank 0 of
the weak 3-compositions of 3 is ``(0, 0, 3)`` and the last is ``(3, 0, 0)``.
Ranking uses the hockey-stick identity to collapse the per-part inner sum
into a difference of two binomials, which is the combinadic of the bar
positions in the dashes-and-bars picture of a weak composition.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

__all__ = [
    "Composition",
    "count_weak",
    "count_strict",
    "enumerate_weak",
    "enumerate_strict",
    "iter_weak",
    "rank_weak",
    "unrank_weak",
    "rank_strict",
    "unrank_strict",
    "strict_to_weak",
    "weak_to_strict",
]

WEAK = "weak"
STRICT = "strict"


@dataclass(frozen=True)
class Composition:
    """An ordered list of ``N`` integer parts summing to ``total``.

    ``kind`` is ``"weak"`` (parts >= 0) or ``"strict"`` (parts >= 1).
    """

    parts: tuple[int, ...]
    kind: str = WEAK

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if self.kind not in (WEAK, STRICT):
            raise ValueError(f"unknown composition kind {self.kind!r}")
        if len(parts) < 1:
            raise ValueError("a composition needs at least one part")
        floor = 1 if self.kind == STRICT else 0
        if any(p < floor for p in parts):
            raise ValueError(f"{self.kind} composition parts must be >= {floor}: {parts}")

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def n_parts(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __str__(self) -> str:
        return f"{self.total}=" + "+".join(str(p) for p in self.parts)


def _check_sizes(I: int, N: int, min_I: int = 0) -> None:
    if int(N) != N or N < 1:
        raise ValueError(f"number of parts N must be a positive integer, got {N}")
    if int(I) != I or I < min_I:
        raise ValueError(f"total I must be an integer >= {min_I}, got {I}")


def count_weak(I: int, N: int) -> int:
    """Number of weak ``N``-compositions of ``I``, ``C(I+N-1, N-1)``."""
    _check_sizes(I, N)
    return comb(I + N - 1, N - 1)


def count_strict(I: int, N: int) -> int:
    """Number of strict ``N``-compositions of ``I``, ``C(I-1, N-1)`` (0 if I < N)."""
    _check_sizes(I, N, min_I=1)
    if I < N:
        return 0
    return comb(I - 1, N - 1)


def iter_weak(I: int, N: int) -> Iterator[tuple[int, ...]]:
    """Yield weak compositions as plain tuples in lexicographic order."""
    _check_sizes(I, N)

    def rec(rem: int, k: int) -> Iterator[tuple[int, ...]]:
        if k == 1:
            yield (rem,)
            return
        for first in range(rem + 1):
            for tail in rec(rem - first, k - 1):
                yield (first,) + tail

    yield from rec(I, N)


def enumerate_weak(I: int, N: int, limit: int = 1 << 24) -> list[Composition]:
    """All weak ``N``-compositions of ``I``, ascending lexicographically.

    Raises ``MemoryError`` when the count exceeds ``limit``.
    """
    n = count_weak(I, N)
    if n > limit:
        raise MemoryError(f"{n} weak compositions exceed the enumeration limit {limit}")
    return [Composition(p, WEAK) for p in iter_weak(I, N)]


def enumerate_strict(I: int, N: int, limit: int = 1 << 24) -> list[Composition]:
    """All strict ``N``-compositions of ``I``, ascending lexicographically."""
    n = count_strict(I, N)
    if n > limit:
        raise MemoryError(f"{n} strict compositions exceed the enumeration limit {limit}")
    if n == 0:
        return []
    return [Composition(tuple(p + 1 for p in w), STRICT) for w in iter_weak(I - N, N)]


def _parts_of(c: Composition | Sequence[int]) -> tuple[int, ...]:
    if isinstance(c, Composition):
        return c.parts
    parts = tuple(int(p) for p in c)
    if not parts:
        raise ValueError("empty composition")
    return parts


def rank_weak(c: Composition | Sequence[int]) -> int:
    """0-based lexicographic rank of a weak composition, without enumeration.

    Compositions with part ``i`` smaller than ``mu_i`` (and equal earlier
    parts) all precede ``c``; with ``k`` parts left after position ``i`` and
    ``rem`` still to distribute there are ``C(rem+k, k) - C(rem-mu_i+k, k)``
    of them.
    """
    parts = _parts_of(c)
    if any(p < 0 for p in parts):
        raise ValueError(f"weak composition parts must be >= 0: {parts}")
    rem = sum(parts)
    N = len(parts)
    r = 0
    for i, mu in enumerate(parts[:-1]):
        k = N - 1 - i
        r += comb(rem + k, k) - comb(rem - mu + k, k)
        rem -= mu
    return r


def unrank_weak(I: int, N: int, r: int) -> Composition:
    """Inverse of :func:`rank_weak`."""
    total = count_weak(I, N)
    if int(r) != r or not 0 <= r < total:
        raise IndexError(f"rank {r} out of range [0, {total})")
    parts = []
    rem = I
    for i in range(N - 1):
        k = N - 1 - i
        v = 0
        # completions with this part fixed at v: C(rem - v + k - 1, k - 1)
        while True:
            block = comb(rem - v + k - 1, k - 1)
            if r < block:
                break
            r -= block
            v += 1
        parts.append(v)
        rem -= v
    parts.append(rem)
    return Composition(tuple(parts), WEAK)


def strict_to_weak(c: Composition | Sequence[int]) -> Composition:
    """Subtract one from every part: strict N-composition of I -> weak of I-N."""
    parts = _parts_of(c)
    if any(p < 1 for p in parts):
        raise ValueError(f"strict composition parts must be >= 1: {parts}")
    return Composition(tuple(p - 1 for p in parts), WEAK)


def weak_to_strict(c: Composition | Sequence[int]) -> Composition:
    """Add one to every part: weak N-composition of I -> strict of I+N."""
    parts = _parts_of(c)
    if any(p < 0 for p in parts):
        raise ValueError(f"weak composition parts must be >= 0: {parts}")
    return Composition(tuple(p + 1 for p in parts), STRICT)


def rank_strict(c: Composition | Sequence[int]) -> int:
    """Rank of a strict composition within :func:`enumerate_strict` order."""
    return rank_weak(strict_to_weak(c))


def unrank_strict(I: int, N: int, r: int) -> Composition:
    if I < N:
        raise ValueError(f"strict compositions need I >= N (got I={I}, N={N})")
    return weak_to_strict(unrank_weak(I - N, N, r))
