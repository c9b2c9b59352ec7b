"""Partitions, strict partitions and Young-diagram statistics.

Arm lengths follow the shifted convention ``a_ij = lambda_i - j + 1`` (one
more than Macdonald's), so the row-1 hook satisfies
``h_1j = a_1j + length - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator


class CellError(ValueError):
    """Raised when a cell (i, j) does not lie in the Young diagram."""


@dataclass(frozen=True, eq=False)
class Partition:
    """Weakly decreasing tuple of positive parts. The empty partition is allowed."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __repr__(self):
        return f"{type(self).__name__}({format_partition(self)})"

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def largest(self) -> int:
        """lambda_1; 0 for the empty partition."""
        return self.parts[0] if self.parts else 0

    @property
    def smallest(self) -> int:
        """lambda_ell; 0 for the empty partition."""
        return self.parts[-1] if self.parts else 0

    def is_strict(self) -> bool:
        return all(a > b for a, b in zip(self.parts, self.parts[1:]))

    def cells(self) -> Iterator[tuple[int, int]]:
        """Cells (i, j) of the Young diagram, 1-based, row by row."""
        for i, part in enumerate(self.parts, start=1):
            for j in range(1, part + 1):
                yield (i, j)

    def __contains__(self, cell) -> bool:
        i, j = cell
        return 1 <= i <= len(self.parts) and 1 <= j <= self.parts[i - 1]


@dataclass(frozen=True, eq=False, repr=False)
class StrictPartition(Partition):
    """Nonempty partition with strictly decreasing parts."""

    def __post_init__(self):
        super().__post_init__()
        if not self.parts:
            raise ValueError("a strict partition is nonempty")
        if not self.is_strict():
            raise ValueError(f"parts must be strictly decreasing: {self.parts}")


def format_partition(lam) -> str:
    """``[3,2,1]`` style serialization; ``[]`` for the empty partition."""
    return "[" + ",".join(str(p) for p in lam) + "]"


def parse_partition(text: str) -> Partition:
    """Inverse of :func:`format_partition`. Also accepts parentheses and spaces."""
    body = text.strip().strip("[]()").strip()
    if not body:
        return Partition(())
    return Partition(tuple(int(tok) for tok in body.replace(" ", "").split(",") if tok))


def iter_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """Yield the partitions of ``n`` as tuples in lexicographically decreasing order.

    Uses the ZS1 successor rule (Zoghbi & Stojmenovic), which touches only
    the tail of the current partition at each step.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        yield ()
        return
    x = [1] * (n + 1)
    x[0] = n
    m = 0  # index of the last part
    h = 0  # index of the last part greater than 1
    yield (n,)
    while x[0] != 1:
        if x[h] == 2:
            m += 1
            x[h] = 1
            h -= 1
        else:
            r = x[h] - 1
            t = m - h + 1
            x[h] = r
            while t >= r:
                h += 1
                x[h] = r
                t -= r
            if t == 0:
                m = h
            else:
                m = h + 1
                if t > 1:
                    h += 1
                    x[h] = t
        yield tuple(x[: m + 1])


def iter_strict_partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield strict partitions of ``n`` (parts <= ``largest``) in lex-decreasing order.

    For ``n == 0`` the empty tuple is yielded; :func:`enumerate_strict_partitions`
    never exposes it.
    """
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    # parts below `first` are distinct and < first, so they sum to at most first*(first-1)/2
    for first in range(min(n, largest), 0, -1):
        rest = n - first
        if rest > first * (first - 1) // 2:
            break
        for tail in iter_strict_partitions(rest, first - 1):
            yield (first,) + tail


def iter_box_partitions(rows: int, width: int) -> Iterator[tuple[int, ...]]:
    """Yield every partition with at most ``rows`` parts, each at most ``width``.

    Includes the empty partition. Used as the literal oracle for q-binomials.
    """
    if rows <= 0 or width <= 0:
        yield ()
        return
    yield ()
    for first in range(width, 0, -1):
        for tail in iter_box_partitions(rows - 1, first):
            yield (first,) + tail


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of ``n``, lexicographically decreasing. ``n = 0`` gives ``[()]``."""
    return [Partition(p) for p in iter_partitions(n)]


def enumerate_strict_partitions(n: int) -> list[StrictPartition]:
    """All strict partitions of ``n >= 1``, lexicographically decreasing."""
    if n < 1:
        raise ValueError("strict partitions are enumerated for n >= 1")
    return list(_strict_cached(n))


@lru_cache(maxsize=256)
def _strict_cached(n: int) -> tuple[StrictPartition, ...]:
    # immutable values, so sharing the cached tuple between callers is safe
    return tuple(StrictPartition(p) for p in iter_strict_partitions(n))


def corner_count(lam) -> int:
    """Number of corners of the Young diagram, i.e. the number of distinct part values."""
    return len(set(lam))


def corner_count_by_cells(lam) -> int:
    """Corner count straight from the cell definition (slow reference version)."""
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    return sum(
        1
        for (i, j) in lam.cells()
        if (i + 1, j) not in lam and (i, j + 1) not in lam
    )


def _check_cell(lam: Partition, i: int, j: int):
    if (i, j) not in lam:
        raise CellError(f"cell ({i},{j}) is not in the diagram of {format_partition(lam)}")


def arm_length(lam, i: int, j: int) -> int:
    """Shifted arm length ``lambda_i - j + 1`` of cell (i, j)."""
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    _check_cell(lam, i, j)
    return lam.parts[i - 1] - j + 1


def hook_length(lam, i: int, j: int) -> int:
    """Number of cells weakly right of (i, j) in row i plus weakly below it in column j."""
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    _check_cell(lam, i, j)
    right = lam.parts[i - 1] - j + 1
    below = sum(1 for part in lam.parts[i:] if part >= j)
    return right + below


def sigma0(n: int) -> int:
    """Number of positive divisors of ``n``."""
    if n < 1:
        raise ValueError("sigma0 is defined for n >= 1")
    count = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            count += 1 if d * d == n else 2
        d += 1
    return count


def adjacent_equal_positions(lam) -> set[int]:
    """1-based positions t < length with ``lambda_t == lambda_{t+1}``."""
    parts = tuple(lam)
    return {t for t in range(1, len(parts)) if parts[t - 1] == parts[t]}
