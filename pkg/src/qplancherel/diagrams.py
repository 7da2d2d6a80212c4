"""Integer partitions, hook data, and interlacing corner coordinates.

A partition is stored as a weakly decreasing tuple of positive integers.
Drawn in the Russian convention (boxes rotated 45 degrees, content
``j - i`` on the horizontal axis), the boundary profile of a Young
diagram is a piecewise linear curve whose local minima sit at the
contents of the addable corners and whose local maxima sit at the
contents of the removable corners.  These form strictly interlacing
integer sequences

    x_1 < y_1 < x_2 < y_2 < ... < y_m < x_{m+1},

one more minimum than maxima, and for a partition the center identity
``sum(x) - sum(y) = 0`` holds.  All combinatorial quantities here (hook
lengths, the statistic b, the number of standard tableaux) are exact
integers; floating point enters only downstream.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cache

DEFAULT_MAX_LEVEL = 40
_MAX_LEVEL_ENV = "QPL_MAX_N"


class CapacityError(RuntimeError):
    """Raised when a request exceeds the configured exact-arithmetic cap."""


def max_level() -> int:
    """Largest box count accepted by enumeration and exact dimension formulas.

    Controlled by the environment variable ``QPL_MAX_N`` (default 40).
    Read at call time so tests and callers may adjust it.
    """
    raw = os.environ.get(_MAX_LEVEL_ENV)
    if raw is None:
        return DEFAULT_MAX_LEVEL
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{_MAX_LEVEL_ENV} must be an integer, got {raw!r}") from exc
    if value < 0:
        raise ValueError(f"{_MAX_LEVEL_ENV} must be nonnegative, got {value}")
    return value


def _check_level(n: int, what: str) -> None:
    cap = max_level()
    if n > cap:
        raise CapacityError(
            f"{what} requested at level {n}, above the cap {cap}; "
            f"raise {_MAX_LEVEL_ENV} to allow it"
        )


@dataclass(frozen=True)
class Partition:
    """A weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        for p in parts:
            if not isinstance(p, int) or p <= 0:
                raise ValueError(f"parts must be positive integers, got {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing, got {parts}")

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition(())
        cols = tuple(
            sum(1 for p in self.parts if p > j) for j in range(self.parts[0])
        )
        return Partition(cols)

    def addable_rows(self) -> list[int]:
        """1-based rows where a box may be added, bottom row first.

        Ordered so that entry ``k`` is the corner with the k-th smallest
        content; this aligns with the minima of :func:`to_interlacing`.
        """
        rows = [self.length + 1]
        for i in range(self.length, 1, -1):
            if self.parts[i - 2] > self.parts[i - 1]:
                rows.append(i)
        if self.length >= 1:
            rows.append(1)
        return rows

    def removable_rows(self) -> list[int]:
        """1-based rows where a box may be removed, bottom row first."""
        rows = []
        for i in range(self.length, 0, -1):
            if i == self.length or self.parts[i - 1] > self.parts[i]:
                rows.append(i)
        return rows

    def add_box(self, k: int) -> "Partition":
        """Add a box at the k-th addable corner (0-based, content order)."""
        rows = self.addable_rows()
        row = rows[k]
        if row == self.length + 1:
            return Partition(self.parts + (1,))
        parts = list(self.parts)
        parts[row - 1] += 1
        return Partition(tuple(parts))

    def remove_box(self, k: int) -> "Partition":
        """Remove the box at the k-th removable corner (0-based, content order)."""
        rows = self.removable_rows()
        row = rows[k]
        parts = list(self.parts)
        parts[row - 1] -= 1
        if parts[row - 1] == 0:
            parts.pop()
        return Partition(tuple(parts))

    def successors(self) -> list["Partition"]:
        """Partitions covering ``self`` in the Young lattice."""
        return [self.add_box(k) for k in range(len(self.addable_rows()))]

    def predecessors(self) -> list["Partition"]:
        """Partitions covered by ``self`` in the Young lattice."""
        return [self.remove_box(k) for k in range(len(self.removable_rows()))]

    def contains(self, other: "Partition") -> bool:
        if other.length > self.length:
            return False
        return all(self.parts[i] >= other.parts[i] for i in range(other.length))

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class HookData:
    """Exact hook lengths, the statistic b, and the tableau count of a shape."""

    hooks: tuple[int, ...]
    b_stat: int
    dim: int


@cache
def hook_data(partition: Partition) -> HookData:
    """Hook lengths (row-major), b = sum_i (i-1) * parts_i, and dim.

    dim is the number of standard Young tableaux of the shape, computed
    exactly as n! divided by the hook product; the division is checked
    to be exact.  Sizes above :func:`max_level` raise CapacityError
    rather than fall back to floating point.
    """
    n = partition.size
    _check_level(n, "exact hook data")
    conj = partition.conjugate().parts
    hooks = []
    for i, row_len in enumerate(partition.parts):
        for j in range(row_len):
            hooks.append(row_len - j + conj[j] - i - 1)
    b_stat = sum(i * p for i, p in enumerate(partition.parts))
    prod = math.prod(hooks) if hooks else 1
    fact = math.factorial(n)
    if fact % prod != 0:
        raise AssertionError(f"hook product does not divide {n}! for {partition}")
    return HookData(tuple(hooks), b_stat, fact // prod)


def enumerate_level(n: int) -> list[Partition]:
    """All partitions of n, in decreasing lexicographic order.

    The first entry is the single row (n,), the last the single column.
    """
    if n < 0:
        raise ValueError(f"level must be nonnegative, got {n}")
    _check_level(n, "level enumeration")

    def gen(remaining: int, largest: int, prefix: tuple[int, ...]):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        for part in range(min(remaining, largest), 0, -1):
            gen(remaining - part, part, prefix + (part,))

    out: list[Partition] = []
    gen(n, n if n else 1, ())
    return out


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


@dataclass(frozen=True)
class InterlacingDiagram:
    """Strictly interlacing minima and maxima of a rectangular profile.

    Coordinates coming from a partition are exact integers; deformed
    diagrams carry real coordinates.  Requires
    ``len(minima) == len(maxima) + 1`` and
    ``minima[0] < maxima[0] < minima[1] < ...``.
    """

    minima: tuple[float, ...]
    maxima: tuple[float, ...]

    def __post_init__(self) -> None:
        minima = tuple(self.minima)
        maxima = tuple(self.maxima)
        object.__setattr__(self, "minima", minima)
        object.__setattr__(self, "maxima", maxima)
        if len(minima) != len(maxima) + 1:
            raise ValueError(
                f"need one more minimum than maxima, got {len(minima)} and {len(maxima)}"
            )
        for v in minima + maxima:
            if not _is_number(v) or not math.isfinite(v):
                raise ValueError(f"coordinates must be finite numbers, got {v!r}")
        merged = []
        for i, x in enumerate(minima):
            merged.append(x)
            if i < len(maxima):
                merged.append(maxima[i])
        if any(merged[i] >= merged[i + 1] for i in range(len(merged) - 1)):
            raise ValueError(f"sequences do not strictly interlace: {merged}")

    @property
    def center(self) -> float:
        return sum(self.minima) - sum(self.maxima)

    @property
    def area(self) -> float:
        """Area between the profile and its asymptotes, (sum x^2 - sum y^2)/2.

        Equals the box count when the diagram comes from a partition.
        """
        return (
            sum(x * x for x in self.minima) - sum(y * y for y in self.maxima)
        ) / 2

    @property
    def support_min(self) -> float:
        return self.minima[0]

    @property
    def support_max(self) -> float:
        return self.minima[-1]


def to_interlacing(partition: Partition) -> InterlacingDiagram:
    """Corner contents of a partition as an interlacing diagram.

    Minima are the contents of the addable corners, maxima the contents
    of the removable corners, both ascending and exactly integer.
    """
    parts = partition.parts
    minima = []
    maxima = []
    # content of an added box in row i (1-based) is parts[i-1] + 1 - i
    minima.append(-len(parts))
    for i in range(len(parts), 0, -1):
        if i == 1 or parts[i - 2] > parts[i - 1]:
            minima.append(parts[i - 1] + 1 - i)
        if i == len(parts) or parts[i - 1] > parts[i]:
            maxima.append(parts[i - 1] - i)
    return InterlacingDiagram(tuple(minima), tuple(maxima))


def from_interlacing(diagram: InterlacingDiagram) -> Partition:
    """Reconstruct the partition whose corner contents are ``diagram``.

    Inverse of :func:`to_interlacing`; requires integer coordinates
    obeying the center identity.
    """
    minima = diagram.minima
    maxima = diagram.maxima
    if any(v != int(v) for v in minima + maxima):
        raise ValueError("a partition profile has integer corner contents")
    x_desc = [int(v) for v in reversed(minima)]
    y_desc = [int(v) for v in reversed(maxima)]
    parts: list[int] = []
    rows = 0
    for j, y in enumerate(y_desc):
        value = x_desc[j] + rows
        new_rows = value - y
        if new_rows <= rows or value <= 0:
            raise ValueError(f"not the corner profile of a partition: {diagram}")
        parts.extend([value] * (new_rows - rows))
        rows = new_rows
    if x_desc[-1] != -rows:
        raise ValueError(f"corner profile is off center: {diagram}")
    return Partition(tuple(parts))
