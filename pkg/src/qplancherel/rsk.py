"""Row insertion, descent statistics, and the major-index bias.

Permutations are tuples holding each of 1..n once.  The descent set of
``w`` is the set of positions i with w_i > w_{i+1}; MAJ(w) is the sum of
those positions.  Biasing the uniform distribution on S(n) by q^MAJ and
pushing forward through the recording-tableau shape of row insertion
yields exactly the q-deformed Plancherel measure of ``qmeasure``; the
normalizer is the Poincare polynomial [n]! / (1 - q)^n.  Everything in
this module is exhaustive enumeration; no sampler is offered.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from itertools import permutations

from .diagrams import CapacityError, Partition, hook_data

_MAX_PUSHFORWARD_N = 9
_MAX_GENFUN_SIZE = 12

Permutation = tuple[int, ...]


def _check_permutation(perm: Permutation) -> None:
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise ValueError(f"not a permutation of 1..{len(perm)}: {perm}")


def descent_set(perm: Permutation) -> frozenset[int]:
    """Positions i (1-based) with perm_i > perm_{i+1}."""
    _check_permutation(perm)
    return frozenset(
        i for i in range(1, len(perm)) if perm[i - 1] > perm[i]
    )


def maj(perm: Permutation) -> int:
    """The major index, the sum of the descent positions."""
    return sum(descent_set(perm))


def inverse(perm: Permutation) -> Permutation:
    _check_permutation(perm)
    inv = [0] * len(perm)
    for i, v in enumerate(perm):
        inv[v - 1] = i + 1
    return tuple(inv)


@dataclass(frozen=True)
class StandardTableau:
    """Rows of a standard Young tableau: increasing along rows and columns."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        lengths = [len(r) for r in rows]
        if any(lengths[i] < lengths[i + 1] for i in range(len(rows) - 1)):
            raise ValueError("row lengths must weakly decrease")
        entries = [v for r in rows for v in r]
        if sorted(entries) != list(range(1, len(entries) + 1)):
            raise ValueError("entries must be 1..n, each once")
        for r in rows:
            if any(r[j] >= r[j + 1] for j in range(len(r) - 1)):
                raise ValueError(f"rows must strictly increase: {r}")
        for i in range(len(rows) - 1):
            for j in range(len(rows[i + 1])):
                if rows[i][j] >= rows[i + 1][j]:
                    raise ValueError("columns must strictly increase")

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.rows)

    @property
    def shape(self) -> Partition:
        return Partition(tuple(len(r) for r in self.rows))

    def row_of(self) -> dict[int, int]:
        """Map from entry to its 0-based row index."""
        return {v: i for i, r in enumerate(self.rows) for v in r}


def descent_set_tableau(tableau: StandardTableau) -> frozenset[int]:
    """Entries i whose successor i + 1 sits in a strictly lower row."""
    row = tableau.row_of()
    return frozenset(
        i for i in range(1, tableau.size) if row[i + 1] > row[i]
    )


def maj_tableau(tableau: StandardTableau) -> int:
    """The major index of a standard tableau, summed over its descents."""
    return sum(descent_set_tableau(tableau))


def rsk_shape(perm: Permutation) -> tuple[StandardTableau, StandardTableau]:
    """Row insertion of ``perm``: the (insertion, recording) tableau pair.

    The two tableaux share one shape.  The recording tableau carries the
    descents of ``perm`` and the insertion tableau those of its inverse,
    so MAJ is transported exactly.
    """
    _check_permutation(perm)
    p_rows: list[list[int]] = []
    q_rows: list[list[int]] = []
    for step, value in enumerate(perm, start=1):
        v = value
        for i, row in enumerate(p_rows):
            j = bisect_right(row, v)
            if j == len(row):
                row.append(v)
                q_rows[i].append(step)
                break
            row[j], v = v, row[j]
        else:
            p_rows.append([v])
            q_rows.append([step])
    return (
        StandardTableau(tuple(tuple(r) for r in p_rows)),
        StandardTableau(tuple(tuple(r) for r in q_rows)),
    )


def standard_tableaux(shape: Partition):
    """Yield every standard tableau of ``shape`` (exponentially many)."""
    n = shape.size
    if n == 0:
        yield StandardTableau(())
        return

    parts = shape.parts
    rows: list[list[int]] = [[] for _ in parts]

    def fill(entry: int):
        if entry > n:
            yield StandardTableau(tuple(tuple(r) for r in rows))
            return
        for i in range(len(parts)):
            j = len(rows[i])
            if j >= parts[i]:
                continue
            if i > 0 and len(rows[i - 1]) <= j:
                continue
            rows[i].append(entry)
            yield from fill(entry + 1)
            rows[i].pop()

    yield from fill(1)


@cache
def maj_distribution(n: int) -> dict[Partition, tuple[tuple[int, int], ...]]:
    """For each shape of n, the multiset {MAJ(w): RSK shape (w) = shape}.

    Returned as sorted (maj, count) pairs; exhaustive over S(n).
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n > _MAX_PUSHFORWARD_N:
        raise CapacityError(
            f"exhaustive enumeration capped at n = {_MAX_PUSHFORWARD_N}, got {n}"
        )
    counters: dict[Partition, Counter] = {}
    for perm in permutations(range(1, n + 1)):
        m = sum(i for i in range(1, n) if perm[i - 1] > perm[i])
        shape = _insertion_shape(perm)
        counters.setdefault(shape, Counter())[m] += 1
    return {
        shape: tuple(sorted(counter.items())) for shape, counter in counters.items()
    }


def _insertion_shape(perm: Permutation) -> Partition:
    rows: list[list[int]] = []
    for value in perm:
        v = value
        for row in rows:
            j = bisect_right(row, v)
            if j == len(row):
                row.append(v)
                break
            row[j], v = v, row[j]
        else:
            rows.append([v])
    return Partition(tuple(len(r) for r in rows))


def poincare_polynomial(n: int, q):
    """[n]! / (1 - q)^n = prod_{k=2..n} (1 + q + ... + q^(k-1)).

    Works for float or Fraction q; this is the total q^MAJ mass of S(n).
    """
    value = q**0 if hasattr(q, "__pow__") else 1
    for k in range(2, n + 1):
        value = value * sum(q**i for i in range(k))
    return value


def pushforward_exact(n: int, q):
    """Exact level-n distribution of the q^MAJ bias under the RSK shape map.

    ``q`` may be a float or a Fraction; the arithmetic follows its type.
    The normalizer is checked against the Poincare polynomial.  Returns
    a dict keyed by shape, in decreasing lexicographic shape order.
    """
    if isinstance(q, Fraction):
        if not (0 < q < 1):
            raise ValueError(f"q must lie in (0, 1), got {q}")
    elif not (0.0 < float(q) < 1.0):
        raise ValueError(f"q must lie in (0, 1), got {q}")
    dist = maj_distribution(n)
    masses = {
        shape: sum(count * q**m for m, count in pairs)
        for shape, pairs in dist.items()
    }
    total = sum(masses.values())
    expected = poincare_polynomial(n, q)
    if isinstance(q, Fraction):
        if total != expected:
            raise AssertionError("q^MAJ mass disagrees with the Poincare polynomial")
    elif abs(total - expected) > 1e-12 * abs(expected):
        raise AssertionError("q^MAJ mass disagrees with the Poincare polynomial")
    ordered = sorted(masses, key=lambda s: s.parts, reverse=True)
    return {shape: masses[shape] / total for shape in ordered}


def tableau_genfun_check(shape: Partition, qp_or_q):
    """sum_T q^MAJ(T) over standard tableaux minus its hook-product form.

    The closed form is q^b(shape) * [n]! / prod_u [h(u)] with [k] = 1 - q^k.
    Returns the difference, which vanishes up to rounding; passing a
    Fraction keeps the arithmetic exact and the result is exactly zero.
    """
    if isinstance(qp_or_q, Fraction):
        q = qp_or_q
    else:
        q = qp_or_q.q if hasattr(qp_or_q, "q") else float(qp_or_q)
    if not (0 < q < 1):
        raise ValueError(f"q must lie in (0, 1), got {q}")
    n = shape.size
    if n > _MAX_GENFUN_SIZE:
        raise CapacityError(
            f"tableau enumeration capped at {_MAX_GENFUN_SIZE} boxes, got {n}"
        )
    data = hook_data(shape)
    if isinstance(q, Fraction):
        lhs = sum(q ** maj_tableau(t) for t in standard_tableaux(shape))
    else:
        lhs = math.fsum(q ** maj_tableau(t) for t in standard_tableaux(shape))
    rhs = q**data.b_stat
    for k in range(1, n + 1):
        rhs *= 1 - q**k
    for h in data.hooks:
        rhs /= 1 - q**h
    return lhs - rhs
