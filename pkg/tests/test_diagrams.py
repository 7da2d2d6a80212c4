from __future__ import annotations

import math

import pytest
from hypothesis import given, settings

from qplancherel import (
    CapacityError,
    InterlacingDiagram,
    Partition,
    enumerate_level,
    from_interlacing,
    hook_data,
    to_interlacing,
)

from conftest import partitions


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
    with pytest.raises(ValueError):
        Partition((2, -1))


def test_partition_basics():
    lam = Partition((4, 2, 1))
    assert lam.size == 7
    assert lam.length == 3
    assert lam.conjugate() == Partition((3, 2, 1, 1))
    assert lam.conjugate().conjugate() == lam


@given(partitions())
def test_conjugate_is_involution(lam):
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().size == lam.size


@given(partitions())
def test_addable_one_more_than_removable(lam):
    assert len(lam.addable_rows()) == len(lam.removable_rows()) + 1


def test_empty_interlacing():
    w = to_interlacing(Partition(()))
    assert w.minima == (0,)
    assert w.maxima == ()
    assert from_interlacing(w) == Partition(())


def test_known_interlacing():
    w = to_interlacing(Partition((2, 1)))
    assert w.minima == (-2, 0, 2)
    assert w.maxima == (-1, 1)
    assert w.area == 3.0


@given(partitions(max_boxes=20))
def test_interlacing_roundtrip(lam):
    assert from_interlacing(to_interlacing(lam)) == lam


@given(partitions(max_boxes=20))
def test_interlacing_structure(lam):
    w = to_interlacing(lam)
    merged = []
    for i, x in enumerate(w.minima):
        merged.append(x)
        if i < len(w.maxima):
            merged.append(w.maxima[i])
    assert all(a < b for a, b in zip(merged, merged[1:]))
    assert sum(w.minima) - sum(w.maxima) == 0
    assert w.area == float(lam.size)


def test_interlacing_validation():
    with pytest.raises(ValueError):
        InterlacingDiagram((0, 1), (2,))  # maxima outside
    with pytest.raises(ValueError):
        InterlacingDiagram((0,), (1,))  # count mismatch
    with pytest.raises(ValueError):
        InterlacingDiagram((1, 0), ())  # not sorted


def test_hook_data_known():
    hd = hook_data(Partition((2, 1)))
    assert hd.hooks == (3, 1, 1)
    assert hd.b_stat == 1
    assert hd.dim == 2
    assert hook_data(Partition((3, 2))).dim == 5
    assert hook_data(Partition((2, 2))).dim == 2
    assert hook_data(Partition(())).dim == 1
    assert hook_data(Partition((5,))).dim == 1
    assert hook_data(Partition((1, 1, 1))).b_stat == 3


def test_dim_recursion():
    # dim of a shape equals the sum of dims over shapes one box smaller
    for n in range(1, 13):
        for lam in enumerate_level(n):
            total = sum(hook_data(mu).dim for mu in lam.predecessors())
            assert total == hook_data(lam).dim


def _partition_counts(limit: int) -> list[int]:
    # Euler's pentagonal-number recurrence, independent of enumerate_level
    counts = [1] + [0] * limit
    for n in range(1, limit + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > n and g2 > n:
                break
            sign = -1 if k % 2 == 0 else 1
            if g1 <= n:
                total += sign * counts[n - g1]
            if g2 <= n:
                total += sign * counts[n - g2]
            k += 1
        counts[n] = total
    return counts


def test_enumeration_counts():
    counts = _partition_counts(30)
    for n in range(31):
        level = enumerate_level(n)
        assert len(level) == counts[n]
        assert len(set(level)) == len(level)
        assert all(lam.size == n for lam in level)


def test_capacity_limit(monkeypatch):
    monkeypatch.setenv("QPL_MAX_N", "5")
    with pytest.raises(CapacityError):
        enumerate_level(6)
    assert len(enumerate_level(5)) == 7


@settings(max_examples=30)
@given(partitions(min_boxes=1, max_boxes=14))
def test_add_remove_inverse(lam):
    for k in range(len(lam.addable_rows())):
        grown = lam.add_box(k)
        assert grown.size == lam.size + 1
        assert lam in grown.predecessors()
    for k in range(len(lam.removable_rows())):
        shrunk = lam.remove_box(k)
        assert shrunk.size == lam.size - 1
        assert lam in shrunk.successors()
