"""Exact deformed Plancherel measures on small partitions.

The measure weights a partition of n by its tableau count and a
q-geometric factor over the hook lengths,

    M(lam) = (1 - q)^n dim(lam) q^b(lam) / prod_u (1 - q^h(u)),

where b(lam) = sum (i-1) lam_i.  Summed over a level of the lattice it
telescopes to exactly 1, which is a sharp floating-point test because
every term is positive.  This script walks through the ingredients and
then checks one level in exact rational arithmetic.
"""

from fractions import Fraction

from qplancherel import (
    Partition,
    QParam,
    enumerate_level,
    hook_data,
    hook_identity_residual,
    q_measure,
    q_measure_exact,
)

qp = QParam(0.5)

print("== ingredients for lam = (3, 1) ==")
lam = Partition((3, 1))
data = hook_data(lam)
print(f"hooks          : {data.hooks}")
print(f"tableau count  : {data.dim}")
print(f"row statistic b: {data.b_stat}")
print(f"measure at q=0.5: {q_measure(lam, qp):.12f}")

print()
print("== one full level (n = 4) ==")
total = 0.0
for shape in enumerate_level(4):
    mass = q_measure(shape, qp)
    total += mass
    print(f"  {str(shape.parts):<14} {mass:.12f}")
print(f"  sum = {total:.15f}")

print()
print("== the hook identity, scaled to a relative error ==")
for q in (0.1, 0.5, 0.9, 0.99):
    parameter = QParam(q)
    worst = max(
        abs(hook_identity_residual(n, parameter)) * (1.0 - q) ** n
        for n in range(1, 16)
    )
    print(f"  q = {q:<5} worst relative residual over n <= 15: {worst:.3e}")

print()
print("== the same level in exact rationals at q = 1/2 ==")
exact_total = sum(
    q_measure_exact(shape, Fraction(1, 2)) for shape in enumerate_level(4)
)
print(f"  sum of exact masses: {exact_total} (exactly one: {exact_total == 1})")
