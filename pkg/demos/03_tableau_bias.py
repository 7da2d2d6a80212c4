"""Where the measure comes from: a q-biased symmetric group.

Weight each permutation of n by q^maj(sigma), the major index being
the sum of its descent positions.  Push that distribution through the
insertion-algorithm shape map and the result is exactly the deformed
Plancherel measure of the other demos.  Everything here is exact:
rational q keeps the arithmetic in integers.
"""

from fractions import Fraction

from qplancherel import (
    QParam,
    descent_set,
    maj,
    poincare_polynomial,
    pushforward_exact,
    q_measure,
    q_measure_exact,
    rsk_shape,
)

print("== the major index on S(4) examples ==")
for sigma in ((2, 1, 4, 3), (4, 3, 2, 1), (1, 2, 3, 4)):
    insertion, _ = rsk_shape(sigma)
    print(f"  sigma = {sigma}: descents {sorted(descent_set(sigma))}, "
          f"maj = {maj(sigma)}, shape = {insertion.shape.parts}")

print()
print("== the normalizer is the q-factorial [n]! ==")
q = Fraction(1, 3)
print(f"  sum of q^maj over S(4) at q = 1/3: {poincare_polynomial(4, q)}")
print(f"  [4]! = (1)(1+q)(1+q+q^2)(1+q+q^2+q^3) "
      f"= {(1+q) * (1+q+q**2) * (1+q+q**2+q**3)}")

print()
print("== push-forward at level 5, exact rational q = 1/2 ==")
probs = pushforward_exact(5, Fraction(1, 2))
print(f"{'shape':<14} {'pushforward':>14} {'measure':>14}")
for shape, prob in probs.items():
    reference = q_measure_exact(shape, Fraction(1, 2))
    marker = "" if prob == reference else "  <- MISMATCH"
    print(f"{str(shape.parts):<14} {str(prob):>14} {str(reference):>14}{marker}")

print()
print("== float route: total variation at level 7 ==")
qp = QParam(0.5)
probs_f = pushforward_exact(7, 0.5)
tv = 0.5 * sum(abs(p - q_measure(s, qp)) for s, p in probs_f.items())
print(f"  TV distance between the two laws: {tv:.3e}")
