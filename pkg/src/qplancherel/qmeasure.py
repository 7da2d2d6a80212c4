"""The q-deformed Plancherel measure and its harmonic function.

For 0 < q < 1 write [k] = 1 - q^k.  The measure of a partition of n is

    M_q(lam) = (1 - q)^n * dim(lam) * q^(b(lam)) / prod_u [h(u)],

with the product over the hook lengths h(u) of lam and
b(lam) = sum_i (i - 1) * lam_i.  At q = 1 the [k] degenerate and the
classical Plancherel weight dim(lam)^2 / n! is used instead.  The
measure factors as dim(lam) times the harmonic function

    phi_q(lam) = (1 - q)^n * q^(b(lam)) / prod_u [h(u)],

which satisfies phi_q(lam) = sum phi_q(Lam) over covers Lam of lam.
Normalization of M_q over a level is equivalent to the hook identity

    sum_{|lam| = n} q^(b(lam)) dim(lam) / prod_u [h(u)] = (1 - q)^(-n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .diagrams import Partition, enumerate_level, hook_data

# Switch to log-space products once n * ln(1/q) is this large; the direct
# product of [h] factors would drift or underflow well before exp does.
_LOG_SPACE_THRESHOLD = 500.0


@dataclass(frozen=True)
class QParam:
    """Deformation parameter q in (0, 1], with q = 1 the classical case."""

    q: float

    def __post_init__(self) -> None:
        q = float(self.q)
        object.__setattr__(self, "q", q)
        if not (0.0 < q <= 1.0) or not math.isfinite(q):
            raise ValueError(f"q must lie in (0, 1], got {self.q}")

    @property
    def log_inv(self) -> float:
        """ln(1/q), nonnegative, zero only in the classical case."""
        return -math.log(self.q)

    @property
    def is_classical(self) -> bool:
        return self.q == 1.0


def one_minus_qpow(qp: QParam, exponent: float) -> float:
    """1 - q^e, accurate for exponents of either sign."""
    return -math.expm1(-exponent * qp.log_inv)


def q_measure(partition: Partition, qp: QParam) -> float:
    """Probability of ``partition`` under the level-n deformed measure."""
    n = partition.size
    data = hook_data(partition)
    if qp.is_classical:
        return data.dim * data.dim / math.factorial(n)
    q = qp.q
    if n * qp.log_inv > _LOG_SPACE_THRESHOLD:
        log_val = (
            n * math.log1p(-q)
            + math.log(data.dim)
            + data.b_stat * math.log(q)
            - sum(math.log(-math.expm1(h * math.log(q))) for h in data.hooks)
        )
        return math.exp(log_val)
    value = data.dim * q**data.b_stat * (1.0 - q) ** n
    for h in data.hooks:
        value /= 1.0 - q**h
    return value


def q_measure_exact(partition: Partition, q: Fraction) -> Fraction:
    """The same measure in exact rational arithmetic, for rational q."""
    if not (0 < q < 1):
        raise ValueError(f"exact evaluation needs q in (0, 1), got {q}")
    n = partition.size
    data = hook_data(partition)
    value = Fraction(data.dim) * q**data.b_stat * (1 - q) ** n
    for h in data.hooks:
        value /= 1 - q**h
    return value


def harmonic(partition: Partition, qp: QParam) -> float:
    """The harmonic function phi_q; q_measure = dim * harmonic.

    Defined for 0 < q < 1 only; the classical specialization of phi is
    a different normalization and is not provided here.
    """
    if qp.is_classical:
        raise ValueError("harmonic function requires q in (0, 1)")
    n = partition.size
    data = hook_data(partition)
    q = qp.q
    if n * qp.log_inv > _LOG_SPACE_THRESHOLD:
        log_val = (
            n * math.log1p(-q)
            + data.b_stat * math.log(q)
            - sum(math.log(-math.expm1(h * math.log(q))) for h in data.hooks)
        )
        return math.exp(log_val)
    value = q**data.b_stat * (1.0 - q) ** n
    for h in data.hooks:
        value /= 1.0 - q**h
    return value


def hook_identity_residual(n: int, qp: QParam) -> float:
    """sum_{|lam|=n} q^b(lam) dim(lam) / prod [h] minus (1 - q)^(-n).

    Vanishes identically in exact arithmetic; callers compare the
    returned difference against (1 - q)^(-n) for a relative check.
    """
    if qp.is_classical:
        raise ValueError("hook identity requires q in (0, 1)")
    q = qp.q
    terms = []
    for lam in enumerate_level(n):
        data = hook_data(lam)
        value = data.dim * q**data.b_stat
        for h in data.hooks:
            value /= 1.0 - q**h
        terms.append(value)
    return math.fsum(terms) - (1.0 - q) ** (-n)
