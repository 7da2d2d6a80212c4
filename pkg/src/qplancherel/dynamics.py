"""The moment flow of the growth process in logarithmic time.

Along the growth process the Rayleigh moments p_n evolve, after the
time change sigma = t * ln^2(1/q), by the autonomous system

    dy_n / dsigma = n^2 * sum over partitions of n of
                    prod_k y_k^{r_k} / (k^{r_k} r_k!),

whose right-hand side is n^2 times the partition-sum combination that
converts p-moments to h-moments.  The first equations read

    y_1' = y_1
    y_2' = 2 y_1^2 + 2 y_2
    y_3' = (3/2) y_1^3 + (9/2) y_1 y_2 + 3 y_3
    y_4' = (2/3) y_1^4 + 4 y_1^2 y_2 + (16/3) y_1 y_3 + 2 y_2^2 + 4 y_4.

Each y_n is exp(n sigma) times a polynomial of degree n - 1 in sigma;
``closed_form`` evaluates those polynomials for n <= 4.  Starting from
y_n(0) = 1 for all n and integrating to sigma = ln^2(q) yields the
limiting Rayleigh moments of the rescaled process at parameter q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .moments import MomentVector, h_from_p_partition_sum
from .qmeasure import QParam


class IntegrationAccuracyError(RuntimeError):
    """Step count too small: the Richardson error estimate is too large."""


@dataclass(frozen=True)
class OdeState:
    """Moment vector y at logarithmic time sigma, with an error estimate."""

    sigma: float
    y: tuple[float, ...]
    error_estimate: float = 0.0


def ode_rhs(y) -> tuple[float, ...]:
    """Right-hand side (n^2 times the h-combination of y) for n = 1..len(y)."""
    y = tuple(float(v) for v in y)
    return tuple(
        n * n * h_from_p_partition_sum(y, n) for n in range(1, len(y) + 1)
    )


def _rk4(y0: tuple[float, ...], sigma_end: float, steps: int) -> tuple[float, ...]:
    h = sigma_end / steps
    y = list(y0)
    for _ in range(steps):
        k1 = ode_rhs(y)
        k2 = ode_rhs([y[i] + 0.5 * h * k1[i] for i in range(len(y))])
        k3 = ode_rhs([y[i] + 0.5 * h * k2[i] for i in range(len(y))])
        k4 = ode_rhs([y[i] + h * k3[i] for i in range(len(y))])
        y = [
            y[i] + h * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) / 6
            for i in range(len(y))
        ]
    return tuple(y)


def integrate_moments(
    y0,
    sigma_end: float,
    steps: int = 1000,
    tol: float = 1e-6,
) -> OdeState:
    """Classical fixed-step fourth-order integration of the moment flow.

    A second pass at half the step size provides a Richardson error
    estimate (relative, factor 1/15); the run is rejected when the
    estimate exceeds ``tol``.
    """
    y0 = tuple(float(v) for v in y0)
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    if sigma_end == 0.0:
        return OdeState(0.0, y0, 0.0)
    coarse = _rk4(y0, sigma_end, steps)
    fine = _rk4(y0, sigma_end, 2 * steps)
    estimate = max(
        abs(fine[i] - coarse[i]) / max(1.0, abs(fine[i])) for i in range(len(y0))
    ) / 15.0
    if estimate > tol:
        raise IntegrationAccuracyError(
            f"Richardson estimate {estimate:.3e} above {tol:.1e} "
            f"with {steps} steps to sigma = {sigma_end}"
        )
    return OdeState(float(sigma_end), coarse, estimate)


def closed_form(n: int, sigma: float, y0) -> float:
    """Exact y_n(sigma) for n <= 4: a degree n - 1 polynomial times e^(n sigma).

    ``y0`` supplies the initial values y_1(0)..y_n(0).
    """
    if not 1 <= n <= 4:
        raise ValueError(f"closed forms cover n = 1..4, got {n}")
    y0 = tuple(float(v) for v in y0)
    if len(y0) < n:
        raise ValueError(f"need {n} initial values, got {len(y0)}")
    a = y0[0]
    s = float(sigma)
    if n == 1:
        return a * math.exp(s)
    b = y0[1]
    if n == 2:
        return (b + 2 * a * a * s) * math.exp(2 * s)
    c = y0[2]
    if n == 3:
        return (
            c + 1.5 * a * (3 * b + a * a) * s + 4.5 * a**3 * s * s
        ) * math.exp(3 * s)
    d = y0[3]
    poly = (
        d
        + ((2.0 / 3.0) * a**4 + 4 * a * a * b + (16.0 / 3.0) * a * c + 2 * b * b) * s
        + (16 * a * a * b + 8 * a**4) * s * s
        + (32.0 / 3.0) * a**4 * s**3
    )
    return poly * math.exp(4 * s)


def limit_sigma(qp: QParam) -> float:
    """The logarithmic horizon ln^2(q) of the rescaled process."""
    return qp.log_inv**2


def limit_moments(qp: QParam, n_max: int, steps: int | None = None) -> MomentVector:
    """Limiting Rayleigh moments: integrate from all-ones to sigma = ln^2(q)."""
    if qp.is_classical:
        # ln^2(1) = 0: the flow has not run at all.
        return MomentVector("p", (1.0,) * n_max)
    sigma = limit_sigma(qp)
    if steps is None:
        steps = max(1000, int(400 * sigma) * 2)
    state = integrate_moments((1.0,) * n_max, sigma, steps)
    return MomentVector("p", state.y)


def polynomial_structure_residual(
    n: int,
    y0=None,
    sigma_max: float = 2.0,
    steps: int = 2000,
) -> float:
    """How far y_n(s) e^(-ns) is from a degree-(n - 1) polynomial in s.

    Interpolates through n sample points on (0, sigma_max] and returns
    the worst relative mismatch at the midpoints between them, which is
    zero exactly when the structure claim holds.  For n = 1 the claim
    is that y_1 e^(-s) is constant.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if y0 is None:
        y0 = (1.0,) * n
    if len(y0) < n:
        raise ValueError(f"y0 has {len(y0)} entries, needs at least {n}")

    def reduced(sigma: float) -> float:
        state = integrate_moments(tuple(y0), sigma, steps)
        return state.y[n - 1] * math.exp(-n * sigma)

    nodes = [sigma_max * (i + 1) / n for i in range(n)]
    values = [reduced(s) for s in nodes]
    # Newton divided differences; evaluation by nested multiplication.
    coeffs = list(values)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (nodes[i] - nodes[i - k])

    def interpolant(s: float) -> float:
        acc = coeffs[n - 1]
        for i in range(n - 2, -1, -1):
            acc = acc * (s - nodes[i]) + coeffs[i]
        return acc

    worst = 0.0
    probes = [0.5 * (nodes[i] + nodes[i + 1]) for i in range(n - 1)]
    probes.append(0.5 * nodes[0])
    for s in probes:
        reference = reduced(s)
        worst = max(worst, abs(interpolant(s) - reference) / abs(reference))
    return worst
