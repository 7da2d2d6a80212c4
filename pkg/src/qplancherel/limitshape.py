"""The limiting R-function: implicit equation, series moments, self-similarity.

The rescaled growth process has a deterministic limit profile whose
R-function R(x; q) solves the implicit equation

    R * (1 - q^(x - c R)) = 1 - q,        c = ln(1/q) / (1 - q),

on the branch with R -> 1 - q as x -> +infinity.  In the classical
limit q -> 1 the equation degenerates to R (x - R) = 1 with solution
(x - sqrt(x^2 - 4)) / 2.  Writing z = q^x, the normalized expansion

    R(x; q) / (1 - q) = 1 + sum_{n >= 1} h_n z^n

collects the limiting h-moments; the substitution h(z) = R/(1-q) - 1
turns the implicit equation into h = z (1 + h) exp(rho^2 (1 + h)) with
rho = ln(1/q), which the series extraction exploits order by order.
The same curve is self-similar: with Q = e^(-rho) and the rescaling
r = rho R / (1 - Q), the function r(u, rho) satisfies

    r = rho / (1 - e^(-rho (u - r)))       and the quasi-linear PDE
    2 r r_u - u r_u + rho r_rho = r.
"""

from __future__ import annotations

import math

from scipy.optimize import brentq

from .moments import MomentVector
from .qmeasure import QParam

_BRENTQ_RTOL = 4 * math.ulp(1.0)


class BracketingError(RuntimeError):
    """No admissible root in the attempted bracket."""


class ExtractionConditioningError(RuntimeError):
    """The grid extraction of series coefficients failed its residual check."""


def _exp_capped(t: float) -> float:
    return math.inf if t > 709.0 else math.exp(t)


def classical_r(x: float) -> float:
    """(x - sqrt(x^2 - 4)) / 2 in cancellation-free form; needs x >= 2."""
    if x < 2.0:
        raise BracketingError(f"the classical branch needs x >= 2, got {x}")
    return 2.0 / (x + math.sqrt(x * x - 4.0))


def solve_r_omega(x: float, qp: QParam, xtol: float | None = None) -> float:
    """Root of R (1 - q^(x - c R)) = (1 - q) on the physical branch.

    Safeguarded bracketing: the left end (1 - q)/2 always lies below the
    root, the right end starts at 3 (1 - q) and doubles, clipped at the
    stationary point of the defect function beyond which the second,
    unphysical branch begins.  Raises BracketingError (reporting the
    attempted bracket) when x is below the admissible range.
    """
    if qp.is_classical:
        return classical_r(x)
    q = qp.q
    rho = qp.log_inv
    one_minus_q = 1.0 - q
    z = _exp_capped(-x * rho)
    if z >= 1.0:
        raise BracketingError(f"need q^x < 1, got x = {x} at q = {q}")
    alpha = rho * rho / one_minus_q
    log_z = -x * rho

    def defect(r: float) -> float:
        return r * (1.0 - _exp_capped(log_z + alpha * r)) - one_minus_q

    # g' = 0 where z e^(alpha r)(1 + alpha r) = 1; increasing in r, and
    # taking logs keeps the marker finite for any r.
    def slope_marker(r: float) -> float:
        return log_z + alpha * r + math.log1p(alpha * r)

    hi_marker = one_minus_q
    while slope_marker(hi_marker) <= 0.0:
        hi_marker *= 2.0
    r_hump = brentq(slope_marker, 0.0, hi_marker, rtol=_BRENTQ_RTOL)

    lo = one_minus_q / 2.0
    if defect(r_hump) <= 0.0:
        raise BracketingError(
            f"no root for x = {x} at q = {q}; defect stays negative "
            f"on the bracket [{lo}, {r_hump}]"
        )
    hi = min(3.0 * one_minus_q, r_hump)
    while defect(hi) <= 0.0:
        hi = min(2.0 * hi, r_hump)
        if hi == r_hump:
            break
    if xtol is None:
        xtol = 1e-15 * one_minus_q
    return float(brentq(defect, lo, hi, xtol=xtol, rtol=_BRENTQ_RTOL))


def _series_by_recursion(qp: QParam, n_max: int) -> list[float]:
    # coefficient recursion for h = z (1 + h) exp(rho^2 (1 + h))
    rho2 = qp.log_inv**2
    lead = math.exp(rho2)
    h = [0.0] * (n_max + 1)
    exp_part = [1.0] + [0.0] * n_max  # series of exp(rho^2 h(z))
    for n in range(1, n_max + 1):
        h[n] = lead * (
            exp_part[n - 1]
            + math.fsum(h[i] * exp_part[n - 1 - i] for i in range(1, n))
        )
        exp_part[n] = (
            rho2 / n * math.fsum(j * h[j] * exp_part[n - j] for j in range(1, n + 1))
        )
    return h[1:]


def _solve_vandermonde(nodes, values) -> list[float]:
    """Coefficients of the polynomial through (nodes, values).

    Newton divided differences followed by basis conversion; accurate
    componentwise for monotone nodes, unlike a generic linear solve.
    """
    a = list(values)
    n = len(a)
    for k in range(n - 1):
        for i in range(n - 1, k, -1):
            a[i] = (a[i] - a[i - 1]) / (nodes[i] - nodes[i - k - 1])
    for k in range(n - 2, -1, -1):
        for i in range(k, n - 1):
            a[i] -= nodes[k] * a[i + 1]
    return a


def series_h_omega(
    qp: QParam,
    n_max: int,
    method: str = "recursion",
    heldout_rtol: float = 1e-7,
) -> MomentVector:
    """Limiting h-moments: coefficients of z^n in R/(1 - q) - 1, z = q^x.

    ``method="recursion"`` differentiates the implicit equation order by
    order and is exact up to rounding; it is the default because it works
    for every q in (0, 1).  ``method="grid"`` instead samples
    :func:`solve_r_omega` at the nodes z_j = 2^(-j-3), j = 1..n_max, and
    solves the Vandermonde system.  The grid route carries two caveats it
    reports honestly rather than hiding: the largest node can fall beyond
    the branch point of the series for small q (the solver then raises
    BracketingError), and the truncated tail of the series aliases into
    the top fitted coefficients, so only the leading coefficients are
    trustworthy.  A held-out node between the first two grid points must
    reproduce to ``heldout_rtol`` or the extraction raises
    ExtractionConditioningError.
    """
    if qp.is_classical:
        raise ValueError("the series in z = q^x requires q in (0, 1)")
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    if method == "recursion":
        return MomentVector("h", tuple(_series_by_recursion(qp, n_max)))
    if method != "grid":
        raise ValueError(f'method must be "recursion" or "grid", got {method!r}')

    rho = qp.log_inv
    nodes = [2.0 ** -(j + 3) for j in range(1, n_max + 1)]
    scaled = []
    for z in nodes:
        x = -math.log(z) / rho
        scaled.append((solve_r_omega(x, qp) / (1.0 - qp.q) - 1.0) / z)
    coeffs = _solve_vandermonde(nodes, scaled)

    z_check = 2.0**-4.5
    x_check = -math.log(z_check) / rho
    reference = solve_r_omega(x_check, qp) / (1.0 - qp.q) - 1.0
    fitted = z_check * math.fsum(c * z_check**k for k, c in enumerate(coeffs))
    if abs(fitted - reference) > heldout_rtol * max(1.0, abs(reference)):
        raise ExtractionConditioningError(
            f"held-out node residual {abs(fitted - reference):.3e} "
            f"at q = {qp.q}, order {n_max}"
        )
    return MomentVector("h", tuple(coeffs))


def automodel_residual(u: float, rho: float) -> float:
    """Defect of the self-similar implicit form at scale rho.

    Solves the limit equation at parameter Q = e^(-rho), rescales to
    r = rho R / (1 - Q), and returns |r (1 - e^(-rho (u - r))) - rho|.
    """
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    q_param = QParam(math.exp(-rho))
    big_r = solve_r_omega(u, q_param)
    r = rho * big_r / (1.0 - q_param.q)
    return abs(r * -math.expm1(-rho * (u - r)) - rho)


def _r_scaled(u: float, rho: float) -> float:
    q_param = QParam(math.exp(-rho))
    return rho * solve_r_omega(u, q_param) / (1.0 - q_param.q)


def automodel_pde_residual(u: float, rho: float, step: float = 1e-4) -> float:
    """Central-difference defect of 2 r r_u - u r_u + rho r_rho - r = 0."""
    r = _r_scaled(u, rho)
    r_u = (_r_scaled(u + step, rho) - _r_scaled(u - step, rho)) / (2 * step)
    r_rho = (_r_scaled(u, rho + step) - _r_scaled(u, rho - step)) / (2 * step)
    return abs(2.0 * r * r_u - u * r_u + rho * r_rho - r)
