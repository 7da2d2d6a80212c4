"""Continuous deformation of diagrams and Monte Carlo of the rescaled process.

A diagram w with minima x_k grows continuously by attaching, above each
minimum, a square of area mu_k * t, where mu = (mu_1, ..., mu_{m+1}) are
the transition weights.  The deformed profile w_t has minima
{x_k - sqrt(mu_k t), x_k + sqrt(mu_k t)} and maxima given by all old
corners {x_k} union {y_j}.  Its R-function obeys, at t = 0,

    d/dt R(x; q) = R(x; q) * ln^2(1/q) * sum_k mu_k q^(x - x_k)
                                               / (1 - q^(x - x_k))^2,

and together with the x-derivative of the partial-fraction form this
gives the conservation law

    dR/dx + (1 - q) / ln(1/q) * R^(-1) * dR/dt = 0,

whose finite-difference defect :func:`pde_residual` measures.  The
Monte Carlo experiment runs the growth chain for n steps at parameter
q^(1/sqrt(n)), rescales the support by 1/sqrt(n), and compares the
Rayleigh moments at parameter q with the integrated moment flow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dynamics, kernel
from .diagrams import CapacityError, InterlacingDiagram, Partition, from_interlacing
from .moments import r_diagram
from .qmeasure import QParam, one_minus_qpow

# A full recompute of all weights every this many steps bounds the
# rounding drift of the incremental updates and cross-checks them.
_RECOMPUTE_EVERY = 512
_DRIFT_TOLERANCE = 1e-8


class DeformationError(ValueError):
    """The requested deformation time breaks the interlacing constraints."""


@dataclass(frozen=True)
class DeformedDiagram:
    """The diagram w_t grown from ``base`` for time ``t`` with given weights."""

    base: InterlacingDiagram
    weights: tuple[float, ...]
    t: float
    diagram: InterlacingDiagram


def deform(
    w: InterlacingDiagram, weights, t: float
) -> DeformedDiagram:
    """Attach squares of area weights[k] * t above each minimum of ``w``.

    Valid while sqrt(weights[k] * t) stays below the gap to the
    neighboring maxima; beyond that the profile is no longer a diagram
    and DeformationError is raised.  The area grows by exactly t when
    the weights sum to one.
    """
    weights = tuple(float(v) for v in weights)
    if len(weights) != len(w.minima):
        raise ValueError(
            f"need one weight per minimum ({len(w.minima)}), got {len(weights)}"
        )
    if any(v <= 0 for v in weights):
        raise ValueError(f"weights must be positive, got {weights}")
    if t <= 0:
        raise ValueError(f"deformation time must be positive, got {t}")
    x = w.minima
    y = w.maxima
    new_minima = []
    for k, xk in enumerate(x):
        offset = math.sqrt(weights[k] * t)
        left_gap = xk - y[k - 1] if k > 0 else math.inf
        right_gap = y[k] - xk if k < len(y) else math.inf
        if offset >= left_gap or offset >= right_gap:
            raise DeformationError(
                f"time {t} is too large: offset {offset} at minimum {xk} "
                f"reaches a neighboring maximum"
            )
        new_minima.extend((xk - offset, xk + offset))
    new_maxima = sorted(x + y)
    return DeformedDiagram(
        w, weights, float(t), InterlacingDiagram(tuple(new_minima), tuple(new_maxima))
    )


def deformed_r(
    w: InterlacingDiagram,
    weights,
    t: float,
    qp: QParam,
    x: float,
) -> float:
    """R-function of the deformed diagram w_t at ``x`` above the support.

    Written through cosh(sqrt(mu_k t) ln(1/q)) this expression is
    analytic in t, so negative t evaluates its continuation; that is
    what the central finite differences of :func:`pde_residual` use.
    """
    weights = tuple(float(v) for v in weights)
    if len(weights) != len(w.minima):
        raise ValueError(
            f"need one weight per minimum ({len(w.minima)}), got {len(weights)}"
        )
    base = r_diagram(w, qp, x)
    value = base
    if qp.is_classical:
        for k, xk in enumerate(w.minima):
            d = x - xk
            value *= d * d / (d * d - weights[k] * t)
        return value
    rho = qp.log_inv
    for k, xk in enumerate(w.minima):
        d = x - xk
        qd = math.exp(-d * rho)
        arg = weights[k] * t
        if arg >= 0:
            hump = math.cosh(math.sqrt(arg) * rho)
        else:
            hump = math.cos(math.sqrt(-arg) * rho)
        pair = 1.0 + qd * qd - 2.0 * qd * hump
        value *= (1.0 - qd) ** 2 / pair
    return value


def growth_derivative(
    w: InterlacingDiagram,
    qp: QParam,
    x: float,
    weights=None,
) -> float:
    """d/dt at t = 0 of the deformed R-function, in closed form."""
    if weights is None:
        weights = kernel.transition_weights(w, qp)
    base = r_diagram(w, qp, x)
    if qp.is_classical:
        total = math.fsum(
            v / (x - xk) ** 2 for xk, v in zip(w.minima, weights)
        )
        return base * total
    rho = qp.log_inv
    total = math.fsum(
        v * math.exp(-(x - xk) * rho) / one_minus_qpow(qp, x - xk) ** 2
        for xk, v in zip(w.minima, weights)
    )
    return base * rho * rho * total


def pde_residual(
    w: InterlacingDiagram,
    qp: QParam,
    x: float,
    dt: float = 1e-6,
    dx: float = 1e-5,
) -> float:
    """Central-difference defect of dR/dx + (1-q)/ln(1/q) R^(-1) dR/dt."""
    weights = kernel.transition_weights(w, qp)
    r_here = r_diagram(w, qp, x)
    dr_dt = (
        deformed_r(w, weights, dt, qp, x) - deformed_r(w, weights, -dt, qp, x)
    ) / (2.0 * dt)
    dr_dx = (r_diagram(w, qp, x + dx) - r_diagram(w, qp, x - dx)) / (2.0 * dx)
    scale = 1.0 if qp.is_classical else (1.0 - qp.q) / qp.log_inv
    return abs(dr_dx + scale * dr_dt / r_here)


class _CornerWalk:
    """Growth chain on integer corner coordinates with incremental weights.

    Keeps the minima, maxima, and the current transition weights; one
    growth step multiplies every surviving weight by three local factors
    (the grown minimum turns into a maximum, its two neighbors change
    role), so a step costs O(m) instead of the O(m^2) full product.
    A full recompute every ``_RECOMPUTE_EVERY`` steps bounds drift.
    """

    def __init__(self, qp: QParam) -> None:
        if qp.is_classical:
            raise ValueError("the corner walk runs at q in (0, 1)")
        self.q = qp.q
        self.rho = qp.log_inv
        self.minima = np.array([0], dtype=np.int64)
        self.maxima = np.array([], dtype=np.int64)
        self.mu = np.array([1.0])
        self._halfwidth = 64
        self._rebuild_table()
        self._steps = 0

    def _rebuild_table(self) -> None:
        d = self._halfwidth
        if d * self.rho > 690.0:
            raise CapacityError(
                f"corner span {d} at q = {self.q} exceeds the floating-point "
                f"range of the power table"
            )
        self._qpow = np.exp(np.arange(-d, d + 1, dtype=np.float64) * -self.rho)

    def _ensure_span(self) -> None:
        span = int(self.minima[-1] - self.minima[0]) + 4
        if span > self._halfwidth:
            self._halfwidth = max(2 * self._halfwidth, span)
            self._rebuild_table()

    def _one_minus_qpow(self, exponents: np.ndarray) -> np.ndarray:
        return 1.0 - self._qpow[exponents + self._halfwidth]

    def _full_weights(self) -> np.ndarray:
        x = self.minima
        y = self.maxima
        m1 = len(x)
        if m1 == 1:
            return np.array([1.0])
        num = self._one_minus_qpow(x[:, None] - y[None, :])
        j = np.arange(m1 - 1)[None, :]
        k = np.arange(m1)[:, None]
        den = self._one_minus_qpow(x[:, None] - x[j + (j >= k)])
        return np.prod(num / den, axis=1)

    def _fresh_weight(self, position: int) -> float:
        x = self.minima
        idx = int(np.searchsorted(x, position))
        num = self._one_minus_qpow(position - self.maxima)
        den = self._one_minus_qpow(position - np.delete(x, idx))
        return float(np.prod(num / den))

    def step(self, u: float) -> None:
        """Grow one box; ``u`` is the uniform variate driving the choice."""
        self._ensure_span()
        cumulative = np.cumsum(self.mu)
        k = int(np.searchsorted(cumulative, u * cumulative[-1]))
        k = min(k, len(self.mu) - 1)
        c = int(self.minima[k])

        survivors = np.delete(self.minima, k)
        mu = np.delete(self.mu, k)
        if len(survivors):
            grown = self._one_minus_qpow(survivors - c)
            left = self._one_minus_qpow(survivors - (c - 1))
            right = self._one_minus_qpow(survivors - (c + 1))
            mu = mu * (grown * grown / (left * right))

        maxima = self.maxima
        fresh: list[int] = []
        for d in (c - 1, c + 1):
            pos = int(np.searchsorted(maxima, d))
            if pos < len(maxima) and maxima[pos] == d:
                maxima = np.delete(maxima, pos)
            else:
                fresh.append(d)
        maxima = np.insert(maxima, int(np.searchsorted(maxima, c)), c)

        minima = survivors
        for d in fresh:
            pos = int(np.searchsorted(minima, d))
            minima = np.insert(minima, pos, d)
            mu = np.insert(mu, pos, 0.0)

        self.minima = minima
        self.maxima = maxima
        for d in fresh:
            idx = int(np.searchsorted(minima, d))
            mu[idx] = self._fresh_weight(d)

        self._steps += 1
        if self._steps % _RECOMPUTE_EVERY == 0:
            direct = self._full_weights()
            direct = direct / direct.sum()
            drifted = mu / mu.sum()
            if not np.allclose(direct, drifted, rtol=_DRIFT_TOLERANCE, atol=1e-12):
                raise RuntimeError(
                    "incremental weights drifted from the product formula"
                )
            mu = direct
        self.mu = mu / mu.sum()

    def diagram(self) -> InterlacingDiagram:
        return InterlacingDiagram(
            tuple(int(v) for v in self.minima), tuple(int(v) for v in self.maxima)
        )


def _rescaled_p_moments(
    walk: _CornerWalk, n_boxes: int, qp: QParam, n_max: int
) -> tuple[float, ...]:
    # Rayleigh moments of the 1/sqrt(n) rescaled profile at parameter q.
    scale = qp.log_inv / math.sqrt(n_boxes)
    mins = walk.minima.astype(np.float64)
    maxs = walk.maxima.astype(np.float64)
    out = []
    for n in range(1, n_max + 1):
        out.append(
            float(
                np.exp(n * scale * mins).sum() - np.exp(n * scale * maxs).sum()
            )
        )
    return tuple(out)


@dataclass(frozen=True)
class TrajectorySample:
    """Final state of one simulated trajectory, already rescaled."""

    trial: int
    shape: Partition
    moments: tuple[float, ...]


@dataclass(frozen=True)
class McReport:
    """Aggregated Monte Carlo estimates next to their exact targets."""

    n_boxes: int
    q: float
    trials: int
    n_moments: int
    seed: int
    means: tuple[float, ...]
    stderrs: tuple[float, ...]
    targets: tuple[float, ...]

    def z_scores(self) -> tuple[float, ...]:
        return tuple(
            (m - t) / s if s > 0 else math.inf
            for m, s, t in zip(self.means, self.stderrs, self.targets)
        )

    def to_dict(self) -> dict:
        return {
            "n_boxes": self.n_boxes,
            "q": self.q,
            "trials": self.trials,
            "n_moments": self.n_moments,
            "seed": self.seed,
            "means": list(self.means),
            "stderrs": list(self.stderrs),
            "targets": list(self.targets),
        }


def simulate_rescaled(
    n_boxes: int,
    qp: QParam,
    trials: int,
    n_max: int,
    seed: int,
) -> list[TrajectorySample]:
    """Run ``trials`` growth chains of ``n_boxes`` steps at q^(1/sqrt(n)).

    Each trial consumes its own generator stream (seed, trial index), so
    results do not depend on execution order and reruns are identical.
    Returns the final shapes with their rescaled Rayleigh moments at
    parameter q.
    """
    if n_boxes < 1:
        raise ValueError(f"n_boxes must be positive, got {n_boxes}")
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    q_sim = QParam(qp.q ** (1.0 / math.sqrt(n_boxes)))
    samples = []
    for trial in range(trials):
        rng = kernel.trajectory_rng(seed, trial)
        walk = _CornerWalk(q_sim)
        for _ in range(n_boxes):
            walk.step(rng.random())
        samples.append(
            TrajectorySample(
                trial,
                from_interlacing(walk.diagram()),
                _rescaled_p_moments(walk, n_boxes, qp, n_max),
            )
        )
    return samples


def report_from_samples(
    samples: list[TrajectorySample],
    n_boxes: int,
    qp: QParam,
    n_max: int,
    seed: int,
) -> McReport:
    """Aggregate already-simulated trajectories against the moment flow."""
    trials = len(samples)
    data = np.array([s.moments for s in samples])
    means = data.mean(axis=0)
    if trials > 1:
        stderrs = data.std(axis=0, ddof=1) / math.sqrt(trials)
    else:
        stderrs = np.zeros(n_max)
    targets = dynamics.limit_moments(qp, n_max).values
    return McReport(
        n_boxes=n_boxes,
        q=qp.q,
        trials=trials,
        n_moments=n_max,
        seed=seed,
        means=tuple(float(v) for v in means),
        stderrs=tuple(float(v) for v in stderrs),
        targets=tuple(targets),
    )


def mc_limit_experiment(
    n_boxes: int,
    qp: QParam,
    trials: int,
    n_max: int,
    seed: int,
) -> McReport:
    """Monte Carlo check of the rescaled process against the moment flow."""
    samples = simulate_rescaled(n_boxes, qp, trials, n_max, seed)
    return report_from_samples(samples, n_boxes, qp, n_max, seed)
