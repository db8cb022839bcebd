"""Shot-noise model of clock phase jitter: seeded piecewise-constant phase
noise, exact power normalization, and jitter unit conversions.

A realization is a Poisson number of square fluctuation pulses with Gaussian
amplitudes, uniformly placed over the sweep and rescaled so the interval-
averaged power equals the requested mean power exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import metrics, noc, propagate
from .propagate import TimeGrid

DEFAULT_SIGMA = 0.1
DEFAULT_TAU_F_1Q = 0.3
DEFAULT_TAU_F_2Q = 0.1
DEFAULT_REALIZATIONS = 10
MAX_RESAMPLE = 8


class DegenerateRealizationError(RuntimeError):
    """Raw noise power was zero for every retry; cannot normalize."""


@dataclass(frozen=True)
class NoiseParams:
    """Shot-noise parameters: mean power, pulse amplitude std, half lifetime."""

    mean_power: float
    sigma: float = DEFAULT_SIGMA
    tau_f: float = DEFAULT_TAU_F_1Q
    seed: int = 0

    def __post_init__(self):
        if self.mean_power < 0:
            raise ValueError("mean_power must be >= 0")
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if self.tau_f <= 0:
            raise ValueError("tau_f must be > 0")

    @property
    def rate(self) -> float:
        """Mean fluctuation rate nbar = P / (2 sigma^2 tau_f)."""
        return self.mean_power / (2.0 * self.sigma**2 * self.tau_f)


def default_noise_params(qubits: int, mean_power: float, seed: int = 0,
                         sigma: float = DEFAULT_SIGMA,
                         tau_f: float | None = None) -> NoiseParams:
    if tau_f is None:
        tau_f = DEFAULT_TAU_F_1Q if qubits == 1 else DEFAULT_TAU_F_2Q
    return NoiseParams(mean_power=mean_power, sigma=sigma, tau_f=tau_f, seed=seed)


@dataclass(frozen=True)
class NoiseRealization:
    """One sampled phase-noise record delta_phi(tau), exactly power-normalized."""

    centers: np.ndarray
    amplitudes: np.ndarray
    scale: float
    tau_f: float
    tau0: float
    mean_power: float

    @property
    def count(self) -> int:
        return len(self.centers)

    def evaluate(self, tau) -> np.ndarray:
        """delta_phi at tau: scale * sum_i x_i [sgn(tau-l_i) - sgn(tau-r_i)]/2."""
        tau = np.asarray(tau, dtype=float)
        if self.count == 0 or self.scale == 0.0:
            return np.zeros_like(tau)
        left = self.centers - self.tau_f
        right = self.centers + self.tau_f
        out = np.zeros_like(tau)
        # chunk the pulse sum to bound the broadcast size
        flat = tau.reshape(-1)
        acc = np.zeros_like(flat)
        for c0 in range(0, len(flat), 65536):
            seg = flat[c0:c0 + 65536, None]
            pulses = 0.5 * (np.sign(seg - left) - np.sign(seg - right))
            acc[c0:c0 + 65536] = pulses @ self.amplitudes
        out = acc.reshape(tau.shape)
        return self.scale * out


def _raw_power(centers, amplitudes, tau_f, tau0) -> float:
    """Interval-averaged power of the raw pulse sum, pulses clipped to the sweep."""
    lo, hi = -tau0 / 2.0, tau0 / 2.0
    edges = np.concatenate([
        np.clip(centers - tau_f, lo, hi),
        np.clip(centers + tau_f, lo, hi),
    ])
    deltas = np.concatenate([amplitudes, -amplitudes])
    order = np.argsort(edges, kind="stable")
    edges = edges[order]
    deltas = deltas[order]
    points = np.concatenate([[lo], edges, [hi]])
    levels = np.concatenate([[0.0], np.cumsum(deltas)])
    seg = np.diff(points)
    return float(np.sum(levels**2 * seg) / tau0)


def sample_realization(p: NoiseParams, tau0: float, trial: int = 0) -> NoiseRealization:
    """Draw one seeded realization; deterministic in (seed, trial)."""
    if 2.0 * p.tau_f > tau0 / 10.0:
        warnings.warn(
            "fluctuation lifetime is not small compared to the sweep "
            f"(2 tau_f = {2 * p.tau_f:g}, tau0 = {tau0:g})",
            stacklevel=2,
        )
    if p.mean_power == 0.0:
        return NoiseRealization(
            centers=np.empty(0), amplitudes=np.empty(0), scale=0.0,
            tau_f=p.tau_f, tau0=tau0, mean_power=0.0,
        )
    for retry in range(MAX_RESAMPLE):
        rng = np.random.default_rng((int(p.seed), int(trial), retry))
        count = int(rng.poisson(p.rate * tau0))
        centers = rng.uniform(-tau0 / 2.0, tau0 / 2.0, size=count)
        amplitudes = rng.normal(0.0, p.sigma, size=count)
        raw = _raw_power(centers, amplitudes, p.tau_f, tau0) if count else 0.0
        if raw > 0.0:
            return NoiseRealization(
                centers=centers, amplitudes=amplitudes,
                scale=float(np.sqrt(p.mean_power / raw)),
                tau_f=p.tau_f, tau0=tau0, mean_power=p.mean_power,
            )
    raise DegenerateRealizationError(
        f"zero raw power after {MAX_RESAMPLE} retries (seed {p.seed}, trial {trial})"
    )


def realized_power(r: NoiseRealization) -> float:
    """Interval-averaged power of a realization (should equal mean_power)."""
    if r.count == 0:
        return 0.0
    return r.scale**2 * _raw_power(r.centers, r.amplitudes, r.tau_f, r.tau0)


def evaluate_phase_noise(r: NoiseRealization, tau) -> np.ndarray:
    """Module-level alias of NoiseRealization.evaluate."""
    return r.evaluate(tau)


@dataclass(frozen=True)
class JitterReport:
    sigma_phi: float
    sigma_t: float
    f_clock: float


def jitter_report(mean_power: float, f_clock: float) -> JitterReport:
    """Phase jitter sqrt(P) and timing jitter sigma_phi / (2 pi f_clock)."""
    if mean_power < 0:
        raise ValueError("mean_power must be >= 0")
    if f_clock <= 0:
        raise ValueError("f_clock must be > 0")
    sigma_phi = float(np.sqrt(mean_power))
    return JitterReport(
        sigma_phi=sigma_phi,
        sigma_t=sigma_phi / (2.0 * np.pi * f_clock),
        f_clock=f_clock,
    )


def noise_ensemble(gate: metrics.GateTarget, p, noise_params: NoiseParams,
                   realizations: int = DEFAULT_REALIZATIONS,
                   grid: TimeGrid | None = None, *,
                   improved: noc.ImprovedGateResult | None = None):
    """Mean and std of Tr P over seeded noise trials with the frozen control.

    The control modification is the one computed for the jitter-free sweep;
    each trial adds an independent phase-noise realization to the twist
    phase.  Returns (mean, std, per-trial list); std uses divisor count-1.
    """
    grid = grid or TimeGrid.default_for(p)
    if improved is None:
        improved = noc.improve_gate(gate, p, grid)
    delta_f = improved.control.samples
    samples = [
        sample_realization(noise_params, p.tau0, trial=k) for k in range(realizations)
    ]
    if noise_params.mean_power == 0.0:
        finals = np.broadcast_to(
            improved.improved_unitary, (realizations, gate.dim, gate.dim)
        )
    else:
        finals = propagate.propagate_modified_batch(p, grid, delta_f, samples)
    values = [metrics.trace_p(u, gate.sweep_unitary) for u in finals]
    mean = float(np.mean(values))
    std = float(np.std(values, ddof=1)) if realizations > 1 else 0.0
    return mean, std, values
