"""Twisted-rapid-passage control fields, sweep Hamiltonians, coupling
matrices and the drive matrix.

All quantities are dimensionless.  A sweep runs over tau in
[-tau0/2, +tau0/2]; the longitudinal field inverts linearly while the
transverse field twists with the quartic phase phi4(tau).  One- and
two-qubit systems share the same twist profile; the two-qubit Hamiltonian
adds Ising coupling and a degeneracy-breaking shift of strength c4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lincore import (
    ID2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    hermitian_eigensystem,
    unitarity_defect,
    vectorize,
)

# two-qubit Pauli tensors, qubit 1 = left factor
SX1 = np.kron(SIGMA_X, ID2)
SY1 = np.kron(SIGMA_Y, ID2)
SZ1 = np.kron(SIGMA_Z, ID2)
SX2 = np.kron(ID2, SIGMA_X)
SY2 = np.kron(ID2, SIGMA_Y)
SZ2 = np.kron(ID2, SIGMA_Z)
ZZ = np.kron(SIGMA_Z, SIGMA_Z)

# projector onto |10>, the state the top sweep level connects to away from
# the edge anticrossings; used by the degeneracy-breaking term (see
# two_qubit_hamiltonian)
P_E4_DIABATIC = np.zeros((4, 4), dtype=complex)
P_E4_DIABATIC[2, 2] = 1.0

DEGENERACY_GAP = 1e-10


class DegeneracyError(RuntimeError):
    """Top two sweep levels are degenerate; the eigenprojector is undefined."""


@dataclass(frozen=True)
class SweepParams1Q:
    """Dimensionless sweep parameters of a one-qubit gate.

    lam   inversion rate, eta4 quartic twist strength, tau0 inversion time.
    """

    lam: float
    eta4: float
    tau0: float = 160.0

    def __post_init__(self):
        for name in ("lam", "eta4", "tau0"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v}")

    @property
    def qubits(self) -> int:
        return 1

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True)
class SweepParams2Q:
    """Dimensionless sweep parameters of the two-qubit gate.

    d1..d4 are the Larmor mismatch, detuning, drive-ratio and Ising
    couplings; c4 is the degeneracy-breaking strength.
    """

    lam: float
    eta4: float
    tau0: float = 120.0
    d1: float = 0.0
    d2: float = 0.0
    d3: float = 0.0
    d4: float = 0.0
    c4: float = 0.0

    def __post_init__(self):
        for name in ("lam", "eta4", "tau0"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v}")
        for name in ("d1", "d2", "d3", "d4", "c4"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def qubits(self) -> int:
        return 2

    @property
    def dim(self) -> int:
        return 4


# nominal sweep parameters of the five reference gates
NOMINAL_PARAMS = {
    "not": SweepParams1Q(lam=6.965, eta4=2.189e-4),
    "hadamard": SweepParams1Q(lam=7.820, eta4=1.792e-4),
    "pi8": SweepParams1Q(lam=8.465, eta4=1.675e-4),
    "phase": SweepParams1Q(lam=8.073, eta4=1.666e-4),
    "cphase": SweepParams2Q(
        lam=5.1, eta4=2.4e-4, d1=11.702, d2=-2.6, d3=-0.41, d4=6.6650, c4=5.0003
    ),
}


def _noise_offset(tau, noise):
    """Phase-noise offset at tau: scalar, callable, or realization-like."""
    if noise is None:
        return 0.0
    if hasattr(noise, "evaluate"):
        return noise.evaluate(tau)
    if callable(noise):
        return noise(tau)
    return noise  # constant offset


def twist_phase(tau, p, noise=None):
    """Quartic twist phase phi4(tau) = (eta4 / 2 lam) tau^4, plus optional noise."""
    tau = np.asarray(tau, dtype=float)
    return (p.eta4 / (2.0 * p.lam)) * tau**4 + _noise_offset(tau, noise)


def one_qubit_field(tau, p: SweepParams1Q, noise=None) -> np.ndarray:
    """Control field (cos phi4, -sin phi4, tau)/lam; shape (..., 3).

    The transverse twist sense is the one for which the sweep crosses
    resonance at tau = 0 and +-1/sqrt(eta4): in the frame co-rotating with
    the twist, the longitudinal field is (tau - eta4 tau^3)/lam, whose zeros
    are exactly those times.  The opposite sense has a single resonance and
    a qualitatively different parameter sensitivity.
    """
    tau = np.asarray(tau, dtype=float)
    phi = twist_phase(tau, p, noise)
    return np.stack(
        [np.cos(phi) / p.lam, -np.sin(phi) / p.lam, tau / p.lam], axis=-1
    )


def one_qubit_hamiltonian(f: np.ndarray) -> np.ndarray:
    """Zeeman form -(f1 sx + f2 sy + f3 sz) for field samples (..., 3)."""
    f = np.asarray(f)
    return -(
        f[..., 0, None, None] * SIGMA_X
        + f[..., 1, None, None] * SIGMA_Y
        + f[..., 2, None, None] * SIGMA_Z
    )


def _two_qubit_bare(tau, p: SweepParams2Q, noise=None) -> np.ndarray:
    tau = np.asarray(tau, dtype=float)
    phi = twist_phase(tau, p, noise)
    c, s = np.cos(phi), np.sin(phi)
    z1 = (-(p.d1 + p.d2) / 2.0 + tau / p.lam)[..., None, None]
    z2 = (-p.d2 / 2.0 + tau / p.lam)[..., None, None]
    c = c[..., None, None]
    s = s[..., None, None]
    return (
        z1 * SZ1
        + z2 * SZ2
        - (p.d3 / p.lam) * (c * SX1 + s * SY1)
        - (1.0 / p.lam) * (c * SX2 + s * SY2)
        - (np.pi * p.d4 / 2.0) * ZZ
    )


def two_qubit_hamiltonian(
    tau, p: SweepParams2Q, noise=None, projector: str = "diabatic"
) -> np.ndarray:
    """Two-qubit sweep Hamiltonian including the c4 degeneracy-breaking term.

    projector selects how the shifted level E4 is identified:
      "diabatic"       c4 |10><10|, the z-basis state the top sweep level is
                       connected to away from the edge anticrossings.  This is
                       the production default; it reproduces the reference
                       controlled-phase gate.
      "instantaneous"  c4 |E4(tau)><E4(tau)| with |E4> the top eigenvector of
                       the bare Hamiltonian at each tau.  Near the sweep edges
                       the top two levels anticross and |E4> hybridizes, which
                       measurably degrades the gate; kept for comparison.
    """
    h = _two_qubit_bare(tau, p, noise)
    if projector == "diabatic":
        return h + p.c4 * P_E4_DIABATIC
    if projector == "instantaneous":
        w, v = hermitian_eigensystem(h)
        gap = w[..., 3] - w[..., 2]
        if np.any(gap < DEGENERACY_GAP):
            raise DegeneracyError(
                f"top eigenvalue pair closes to {float(np.min(gap)):.3e}"
            )
        top = v[..., :, 3]
        p4 = top[..., :, None] * np.conj(top[..., None, :])
        return h + p.c4 * p4
    raise ValueError(f"unknown projector mode {projector!r}")


def sweep_hamiltonian(tau, p, noise=None) -> np.ndarray:
    """Nominal sweep Hamiltonian for either system at times tau (...,)."""
    if p.qubits == 1:
        return one_qubit_hamiltonian(one_qubit_field(tau, p, noise))
    return two_qubit_hamiltonian(tau, p, noise)


def coupling_matrices(p, tau=None) -> np.ndarray:
    """Control coupling matrices G_j = dH/dF_j, stacked as (..., 3, n, n).

    One qubit: the constant triple (-sx, -sy, -sz).  Two qubits: the
    tau-dependent triple with the inter-qubit frame rotation angles fixed by
    d1 and d3 (d3 = 1 is a pole of that parametrization and is rejected).
    """
    if p.qubits == 1:
        g = np.stack([-SIGMA_X, -SIGMA_Y, -SIGMA_Z])
        if tau is None or np.ndim(tau) == 0:
            return g
        return np.broadcast_to(
            g, (*np.shape(tau), 3, 2, 2)
        ).copy()
    if tau is None:
        raise ValueError("two-qubit couplings are time dependent; pass tau")
    if p.d3 == 1.0:
        raise ValueError("two-qubit couplings are singular at d3 = 1")
    tau = np.asarray(tau, dtype=float)
    th2 = p.d1 / (p.d3 - 1.0)
    th1 = th2 + p.d1
    c1, s1 = np.cos(th1 * tau)[..., None, None], np.sin(th1 * tau)[..., None, None]
    c2, s2 = np.cos(th2 * tau)[..., None, None], np.sin(th2 * tau)[..., None, None]
    g1 = p.d3 * (c1 * SX1 + s1 * SY1) + (c2 * SX2 + s2 * SY2)
    g2 = p.d3 * (c1 * SY1 - s1 * SX1) + (c2 * SY2 - s2 * SX2)
    g3 = np.broadcast_to(p.d3 * SZ1 + SZ2, g1.shape).copy()
    return np.stack([g1, g2, g3], axis=-3)


def drive_matrix(u0: np.ndarray, couplings: np.ndarray) -> np.ndarray:
    """Drive matrix G with column j = vec(U0† G_j U0); shape (..., n², 3).

    u0 must be unitary to a defect of 1e-8; couplings has shape (..., 3, n, n).
    """
    u0 = np.asarray(u0)
    if not (unitarity_defect(u0) <= 1e-8):
        raise ValueError("drive_matrix requires a unitary propagator")
    udag = np.conj(np.swapaxes(u0, -1, -2))
    gbar = udag[..., None, :, :] @ couplings @ u0[..., None, :, :]
    return np.swapaxes(vectorize(gbar), -1, -2)


def resonance_times(p) -> tuple[np.ndarray, np.ndarray]:
    """Sweep resonance times {0, ±1/sqrt(eta4)} and an inside-sweep mask."""
    if p.eta4 <= 0:
        raise ValueError("eta4 must be positive")
    r = 1.0 / np.sqrt(p.eta4)
    times = np.array([-r, 0.0, r])
    inside = np.abs(times) <= p.tau0 / 2.0
    return times, inside
