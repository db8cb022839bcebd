"""Shared fixtures.

The full-resolution improve-gate runs are expensive (seconds for one-qubit
gates, tens of seconds for the two-qubit gate), so they are computed once
per session and shared by the unit and acceptance tests.
"""

from __future__ import annotations

import numpy as np
import pytest

from nocgf import NOMINAL_PARAMS, gate_target, improve_gate
from nocgf.metrics import GATE_ORDER

ACCEPTANCE_SEED = 20260808


@pytest.fixture(scope="session")
def improved_all():
    """Full-resolution ImprovedGateResult for every gate in the set."""
    return {
        name: improve_gate(gate_target(name), NOMINAL_PARAMS[name])
        for name in GATE_ORDER
    }


@pytest.fixture(scope="session")
def improved_1q(improved_all):
    return {k: v for k, v in improved_all.items() if v.gate.qubits == 1}


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)


def random_unitary(rng, n):
    """Haar-ish unitary via QR of a complex Gaussian matrix."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r))).conj()
