import numpy as np
import pytest

from nocgf.control import NOMINAL_PARAMS, coupling_matrices, drive_matrix
from nocgf.metrics import GateTarget, gate_target, target_offset
from nocgf.noc import (
    ConfigurationError,
    contracted_drive,
    improve_gate,
    lambda_ansatz,
    strategy1_control,
    strategy1_weights,
    strategy2_solve,
)
from nocgf.propagate import TimeGrid, propagate_nominal
from nocgf import noc
from tests.conftest import random_unitary

HAD = NOMINAL_PARAMS["hadamard"]


def test_lambda_ansatz():
    w = np.array([1.0, 2.0, 3.0, 4.0])
    assert np.allclose(lambda_ansatz(-80.0, w, 160.0), -w)
    val = lambda_ansatz(80.0, w, 160.0)
    assert np.allclose(val, -np.exp(-16.0) * w)
    assert np.linalg.norm(val) == pytest.approx(np.exp(-16) * np.linalg.norm(w))
    assert np.allclose(lambda_ansatz(3.0, np.zeros(4), 160.0), 0.0)


def test_strategy1_weights(rng):
    g = gate_target("hadamard")
    off = target_offset(g.sweep_unitary, g)
    assert np.allclose(strategy1_weights(off).w, 0.0)
    u = random_unitary(rng, 2)
    off = target_offset(u, g)
    w = strategy1_weights(off).w
    assert np.allclose(w, off.delta_b / 20.0)
    assert w[1] == pytest.approx(np.conj(w[2]))  # hermitian off-diagonals
    off4 = target_offset(random_unitary(rng, 4), gate_target("cphase"))
    with pytest.raises(ConfigurationError):
        strategy1_weights(off4)


def test_contracted_drive_closed_form(rng):
    couplings = coupling_matrices(HAD)
    # hand-checkable cases at U0 = I
    g = drive_matrix(np.eye(2, dtype=complex), couplings)
    got = contracted_drive(couplings, g, np.array([1.0, 0, 0, 0]))
    assert np.allclose(got, [[1, 0], [0, -1]])
    got = contracted_drive(couplings, g, np.array([0.0, 1.0, 0, 0]))
    assert np.allclose(got, [[0, 0], [2, 0]])
    # random unitaries and complex weights collapse to the closed form
    for _ in range(200):
        u = random_unitary(rng, 2)
        gbar = np.einsum("ba,jbc,cd->jad", u.conj(), couplings, u)
        gmat = drive_matrix(u, couplings)
        w = rng.normal(size=4) + 1j * rng.normal(size=4)
        got = contracted_drive(gbar, gmat, w)
        want = np.array([[w[0] - w[3], 2 * w[2]], [2 * w[1], w[3] - w[0]]])
        assert np.abs(got - want).max() < 1e-12


def test_strategy1_control_structure():
    grid = TimeGrid(HAD.tau0, 40000)
    traj = propagate_nominal(HAD, grid, unitarity_budget=None)
    g_grid = noc.drive_samples(HAD, traj)
    zero = strategy1_control(g_grid, noc.Strategy1Weights(np.zeros(4)), grid)
    assert np.abs(zero.samples).max() == 0.0
    # at tau = -tau0/2 (U0 = I) the third component is -w1 + w4
    w = np.array([0.3, 0.1 - 0.2j, 0.1 + 0.2j, -0.3])
    ctrl = strategy1_control(g_grid, noc.Strategy1Weights(w), grid)
    assert ctrl.samples[0, 2] == pytest.approx((-w[0] + w[3]).real, abs=1e-12)


def test_improve_gate_synthetic_zero_offset():
    # a target equal to the nominal final unitary gives zero correction
    grid = TimeGrid(HAD.tau0, 40000)
    traj = propagate_nominal(HAD, grid)
    synthetic = GateTarget("synthetic", traj.final.copy(), traj.final.copy(), 1)
    res = improve_gate(synthetic, HAD, grid)
    assert np.abs(res.control.samples).max() < 1e-14
    assert np.abs(res.improved_unitary - res.nominal_unitary).max() < 1e-12
    assert res.improved_report.trace_p < 1e-24


def test_improve_gate_strategy_mismatch():
    with pytest.raises(ConfigurationError):
        improve_gate(gate_target("hadamard"), HAD, strategy=2)
    with pytest.raises(ConfigurationError):
        improve_gate(gate_target("cphase"), NOMINAL_PARAMS["cphase"], strategy=1)
    with pytest.raises(ConfigurationError):
        improve_gate(gate_target("cphase"), HAD)


def test_strategy2_requires_two_qubit_offset(rng):
    g = gate_target("hadamard")
    off = target_offset(random_unitary(rng, 2), g)
    with pytest.raises(ConfigurationError):
        strategy2_solve(np.zeros((3, 16, 3), dtype=complex), off, TimeGrid(1.0, 1))


def test_strategy2_small_grid_properties(rng):
    p = NOMINAL_PARAMS["cphase"]
    grid = TimeGrid(p.tau0, 30000)
    traj = propagate_nominal(p, grid, store="half", unitarity_budget=None)
    g_half = drive_matrix(traj.half_unitaries(),
                          coupling_matrices(p, grid.half_points()))
    gate = gate_target("cphase")
    off = target_offset(traj.final, gate)
    sol = strategy2_solve(g_half, off, grid)
    assert sol.riccati_residual_max <= 1e-14
    norms = np.linalg.norm(sol.delta_y, axis=1)
    assert norms[-1] <= norms[0]
    assert np.allclose(sol.riccati_s, np.eye(16))
    assert np.allclose(sol.weight_r, np.eye(3))
    k = grid.steps // 2
    assert np.allclose(sol.gain(k), np.conj(sol.g_grid[k].T))
    assert np.allclose(sol.weight_q(k), sol.g_grid[k] @ np.conj(sol.g_grid[k].T))


def test_improvement_is_strict_and_large(improved_all):
    for name, res in improved_all.items():
        assert res.improved_report.trace_p < res.nominal_report.trace_p
        if res.gate.qubits == 1:
            assert res.improved_report.trace_p <= 1e-3 * res.nominal_report.trace_p


def test_control_reality_residue(improved_all):
    # pre-truncation imaginary parts are tiny by the hermitian-subspace argument;
    # the stored samples are exactly real
    for res in improved_all.values():
        assert res.control.samples.dtype.kind == "f"
