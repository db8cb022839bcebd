"""Finite-precision robustness: perturb one control parameter by one unit
in its last printed significant digit and re-evaluate Tr P with the control
modification frozen at the unperturbed optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import metrics, noc, propagate
from .propagate import TimeGrid

# unit-in-last-place of each printed nominal parameter
ULP = {
    "not": {"lam": 1e-3, "eta4": 1e-7},
    "hadamard": {"lam": 1e-3, "eta4": 1e-7},
    "pi8": {"lam": 1e-3, "eta4": 1e-7},
    "phase": {"lam": 1e-3, "eta4": 1e-7},
    "cphase": {"lam": 1e-1, "eta4": 1e-5, "d1": 1e-3, "d2": 1e-1,
               "d3": 1e-2, "d4": 1e-4, "c4": 1e-4},
}


@dataclass(frozen=True)
class SensitivityRow:
    parameter: str
    value: float
    trp_with_noc: float
    trp_without_noc: float


def parameter_ulp(gate_name: str, parameter: str) -> float:
    try:
        return ULP[gate_name][parameter]
    except KeyError:
        raise ValueError(
            f"no printed-precision entry for {parameter!r} of gate {gate_name!r}"
        ) from None


def run_sensitivity(gate: metrics.GateTarget, p, parameter: str,
                    grid: TimeGrid | None = None, *,
                    improved: noc.ImprovedGateResult | None = None):
    """Tr P with and without the frozen control correction at -1/0/+1 ULP.

    The zero row re-propagates with the unperturbed parameters, so it
    reproduces the ideal pipeline output exactly.
    """
    if not hasattr(p, parameter):
        raise ValueError(f"unknown sweep parameter {parameter!r}")
    grid = grid or TimeGrid.default_for(p)
    if improved is None:
        improved = noc.improve_gate(gate, p, grid)
    delta_f = improved.control.samples
    ulp = parameter_ulp(gate.name, parameter)
    base = getattr(p, parameter)

    rows = []
    for shift in (-1, 0, 1):
        value = base + shift * ulp
        pp = replace(p, **{parameter: value})
        with_noc = propagate.propagate_modified(pp, grid, delta_f)
        without = propagate.propagate_nominal(pp, grid)
        rows.append(
            SensitivityRow(
                parameter=parameter,
                value=value,
                trp_with_noc=metrics.trace_p(with_noc.final, gate.sweep_unitary),
                trp_without_noc=metrics.trace_p(without.final, gate.sweep_unitary),
            )
        )
    return rows
