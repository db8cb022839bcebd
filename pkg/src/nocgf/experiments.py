"""Experiment orchestration and CSV persistence.

Every CSV row carries its own provenance (seed, grid steps, code version) so
it can be re-derived from the row alone.  Output is deterministic for a
fixed config and seed, except for the leading '#' comment line which holds
the timestamp.
"""

from __future__ import annotations

import concurrent.futures
import io
import os
import time

from . import __version__, metrics, noc, noise, sensitivity, spectral
from .config import ExperimentConfig


def worker_count() -> int:
    """Parallelism cap from NOCGF_THREADS (0 = auto, default 1)."""
    raw = os.environ.get("NOCGF_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"NOCGF_THREADS must be an integer, got {raw!r}") from None
    if n == 0:
        return os.cpu_count() or 1
    return max(1, n)


def _map_ordered(fn, items):
    """Apply fn over items, possibly in a thread pool; preserves item order."""
    n = worker_count()
    items = list(items)
    if n <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def format_value(v) -> str:
    """Floats at 6 significant digits, scientific below 1e-3."""
    if isinstance(v, bool) or not isinstance(v, float):
        return str(v)
    if v != 0.0 and abs(v) < 1e-3:
        return f"{v:.5e}"
    return f"{v:.6g}"


def render_csv(header, rows, meta: str = "") -> str:
    out = io.StringIO()
    stamp = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())
    out.write(f"# nocgf {__version__} {stamp} {meta}".rstrip() + "\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(format_value(v) for v in row) + "\n")
    return out.getvalue()


def write_csv(path, header, rows, meta: str = "") -> str:
    text = render_csv(header, rows, meta)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def improve_for(cfg: ExperimentConfig, gate_name: str) -> noc.ImprovedGateResult:
    gate = metrics.gate_target(gate_name)
    p = cfg.params_for(gate_name)
    return noc.improve_gate(gate, p, cfg.grid_for(p))


IDEAL_HEADER = (
    "gate", "trp_with_noc", "trp_without_noc", "dstar_with_noc",
    "fidelity_with_noc", "fidelity_without_noc", "steps", "seed", "version",
)


def run_ideal_table(cfg: ExperimentConfig, results=None):
    """One row per configured gate: Tr P with and without the correction."""
    results = results or {}

    def one(name):
        res = results.get(name) or improve_for(cfg, name)
        p = cfg.params_for(name)
        return (
            name,
            res.improved_report.trace_p,
            res.nominal_report.trace_p,
            res.improved_report.d_star,
            res.improved_report.fidelity,
            res.nominal_report.fidelity,
            cfg.grid_for(p).steps,
            cfg.seed,
            __version__,
        )

    rows = _map_ordered(one, cfg.gates)
    return sorted(rows, key=lambda r: metrics.GATE_ORDER.index(r[0]))


BANDWIDTH_HEADER = ("gate", "omega01", "omega01_mhz", "t_phys_us", "steps",
                    "seed", "version")


def run_bandwidth_table(cfg: ExperimentConfig, results=None):
    """Per-gate 10%-threshold bandwidth of the control modification."""
    results = results or {}

    def one(name):
        res = results.get(name) or improve_for(cfg, name)
        p = cfg.params_for(name)
        rep = spectral.bandwidth_report(res.control, cfg.t_phys_for(p))
        key = "one_qubit" if p.qubits == 1 else "two_qubit"
        return (
            name, rep.omega01, rep.omega01_mhz, cfg.t_phys_us[key],
            cfg.grid_for(p).steps, cfg.seed, __version__,
        )

    rows = _map_ordered(one, cfg.gates)
    return sorted(rows, key=lambda r: metrics.GATE_ORDER.index(r[0]))


JITTER_HEADER = ("gate", "power", "sigma_t_ps", "mean_trp", "std_trp",
                 "realizations", "steps", "seed", "version")


def run_jitter_sweep(cfg: ExperimentConfig, powers, results=None):
    """Noise-averaged Tr P per (gate, mean power)."""
    results = results or {}
    nz = cfg.noise
    jobs = [(g, float(pw)) for g in cfg.gates for pw in powers]

    def one(job):
        name, power = job
        gate = metrics.gate_target(name)
        p = cfg.params_for(name)
        grid = cfg.grid_for(p)
        res = results.get(name) or improve_for(cfg, name)
        np_ = noise.default_noise_params(
            p.qubits, power, seed=cfg.noise_seed(), sigma=nz["sigma"],
            tau_f=nz["tau_f"],
        )
        mean, std, _ = noise.noise_ensemble(
            gate, p, np_, nz["realizations"], grid, improved=res
        )
        sigma_t_ps = noise.jitter_report(power, nz["f_clock_hz"]).sigma_t * 1e12
        return (
            name, power, sigma_t_ps, mean, std, nz["realizations"],
            grid.steps, cfg.noise_seed(), __version__,
        )

    rows = _map_ordered(one, jobs)
    return sorted(rows, key=lambda r: (metrics.GATE_ORDER.index(r[0]), r[1]))


SWEEP_HEADER = ("parameter", "value", "trp_with_noc", "trp_without_noc")


def run_sweep(cfg: ExperimentConfig, parameter: str, gate_name: str,
              results=None):
    """Finite-precision sensitivity rows for one gate and parameter."""
    results = results or {}
    gate = metrics.gate_target(gate_name)
    p = cfg.params_for(gate_name)
    res = results.get(gate_name) or improve_for(cfg, gate_name)
    rows = sensitivity.run_sensitivity(
        gate, p, parameter, cfg.grid_for(p), improved=res
    )
    return [(r.parameter, r.value, r.trp_with_noc, r.trp_without_noc) for r in rows]


def run_spectrum(cfg: ExperimentConfig, gate_name: str, out,
                 component: str = "x", results=None):
    """Export the control-modification spectrum of one gate to CSV."""
    results = results or {}
    res = results.get(gate_name) or improve_for(cfg, gate_name)
    s = spectral.control_spectrum(res.control, component)
    spectral.export_spectrum(s, out)
    return s
