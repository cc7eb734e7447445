"""Experiment orchestration: configuration, runs, sweeps, and file output.

A run builds the requested model, diagonalizes it to get the ground state
and the first bright target, resolves the schedule (explicit ``omega_max``
or the ``2 * dE`` estimate), propagates, and reports a trace plus a summary.
This module is pure library code; the command-line front end lives in
``cli``.

Trace CSV schema (one row per recorded step)::

    step,s,omega,lambda,e_total,e_electronic,e_postselected,p_photon0,
    fid_target_raw,fid_target_post,fid_initial

Floats are serialized with 17 significant digits, so identical configurations
produce byte-identical files.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np

from .analysis import fidelity_report
from .ansatz import BHPTConfig, TupsAnsatz, apply_ansatz, load_checkpoint, optimize
from .coupling import CoupledSystem, couple
from .fcidump import parse_integrals_file
from .models import (
    ElectronicSystem,
    HubbardParams,
    TwoLevelParams,
    build_hubbard,
    build_molecular,
    build_two_level,
    exact_diagonalize,
    find_first_bright_state,
)
from .pathway import PathwaySchedule, adiabatic_time_bound
from .propagator import PropagationTrace, evolve, prepare_initial
from .statevector import StateVector, fidelity, init_product

#: Sector dimension up to which the summary includes the adiabatic time bound.
BOUND_AUTO_DIM = 300

FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class RunConfig:
    """Flat configuration of one propagation experiment."""

    model: str = "twolevel"                 # twolevel | hubbard | molecule
    # two-level parameters
    epsilon: float = 1.0
    g: float = 0.0
    mu: float = 1.0
    # Hubbard parameters
    sites: int = 2
    t: float = 1.0
    u: float = 0.0
    n_electrons: int | None = None
    # molecular input files
    integrals: str | None = None
    dipoles: str | None = None
    # coupling and schedule
    polarization: tuple[float, float, float] = (0.0, 0.0, 1.0)
    omega_max: float | str = "auto"
    lambda_max: float = 1.0
    total_time: float = 10.0
    dt: float = 0.1
    method: str = "exact"                   # exact | trotter
    # initial state: "exact" or a tups checkpoint path
    ground: str = "exact"
    layers: int = 1
    bhpt_steps: int = 250
    bhpt_replicas: int = 8
    seed: int = 0
    # output control
    record_every: int | None = None
    bound: str = "auto"                     # auto | on | off
    bound_grid: int = 101
    workers: int | None = None

    @property
    def n_steps(self) -> int:
        n = int(round(self.total_time / self.dt))
        return max(n, 1)


@dataclass
class RunResult:
    config: RunConfig
    trace: PropagationTrace
    summary: dict
    final_state: StateVector


def build_system(cfg: RunConfig) -> tuple[ElectronicSystem, int | None, float]:
    """Electronic system plus its (n_electrons, m_s) diagonalization sector."""
    if cfg.model == "twolevel":
        return build_two_level(TwoLevelParams(cfg.epsilon, cfg.g, cfg.mu)), None, 0.0
    if cfg.model == "hubbard":
        params = HubbardParams(n_sites=cfg.sites, t=cfg.t, u=cfg.u,
                               n_electrons=cfg.n_electrons)
        return build_hubbard(params), params.electrons, 0.0
    if cfg.model == "molecule":
        if not cfg.integrals:
            raise ValueError("molecule model requires an integrals file")
        integrals = parse_integrals_file(cfg.integrals, cfg.dipoles)
        n_el = cfg.n_electrons if cfg.n_electrons is not None else integrals.n_electrons
        return build_molecular(integrals), n_el, integrals.ms2 / 2.0
    raise ValueError(f"unknown model {cfg.model!r}")


def _ground_state(cfg: RunConfig, sys: ElectronicSystem,
                  exact_ground: StateVector) -> tuple[StateVector, dict]:
    if cfg.ground == "exact":
        return exact_ground, {"ground": "exact"}
    if cfg.ground == "tups":
        if cfg.model != "hubbard":
            raise ValueError("tups ground state is only wired for the Hubbard model")
        ansatz = TupsAnsatz(n_orbitals=cfg.sites, n_layers=cfg.layers,
                            n_electrons=cfg.n_electrons)
        bhpt = BHPTConfig(n_replicas=cfg.bhpt_replicas, n_steps=cfg.bhpt_steps,
                          temp_min=1e-4 * cfg.t, temp_max=1e-2 * cfg.t,
                          rms_gtol=1e-5 * cfg.t, seed=cfg.seed)
        res = optimize(ansatz, sys.h_e, bhpt, exact_ground=exact_ground)
        state = apply_ansatz(ansatz, res.params)
        return state, {"ground": "tups", "layers": cfg.layers,
                       "ground_energy": res.energy,
                       "ground_rms_gradient": res.rms_gradient}
    # otherwise: a checkpoint path
    ansatz, params = load_checkpoint(cfg.ground)
    return apply_ansatz(ansatz, params), {"ground": cfg.ground}


def run_experiment(cfg: RunConfig) -> RunResult:
    started = time.perf_counter()
    sys, n_el, m_s = build_system(cfg)
    cs = couple(sys, cfg.polarization)

    spectrum = exact_diagonalize(sys, n_el, m_s)
    exact_ground = spectrum[0][1]
    target_index, gap = find_first_bright_state(spectrum, cs.projected_dipole)
    target_electronic = spectrum[target_index][1]

    if cfg.omega_max == "auto":
        omega_max = 2.0 * gap
    else:
        omega_max = float(cfg.omega_max)
    sched = PathwaySchedule(omega_max=omega_max, lambda_max=cfg.lambda_max,
                            total_time=cfg.total_time, n_steps=cfg.n_steps)

    ground, ground_info = _ground_state(cfg, sys, exact_ground)
    eps_initial = 1.0 - fidelity(ground, exact_ground)
    psi0 = prepare_initial(cs, ground)
    target_full = init_product(target_electronic, 0)

    final, trace = evolve(cs, sched, psi0, method=cfg.method,
                          record_every=cfg.record_every, target=target_full)
    report = fidelity_report(final, cs, target_electronic)

    bound = None
    if cfg.bound == "on" or (cfg.bound == "auto"
                             and _sector_dim(cs, n_el, m_s) <= BOUND_AUTO_DIM):
        bound = adiabatic_time_bound(cs, sched, grid_size=cfg.bound_grid,
                                     n_electrons=n_el, m_s=m_s)

    summary = {
        "model": cfg.model,
        "method": cfg.method,
        "seed": cfg.seed,
        "polarization": list(cs.polarization),
        "schedule": {"omega_max": omega_max, "lambda_max": cfg.lambda_max,
                     "total_time": cfg.total_time, "dt": sched.dt,
                     "n_steps": sched.n_steps},
        "target_index": target_index,
        "excitation_energy": gap,
        "target_energy": spectrum[target_index][0],
        "ground_energy_exact": spectrum[0][0],
        "eps_initial": eps_initial,
        "final": {
            "e_total": trace.final.e_total,
            "e_electronic": trace.final.e_electronic,
            "e_postselected": trace.final.e_postselected,
            "p_photon0": report.p0,
            "fid_target_raw": report.fid_raw,
            "fid_target_post": report.fid_postselected,
            "fid_initial": trace.final.fid_initial,
            "eps_final": report.eps_final,
            "eps_final_post": report.eps_final_post,
        },
        "adiabatic_time_bound": bound,
        "wall_time_s": time.perf_counter() - started,
    }
    summary.update(ground_info)
    return RunResult(config=cfg, trace=trace, summary=summary, final_state=final)


def _sector_dim(cs: CoupledSystem, n_el: int | None, m_s: float) -> int:
    from .models import sector_indices, spin_sector_constraints
    constraints = ()
    if n_el is not None:
        constraints = spin_sector_constraints(cs.electronic.n_qubits, n_el, m_s)
    return sector_indices(cs.n_qubits, constraints).size


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

SWEEPABLE = {"total_time", "dt", "u", "t", "sites", "layers", "lambda_max",
             "omega_max", "epsilon", "g", "mu", "seed", "method"}

SWEEP_COLUMNS = ("e_total", "e_electronic", "e_postselected", "p_photon0",
                 "fid_target_raw", "fid_target_post", "fid_initial",
                 "eps_initial", "eps_final", "excitation_energy", "omega_max")


def _run_for_sweep(args: tuple[RunConfig, tuple]) -> dict:
    cfg, values = args
    result = run_experiment(cfg)
    row = {"values": values}
    row.update(result.summary["final"])
    row["eps_initial"] = result.summary["eps_initial"]
    row["excitation_energy"] = result.summary["excitation_energy"]
    row["omega_max"] = result.summary["schedule"]["omega_max"]
    return row


def sweep_experiment(
    base: RunConfig, axes: list[tuple[str, list]], workers: int | None = None
) -> tuple[list[str], list[list]]:
    """Cross-product runs over one or two swept keys.

    Returns (header, rows) for the aggregated CSV; run order is the
    deterministic cross product of the axes in the given order.
    """
    if not 1 <= len(axes) <= 2:
        raise ValueError("sweeps take one or two axes")
    for key, values in axes:
        if key not in SWEEPABLE:
            raise ValueError(f"cannot sweep key {key!r}")
        if not values:
            raise ValueError(f"empty sweep range for {key!r}")

    jobs = []
    for combo in product(*(values for _, values in axes)):
        cfg = base
        for (key, _), value in zip(axes, combo):
            cfg = replace(cfg, **{key: value})
        jobs.append((cfg, combo))

    if workers is None:
        workers = base.workers
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_for_sweep, jobs))
    else:
        results = [_run_for_sweep(job) for job in jobs]

    header = [key for key, _ in axes] + list(SWEEP_COLUMNS)
    rows = []
    for row in results:
        out = list(row["values"])
        for col in SWEEP_COLUMNS:
            out.append(row.get(col, np.nan))
        rows.append(out)
    return header, rows


# ---------------------------------------------------------------------------
# file output
# ---------------------------------------------------------------------------

def format_value(x) -> str:
    if isinstance(x, float):
        return FLOAT_FMT % x
    return str(x)


def write_trace_csv(trace: PropagationTrace, path: str) -> None:
    with open(path, "w") as f:
        f.write(",".join(trace.COLUMNS) + "\n")
        for row in trace.rows():
            f.write(",".join(format_value(x) for x in row) + "\n")


def write_sweep_csv(header: list[str], rows: list[list], path: str) -> None:
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(format_value(x) for x in row) + "\n")


def write_summary_json(summary: dict, path: str) -> None:
    with open(path, "w") as f:
        json.dump(_jsonable(summary), f, indent=2, allow_nan=True)
        f.write("\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return None if np.isnan(obj) else repr(obj)
    return obj
