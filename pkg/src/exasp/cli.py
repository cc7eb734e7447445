"""Command-line entry point.

Subcommands: ``run`` (single propagation, trace CSV + summary JSON),
``sweep`` (cross-product of up to two axes, aggregated CSV), ``spectrum``
(eigenvalue scan along the pathway), ``ground-state`` (ansatz optimization to
a checkpoint file), and ``emit-circuit`` (quantum-assembly text).

Configuration keys mirror the schedule symbols (``omega_max``, ``lambda_max``,
``T``, ``dt``, ``polarization``, ...) and can come from three places with
increasing precedence: a ``key = value`` config file (``--config``),
environment variables with the ``EXASP_`` prefix (e.g. ``EXASP_OMEGA_MAX``),
and command-line flags.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, fields
from typing import Callable

from .experiment import (
    RunConfig,
    format_value,
    run_experiment,
    sweep_experiment,
    write_summary_json,
    write_sweep_csv,
    write_trace_csv,
)

ENV_PREFIX = "EXASP_"


def _parse_polarization(text: str) -> tuple[float, float, float]:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("polarization needs three comma-separated values")
    return tuple(parts)


def _parse_omega_max(text: str):
    return "auto" if text == "auto" else float(text)


def _parse_bool_word(text: str) -> str:
    if text not in ("auto", "on", "off"):
        raise argparse.ArgumentTypeError("expected auto, on, or off")
    return text


@dataclass(frozen=True)
class Setting:
    key: str                      # config-file / env key
    field: str                    # RunConfig field name
    parse: Callable[[str], object]
    help: str


SETTINGS: list[Setting] = [
    Setting("model", "model", str, "twolevel | hubbard | molecule"),
    Setting("epsilon", "epsilon", float, "two-level splitting"),
    Setting("g", "g", float, "two-level off-diagonal coupling"),
    Setting("mu", "mu", float, "two-level transition dipole"),
    Setting("sites", "sites", int, "Hubbard chain length"),
    Setting("t", "t", float, "Hubbard hopping"),
    Setting("u", "u", float, "Hubbard on-site repulsion"),
    Setting("n_electrons", "n_electrons", int, "electron count (default: half filling)"),
    Setting("integrals", "integrals", str, "integrals file (molecule model)"),
    Setting("dipoles", "dipoles", str, "dipole-integrals companion file"),
    Setting("polarization", "polarization", _parse_polarization,
            "photon polarization, e.g. 0,1,0"),
    Setting("omega_max", "omega_max", _parse_omega_max,
            "peak photon frequency, or 'auto' for 2 * excitation energy"),
    Setting("lambda_max", "lambda_max", float, "peak coupling strength"),
    Setting("T", "total_time", float, "total evolution time"),
    Setting("dt", "dt", float, "time step"),
    Setting("method", "method", str, "exact | trotter"),
    Setting("ground", "ground", str, "exact | tups | checkpoint path"),
    Setting("layers", "layers", int, "ansatz layers for tups ground state"),
    Setting("bhpt_steps", "bhpt_steps", int, "basin-hopping steps per replica"),
    Setting("bhpt_replicas", "bhpt_replicas", int, "basin-hopping replicas"),
    Setting("seed", "seed", int, "random seed"),
    Setting("record_every", "record_every", int, "trace recording stride"),
    Setting("bound", "bound", _parse_bool_word,
            "include the adiabatic time bound in the summary (auto|on|off)"),
    Setting("bound_grid", "bound_grid", int, "grid size for the time bound"),
    Setting("workers", "workers", int, "parallel workers for sweeps"),
]

_BY_KEY = {s.key: s for s in SETTINGS}


def read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in _BY_KEY:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = val.strip()
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, config file, environment, and flags (flags win)."""
    merged: dict[str, object] = {}
    if getattr(args, "config", None):
        for key, text in read_config_file(args.config).items():
            merged[_BY_KEY[key].field] = _BY_KEY[key].parse(text)
    for setting in SETTINGS:
        env = os.environ.get(ENV_PREFIX + setting.key.upper())
        if env is not None:
            merged[setting.field] = setting.parse(env)
    for setting in SETTINGS:
        value = getattr(args, setting.field, None)
        if value is not None:
            merged[setting.field] = value
    valid = {f.name for f in fields(RunConfig)}
    return RunConfig(**{k: v for k, v in merged.items() if k in valid})


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value configuration file")
    for s in SETTINGS:
        flag = "--" + s.key.replace("_", "-")
        parser.add_argument(flag, dest=s.field, type=s.parse, default=None,
                            help=s.help)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exasp",
        description="Adiabatic preparation of bright excited states via an "
                    "explicitly coupled photon mode.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single propagation run")
    _add_config_flags(p_run)
    p_run.add_argument("--out", default="run", help="output prefix (.csv, .json)")

    p_sweep = sub.add_parser("sweep", help="cross-product parameter sweep")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--sweep", action="append", required=True,
                         metavar="KEY=V1,V2,...",
                         help="swept axis (repeat for a second axis)")
    p_sweep.add_argument("--out", default="sweep", help="output prefix (.csv)")

    p_spec = sub.add_parser("spectrum", help="eigenvalue scan along the pathway")
    _add_config_flags(p_spec)
    p_spec.add_argument("--n-points", type=int, default=51)
    p_spec.add_argument("--n-states", type=int, default=8)
    p_spec.add_argument("--out", default="spectrum", help="output prefix (.csv)")

    p_gs = sub.add_parser("ground-state", help="optimize the tups ansatz")
    _add_config_flags(p_gs)
    p_gs.add_argument("--out", default="ansatz.ckpt", help="checkpoint file")

    p_emit = sub.add_parser("emit-circuit", help="emit the Trotter circuit")
    _add_config_flags(p_emit)
    p_emit.add_argument("--optimize", action="store_true",
                        help="apply the peephole pass before writing")
    p_emit.add_argument("--out", default=None, help="output file (default stdout)")
    return parser


def _parse_sweep_axes(specs: list[str]) -> list[tuple[str, list]]:
    axes = []
    for spec in specs:
        key, eq, rest = spec.partition("=")
        if not eq or not rest:
            raise ValueError(f"bad sweep spec {spec!r}, expected KEY=V1,V2,...")
        if key not in _BY_KEY:
            raise ValueError(f"unknown sweep key {key!r}")
        setting = _BY_KEY[key]
        axes.append((setting.field, [setting.parse(v) for v in rest.split(",")]))
    return axes


def cmd_run(args) -> int:
    cfg = resolve_config(args)
    result = run_experiment(cfg)
    write_trace_csv(result.trace, args.out + ".csv")
    write_summary_json(result.summary, args.out + ".json")
    final = result.summary["final"]
    print(f"wrote {args.out}.csv and {args.out}.json")
    print(f"final energy {format_value(final['e_total'])}  "
          f"p0 {format_value(final['p_photon0'])}  "
          f"fidelity {format_value(final['fid_target_raw'])}")
    return 0


def cmd_sweep(args) -> int:
    cfg = resolve_config(args)
    axes = _parse_sweep_axes(args.sweep)
    header, rows = sweep_experiment(cfg, axes, workers=cfg.workers)
    write_sweep_csv(header, rows, args.out + ".csv")
    print(f"wrote {args.out}.csv ({len(rows)} runs)")
    return 0


def cmd_spectrum(args) -> int:
    from .analysis import pathway_spectrum
    from .coupling import couple
    from .models import exact_diagonalize, find_first_bright_state
    from .pathway import PathwaySchedule
    from .propagator import prepare_initial
    from .statevector import init_product
    from .experiment import build_system

    cfg = resolve_config(args)
    sys, n_el, m_s = build_system(cfg)
    cs = couple(sys, cfg.polarization)
    spectrum = exact_diagonalize(sys, n_el, m_s)
    idx, gap = find_first_bright_state(spectrum, cs.projected_dipole)
    omega_max = 2.0 * gap if cfg.omega_max == "auto" else float(cfg.omega_max)
    sched = PathwaySchedule(omega_max=omega_max, lambda_max=cfg.lambda_max,
                            total_time=cfg.total_time, n_steps=cfg.n_steps)
    points = pathway_spectrum(
        cs, sched, n_points=args.n_points, n_states=args.n_states,
        n_electrons=n_el, m_s=m_s,
        initial=prepare_initial(cs, spectrum[0][1]),
        target=init_product(spectrum[idx][1], 0))

    n_states = len(points[0].energies)
    header = (["s"] + [f"e{k}" for k in range(n_states)]
              + ["followed_index", "followed_energy", "overlap_initial",
                 "overlap_target"])
    with open(args.out + ".csv", "w") as f:
        f.write(",".join(header) + "\n")
        for p in points:
            row = ([p.s] + list(p.energies) + [p.followed_index, p.followed_energy,
                                               p.overlap_initial, p.overlap_target])
            f.write(",".join(format_value(x) for x in row) + "\n")
    print(f"wrote {args.out}.csv ({len(points)} points, {n_states} states)")
    return 0


def cmd_ground_state(args) -> int:
    from .ansatz import BHPTConfig, TupsAnsatz, optimize, save_checkpoint
    from .models import exact_diagonalize
    from .experiment import build_system

    cfg = resolve_config(args)
    if cfg.model != "hubbard":
        raise SystemExit("ground-state optimization is wired for the Hubbard model")
    sys, n_el, m_s = build_system(cfg)
    exact = exact_diagonalize(sys, n_el, m_s)[0]
    ansatz = TupsAnsatz(n_orbitals=cfg.sites, n_layers=cfg.layers,
                        n_electrons=cfg.n_electrons)
    bhpt = BHPTConfig(n_replicas=cfg.bhpt_replicas, n_steps=cfg.bhpt_steps,
                      temp_min=1e-4 * cfg.t, temp_max=1e-2 * cfg.t,
                      rms_gtol=1e-5 * cfg.t, seed=cfg.seed)
    res = optimize(ansatz, sys.h_e, bhpt, exact_ground=exact[1])
    save_checkpoint(args.out, ansatz, res.params, energy_value=res.energy)
    print(f"wrote {args.out}")
    print(f"energy {format_value(res.energy)}  exact {format_value(exact[0])}  "
          f"fidelity {format_value(res.fidelity)}")
    return 0


def cmd_emit_circuit(args) -> int:
    from .circuits import emit_trotter_circuit, peephole_optimize, two_level_prep, write_qasm
    from .coupling import couple
    from .models import exact_diagonalize, find_first_bright_state
    from .pathway import PathwaySchedule
    from .experiment import build_system

    cfg = resolve_config(args)
    sys, n_el, m_s = build_system(cfg)
    cs = couple(sys, cfg.polarization)
    spectrum = exact_diagonalize(sys, n_el, m_s)
    _, gap = find_first_bright_state(spectrum, cs.projected_dipole)
    omega_max = 2.0 * gap if cfg.omega_max == "auto" else float(cfg.omega_max)
    sched = PathwaySchedule(omega_max=omega_max, lambda_max=cfg.lambda_max,
                            total_time=cfg.total_time, n_steps=cfg.n_steps)
    prep = two_level_prep(cfg.epsilon, cfg.g) if cfg.model == "twolevel" else None
    circuit = emit_trotter_circuit(cs, sched, ground_prep=prep)
    if args.optimize:
        circuit = peephole_optimize(circuit)
    text = write_qasm(circuit)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
        print(f"wrote {args.out} ({len(circuit.gates)} gates, "
              f"{circuit.count('cx')} cx)")
    else:
        print(text, end="")
    return 0


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "spectrum": cmd_spectrum,
    "ground-state": cmd_ground_state,
    "emit-circuit": cmd_emit_circuit,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
