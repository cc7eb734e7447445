"""Time evolution along the adiabatic pathway.

Drives ``N`` steps of ``exp(-i dT H(s_k))`` with the left-endpoint coordinate
``s_k = k/N``, either exactly (Krylov exponential per step) or with a
first-order product formula over the Hamiltonian's Pauli terms.  The Pauli
term *structure* is fixed along the path, so it is compiled once and only the
four block prefactors (electronic, photon frequency, coupling, dipole
self-energy) are updated per step.

Trotter factor order is deterministic: electronic terms in canonical order,
then the photon-frequency term, then coupling terms, then self-energy terms.
Identity strings contribute a global phase only; the phase is accumulated in
a scalar and never applied to the amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .coupling import CoupledSystem
from .pathway import PathwaySchedule
from .pauli import PauliString, PauliSum
from .statevector import (
    CompiledPauliSum,
    LinearCombinationAction,
    StateVector,
    apply_pauli_rotation,
    evolve_exact_step,
    init_product,
    outcome_probability,
    project_qubit,
)

BLOCK_ORDER = ("electronic", "photon", "coupling", "dse")


@dataclass(frozen=True)
class TraceRecord:
    """One sampled point of a propagation run (state after ``step`` steps)."""

    step: int
    s: float
    omega: float
    lam: float
    e_total: float
    e_electronic: float
    e_postselected: float
    p_photon0: float
    fid_target_raw: float
    fid_target_post: float
    fid_initial: float


@dataclass
class PropagationTrace:
    records: list[TraceRecord] = field(default_factory=list)
    global_phase: float = 0.0

    COLUMNS = ("step", "s", "omega", "lambda", "e_total", "e_electronic",
               "e_postselected", "p_photon0", "fid_target_raw", "fid_target_post",
               "fid_initial")

    def rows(self) -> list[tuple]:
        return [(r.step, r.s, r.omega, r.lam, r.e_total, r.e_electronic,
                 r.e_postselected, r.p_photon0, r.fid_target_raw, r.fid_target_post,
                 r.fid_initial) for r in self.records]

    @property
    def final(self) -> TraceRecord:
        return self.records[-1]


def prepare_initial(cs: CoupledSystem, ground: StateVector) -> StateVector:
    """Electronic ground state tensored with a singly occupied photon mode."""
    if ground.n_qubits != cs.electronic.n_qubits:
        raise ValueError("ground state register does not match the electronic system")
    return init_product(ground, 1)


def ordered_step_terms(cs: CoupledSystem) -> list[tuple[str, PauliString]]:
    """Schedule-independent Pauli terms in the fixed Trotter factor order.

    Each entry is ``(block, term)``; the step angle of a term is
    ``term.coeff * block_scale(omega_k, lambda_k) * dT``.  Identity strings
    are included (consumers treat them as global phases).
    """
    out = []
    for block in BLOCK_ORDER:
        for term in cs.blocks()[block]:
            out.append((block, term))
    return out


def apply_trotter_step(
    state: StateVector,
    terms: Sequence[tuple[PauliString, float]] | PauliSum,
    dt: float,
) -> tuple[StateVector, float]:
    """One first-order product-formula step in the supplied term order.

    ``terms`` is either a canonicalized sum (its own order is used) or an
    explicit ordered list of ``(string, coefficient)`` pairs.  Returns the new
    state and the accumulated global phase from identity terms.
    """
    if isinstance(terms, PauliSum):
        pairs = [(t, 1.0) for t in terms.terms()]
    else:
        pairs = list(terms)
    phase = 0.0
    for term, scale in pairs:
        coeff = term.coeff * scale
        if abs(coeff.imag) > 1e-10:
            raise ValueError(f"non-real Trotter coefficient for {term.ops}")
        angle = coeff.real * dt
        if term.is_identity:
            phase += angle
            continue
        if angle != 0.0:
            state = apply_pauli_rotation(state, PauliString(term.ops), angle)
    return state, phase


class _StepGenerator:
    """Caches compiled blocks / ordered terms; applies one pathway step."""

    def __init__(self, cs: CoupledSystem, method: str,
                 compiled: dict[str, CompiledPauliSum]):
        self.cs = cs
        self.method = method
        self.compiled = compiled
        if method == "trotter":
            self.terms = ordered_step_terms(cs)
        elif method != "exact":
            raise ValueError(f"unknown propagation method {method!r}")

    def step(self, state: StateVector, omega: float, lam: float, dt: float
             ) -> tuple[StateVector, float]:
        scales = self.cs.block_scales(omega, lam)
        if self.method == "exact":
            action = LinearCombinationAction(
                [(scales[name], self.compiled[name]) for name in BLOCK_ORDER])
            return evolve_exact_step(state, action, dt), 0.0
        pairs = [(term, scales[block]) for block, term in self.terms]
        return apply_trotter_step(state, pairs, dt)


def evolve(
    cs: CoupledSystem,
    sched: PathwaySchedule,
    psi0: StateVector,
    method: str = "exact",
    record_every: int | None = None,
    target: StateVector | None = None,
) -> tuple[StateVector, PropagationTrace]:
    """Run the full pathway evolution and record a trace.

    ``psi0`` lives on the coupled register (electronic ground (x) |1>);
    ``target``, if given, is the excited target on the coupled register
    (electronic target (x) |0>) used for the fidelity columns.  Records are
    written at step 0, every ``record_every`` steps, and at the final step.
    """
    if psi0.n_qubits != cs.n_qubits:
        raise ValueError("initial state register does not match the coupled system")
    if record_every is None:
        record_every = 1 if sched.n_steps <= 1000 else int(np.ceil(sched.n_steps / 1000))
    if record_every < 1:
        raise ValueError("record_every must be positive")

    compiled = {name: CompiledPauliSum(block) for name, block in cs.blocks().items()}
    gen = _StepGenerator(cs, method, compiled)
    h_e = compiled["electronic"]

    trace = PropagationTrace()

    def record(step: int, state: StateVector) -> None:
        s = step / sched.n_steps
        omega, lam = sched.omega(s), sched.lambda_(s)
        scales = cs.block_scales(omega, lam)
        e_total = sum(scales[name] * compiled[name].expectation(state).real
                      for name in BLOCK_ORDER)
        e_el = h_e.expectation(state).real
        p0 = outcome_probability(state, cs.photon_qubit, 0)
        if p0 > 1e-14:
            projected, _ = project_qubit(state, cs.photon_qubit, 0)
            e_post = h_e.expectation(projected).real
            fid_post = (abs(np.vdot(target.amps, projected.amps)) ** 2
                        if target is not None else np.nan)
        else:
            e_post = np.nan
            fid_post = np.nan
        fid_raw = (abs(np.vdot(target.amps, state.amps)) ** 2
                   if target is not None else np.nan)
        fid_init = abs(np.vdot(psi0.amps, state.amps)) ** 2
        trace.records.append(TraceRecord(
            step=step, s=s, omega=omega, lam=lam, e_total=e_total,
            e_electronic=e_el, e_postselected=e_post, p_photon0=p0,
            fid_target_raw=fid_raw, fid_target_post=fid_post, fid_initial=fid_init))

    state = psi0
    record(0, state)
    dt = sched.dt
    for k in range(sched.n_steps):
        s_k = k / sched.n_steps
        state, phase = gen.step(state, sched.omega(s_k), sched.lambda_(s_k), dt)
        trace.global_phase += phase
        step = k + 1
        if step % record_every == 0 or step == sched.n_steps:
            record(step, state)
    return state, trace
