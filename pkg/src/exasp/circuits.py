"""Compilation of the Trotterized evolution into a textual gate list.

Gate set: single-qubit rotations RX/RY/RZ (half-angle convention,
``rz q a == exp(-i a Z_q / 2)``), H, S, S-dagger, and CX.  Every Pauli term
``exp(-i theta P)`` becomes a basis-change conjugation (H for X; S-dagger
then H for Y), a CX ladder onto the last active qubit, and ``RZ(2 theta)``.
A small peephole pass fuses adjacent same-axis rotations, drops zero-angle
rotations, and cancels adjacent self-inverse pairs (CX-CX, H-H, S-Sdg).

The text serialization is a simple line-oriented dialect::

    version 1
    qubits 2
    meta steps 40
    ry 0 -0.78539816339744828
    cx 0 1

with ``#`` comments allowed; angles print with 17 significant digits so a
parse/write round trip is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coupling import CoupledSystem
from .pathway import PathwaySchedule
from .pauli import PauliString
from .statevector import StateVector, apply_pauli_rotation

ROTATIONS = ("rx", "ry", "rz")
SINGLE = ("h", "s", "sdg")
ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.name in ROTATIONS:
            if self.angle is None or not np.isfinite(self.angle):
                raise ValueError(f"{self.name} needs a finite angle")
            if len(self.qubits) != 1:
                raise ValueError(f"{self.name} acts on one qubit")
        elif self.name in SINGLE:
            if len(self.qubits) != 1 or self.angle is not None:
                raise ValueError(f"{self.name} is a bare single-qubit gate")
        elif self.name == "cx":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError("cx needs distinct control and target")
            if self.angle is not None:
                raise ValueError("cx takes no angle")
        else:
            raise ValueError(f"unknown gate {self.name!r}")


@dataclass
class GateList:
    n_qubits: int
    gates: list[Gate] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def append(self, name: str, *qubits: int, angle: float | None = None) -> None:
        gate = Gate(name, tuple(qubits), angle)
        if max(gate.qubits) >= self.n_qubits:
            raise ValueError(f"qubit index out of range for {self.n_qubits} qubits")
        self.gates.append(gate)

    def extend(self, other: "GateList") -> None:
        if other.n_qubits > self.n_qubits:
            raise ValueError("register too small for extension")
        self.gates.extend(other.gates)

    def count(self, name: str) -> int:
        return sum(1 for g in self.gates if g.name == name)


def pauli_rotation_gates(ops: str, theta: float) -> list[Gate]:
    """Gate sequence for ``exp(-i theta P)`` with a bare Pauli string P."""
    active = [q for q, c in enumerate(ops) if c != "I"]
    if not active:
        return []
    gates: list[Gate] = []
    for q in active:
        if ops[q] == "X":
            gates.append(Gate("h", (q,)))
        elif ops[q] == "Y":
            gates.append(Gate("sdg", (q,)))
            gates.append(Gate("h", (q,)))
    for a, b in zip(active, active[1:]):
        gates.append(Gate("cx", (a, b)))
    gates.append(Gate("rz", (active[-1],), 2.0 * theta))
    for a, b in reversed(list(zip(active, active[1:]))):
        gates.append(Gate("cx", (a, b)))
    for q in reversed(active):
        if ops[q] == "X":
            gates.append(Gate("h", (q,)))
        elif ops[q] == "Y":
            gates.append(Gate("h", (q,)))
            gates.append(Gate("s", (q,)))
    return gates


def two_level_prep(epsilon: float, g: float, n_qubits: int = 2) -> GateList:
    """Ground-state rotation RY(atan(-g/eps)) plus photon |1> initialization."""
    gl = GateList(n_qubits)
    gl.append("ry", 0, angle=float(np.arctan2(-g, epsilon)))
    gl.append("ry", n_qubits - 1, angle=float(np.pi))
    return gl


def emit_trotter_circuit(
    cs: CoupledSystem,
    sched: PathwaySchedule,
    ground_prep: GateList | None = None,
) -> GateList:
    """Full pathway evolution as gates: preparation then N Trotter steps.

    Term order matches the propagator exactly; identity terms only shift the
    global phase and are skipped.
    """
    from .propagator import ordered_step_terms

    gl = GateList(cs.n_qubits)
    if ground_prep is not None:
        gl.extend(ground_prep)
    terms = ordered_step_terms(cs)
    dt = sched.dt
    for k in range(sched.n_steps):
        s_k = k / sched.n_steps
        scales = cs.block_scales(sched.omega(s_k), sched.lambda_(s_k))
        for block, term in terms:
            if term.is_identity:
                continue
            coeff = term.coeff * scales[block]
            if abs(coeff.imag) > 1e-10:
                raise ValueError(f"non-real Trotter coefficient for {term.ops}")
            gl.gates.extend(pauli_rotation_gates(term.ops, coeff.real * dt))
    gl.metadata.update({
        "steps": str(sched.n_steps),
        "total_time": repr(sched.total_time),
        "dt": repr(sched.dt),
        "omega_max": repr(sched.omega_max),
        "lambda_max": repr(sched.lambda_max),
    })
    return gl


# ---------------------------------------------------------------------------
# peephole optimization
# ---------------------------------------------------------------------------

_INVERSE_PAIRS = {("h", "h"), ("s", "sdg"), ("sdg", "s"), ("cx", "cx")}


def _one_pass(gates: list[Gate]) -> tuple[list[Gate], bool]:
    out: list[Gate] = []
    changed = False
    for g in gates:
        if g.name in ROTATIONS and abs(g.angle) < ANGLE_TOL:
            changed = True
            continue
        merged = False
        for idx in range(len(out) - 1, -1, -1):
            prev = out[idx]
            if not set(prev.qubits) & set(g.qubits):
                continue
            # prev is the most recent gate sharing a qubit: nothing between
            # it and g touches g's qubits, so adjacency rules apply
            if prev.qubits == g.qubits:
                if g.name in ROTATIONS and prev.name == g.name:
                    out[idx] = Gate(g.name, g.qubits, prev.angle + g.angle)
                    merged = changed = True
                elif (prev.name, g.name) in _INVERSE_PAIRS:
                    del out[idx]
                    merged = changed = True
            break
        if not merged:
            out.append(g)
    return out, changed


def peephole_optimize(gl: GateList) -> GateList:
    """Fixpoint of rotation fusion, zero-angle removal, and pair cancellation."""
    gates = list(gl.gates)
    while True:
        gates, changed = _one_pass(gates)
        if not changed:
            break
    return GateList(n_qubits=gl.n_qubits, gates=gates, metadata=dict(gl.metadata))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def write_qasm(gl: GateList) -> str:
    lines = ["version 1", f"qubits {gl.n_qubits}"]
    for key, value in gl.metadata.items():
        lines.append(f"meta {key} {value}")
    for g in gl.gates:
        if g.name in ROTATIONS:
            lines.append(f"{g.name} {g.qubits[0]} {g.angle:.17g}")
        else:
            lines.append(f"{g.name} " + " ".join(str(q) for q in g.qubits))
    return "\n".join(lines) + "\n"


def parse_qasm(text: str) -> GateList:
    gl: GateList | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "version":
            if parts[1] != "1":
                raise ValueError(f"line {lineno}: unsupported version {parts[1]}")
        elif parts[0] == "qubits":
            gl = GateList(int(parts[1]))
        elif parts[0] == "meta":
            if gl is None:
                raise ValueError(f"line {lineno}: meta before qubits")
            gl.metadata[parts[1]] = " ".join(parts[2:])
        else:
            if gl is None:
                raise ValueError(f"line {lineno}: gate before qubits declaration")
            name = parts[0]
            if name in ROTATIONS:
                gl.append(name, int(parts[1]), angle=float(parts[2]))
            elif name in SINGLE:
                gl.append(name, int(parts[1]))
            elif name == "cx":
                gl.append(name, int(parts[1]), int(parts[2]))
            else:
                raise ValueError(f"line {lineno}: unknown gate {name!r}")
    if gl is None:
        raise ValueError("missing qubits declaration")
    return gl


# ---------------------------------------------------------------------------
# gate-level simulation (oracle for emission equivalence)
# ---------------------------------------------------------------------------

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j]).astype(complex)
_SDG = np.diag([1, -1j]).astype(complex)


def _apply_1q(amps: np.ndarray, u: np.ndarray, q: int) -> np.ndarray:
    shaped = amps.reshape(-1, 2, 2 ** q)
    return np.matmul(u, shaped).reshape(amps.size)


def simulate(gl: GateList, initial: StateVector | None = None) -> StateVector:
    state = initial if initial is not None else StateVector.basis_state(gl.n_qubits, 0)
    if state.n_qubits != gl.n_qubits:
        raise ValueError("initial state register does not match the circuit")
    amps = state.amps.copy()
    idx = np.arange(amps.size, dtype=np.int64)
    pauli = {"rx": "X", "ry": "Y", "rz": "Z"}
    for g in gl.gates:
        if g.name in ROTATIONS:
            q = g.qubits[0]
            ops = "".join(pauli[g.name] if i == q else "I" for i in range(gl.n_qubits))
            sv = apply_pauli_rotation(StateVector(amps, check_norm=False),
                                      PauliString(ops), g.angle / 2.0)
            amps = sv.amps
        elif g.name == "h":
            amps = _apply_1q(amps, _H, g.qubits[0])
        elif g.name == "s":
            amps = _apply_1q(amps, _S, g.qubits[0])
        elif g.name == "sdg":
            amps = _apply_1q(amps, _SDG, g.qubits[0])
        elif g.name == "cx":
            c, t = g.qubits
            amps = amps[idx ^ (((idx >> c) & 1) << t)]
    return StateVector(amps, check_norm=False)


def circuit_unitary(gl: GateList) -> np.ndarray:
    """Dense unitary of a small circuit (soundness checks only)."""
    dim = 2 ** gl.n_qubits
    if dim > 2 ** 12:
        raise ValueError("circuit too large for a dense unitary")
    cols = []
    for b in range(dim):
        cols.append(simulate(gl, StateVector.basis_state(gl.n_qubits, b)).amps)
    return np.array(cols).T
