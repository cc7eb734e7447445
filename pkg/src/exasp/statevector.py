"""Dense complex statevector engine.

Holds the simulated register (electronic qubits plus one photon qubit) as a
2^n amplitude vector and provides the operations the propagation loop needs:
Pauli rotations, expectation values, exact exponential steps via a Lanczos
(Krylov) expansion, and single-qubit projection.  Basis-state index bit ``q``
is qubit ``q``; the photon qubit, appended last, is the most significant bit.

The exact step never builds a dense Hamiltonian matrix: Pauli strings act on
the amplitude vector through bitmask index arithmetic, and strings sharing a
flip mask are merged into a single gather-multiply pass.
"""

from __future__ import annotations

import struct
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .pauli import PauliString, PauliSum

NORM_TOL = 1e-10

#: Upper limit on the Krylov subspace dimension for one exact step.
KRYLOV_MAX_DIM = 60
#: Convergence target for the Krylov residual estimate.
KRYLOV_TOL = 1e-12


class KrylovConvergenceError(RuntimeError):
    """Exact step did not converge within the maximum subspace dimension."""

    def __init__(self, residual: float, max_dim: int):
        super().__init__(f"Krylov step residual {residual:.3e} after {max_dim} vectors")
        self.residual = residual


class ProjectionImpossibleError(RuntimeError):
    """Requested measurement outcome has (numerically) zero probability."""


class StateVector:
    """Normalized amplitude vector over ``n_qubits`` qubits."""

    __slots__ = ("n_qubits", "amps")

    def __init__(self, amps: np.ndarray | Sequence[complex], *, check_norm: bool = True):
        amps = np.asarray(amps, dtype=complex)
        if amps.ndim != 1 or amps.size & (amps.size - 1) or amps.size == 0:
            raise ValueError(f"amplitude vector length {amps.size} is not a power of two")
        self.n_qubits = int(amps.size).bit_length() - 1
        self.amps = amps.copy()
        if check_norm and abs(np.linalg.norm(self.amps) - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: |psi| = {np.linalg.norm(self.amps):.12g}")

    @classmethod
    def basis_state(cls, n_qubits: int, index: int = 0) -> "StateVector":
        amps = np.zeros(2 ** n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(amps, check_norm=False)

    def copy(self) -> "StateVector":
        return StateVector(self.amps, check_norm=False)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits})"


def init_product(electronic: StateVector, photon_occ: int) -> StateVector:
    """Append a photon qubit in ``|photon_occ>`` as the new highest qubit."""
    if photon_occ not in (0, 1):
        raise ValueError("photon occupation must be 0 or 1")
    if abs(electronic.norm() - 1.0) > NORM_TOL:
        raise ValueError("electronic state is not normalized")
    photon = np.zeros(2, dtype=complex)
    photon[photon_occ] = 1.0
    return StateVector(np.kron(photon, electronic.amps), check_norm=False)


def _phase_vector(ops: str, dim: int) -> tuple[int, np.ndarray]:
    """Flip mask and per-basis-state phase of a bare Pauli string."""
    x_mask, z_mask, n_y = PauliString(ops).masks()
    idx = np.arange(dim, dtype=np.int64)
    parity = np.bitwise_count(idx & z_mask) & 1
    phase = (1j) ** n_y * (1.0 - 2.0 * parity).astype(complex)
    return x_mask, phase


def apply_pauli(state: StateVector, p: PauliString) -> StateVector:
    """``coeff * P |psi>`` (not necessarily normalized if ``|coeff| != 1``)."""
    if p.n_qubits != state.n_qubits:
        raise ValueError(f"register size mismatch: {p.n_qubits} vs {state.n_qubits}")
    x_mask, phase = _phase_vector(p.ops, state.amps.size)
    perm = np.arange(state.amps.size, dtype=np.int64) ^ x_mask
    out = p.coeff * phase[perm] * state.amps[perm]
    return StateVector(out, check_norm=False)


def apply_pauli_rotation(state: StateVector, p: PauliString, theta: float) -> StateVector:
    """``exp(-i theta P) |psi>`` for a Pauli string with real coefficient.

    The (real) string coefficient is folded into the rotation angle, so the
    applied generator is always the bare tensor product.
    """
    if p.n_qubits != state.n_qubits:
        raise ValueError(f"register size mismatch: {p.n_qubits} vs {state.n_qubits}")
    if abs(p.coeff.imag) > 1e-12:
        raise ValueError("rotation generator must have a real coefficient")
    theta = theta * p.coeff.real
    if p.is_identity:
        # Pure global phase.
        out = np.exp(-1j * theta) * state.amps
        return StateVector(out, check_norm=False)
    x_mask, phase = _phase_vector(p.ops, state.amps.size)
    perm = np.arange(state.amps.size, dtype=np.int64) ^ x_mask
    # P^2 = I, so exp(-i t P) = cos(t) - i sin(t) P.
    out = np.cos(theta) * state.amps - 1j * np.sin(theta) * (phase[perm] * state.amps[perm])
    return StateVector(out, check_norm=False)


class CompiledPauliSum:
    """A Pauli sum compiled for fast repeated action on amplitude vectors.

    Terms sharing a flip mask are merged into one complex weight vector, so a
    matrix-vector product costs one gather-multiply-add per distinct mask
    instead of one per term.
    """

    __slots__ = ("n_qubits", "dim", "_masks", "_weights", "_idx")

    def __init__(self, op: PauliSum):
        self.n_qubits = op.n_qubits
        self.dim = 2 ** op.n_qubits
        self._idx = np.arange(self.dim, dtype=np.int64)
        merged: dict[int, np.ndarray] = {}
        for t in op:
            x_mask, phase = _phase_vector(t.ops, self.dim)
            # Store the phase evaluated at the source index j ^ x_mask, so the
            # action is a plain elementwise product after one gather.
            w = t.coeff * phase[self._idx ^ x_mask]
            if x_mask in merged:
                merged[x_mask] += w
            else:
                merged[x_mask] = w
        self._masks = list(merged)
        self._weights = [merged[m] for m in self._masks]

    def dot(self, amps: np.ndarray) -> np.ndarray:
        """Matrix-vector product; batches over any leading axes."""
        out = np.zeros_like(amps)
        for x_mask, w in zip(self._masks, self._weights):
            if x_mask == 0:
                out += w * amps
            else:
                out += w * np.take(amps, self._idx ^ x_mask, axis=-1)
        return out

    def expectation(self, state: StateVector) -> complex:
        return complex(np.vdot(state.amps, self.dot(state.amps)))


class LinearCombinationAction:
    """Weighted combination of compiled sums, used as one Hamiltonian action."""

    __slots__ = ("n_qubits", "parts")

    def __init__(self, parts: Iterable[tuple[float, CompiledPauliSum]]):
        self.parts = [(float(c), a) for c, a in parts]
        if not self.parts:
            raise ValueError("empty combination")
        self.n_qubits = self.parts[0][1].n_qubits

    def dot(self, amps: np.ndarray) -> np.ndarray:
        out = np.zeros_like(amps)
        for c, a in self.parts:
            if c != 0.0:
                out += c * a.dot(amps)
        return out


def expectation(state: StateVector, op: PauliSum | CompiledPauliSum) -> complex:
    """``<psi|O|psi>``; real within 1e-10 when ``op`` is hermitian."""
    if op.n_qubits != state.n_qubits:
        raise ValueError(f"register size mismatch: {op.n_qubits} vs {state.n_qubits}")
    if isinstance(op, PauliSum):
        op = CompiledPauliSum(op)
    return op.expectation(state)


def evolve_exact_step(
    state: StateVector,
    h: PauliSum | CompiledPauliSum | LinearCombinationAction,
    dt: float,
    *,
    max_dim: int = KRYLOV_MAX_DIM,
    tol: float = KRYLOV_TOL,
) -> StateVector:
    """``exp(-i dt H)|psi>`` via a matrix-free Lanczos expansion.

    The Krylov subspace grows adaptively until the standard residual estimate
    drops below ``tol`` or the basis becomes invariant (happy breakdown).  The
    dense 2^n x 2^n matrix is never formed.
    """
    if isinstance(h, PauliSum):
        if not h.is_hermitian():
            raise ValueError("Hamiltonian must be hermitian")
        h = CompiledPauliSum(h)
    if h.n_qubits != state.n_qubits:
        raise ValueError(f"register size mismatch: {h.n_qubits} vs {state.n_qubits}")
    dim = state.amps.size
    max_dim = min(max_dim, dim)

    v = state.amps.copy()
    basis = [v]
    alphas: list[float] = []
    betas: list[float] = []
    u = None
    residual = np.inf
    for j in range(max_dim):
        w = h.dot(basis[j])
        a = float(np.vdot(basis[j], w).real)
        alphas.append(a)
        w = w - a * basis[j]
        if j > 0:
            w = w - betas[-1] * basis[j - 1]
        # Full reorthogonalization keeps the basis well conditioned for the
        # subspace sizes used here.
        for b in basis:
            w = w - np.vdot(b, w) * b
        beta = float(np.linalg.norm(w))

        u = _krylov_phi(alphas, betas, dt)
        if beta < 1e-14:          # happy breakdown: subspace is invariant
            residual = 0.0
            break
        residual = abs(dt) * beta * abs(u[-1])
        if residual < tol:
            break
        betas.append(beta)
        basis.append(w / beta)
    else:
        raise KrylovConvergenceError(residual, max_dim)

    out = np.zeros_like(v)
    for c, b in zip(u, basis):
        out += c * b
    return StateVector(out, check_norm=False)


def _krylov_phi(alphas: Sequence[float], betas: Sequence[float], dt: float) -> np.ndarray:
    """First column of ``exp(-i dt T)`` for the tridiagonal Lanczos matrix."""
    m = len(alphas)
    if m == 1:
        return np.array([np.exp(-1j * dt * alphas[0])])
    w, vecs = eigh_tridiagonal(np.asarray(alphas), np.asarray(betas[: m - 1]))
    return vecs @ (np.exp(-1j * dt * w) * vecs[0, :].conj())


def project_qubit(state: StateVector, qubit: int, outcome: int) -> tuple[StateVector, float]:
    """Project one qubit onto ``|outcome>`` and renormalize.

    Returns the projected state (register size unchanged) and the
    pre-projection probability of the outcome.
    """
    if not 0 <= qubit < state.n_qubits:
        raise ValueError(f"qubit {qubit} out of range for {state.n_qubits} qubits")
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    bit = (np.arange(state.amps.size, dtype=np.int64) >> qubit) & 1
    keep = bit == outcome
    prob = float(np.sum(np.abs(state.amps[keep]) ** 2))
    if prob < 1e-14:
        raise ProjectionImpossibleError(
            f"outcome {outcome} on qubit {qubit} has probability {prob:.3e}")
    out = np.where(keep, state.amps, 0.0) / np.sqrt(prob)
    return StateVector(out, check_norm=False), prob


def outcome_probability(state: StateVector, qubit: int, outcome: int) -> float:
    """Probability of measuring ``outcome`` on ``qubit`` (no projection)."""
    if not 0 <= qubit < state.n_qubits:
        raise ValueError(f"qubit {qubit} out of range for {state.n_qubits} qubits")
    bit = (np.arange(state.amps.size, dtype=np.int64) >> qubit) & 1
    return float(np.sum(np.abs(state.amps[bit == outcome]) ** 2))


def fidelity(a: StateVector, b: StateVector) -> float:
    """``|<a|b>|^2`` for two normalized states on equal registers."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"register size mismatch: {a.n_qubits} vs {b.n_qubits}")
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)


def save_amplitudes(state: StateVector, path: str) -> None:
    """Debug dump: little-endian int32 qubit count, then interleaved re/im float64."""
    with open(path, "wb") as f:
        f.write(struct.pack("<i", state.n_qubits))
        f.write(state.amps.astype("<c16").tobytes())


def load_amplitudes(path: str) -> StateVector:
    with open(path, "rb") as f:
        (n_qubits,) = struct.unpack("<i", f.read(4))
        amps = np.frombuffer(f.read(), dtype="<c16").astype(complex)
    if amps.size != 2 ** n_qubits:
        raise ValueError(f"amplitude count {amps.size} does not match {n_qubits} qubits")
    return StateVector(amps, check_norm=False)
