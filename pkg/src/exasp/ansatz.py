"""Approximate ground states from a tiled unitary product-state ansatz.

The ansatz alternates brickwork layers of two-orbital blocks over adjacent
spatial orbitals.  Each correlating block is
``exp(t1 k1) exp(t2 k2) exp(t3 k1)`` built from the spin-summed singlet
excitation ``E_pq = a+_p,up a_q,up + a+_p,dn a_q,dn`` through the
anti-hermitian generators ``k1 = E_pq - E_qp`` and ``k2 = E_pq^2 - E_qp^2``
(paired double excitation); the trailing orbital-optimization layers use a
single ``exp(t k1)`` per block.  The perfect-pairing reference determinant
doubly occupies every second orbital, alternating occupied/virtual along the
chain.

Optimization follows a basin-hopping parallel-tempering scheme: each replica
repeatedly perturbs its parameters, relaxes them with L-BFGS, and applies a
Metropolis test at its own temperature, with occasional nearest-temperature
replica exchange.

Generators of a block act on four adjacent qubits (interleaved spin
orbitals), so each exponential is applied exactly through a cached 16x16
eigendecomposition on that window; the generic Krylov path over the full
register is retained as a cross-check (``window=False``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.optimize

from .pauli import FermionOp, PauliSum, jordan_wigner
from .statevector import CompiledPauliSum, StateVector, evolve_exact_step


def _local_generators() -> tuple[PauliSum, PauliSum]:
    """Block generators on local modes (lo_up, lo_dn, hi_up, hi_dn) = (0,1,2,3)."""
    e_fwd = [FermionOp([(2, True), (0, False)]), FermionOp([(3, True), (1, False)])]
    e_bwd = [f.dagger() for f in e_fwd]
    k1 = jordan_wigner(e_fwd + [-1.0 * f for f in e_bwd], 4)
    fwd2 = [a * b for a in e_fwd for b in e_fwd]
    bwd2 = [-1.0 * (a * b) for a in e_bwd for b in e_bwd]
    k2 = jordan_wigner(fwd2 + bwd2, 4)
    return k1, k2


K1_LOCAL, K2_LOCAL = _local_generators()

# Hermitian forms i*k diagonalized once; exp(theta k) = V exp(-i theta w) V+.
_K_EIG = {}
for _name, _k in (("k1", K1_LOCAL), ("k2", K2_LOCAL)):
    _w, _v = np.linalg.eigh(1j * _k.to_matrix())
    _K_EIG[_name] = (_w, _v)


def _window_unitary(name: str, theta: float,
                    cache: dict | None = None) -> np.ndarray:
    if cache is not None and (name, theta) in cache:
        return cache[name, theta]
    w, v = _K_EIG[name]
    u = (v * np.exp(-1j * theta * w)) @ v.conj().T
    if cache is not None:
        cache[name, theta] = u
    return u


@dataclass(frozen=True)
class _Block:
    """One exponential factor: generator kind, tile, owning parameter index."""

    kind: str
    tile: tuple[int, int]
    param_index: int


@dataclass(frozen=True)
class TupsAnsatz:
    """Brickwork tiling over ``n_orbitals`` with ``n_layers`` correlating layers."""

    n_orbitals: int
    n_layers: int
    n_electrons: int | None = None

    def __post_init__(self):
        if self.n_orbitals < 2:
            raise ValueError("need at least two orbitals to tile")
        if self.n_layers < 0:
            raise ValueError("n_layers must be non-negative")
        n_el = self.electrons
        if n_el % 2 or n_el // 2 > (self.n_orbitals + 1) // 2:
            raise ValueError("perfect-pairing reference needs an even electron count "
                             "with at most one pair per alternating orbital")

    @property
    def electrons(self) -> int:
        return self.n_electrons if self.n_electrons is not None else self.n_orbitals

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_orbitals

    @property
    def tiles(self) -> list[tuple[int, int]]:
        """Block application order within one layer: even-start pairs, then odd-start."""
        even = [(p, p + 1) for p in range(0, self.n_orbitals - 1, 2)]
        odd = [(p, p + 1) for p in range(1, self.n_orbitals - 1, 2)]
        return even + odd

    @property
    def n_oo_layers(self) -> int:
        """Trailing orbital-optimization layers (one-parameter blocks)."""
        return (self.n_orbitals + 1) // 2

    @property
    def n_params(self) -> int:
        n_tiles = self.n_orbitals - 1
        return 3 * self.n_layers * n_tiles + self.n_oo_layers * n_tiles

    def reference_state(self) -> StateVector:
        """Perfect-pairing determinant: orbitals 0, 2, 4, ... doubly occupied."""
        index = 0
        for pair in range(self.electrons // 2):
            orbital = 2 * pair
            index |= 1 << (2 * orbital)
            index |= 1 << (2 * orbital + 1)
        return StateVector.basis_state(self.n_qubits, index)

    def generator(self, kind: str, tile: tuple[int, int]) -> PauliSum:
        """Anti-hermitian block generator embedded in the full register."""
        local = {"k1": K1_LOCAL, "k2": K2_LOCAL}[kind]
        lo, _ = tile
        offset = 2 * lo
        pad_low = "I" * offset
        pad_high = "I" * (self.n_qubits - offset - 4)
        from .pauli import PauliString
        return PauliSum([PauliString(pad_low + t.ops + pad_high, t.coeff)
                         for t in local], n_qubits=self.n_qubits)

    def block_sequence(self) -> list[_Block]:
        """All exponential factors in application order.

        Within a correlating block the parameter triple ``(t1, t2, t3)``
        enters as ``exp(t1 k1) exp(t2 k2) exp(t3 k1)``, so the third angle's
        factor is applied first.  Every factor owns exactly one parameter.
        """
        seq: list[_Block] = []
        i = 0
        tiles = self.tiles
        for _ in range(self.n_layers):
            for tile in tiles:
                seq.append(_Block("k1", tile, i + 2))
                seq.append(_Block("k2", tile, i + 1))
                seq.append(_Block("k1", tile, i))
                i += 3
        for _ in range(self.n_oo_layers):
            for tile in tiles:
                seq.append(_Block("k1", tile, i))
                i += 1
        return seq


def _apply_window(amps: np.ndarray, u16: np.ndarray, start_qubit: int) -> np.ndarray:
    """Apply a 16x16 unitary on four adjacent qubits; batches over leading axes.

    The window axis is rotated to the end so the whole application is a
    single (batch*rest, 16) x (16, 16) product rather than many tiny ones.
    """
    shape = amps.shape
    low = 2 ** start_qubit
    shaped = amps.reshape(shape[:-1] + (-1, 16, low))
    moved = np.moveaxis(shaped, -2, -1)                  # (..., high, low, 16)
    out = np.ascontiguousarray(moved).reshape(-1, 16) @ u16.T
    return np.moveaxis(out.reshape(moved.shape), -1, -2).reshape(shape)


def apply_ansatz(
    ansatz: TupsAnsatz,
    params: np.ndarray,
    reference: StateVector | None = None,
    *,
    window: bool = True,
) -> StateVector:
    """Apply all ansatz blocks to the reference determinant.

    Correlating layers first, then orbital-optimization layers; within each
    three-angle block the ``exp(t3 k1)`` factor acts first.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (ansatz.n_params,):
        raise ValueError(f"expected {ansatz.n_params} parameters, got {params.shape}")
    state = reference if reference is not None else ansatz.reference_state()
    amps = state.amps.copy()
    for blk in ansatz.block_sequence():
        theta = params[blk.param_index]
        if theta == 0.0:
            continue
        if window:
            amps = _apply_window(amps, _window_unitary(blk.kind, theta), 2 * blk.tile[0])
        else:
            sv = StateVector(amps, check_norm=False)
            # exp(theta k) == exp(-i theta (i k)) with i k hermitian
            sv = evolve_exact_step(sv, 1j * ansatz.generator(blk.kind, blk.tile), theta)
            amps = sv.amps
    return StateVector(amps, check_norm=False)


def energy(ansatz: TupsAnsatz, params: np.ndarray,
           h_e: PauliSum | CompiledPauliSum,
           reference: StateVector | None = None) -> float:
    if isinstance(h_e, PauliSum):
        h_e = CompiledPauliSum(h_e)
    return h_e.expectation(apply_ansatz(ansatz, params, reference)).real


def energy_and_gradient(
    ansatz: TupsAnsatz,
    params: np.ndarray,
    h_e: PauliSum | CompiledPauliSum,
    *,
    fd_step: float = 1e-6,
    reference: StateVector | None = None,
) -> tuple[float, np.ndarray]:
    """Energy with a central finite-difference gradient (step ``fd_step``).

    Each parameter owns one exponential factor, so the two displaced
    evaluations per parameter reuse the unperturbed prefix state and cached
    window unitaries for the suffix; only the factor count changes, the
    difference quotient is the plain central formula.
    """
    if isinstance(h_e, PauliSum):
        h_e = CompiledPauliSum(h_e)
    params = np.asarray(params, dtype=float)
    if params.shape != (ansatz.n_params,):
        raise ValueError(f"expected {ansatz.n_params} parameters, got {params.shape}")
    seq = ansatz.block_sequence()
    ref = reference if reference is not None else ansatz.reference_state()
    cache: dict = {}

    prefixes = [ref.amps]
    for blk in seq:
        u = _window_unitary(blk.kind, params[blk.param_index], cache)
        prefixes.append(_apply_window(prefixes[-1], u, 2 * blk.tile[0]))
    final = StateVector(prefixes[-1], check_norm=False)
    e0 = h_e.expectation(final).real

    grad = np.zeros_like(params)
    for j, blk in enumerate(seq):
        theta = params[blk.param_index]
        w = 2 * blk.tile[0]
        pair = np.stack([
            _apply_window(prefixes[j], _window_unitary(blk.kind, theta + fd_step, cache), w),
            _apply_window(prefixes[j], _window_unitary(blk.kind, theta - fd_step, cache), w),
        ])
        for nxt in seq[j + 1:]:
            u = _window_unitary(nxt.kind, params[nxt.param_index], cache)
            pair = _apply_window(pair, u, 2 * nxt.tile[0])
        e_pair = np.einsum("bi,bi->b", pair.conj(), h_e.dot(pair)).real
        grad[blk.param_index] = (e_pair[0] - e_pair[1]) / (2.0 * fd_step)
    return e0, grad


@dataclass(frozen=True)
class BHPTConfig:
    """Basin-hopping parallel-tempering settings.

    Temperatures and the gradient threshold are absolute energies; for a
    Hubbard chain with hopping ``t`` the conventional choices are
    ``1e-4 t .. 1e-2 t`` and ``1e-5 t``.
    """

    n_replicas: int = 8
    temp_min: float = 1e-4
    temp_max: float = 1e-2
    n_steps: int = 250
    lbfgs_max_iter: int = 2000
    rms_gtol: float = 1e-5
    perturbation: float = 0.3
    exchange_prob: float = 0.1
    seed: int = 0

    def temperatures(self) -> np.ndarray:
        if self.n_replicas == 1:
            return np.array([self.temp_min])
        return np.geomspace(self.temp_min, self.temp_max, self.n_replicas)


@dataclass
class OptimizationResult:
    params: np.ndarray
    energy: float
    fidelity: float | None
    n_minimizations: int
    rms_gradient: float


def _local_minimize(fun: Callable, x0: np.ndarray, config: BHPTConfig):
    # generous history improves the ill-conditioned orbital-rotation directions
    res = scipy.optimize.minimize(
        fun, x0, jac=True, method="L-BFGS-B",
        options={"maxiter": config.lbfgs_max_iter, "ftol": 1e-15,
                 "gtol": config.rms_gtol, "maxcor": 30})
    return res.x, float(res.fun)


def optimize(
    ansatz: TupsAnsatz,
    h_e: PauliSum,
    config: BHPTConfig = BHPTConfig(),
    *,
    exact_ground: StateVector | None = None,
    x0: np.ndarray | None = None,
) -> OptimizationResult:
    """Global parameter search: perturb, L-BFGS-relax, Metropolis-accept.

    All replicas start from a common relaxation of ``x0`` (zeros by default);
    a failed or non-descending local minimization is simply rejected by the
    Metropolis test rather than raising.
    """
    h_c = CompiledPauliSum(h_e)
    rng = np.random.default_rng(config.seed)
    fun = lambda x: energy_and_gradient(ansatz, x, h_c)  # noqa: E731

    start = np.zeros(ansatz.n_params) if x0 is None else np.asarray(x0, dtype=float)
    x_best, e_best = _local_minimize(fun, start, config)
    n_min = 1

    temps = config.temperatures()
    xs = [x_best.copy() for _ in range(config.n_replicas)]
    es = [e_best for _ in range(config.n_replicas)]

    for _step in range(config.n_steps):
        for r in range(config.n_replicas):
            trial = xs[r] + rng.uniform(-config.perturbation, config.perturbation,
                                        size=ansatz.n_params)
            x_new, e_new = _local_minimize(fun, trial, config)
            n_min += 1
            if e_new <= es[r] or rng.random() < np.exp(-(e_new - es[r]) / temps[r]):
                xs[r], es[r] = x_new, e_new
            if e_new < e_best:
                x_best, e_best = x_new.copy(), e_new
        for r in range(config.n_replicas - 1):
            if rng.random() < config.exchange_prob:
                delta = (1.0 / temps[r] - 1.0 / temps[r + 1]) * (es[r] - es[r + 1])
                if delta >= 0 or rng.random() < np.exp(delta):
                    xs[r], xs[r + 1] = xs[r + 1], xs[r]
                    es[r], es[r + 1] = es[r + 1], es[r]

    _, grad = energy_and_gradient(ansatz, x_best, h_c)
    fid = None
    if exact_ground is not None:
        from .statevector import fidelity as fid_fn
        fid = fid_fn(apply_ansatz(ansatz, x_best), exact_ground)
    return OptimizationResult(
        params=x_best, energy=e_best, fidelity=fid, n_minimizations=n_min,
        rms_gradient=float(np.sqrt(np.mean(grad ** 2))))


# ---------------------------------------------------------------------------
# checkpoint serialization
# ---------------------------------------------------------------------------

CHECKPOINT_HEADER = "tups-checkpoint 1"


def save_checkpoint(path: str, ansatz: TupsAnsatz, params: np.ndarray,
                    energy_value: float | None = None) -> None:
    """Structured-text dump of the ansatz shape and parameter vector."""
    with open(path, "w") as f:
        f.write(CHECKPOINT_HEADER + "\n")
        f.write(f"orbitals {ansatz.n_orbitals}\n")
        f.write(f"layers {ansatz.n_layers}\n")
        f.write(f"electrons {ansatz.electrons}\n")
        if energy_value is not None:
            f.write(f"energy {energy_value:.17g}\n")
        f.write(f"params {len(params)}\n")
        for value in params:
            f.write(f"{value:.17g}\n")


def load_checkpoint(path: str) -> tuple[TupsAnsatz, np.ndarray]:
    with open(path) as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    if not lines or lines[0] != CHECKPOINT_HEADER:
        raise ValueError(f"{path}: not a tups checkpoint")
    fields = {}
    i = 1
    while i < len(lines) and " " in lines[i]:
        key, _, val = lines[i].partition(" ")
        fields[key] = val
        i += 1
        if key == "params":
            break
    ansatz = TupsAnsatz(n_orbitals=int(fields["orbitals"]),
                        n_layers=int(fields["layers"]),
                        n_electrons=int(fields["electrons"]))
    n = int(fields["params"])
    params = np.array([float(x) for x in lines[i:i + n]])
    if params.size != n or n != ansatz.n_params:
        raise ValueError(f"{path}: parameter count mismatch")
    return ansatz, params
