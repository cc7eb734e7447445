"""Pauli-string operator algebra and the Jordan-Wigner fermion-to-qubit mapping.

Every operator in the package (Hamiltonians, dipoles, ansatz generators) is a
weighted sum of Pauli strings.  A string stores one letter from ``{I, X, Y, Z}``
per qubit; any phase produced by multiplication is folded into the complex
coefficient, so the letter sequence itself is always a bare tensor product.

Qubit/bit convention used throughout the package: qubit ``q`` corresponds to
bit ``q`` of a basis-state index (weight ``2**q``), so the highest qubit is the
most significant bit.  ``ops[q]`` is the letter acting on qubit ``q``.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

#: Coefficients smaller than this are dropped during canonicalization.
PRUNE_TOL = 1e-14

# Single-qubit group products: (a, b) -> (phase, c) with a*b = phase*c.
_PRODUCT: dict[tuple[str, str], tuple[complex, str]] = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("Y", "I"): (1, "Y"), ("Z", "I"): (1, "Z"),
    ("X", "X"): (1, "I"), ("Y", "Y"): (1, "I"), ("Z", "Z"): (1, "I"),
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
}

# Term ordering used for canonical form: diagonal letters sort first, so a
# canonicalized sum lists its Z-strings before any off-diagonal terms.
_OP_RANK = {"I": 0, "Z": 1, "X": 2, "Y": 3}

_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _rank_key(ops: str) -> tuple[int, ...]:
    return tuple(_OP_RANK[c] for c in ops)


class PauliString:
    """A tensor product of single-qubit Pauli operators times a complex scalar."""

    __slots__ = ("ops", "coeff")

    def __init__(self, ops: str | Sequence[str], coeff: complex = 1.0):
        ops = "".join(ops)
        for c in ops:
            if c not in "IXYZ":
                raise ValueError(f"invalid Pauli letter {c!r} in {ops!r}")
        self.ops = ops
        self.coeff = complex(coeff)

    @property
    def n_qubits(self) -> int:
        return len(self.ops)

    @property
    def is_identity(self) -> bool:
        return set(self.ops) <= {"I"}

    def __mul__(self, other: "PauliString | complex") -> "PauliString":
        if isinstance(other, PauliString):
            return multiply(self, other)
        return PauliString(self.ops, self.coeff * other)

    def __rmul__(self, scalar: complex) -> "PauliString":
        return PauliString(self.ops, self.coeff * scalar)

    def __neg__(self) -> "PauliString":
        return PauliString(self.ops, -self.coeff)

    def dagger(self) -> "PauliString":
        """Adjoint; the letter sequence is self-adjoint so only the coefficient conjugates."""
        return PauliString(self.ops, self.coeff.conjugate())

    def masks(self) -> tuple[int, int, int]:
        """Bitmask form ``(x_mask, z_mask, n_y)`` of the letter sequence.

        ``x_mask`` marks qubits whose bit is flipped (X or Y), ``z_mask`` marks
        qubits contributing a sign (Z or Y), and ``n_y`` counts Y letters, each
        of which carries an extra factor ``i``.
        """
        x_mask = z_mask = n_y = 0
        for q, c in enumerate(self.ops):
            if c in "XY":
                x_mask |= 1 << q
            if c in "ZY":
                z_mask |= 1 << q
            if c == "Y":
                n_y += 1
        return x_mask, z_mask, n_y

    def to_matrix(self) -> np.ndarray:
        """Dense matrix on the full register (test/oracle use only)."""
        m = np.array([[1.0 + 0j]])
        for q in reversed(range(self.n_qubits)):
            m = np.kron(m, _MATS[self.ops[q]])
        return self.coeff * m

    def __repr__(self) -> str:
        return f"PauliString({self.ops!r}, {self.coeff!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return self.ops == other.ops and self.coeff == other.coeff

    def __hash__(self) -> int:
        return hash((self.ops, self.coeff))


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Group product of two Pauli strings with the phase folded into the coefficient."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"register size mismatch: {a.n_qubits} vs {b.n_qubits}")
    phase: complex = 1.0
    ops = []
    for ca, cb in zip(a.ops, b.ops):
        ph, c = _PRODUCT[ca, cb]
        phase *= ph
        ops.append(c)
    return PauliString("".join(ops), a.coeff * b.coeff * phase)


class PauliSum:
    """Canonicalized weighted sum of Pauli strings on a fixed register.

    Like terms are merged and coefficients below :data:`PRUNE_TOL` are pruned,
    so the term set is unique for a given operator.  Iteration yields terms in
    canonical order (lexicographic with ``I < Z < X < Y``); diagonal strings
    therefore come first.
    """

    __slots__ = ("n_qubits", "_terms")

    def __init__(self, terms: Iterable[PauliString] | None = None, n_qubits: int | None = None):
        self._terms: dict[str, complex] = {}
        self.n_qubits = n_qubits
        for t in terms or ():
            if self.n_qubits is None:
                self.n_qubits = t.n_qubits
            elif t.n_qubits != self.n_qubits:
                raise ValueError("mixed register sizes in PauliSum")
            self._terms[t.ops] = self._terms.get(t.ops, 0.0) + t.coeff
        if self.n_qubits is None:
            raise ValueError("register size of an empty PauliSum must be given")
        self._prune()

    def _prune(self) -> None:
        self._terms = {k: v for k, v in self._terms.items() if abs(v) > PRUNE_TOL}

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls((), n_qubits)

    @classmethod
    def identity(cls, n_qubits: int, coeff: complex = 1.0) -> "PauliSum":
        return cls([PauliString("I" * n_qubits, coeff)])

    def terms(self) -> list[PauliString]:
        """Terms in canonical order."""
        return [PauliString(ops, self._terms[ops])
                for ops in sorted(self._terms, key=_rank_key)]

    def coefficient(self, ops: str) -> complex:
        return self._terms.get(ops, 0.0)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[PauliString]:
        return iter(self.terms())

    def __add__(self, other: "PauliSum | PauliString") -> "PauliSum":
        other = _as_sum(other, self.n_qubits)
        if other.n_qubits != self.n_qubits:
            raise ValueError(f"register size mismatch: {self.n_qubits} vs {other.n_qubits}")
        out = PauliSum.zero(self.n_qubits)
        out._terms = dict(self._terms)
        for ops, c in other._terms.items():
            out._terms[ops] = out._terms.get(ops, 0.0) + c
        out._prune()
        return out

    def __sub__(self, other: "PauliSum | PauliString") -> "PauliSum":
        return self + (-1.0) * _as_sum(other, self.n_qubits)

    def __neg__(self) -> "PauliSum":
        return (-1.0) * self

    def __mul__(self, other: "PauliSum | PauliString | complex") -> "PauliSum":
        if isinstance(other, (PauliSum, PauliString)):
            other = _as_sum(other, self.n_qubits)
            if other.n_qubits != self.n_qubits:
                raise ValueError(f"register size mismatch: {self.n_qubits} vs {other.n_qubits}")
            out = PauliSum.zero(self.n_qubits)
            for a in self:
                for b in other:
                    p = multiply(a, b)
                    out._terms[p.ops] = out._terms.get(p.ops, 0.0) + p.coeff
            out._prune()
            return out
        out = PauliSum.zero(self.n_qubits)
        out._terms = {k: v * other for k, v in self._terms.items()}
        out._prune()
        return out

    def __rmul__(self, scalar: complex) -> "PauliSum":
        return self * scalar

    def dagger(self) -> "PauliSum":
        out = PauliSum.zero(self.n_qubits)
        out._terms = {k: v.conjugate() for k, v in self._terms.items()}
        return out

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        """True iff all coefficients are real within ``tol`` (strings are self-adjoint)."""
        return all(abs(v.imag) <= tol for v in self._terms.values())

    def extended(self, n_total: int) -> "PauliSum":
        """Pad with identities on new high qubits up to ``n_total``."""
        if n_total < self.n_qubits:
            raise ValueError("cannot shrink a register")
        pad = "I" * (n_total - self.n_qubits)
        out = PauliSum.zero(n_total)
        out._terms = {ops + pad: c for ops, c in self._terms.items()}
        return out

    def to_matrix(self) -> np.ndarray:
        """Dense matrix on the full register (test/oracle use only)."""
        dim = 2 ** self.n_qubits
        m = np.zeros((dim, dim), dtype=complex)
        for t in self:
            m += t.to_matrix()
        return m

    def __repr__(self) -> str:
        inner = " + ".join(f"({self._terms[ops]:.6g})*{ops}"
                           for ops in sorted(self._terms, key=_rank_key))
        return f"PauliSum[{inner or '0'}; n={self.n_qubits}]"


def _as_sum(x: PauliSum | PauliString, n_qubits: int) -> PauliSum:
    if isinstance(x, PauliString):
        return PauliSum([x])
    return x


def add(a: PauliSum, b: PauliSum) -> PauliSum:
    """Canonicalized sum of two operators on equal registers."""
    return a + b


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """``a@b - b@a``, canonicalized."""
    return a * b - b * a


class FermionOp:
    """An ordered product of fermionic ladder operators times a coefficient.

    ``factors`` is a sequence of ``(mode, dagger)`` pairs applied right to
    left, i.e. ``FermionOp([(p, True), (q, False)])`` is the excitation
    ``a^+_p a_q``.  Normal ordering is not required.
    """

    __slots__ = ("factors", "coeff")

    def __init__(self, factors: Iterable[tuple[int, bool]], coeff: complex = 1.0):
        self.factors = tuple((int(m), bool(d)) for m, d in factors)
        self.coeff = complex(coeff)
        if any(m < 0 for m, _ in self.factors):
            raise ValueError("mode indices must be non-negative")

    def dagger(self) -> "FermionOp":
        return FermionOp([(m, not d) for m, d in reversed(self.factors)],
                         self.coeff.conjugate())

    def __mul__(self, other: "FermionOp | complex") -> "FermionOp":
        if isinstance(other, FermionOp):
            return FermionOp(self.factors + other.factors, self.coeff * other.coeff)
        return FermionOp(self.factors, self.coeff * other)

    def __rmul__(self, scalar: complex) -> "FermionOp":
        return FermionOp(self.factors, self.coeff * scalar)

    def __repr__(self) -> str:
        body = " ".join(f"a{'+' if d else ''}_{m}" for m, d in self.factors) or "1"
        return f"FermionOp({self.coeff:.6g} * {body})"


def _ladder_image(mode: int, dagger: bool, n_modes: int) -> PauliSum:
    # a_p -> (X_p + i Y_p)/2 (x) Z-string on modes < p; dagger conjugates the i.
    zs = "Z" * mode
    pad = "I" * (n_modes - mode - 1)
    sign = -1j if dagger else 1j
    return PauliSum([
        PauliString(zs + "X" + pad, 0.5),
        PauliString(zs + "Y" + pad, 0.5 * sign),
    ])


def jordan_wigner(op: FermionOp | Iterable[FermionOp], n_modes: int) -> PauliSum:
    """Map a fermionic operator (or a sum of them) to a qubit operator.

    Uses the standard chain encoding ``a_p -> (X_p + iY_p)/2 (x) Z_{<p}`` with
    mode ``p`` on qubit ``p``; linear over iterables of :class:`FermionOp`.
    """
    if isinstance(op, FermionOp):
        op = [op]
    total = PauliSum.zero(n_modes)
    for f in op:
        if any(m >= n_modes for m, _ in f.factors):
            raise ValueError(f"mode index out of range for {n_modes} modes: {f!r}")
        acc = PauliSum.identity(n_modes, f.coeff)
        for mode, dag in f.factors:
            acc = acc * _ladder_image(mode, dag, n_modes)
        total = total + acc
    return total
