"""Dense linear algebra on small qubit registers.

Qubit 0 is the most significant bit of a basis index (big-endian), so the
amplitude of ``|q0 q1 ... q_{N-1}>`` sits at index ``q0*2**(N-1) + ... + q_{N-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Union

import numpy as np

from nqss import tolerances as tol
from nqss.errors import InvalidInputError

MAX_QUBITS = 12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([PAULI_X, PAULI_Y, PAULI_Z])


def _num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if n < 1 or 2**n != dim:
        raise InvalidInputError(f"dimension {dim} is not a power of two >= 2")
    if n > MAX_QUBITS:
        raise InvalidInputError(f"{n} qubits exceeds the {MAX_QUBITS}-qubit limit")
    return n


@dataclass(frozen=True, eq=False)
class Ket:
    """Normalized pure state of a qubit register."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        _num_qubits(amps.size)
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > tol.NORM:
            raise InvalidInputError(f"ket is not normalized (|psi|^2 = {norm2!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, amplitudes) -> "Ket":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InvalidInputError("cannot normalize the zero vector")
        return cls(amps / norm)

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    def density(self) -> "HermitianOperator":
        return HermitianOperator(np.outer(self.amplitudes, self.amplitudes.conj()))

    def __repr__(self):
        return f"Ket(num_qubits={self.num_qubits})"


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Hermitian matrix acting on a qubit register."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidInputError(f"operator must be square, got shape {m.shape}")
        _num_qubits(m.shape[0])
        if np.max(np.abs(m - m.conj().T)) > tol.HERMITIAN:
            raise InvalidInputError("operator is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def num_qubits(self) -> int:
        return self.entries.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_density_matrix(self) -> bool:
        if abs(np.trace(self.entries).real - 1.0) > tol.TRACE:
            return False
        return bool(np.linalg.eigvalsh(self.entries).min() >= -tol.PSD)

    def __add__(self, other):
        return HermitianOperator(self.entries + _entries(other))

    def __sub__(self, other):
        return HermitianOperator(self.entries - _entries(other))

    def __mul__(self, scalar):
        if not np.isrealobj(scalar):
            return NotImplemented
        return HermitianOperator(self.entries * float(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        return f"HermitianOperator(num_qubits={self.num_qubits})"


State = Union[Ket, HermitianOperator]


def _entries(op) -> np.ndarray:
    return op.entries if isinstance(op, HermitianOperator) else np.asarray(op)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = np.sqrt(self.x**2 + self.y**2 + self.z**2)
        if abs(norm - 1.0) > tol.NORM:
            raise InvalidInputError(f"Bloch vector has norm {norm!r}, expected 1")

    @classmethod
    def from_array(cls, v) -> "BlochVector":
        x, y, z = (float(c) for c in v)
        return cls(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def tensor(*factors):
    """Kronecker product of kets or of operators; the first factor owns qubit 0."""
    if not factors:
        raise InvalidInputError("tensor needs at least one factor")
    if all(isinstance(f, Ket) for f in factors):
        return Ket(reduce(np.kron, [f.amplitudes for f in factors]))
    if all(isinstance(f, HermitianOperator) for f in factors):
        return HermitianOperator(reduce(np.kron, [f.entries for f in factors]))
    raise InvalidInputError("tensor operands must all be kets or all be operators")


def pauli(direction) -> HermitianOperator:
    """Single-qubit observable ``x*sigma_x + y*sigma_y + z*sigma_z``."""
    if not isinstance(direction, BlochVector):
        direction = BlochVector.from_array(direction)
    return HermitianOperator(np.tensordot(direction.as_array(), PAULIS, axes=1))


def _check_keep(keep: Sequence[int], n: int) -> list[int]:
    keep = [int(k) for k in keep]
    if not keep:
        raise InvalidInputError("keep must be nonempty")
    if len(set(keep)) != len(keep):
        raise InvalidInputError(f"duplicate qubit indices in {keep}")
    if any(k < 0 or k >= n for k in keep):
        raise InvalidInputError(f"qubit indices {keep} out of range for {n} qubits")
    return keep


def partial_trace(rho: State, keep: Sequence[int]) -> HermitianOperator:
    """Reduced state on the qubits ``keep``, in the order given.

    Accepts a density operator or a ket; for kets the trace is done on the
    amplitude tensor directly, which avoids forming the full projector.
    """
    n = rho.num_qubits
    keep = _check_keep(keep, n)
    rest = [q for q in range(n) if q not in keep]
    dk = 2 ** len(keep)
    if isinstance(rho, Ket):
        psi = rho.amplitudes.reshape((2,) * n).transpose(keep + rest).reshape(dk, -1)
        out = psi @ psi.conj().T
    else:
        t = rho.entries.reshape((2,) * (2 * n))
        t = t.transpose(keep + rest + [n + q for q in keep] + [n + q for q in rest])
        dr = 2 ** len(rest)
        out = np.einsum("ajbj->ab", t.reshape(dk, dr, dk, dr))
    return HermitianOperator((out + out.conj().T) / 2)


def embed(op: np.ndarray, qubits: Sequence[int], num_qubits: int) -> np.ndarray:
    """Matrix of ``op`` acting on ``qubits`` (in order) of a larger register."""
    qubits = _check_keep(qubits, num_qubits)
    rest = [q for q in range(num_qubits) if q not in qubits]
    full = np.kron(op, np.eye(2 ** len(rest)))
    order = qubits + rest
    inv = np.argsort(order)
    t = full.reshape((2,) * (2 * num_qubits))
    t = t.transpose(list(inv) + [num_qubits + i for i in inv])
    d = 2**num_qubits
    return t.reshape(d, d)


def expectation(rho: State, obs: HermitianOperator) -> float:
    """``Tr(rho obs)``; a ket is treated as its projector."""
    o = _entries(obs)
    if isinstance(rho, Ket):
        if rho.amplitudes.size != o.shape[0]:
            raise InvalidInputError("dimension mismatch between state and observable")
        val = np.vdot(rho.amplitudes, o @ rho.amplitudes)
    else:
        r = _entries(rho)
        if r.shape != o.shape:
            raise InvalidInputError("dimension mismatch between state and observable")
        val = np.einsum("ij,ji->", r, o)
    if abs(val.imag) > tol.IMAG:
        raise InvalidInputError(f"expectation has imaginary part {val.imag!r}")
    return float(val.real)


def max_eigenpair(obs: HermitianOperator) -> tuple[float, Ket]:
    """Largest eigenvalue and a unit eigenvector (LAPACK dense Hermitian solver)."""
    m = _entries(obs)
    vals, vecs = np.linalg.eigh(m)
    v = vecs[:, -1]
    return float(vals[-1]), Ket(v / np.linalg.norm(v))


def pauli_correlations(rho: State) -> np.ndarray:
    """Real tensor ``T[mu_1, ..., mu_M] = Tr(rho sigma_mu_1 x ... x sigma_mu_M)``.

    Indices run over (x, y, z); the result has shape ``(3,) * M``.
    """
    r = rho.density().entries if isinstance(rho, Ket) else _entries(rho)
    n = _num_qubits(r.shape[0])
    t = r.reshape((2,) * (2 * n))
    # contract qubit pairs (ket i_k, bra j_k) with sigma[mu][j_k, i_k], one at a time
    for k in range(n):
        # axes of t: already-converted mu's (k of them), then i_k..i_{n-1}, j_k..j_{n-1}
        rem = n - k
        t = np.tensordot(t, PAULIS, axes=([k, k + rem], [2, 1]))
        t = np.moveaxis(t, -1, k)
    return np.ascontiguousarray(t.real)


# rows are <+| and <-| for each measurement axis; outcome index 0 means +1
_EIGENBRAS = {
    "x": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "y": np.array([[1, -1j], [1, 1j]], dtype=complex) / np.sqrt(2),
    "z": np.eye(2, dtype=complex),
}


def eigenstate(axis: str, outcome: int) -> np.ndarray:
    """Single-qubit eigenvector of ``sigma_axis`` with eigenvalue ``outcome`` (+1/-1)."""
    if outcome not in (1, -1):
        raise InvalidInputError(f"outcome must be +1 or -1, got {outcome!r}")
    return _EIGENBRAS[axis][0 if outcome == 1 else 1].conj()


def born_probabilities(rho: State, qubits: Sequence[int], axes: Sequence[str]) -> np.ndarray:
    """Joint outcome probabilities of measuring ``sigma_axes[i]`` on ``qubits[i]``.

    Returns an array of shape ``(2,) * len(qubits)``; index 0 on an axis is
    outcome +1, index 1 is outcome -1.
    """
    if len(qubits) != len(axes):
        raise InvalidInputError("need one axis per measured qubit")
    for ax in axes:
        if ax not in _EIGENBRAS:
            raise InvalidInputError(f"unknown measurement axis {ax!r}")
    red = partial_trace(rho, qubits).entries
    m = len(qubits)
    t = red.reshape((2,) * (2 * m))
    for k, ax in enumerate(axes):
        u = _EIGENBRAS[ax]
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [k])), 0, k)
        t = np.moveaxis(np.tensordot(t, u.conj(), axes=([m + k], [1])), -1, m + k)
    d = 2**m
    p = np.real(np.diagonal(t.reshape(d, d))).copy()
    p[p < 0] = 0.0
    return (p / p.sum()).reshape((2,) * m)
