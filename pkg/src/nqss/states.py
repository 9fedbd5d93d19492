"""Protocol states: GHZ sources, the x/y/z GHZ-type basis, conditionally
prepared states and the states left behind by the optimal individual attack.

Register order after an attack is (Alice and the Bobs, the Charlies, Eve).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np

from nqss import tolerances as tol
from nqss.errors import InvalidInputError, UnsupportedInputError
from nqss.qlinalg import (
    MAX_QUBITS,
    PAULIS,
    HermitianOperator,
    Ket,
    born_probabilities,
    eigenstate,
    expectation,
)

AXIS_INDEX = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class AttackScenario:
    """``N`` partners, ``n`` of them spied on, attack strength ``phi``."""

    N: int
    n: int
    phi: float

    def __post_init__(self):
        if self.N < 2:
            raise InvalidInputError(f"need N >= 2 partners, got {self.N}")
        if not 1 <= self.n <= self.N - 1:
            raise InvalidInputError(f"need 1 <= n <= N-1, got n={self.n} for N={self.N}")
        if self.N + 1 > MAX_QUBITS:
            raise InvalidInputError(f"N={self.N} needs more than {MAX_QUBITS} qubits")
        if not 0.0 <= self.phi <= np.pi / 2:
            raise InvalidInputError(f"phi={self.phi!r} outside [0, pi/2]")

    @property
    def num_bobs(self) -> int:
        """Receivers other than Alice on the unspied side."""
        return self.N - self.n - 1

    @property
    def alice_block(self) -> list[int]:
        return list(range(self.N - self.n))

    @property
    def charlies(self) -> list[int]:
        return list(range(self.N - self.n, self.N))

    @property
    def eve(self) -> int:
        return self.N


@dataclass(frozen=True)
class BasisLabel:
    """One of ``|0^w>_axis``, ``|1^w>_axis``."""

    axis: str
    bit: int
    width: int

    def __post_init__(self):
        if self.axis not in AXIS_INDEX:
            raise InvalidInputError(f"axis must be x, y or z, got {self.axis!r}")
        if self.bit not in (0, 1):
            raise InvalidInputError(f"bit must be 0 or 1, got {self.bit!r}")
        if not 1 <= self.width <= MAX_QUBITS:
            raise InvalidInputError(f"width {self.width} outside 1..{MAX_QUBITS}")

    def __str__(self):
        return f"|{self.bit}^{self.width}>_{self.axis}"


@dataclass(frozen=True)
class MeasurementRecord:
    """Per-partner (axis, outcome) pairs; protocol partners measure only x or y."""

    entries: tuple

    def __post_init__(self):
        entries = tuple((str(ax), int(s)) for ax, s in self.entries)
        for ax, s in entries:
            if ax not in ("x", "y"):
                raise InvalidInputError(f"protocol measurements are x or y, got {ax!r}")
            if s not in (1, -1):
                raise InvalidInputError(f"outcome must be +1 or -1, got {s!r}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, axes: str, signs: str) -> "MeasurementRecord":
        """``MeasurementRecord.parse("xy", "+-")``."""
        if len(axes) != len(signs):
            raise InvalidInputError("axes and signs differ in length")
        return cls(tuple((a, 1 if s == "+" else -1) for a, s in zip(axes, signs)))

    @property
    def axes(self) -> tuple:
        return tuple(ax for ax, _ in self.entries)

    @property
    def outcomes(self) -> tuple:
        return tuple(s for _, s in self.entries)

    @property
    def y_count(self) -> int:
        return sum(ax == "y" for ax in self.axes)

    def __len__(self):
        return len(self.entries)


def _basis_vector(index: int, n: int) -> np.ndarray:
    v = np.zeros(2**n, dtype=complex)
    v[index] = 1.0
    return v


def ghz(N: int) -> Ket:
    """``(|0^N> + |1^N>)/sqrt(2)``."""
    if not 2 <= N <= MAX_QUBITS:
        raise InvalidInputError(f"GHZ width {N} outside 2..{MAX_QUBITS}")
    return basis_state(BasisLabel("x", 0, N))


def basis_state(label: BasisLabel) -> Ket:
    w = label.width
    zeros, ones = _basis_vector(0, w), _basis_vector(2**w - 1, w)
    if label.axis == "z":
        return Ket(ones if label.bit else zeros)
    phase = {"x": 1.0, "y": 1j}[label.axis] * (-1 if label.bit else 1)
    return Ket((zeros + phase * ones) / np.sqrt(2))


def attacked_state(sc: AttackScenario) -> Ket:
    """State of the ``N + 1`` qubits after the attack on the last ``n`` channels."""
    N, n = sc.N, sc.n
    total = N + 1
    all_ones = 2**N - 1
    alice_ones_only = (2 ** (N - n) - 1) << n  # |1^{N-n}>|0^n>
    amps = (
        _basis_vector(0, total)
        + np.cos(sc.phi) * _basis_vector(all_ones << 1, total)
        + np.sin(sc.phi) * _basis_vector((alice_ones_only << 1) | 1, total)
    ) / np.sqrt(2)
    return Ket(amps)


def apply_attack(psi: Ket, spied: Iterable[int], phi: float) -> Ket:
    """Append Eve's qubit in ``|0>`` and apply the optimal individual attack.

    On the spied block, ``|0^n>|0> -> |0^n>|0>`` and
    ``|1^n>|0> -> cos(phi)|1^n>|0> + sin(phi)|0^n>|1>``.  The isometry is only
    defined on ``span{|0^n>, |1^n>}``; any other support is rejected.
    """
    spied = sorted(set(int(q) for q in spied))
    N = psi.num_qubits
    if not spied:
        raise InvalidInputError("need at least one spied qubit")
    if any(q < 0 or q >= N for q in spied):
        raise InvalidInputError(f"spied qubits {spied} out of range for {N} qubits")
    if N + 1 > MAX_QUBITS:
        raise InvalidInputError("no room for Eve's qubit")
    n = len(spied)
    rest = [q for q in range(N) if q not in spied]
    t = psi.amplitudes.reshape((2,) * N).transpose(rest + spied).reshape(2 ** len(rest), 2**n)
    inner = t[:, 1:-1]
    if inner.size and np.max(np.abs(inner)) > tol.NORM:
        raise UnsupportedInputError("spied block has support outside span{|0^n>, |1^n>}")
    out = np.zeros((2 ** len(rest), 2**n, 2), dtype=complex)
    out[:, 0, 0] = t[:, 0]
    out[:, -1, 0] += np.cos(phi) * t[:, -1]
    out[:, 0, 1] += np.sin(phi) * t[:, -1]
    # undo the block ordering; Eve stays last
    out = out.reshape((2,) * (N + 1))
    order = rest + spied
    inv = list(np.argsort(order)) + [N]
    return Ket(out.transpose(inv).reshape(-1))


def _identify(amps: np.ndarray, width: int) -> BasisLabel:
    for axis in ("x", "y", "z"):
        for bit in (0, 1):
            label = BasisLabel(axis, bit, width)
            overlap = abs(np.vdot(basis_state(label).amplitudes, amps))
            if abs(overlap - 1.0) < 1e-9:
                return label
    raise UnsupportedInputError("conditional state is not one of the labeled basis states")


def conditional_state(ghz_width: int, measured: MeasurementRecord) -> BasisLabel:
    """State prepared on the last qubits of a GHZ state by measuring the first ones.

    Derived by projecting the GHZ state onto the measured eigenstates (the
    sigma_y eigenstate with outcome +1 is ``(|0> + i|1>)/sqrt(2)``).  The result
    is an x-type label when an even number of ``sigma_y`` were measured and a
    y-type label otherwise.
    """
    k = len(measured)
    if not 1 <= k <= ghz_width - 1:
        raise InvalidInputError(f"need 1..{ghz_width - 1} measured partners, got {k}")
    n = ghz_width - k
    t = ghz(ghz_width).amplitudes.reshape(2, -1)
    for ax, s in measured.entries:
        bra = eigenstate(ax, s).conj()
        t = (bra @ t).reshape(2, -1)
    amps = np.asarray(t).reshape(-1)
    return _identify(amps / np.linalg.norm(amps), n)


def correlation_sign(axes: Sequence[str]) -> int:
    """``<sigma_axes[0] (x) ... >`` on the GHZ state of matching width (+1 or -1)."""
    obs = reduce(np.kron, [PAULIS[AXIS_INDEX[a]] for a in axes])
    val = expectation(ghz(len(axes)), HermitianOperator(obs))
    return int(round(val))


def sample_round(psi: Ket, axes: Sequence[str], rng: np.random.Generator) -> tuple:
    """Sample one Born-rule outcome tuple (+1/-1 per qubit) for the given axes."""
    p = born_probabilities(psi, list(range(psi.num_qubits)), axes).reshape(-1)
    idx = int(rng.choice(p.size, p=p))
    bits = [(idx >> (psi.num_qubits - 1 - q)) & 1 for q in range(psi.num_qubits)]
    return tuple(1 - 2 * b for b in bits)


def sift_check(record: MeasurementRecord) -> Optional[bool]:
    """Whether a round shows the GHZ correlation; ``None`` for discarded rounds.

    Rounds with an odd number of ``sigma_y`` carry no key and are dropped.  For
    the others the product of all outcome signs must equal the GHZ correlator
    of the same axes.
    """
    if record.y_count % 2:
        return None
    return int(np.prod(record.outcomes)) == correlation_sign(record.axes)
