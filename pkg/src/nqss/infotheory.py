"""Entropies, coalition measurement statistics and mutual informations.

A coalition's bit is the product of its members' +/-1 outcomes, which is how
the secret-sharing key is read off.  Mutual informations are averaged over the
sifted rounds: every x/y assignment to the measured qubits with an even number
of sigma_y.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from nqss.errors import InvalidInputError
from nqss.qlinalg import Ket, State, born_probabilities, partial_trace
from nqss.states import AttackScenario, attacked_state

PAIRS = ("AB", "AE", "BE")


def shannon_entropy(p: Sequence[float]) -> float:
    """Entropy in bits; zero-probability terms contribute nothing."""
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0 or np.any(p < -1e-15) or abs(p.sum() - 1.0) > 1e-12:
        raise InvalidInputError(f"not a probability distribution: {p}")
    nz = p[p > 0]
    return float(max(0.0, -np.sum(nz * np.log2(nz))))


def binary_entropy(d: float) -> float:
    return shannon_entropy([d, 1.0 - d])


@dataclass(frozen=True)
class CoalitionSplit:
    """Two disjoint, nonempty groups of qubits."""

    left: tuple
    right: tuple

    def __post_init__(self):
        left, right = tuple(int(q) for q in self.left), tuple(int(q) for q in self.right)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        if not left or not right:
            raise InvalidInputError("coalitions must be nonempty")
        if set(left) & set(right):
            raise InvalidInputError("coalitions must be disjoint")
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise InvalidInputError("duplicate qubit in coalition")

    @property
    def members(self) -> tuple:
        return self.left + self.right

    def validate(self, num_qubits: int) -> None:
        if any(q < 0 or q >= num_qubits for q in self.members):
            raise InvalidInputError(f"coalition {self} out of range for {num_qubits} qubits")


@dataclass(frozen=True)
class ProbTable:
    variables: tuple
    entries: Mapping

    def __post_init__(self):
        total = sum(self.entries.values())
        if any(v < -1e-15 for v in self.entries.values()) or abs(total - 1.0) > 1e-12:
            raise InvalidInputError("probabilities must be >= 0 and sum to 1")

    def __getitem__(self, outcome):
        return self.entries.get(tuple(outcome), 0.0)

    def disagreement(self) -> float:
        """Probability that the two variables differ (two-variable tables only)."""
        if len(self.variables) != 2:
            raise InvalidInputError("disagreement needs exactly two variables")
        return self[(1, -1)] + self[(-1, 1)]

    def marginal(self, i: int) -> list[float]:
        out = {1: 0.0, -1: 0.0}
        for k, v in self.entries.items():
            out[k[i]] += v
        return [out[1], out[-1]]


def joint_distribution(
    psi: State, settings: Mapping[int, str], split: CoalitionSplit, names: Sequence[str] = ("left", "right")
) -> ProbTable:
    """Born-rule table of the two coalition bits for the given x/y settings.

    ``settings`` maps every qubit in the split to ``"x"`` or ``"y"``.
    """
    psi_n = psi.num_qubits
    split.validate(psi_n)
    members = list(split.members)
    axes = []
    for q in members:
        ax = settings.get(q)
        if ax not in ("x", "y"):
            raise InvalidInputError(f"qubit {q} needs an x or y setting, got {ax!r}")
        axes.append(ax)
    probs = born_probabilities(psi, members, axes)
    nl = len(split.left)
    table = {(1, 1): 0.0, (1, -1): 0.0, (-1, 1): 0.0, (-1, -1): 0.0}
    for idx in itertools.product((0, 1), repeat=len(members)):
        signs = [1 - 2 * b for b in idx]
        key = (int(np.prod(signs[:nl])), int(np.prod(signs[nl:])))
        table[key] += float(probs[idx])
    return ProbTable(tuple(names), table)


def table_mutual_information(table: ProbTable) -> float:
    joint = [table[k] for k in ((1, 1), (1, -1), (-1, 1), (-1, -1))]
    s = sum(joint)
    joint = [j / s for j in joint]
    return (
        shannon_entropy(table.marginal(0)) + shannon_entropy(table.marginal(1)) - shannon_entropy(joint)
    )


def sifted_settings(qubits: Sequence[int]):
    """All x/y assignments to ``qubits`` with an even number of y."""
    for axes in itertools.product("xy", repeat=len(qubits)):
        if axes.count("y") % 2 == 0:
            yield dict(zip(qubits, axes))


def mutual_information(psi: State, split: CoalitionSplit) -> float:
    """Coalition mutual information averaged over the sifted rounds, in bits."""
    split.validate(psi.num_qubits)
    reduced = partial_trace(psi, split.members)
    local = CoalitionSplit(tuple(range(len(split.left))), tuple(range(len(split.left), len(split.members))))
    vals = [
        table_mutual_information(joint_distribution(reduced, s, local))
        for s in sifted_settings(local.members)
    ]
    return float(np.clip(np.mean(vals), 0.0, None))


def _check_phi(phi: float) -> None:
    if not 0.0 <= phi <= np.pi / 2:
        raise InvalidInputError(f"phi={phi!r} outside [0, pi/2]")


def disagreement_closed_form(pair: str, phi: float) -> float:
    """Error rates between two of A, B, E after the attack on a BB84 channel."""
    _check_phi(phi)
    if pair == "AB":
        return (1 - np.cos(phi)) / 2
    if pair == "AE":
        return (1 - np.sin(phi)) / 2
    if pair == "BE":
        return (1 - np.sin(2 * phi)) / 2
    raise InvalidInputError(f"pair must be one of {PAIRS}, got {pair!r}")


def information_closed_form(pair: str, phi: float) -> float:
    return 1.0 - binary_entropy(disagreement_closed_form(pair, phi))


def coalition_informations(sc: AttackScenario) -> tuple[float, float]:
    """``(I_a, I_u)``: the authorized partners' and the Eve-side coalition's information."""
    return information_closed_form("AB", sc.phi), information_closed_form("AE", sc.phi)


def authorized_split(sc: AttackScenario) -> CoalitionSplit:
    """Alice against every other honest or dishonest receiver (Eve excluded)."""
    return CoalitionSplit((0,), tuple(range(1, sc.N)))


def unauthorized_split(sc: AttackScenario) -> CoalitionSplit:
    """Alice against the Bobs working with Eve, plus Eve."""
    return CoalitionSplit((0,), tuple(range(1, sc.N - sc.n)) + (sc.eve,))


def coalition_informations_from_state(sc: AttackScenario) -> tuple[float, float]:
    psi = attacked_state(sc)
    return mutual_information(psi, authorized_split(sc)), mutual_information(psi, unauthorized_split(sc))
