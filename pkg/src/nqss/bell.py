"""CHSH and Mermin-Klyshko Bell operators and their maximization.

The Mermin-Klyshko operator on ``M`` qubits is built by the recursion

    B_M = 1/2 B_{M-1} (x) (s_M + s'_M) + 1/2 B'_{M-1} (x) (s_M - s'_M)

anchored at ``B_1 = 2 s_1`` so that ``B_2`` is exactly the CHSH operator
``(s_1 + s'_1) s_2 + (s_1 - s'_1) s'_2``.  Here ``s_k`` is the Pauli observable
along ``a_k`` and the primed operator swaps every ``a_k`` with ``a'_k``.
Qubit ``k`` of the operator is register position ``k - 1``.

Writing ``g_k = a_k + i a'_k``, the recursion unrolls to

    B_M + i B'_M = 2 ((1 - i)/2)**(M-1)  (x)_k  g_k . sigma

so ``Tr(rho B_M)`` is the real part of a full contraction of the Pauli
correlation tensor of ``rho`` with the ``g_k``.  The optimizers work on that
form; :func:`mk_operator` keeps the explicit recursion.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from nqss import tolerances as tol
from nqss.errors import InvalidInputError, ResourceLimitError
from nqss.qlinalg import (
    PAULIS,
    HermitianOperator,
    Ket,
    State,
    embed,
    partial_trace,
    pauli,
    pauli_correlations,
)

log = logging.getLogger(__name__)

MAX_OVERLAP_QUBITS = 8


@dataclass(frozen=True, eq=False)
class SettingSet:
    """Two measurement directions per qubit, stored as ``(M, 3)`` arrays."""

    a: np.ndarray
    a_prime: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float).reshape(-1, 3)
        ap = np.array(self.a_prime, dtype=float).reshape(-1, 3)
        if a.shape != ap.shape or a.shape[0] < 1:
            raise InvalidInputError("need the same number (>= 1) of a and a' vectors")
        norms = np.concatenate([np.linalg.norm(a, axis=1), np.linalg.norm(ap, axis=1)])
        if np.max(np.abs(norms - 1.0)) > tol.NORM:
            raise InvalidInputError("setting vectors must have unit norm")
        a.setflags(write=False)
        ap.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "a_prime", ap)

    @property
    def M(self) -> int:
        return self.a.shape[0]

    @classmethod
    def random(cls, M: int, rng: np.random.Generator) -> "SettingSet":
        v = rng.standard_normal((2, M, 3))
        v /= np.linalg.norm(v, axis=2, keepdims=True)
        return cls(v[0], v[1])

    @classmethod
    def uniform(cls, a, a_prime, M: int) -> "SettingSet":
        """Same pair of directions on every qubit."""
        return cls(np.tile(np.asarray(a, float), (M, 1)), np.tile(np.asarray(a_prime, float), (M, 1)))

    def swapped(self) -> "SettingSet":
        return SettingSet(self.a_prime, self.a)

    def complex_directions(self) -> np.ndarray:
        return self.a + 1j * self.a_prime


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    tol: float = 1e-10
    margin: float = 1e-4
    stable_window: int = 8
    seed: int = 0
    max_sweeps: int = 5000

    def __post_init__(self):
        if self.restarts < 1:
            raise InvalidInputError("restarts must be >= 1")
        if self.stable_window < 1:
            raise InvalidInputError("stable_window must be >= 1")
        if self.tol <= 0:
            raise InvalidInputError("tol must be positive")

    def restart_rngs(self) -> list[np.random.Generator]:
        # one independent stream per restart, so order of execution is irrelevant
        children = np.random.SeedSequence(self.seed).spawn(self.restarts)
        return [np.random.default_rng(c) for c in children]


@dataclass(frozen=True, eq=False)
class BellResult:
    value: float
    settings: SettingSet
    restarts_used: int
    converged: bool
    restart_values: tuple = field(default=(), repr=False)


def mk_prefactor(M: int) -> complex:
    return 2 * ((1 - 1j) / 2) ** (M - 1)


def chsh_operator(s: SettingSet) -> HermitianOperator:
    """``(s_a1 + s_a1') (x) s_a2 + (s_a1 - s_a1') (x) s_a2'``."""
    if s.M != 2:
        raise InvalidInputError(f"CHSH needs two qubits of settings, got {s.M}")
    s1, s1p = pauli(s.a[0]).entries, pauli(s.a_prime[0]).entries
    s2, s2p = pauli(s.a[1]).entries, pauli(s.a_prime[1]).entries
    return HermitianOperator(np.kron(s1 + s1p, s2) + np.kron(s1 - s1p, s2p))


def mk_operator(s: SettingSet) -> HermitianOperator:
    """Mermin-Klyshko operator by explicit recursion over the qubits."""
    if s.M < 2:
        raise InvalidInputError(f"Mermin-Klyshko operator needs M >= 2, got {s.M}")
    b = 2 * pauli(s.a[0]).entries
    bp = 2 * pauli(s.a_prime[0]).entries
    for k in range(1, s.M):
        sk, skp = pauli(s.a[k]).entries, pauli(s.a_prime[k]).entries
        b, bp = (
            0.5 * np.kron(b, sk + skp) + 0.5 * np.kron(bp, sk - skp),
            0.5 * np.kron(bp, skp + sk) + 0.5 * np.kron(b, skp - sk),
        )
    return HermitianOperator(b)


def mk_operator_matrix(g: np.ndarray) -> np.ndarray:
    """Dense ``B_M`` from the unrolled product form; ``g`` is ``(M, 3)`` complex."""
    M = g.shape[0]
    ops = np.tensordot(g, PAULIS, axes=([1], [0]))
    f = ops[0]
    for k in range(1, M):
        f = np.kron(f, ops[k])
    f = mk_prefactor(M) * f
    return (f + f.conj().T) / 2


def _contract_all_but(t: np.ndarray, g: np.ndarray, k: int) -> np.ndarray:
    """Contract correlation tensor with every ``g_l`` except ``l = k``."""
    M = g.shape[0]
    w = t.astype(complex)
    # contract from the last axis down so earlier axis numbers stay valid
    for l in range(M - 1, -1, -1):
        if l != k:
            w = np.tensordot(w, g[l], axes=([l], [0]))
    return w


def bell_value_from_correlations(t: np.ndarray, g: np.ndarray) -> float:
    w = _contract_all_but(t, g, 0)
    return float((mk_prefactor(g.shape[0]) * (w @ g[0])).real)


def ascend(
    t: np.ndarray,
    settings: SettingSet,
    tol_: float = 1e-10,
    max_sweeps: int = 5000,
    trace: Optional[Callable[[float], None]] = None,
) -> tuple[float, SettingSet]:
    """Alternating exact ascent of ``Tr(rho B_M)`` over the setting vectors.

    ``t`` is the Pauli correlation tensor of ``rho`` (any Hermitian weight is
    accepted, it need not be a state).  For fixed other qubits the objective
    is ``a_k . Re(c w) - a'_k . Im(c w)``, so each update sets ``a_k`` and
    ``a'_k`` to the normalized coefficient vectors.  ``trace`` receives the
    objective after every single-qubit update.
    """
    M = settings.M
    c = mk_prefactor(M)
    a = settings.a.copy()
    ap = settings.a_prime.copy()
    g = a + 1j * ap
    value = bell_value_from_correlations(t, g)
    if trace is not None:
        trace(value)
    for _ in range(max_sweeps):
        before = value
        for k in range(M):
            cw = c * _contract_all_but(t, g, k)
            ra, rb = cw.real, -cw.imag
            na, nb = np.linalg.norm(ra), np.linalg.norm(rb)
            if na > tol.FLAT_DIRECTION:
                a[k] = ra / na
            if nb > tol.FLAT_DIRECTION:
                ap[k] = rb / nb
            g[k] = a[k] + 1j * ap[k]
            value = float(a[k] @ ra + ap[k] @ rb)
            if trace is not None:
                trace(value)
        if value - before < tol_:
            break
    return value, SettingSet(_renormalize(a), _renormalize(ap))


def _renormalize(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _stable(values: Sequence[float], window: int) -> bool:
    """Best value was already reached before the last ``window`` restarts."""
    if len(values) <= window:
        return False
    best = max(values)
    head = max(values[:-window])
    return best - head <= 1e-7 * max(1.0, abs(best))


def maximize_bell(rho: State, M: Optional[int] = None, cfg: OptimizerConfig = OptimizerConfig()) -> BellResult:
    """Multi-start maximization of ``Tr(rho B_M)`` over all settings."""
    if M is None:
        M = rho.num_qubits
    if rho.num_qubits != M:
        raise InvalidInputError(f"state has {rho.num_qubits} qubits, operator {M}")
    if M < 2:
        raise InvalidInputError("Bell value needs M >= 2")
    t = pauli_correlations(rho)
    return _multistart(lambda s: ascend(t, s, cfg.tol, cfg.max_sweeps), M, cfg)


def maximize_bell_weight(weight: np.ndarray, cfg: OptimizerConfig = OptimizerConfig()) -> BellResult:
    """Same as :func:`maximize_bell` for an arbitrary Hermitian weight matrix."""
    w = np.asarray(weight, dtype=complex)
    w = (w + w.conj().T) / 2
    t = pauli_correlations(HermitianOperator(w))
    M = t.ndim
    return _multistart(lambda s: ascend(t, s, cfg.tol, cfg.max_sweeps), M, cfg)


def _multistart(run, M: int, cfg: OptimizerConfig) -> BellResult:
    best_val, best_set = -np.inf, None
    values = []
    for rng in cfg.restart_rngs():
        val, s = run(SettingSet.random(M, rng))
        values.append(val)
        if val > best_val:
            best_val, best_set = val, s
    return BellResult(
        value=float(best_val),
        settings=best_set,
        restarts_used=len(values),
        converged=_stable(values, cfg.stable_window),
        restart_values=tuple(values),
    )


def horodecki_value(rho: HermitianOperator) -> float:
    """Maximal CHSH value ``2 sqrt(t1^2 + t2^2)`` of a two-qubit state.

    ``t1 >= t2`` are the two largest singular values of the correlation
    matrix ``T_ij = Tr(rho sigma_i (x) sigma_j)``.
    """
    if rho.num_qubits != 2:
        raise InvalidInputError("Horodecki value is defined for two qubits")
    if not rho.is_density_matrix():
        raise InvalidInputError("input is not a density matrix")
    sv = np.linalg.svd(pauli_correlations(rho), compute_uv=False)
    return float(2 * np.sqrt(sv[0] ** 2 + sv[1] ** 2))


@dataclass(frozen=True)
class OverlapSpec:
    """Two overlapping qubit subsets of a ``k``-qubit register.

    ``subset_n`` is the larger set; the smaller one's Bell value enters with
    weight ``2**((n - m)/2)`` so both thresholds line up at ``2**(n/2)``.
    """

    k: int
    subset_n: tuple
    subset_m: tuple

    def __post_init__(self):
        sn, sm = tuple(self.subset_n), tuple(self.subset_m)
        object.__setattr__(self, "subset_n", sn)
        object.__setattr__(self, "subset_m", sm)
        if len(sm) > len(sn):
            raise InvalidInputError("subset_m must not be larger than subset_n")
        if len(sm) < 2:
            raise InvalidInputError("subsets need at least two qubits")
        for sub in (sn, sm):
            if len(set(sub)) != len(sub) or any(q < 0 or q >= self.k for q in sub):
                raise InvalidInputError(f"bad subset {sub} for k={self.k}")
        if set(sn) == set(sm):
            raise InvalidInputError("subsets must be distinct")
        if not set(sn) & set(sm):
            raise InvalidInputError("subsets must overlap")

    @property
    def n(self) -> int:
        return len(self.subset_n)

    @property
    def m(self) -> int:
        return len(self.subset_m)

    @property
    def weight(self) -> float:
        return 2 ** ((self.n - self.m) / 2)

    @property
    def threshold(self) -> float:
        return 2 * 2 ** (self.n / 2)


@dataclass(frozen=True, eq=False)
class OverlapResult:
    max_value: float
    possible: bool
    threshold: float
    restart_values: tuple = field(repr=False)
    state: Ket = field(repr=False)

    @property
    def verdict(self) -> str:
        return "possible" if self.possible else "impossible"


def overlap_operator(spec: OverlapSpec, big: SettingSet, small: SettingSet) -> np.ndarray:
    vn = embed(mk_operator_matrix(big.complex_directions()), spec.subset_n, spec.k)
    vm = embed(mk_operator_matrix(small.complex_directions()), spec.subset_m, spec.k)
    return vn + spec.weight * vm


def _overlap_restart(spec: OverlapSpec, rng: np.random.Generator, cfg: OptimizerConfig, max_outer: int, inner_sweeps: int):
    big = SettingSet.random(spec.n, rng)
    small = SettingSet.random(spec.m, rng)
    lam_prev = -np.inf
    for _ in range(max_outer):
        vals, vecs = np.linalg.eigh(overlap_operator(spec, big, small))
        lam, v = vals[-1], vecs[:, -1]
        if lam - lam_prev < cfg.tol:
            break
        lam_prev = lam
        # lambda_max >= <v|V|v>, which the setting updates can only increase
        psi = Ket(v / np.linalg.norm(v))
        t_n = pauli_correlations(partial_trace(psi, spec.subset_n))
        t_m = pauli_correlations(partial_trace(psi, spec.subset_m))
        _, big = ascend(t_n, big, cfg.tol, inner_sweeps)
        _, small = ascend(t_m, small, cfg.tol, inner_sweeps)
    return float(lam), v


def overlap_search(
    spec: OverlapSpec, cfg: OptimizerConfig = OptimizerConfig(), max_outer: int = 20000, inner_sweeps: int = 1
) -> OverlapResult:
    """Maximize the top eigenvalue of ``B_n (x) 1 + w 1 (x) B_m`` over both setting sets.

    A double violation is possible iff the maximum exceeds ``2 * 2**(n/2)``
    by more than ``cfg.margin``.
    """
    if spec.k > MAX_OVERLAP_QUBITS:
        raise ResourceLimitError(f"k={spec.k} exceeds the {MAX_OVERLAP_QUBITS}-qubit cap")
    best, best_v, values = -np.inf, None, []
    for rng in cfg.restart_rngs():
        lam, v = _overlap_restart(spec, rng, cfg, max_outer, inner_sweeps)
        values.append(lam)
        if lam > best:
            best, best_v = lam, v
    return OverlapResult(
        max_value=best,
        possible=bool(best > spec.threshold + cfg.margin),
        threshold=spec.threshold,
        restart_values=tuple(values),
        state=Ket(best_v / np.linalg.norm(best_v)),
    )


def verify_double_violation_state(
    psi: Ket, subsets: Sequence[Sequence[int]], cfg: OptimizerConfig = OptimizerConfig()
) -> tuple[float, float]:
    """Bell values of the reduced states of ``psi`` on two qubit subsets."""
    if len(subsets) != 2:
        raise InvalidInputError("expected exactly two subsets")
    out = []
    for sub in subsets:
        rho = partial_trace(psi, sub)
        out.append(maximize_bell(rho, len(sub), cfg).value)
    return out[0], out[1]
