"""Scenario-level security analysis.

For the attacked state the authorized Bell value splits as

    <Psi| B_N (x) 1_E |Psi> = f(phi) B_00 + cos(phi) B_10,

with ``B_00 = <0^N|B_N|0^N>`` and ``B_10 = Re <1^N|B_N|0^N>``; ``f`` depends
only on the parities of ``N`` and ``n``.  When the parities differ the
maximum is ``2**((N+1)/2) cos(phi)``; otherwise the closed form
``max(2**((N+1)/2) cos(phi), 2 f(phi))`` is a numerically supported conjecture
and the optimizer result is the authoritative one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from nqss import tolerances as tol
from nqss.bell import OptimizerConfig, SettingSet, maximize_bell, mk_operator
from nqss.errors import InvalidInputError, ResourceLimitError
from nqss.infotheory import coalition_informations
from nqss.qlinalg import partial_trace
from nqss.states import AttackScenario, attacked_state

log = logging.getLogger(__name__)

MAX_NUMERICAL_N = 6


@dataclass(frozen=True)
class ParityCase:
    N_parity: str
    n_parity: str
    f_formula: str
    exact: bool


_PARITY_TABLE = {
    ("odd", "even"): ("zero", True),
    ("even", "odd"): ("cos2", True),
    ("odd", "odd"): ("sin2", False),
    ("even", "even"): ("one", False),
}


def _parity(k: int) -> str:
    return "even" if k % 2 == 0 else "odd"


def parity_case(N: int, n: int) -> ParityCase:
    formula, exact = _PARITY_TABLE[_parity(N), _parity(n)]
    return ParityCase(_parity(N), _parity(n), formula, exact)


def f_value(N: int, n: int, phi: float) -> tuple[float, bool]:
    """Weight of ``B_00`` in the authorized Bell value, and whether the
    resulting closed form for ``S_a`` is proved."""
    AttackScenario(N, n, phi)
    case = parity_case(N, n)
    value = {
        "zero": 0.0,
        "cos2": np.cos(phi) ** 2,
        "sin2": np.sin(phi) ** 2,
        "one": 1.0,
    }[case.f_formula]
    return float(value), case.exact


def s_a_closed_form(sc: AttackScenario) -> float:
    ghz_branch = 2 ** ((sc.N + 1) / 2) * np.cos(sc.phi)
    f, exact = f_value(sc.N, sc.n, sc.phi)
    if exact:
        return float(ghz_branch)
    return float(max(ghz_branch, 2 * f))


def unauthorized_equivalent(sc: AttackScenario) -> AttackScenario:
    """Scenario whose authorized side has the same state as ``sc``'s Eve-side coalition."""
    phi = max(0.0, np.pi / 2 - sc.phi)
    return AttackScenario(sc.N - sc.n + 1, 1, phi)


def s_u_closed_form(sc: AttackScenario) -> float:
    return s_a_closed_form(unauthorized_equivalent(sc))


def authorized_threshold(sc: AttackScenario) -> float:
    return 2 ** (sc.N / 2)


def unauthorized_threshold(sc: AttackScenario) -> float:
    return 2 ** ((sc.N - sc.n + 1) / 2)


def formula_is_exact(sc: AttackScenario) -> bool:
    return parity_case(sc.N, sc.n).exact


def information_secure(i_a: float, i_u: float) -> bool:
    # strict inequality; the pi/4 boundary counts as insecure
    return i_a - i_u > tol.BOUNDARY


def bell_secure(s_a: float, sc: AttackScenario) -> bool:
    thr = authorized_threshold(sc)
    return s_a - thr > tol.BOUNDARY * thr


def b00_b10(settings: SettingSet) -> tuple[float, float]:
    """``(<0^N|B_N|0^N>, Re <1^N|B_N|0^N>)`` for the given settings."""
    b = mk_operator(settings).entries
    return float(b[0, 0].real), float(b[-1, 0].real)


def decomposed_value(sc: AttackScenario, settings: SettingSet) -> float:
    b00, b10 = b00_b10(settings)
    f, _ = f_value(sc.N, sc.n, sc.phi)
    return f * b00 + np.cos(sc.phi) * b10


def authorized_state(sc: AttackScenario):
    """Reduced state of Alice, the Bobs and the Charlies (Eve traced out)."""
    return partial_trace(attacked_state(sc), list(range(sc.N)))


def unauthorized_state(sc: AttackScenario):
    """Reduced state of Alice, the Bobs and Eve (Charlies traced out)."""
    return partial_trace(attacked_state(sc), sc.alice_block + [sc.eve])


@dataclass
class ScenarioReport:
    scenario: AttackScenario
    I_a: float
    I_u: float
    S_a: float
    S_u: float
    S_a_formula: float
    S_u_formula: float
    secure: bool
    exact_formula: bool
    thresholds: tuple
    issues: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.issues

    def as_row(self) -> dict:
        sc = self.scenario
        return {
            "N": sc.N,
            "n": sc.n,
            "phi": float(sc.phi),
            "I_a": float(self.I_a),
            "I_u": float(self.I_u),
            "S_a": float(self.S_a),
            "S_a_formula": float(self.S_a_formula),
            "S_u": float(self.S_u),
            "S_u_formula": float(self.S_u_formula),
            "secure": bool(self.secure),
            "exact_formula": bool(self.exact_formula),
        }


def check_report(r: ScenarioReport) -> list[str]:
    """Consistency problems of a report; empty when everything agrees."""
    sc = r.scenario
    issues = []
    if r.secure != bell_secure(r.S_a_formula, sc):
        issues.append("information advantage and MKI violation disagree")
    if r.secure and not r.S_u_formula < unauthorized_threshold(sc):
        issues.append("secure scenario with unauthorized MKI violation")
    limit = tol.DUAL_PATH_EXACT if r.exact_formula else tol.DUAL_PATH_CONJECTURED
    if abs(r.S_a - r.S_a_formula) > limit:
        issues.append(f"S_a numerical {r.S_a:.6f} vs formula {r.S_a_formula:.6f}")
    if abs(r.S_u - r.S_u_formula) > limit:
        issues.append(f"S_u numerical {r.S_u:.6f} vs formula {r.S_u_formula:.6f}")
    return issues


def analyze(sc: AttackScenario, cfg: OptimizerConfig = OptimizerConfig()) -> ScenarioReport:
    if sc.N > MAX_NUMERICAL_N:
        raise ResourceLimitError(f"numerical analysis is capped at N={MAX_NUMERICAL_N}")
    i_a, i_u = coalition_informations(sc)
    rho_a = authorized_state(sc)
    rho_u = unauthorized_state(sc)
    s_a = maximize_bell(rho_a, sc.N, cfg).value
    s_u = maximize_bell(rho_u, sc.N - sc.n + 1, cfg).value
    report = ScenarioReport(
        scenario=sc,
        I_a=i_a,
        I_u=i_u,
        S_a=s_a,
        S_u=s_u,
        S_a_formula=s_a_closed_form(sc),
        S_u_formula=s_u_closed_form(sc),
        secure=information_secure(i_a, i_u),
        exact_formula=formula_is_exact(sc),
        thresholds=(authorized_threshold(sc), unauthorized_threshold(sc)),
    )
    report.issues = check_report(report)
    for msg in report.issues:
        log.warning("N=%d n=%d phi=%.6f: %s", sc.N, sc.n, sc.phi, msg)
    return report


def crossing_scan(N: int, n: int, grid: int = 11) -> float:
    """Attack strength at which ``I_a - I_u`` changes sign."""
    if grid < 3:
        raise InvalidInputError("grid needs at least 3 points")
    AttackScenario(N, n, 0.0)

    def gap(phi):
        i_a, i_u = coalition_informations(AttackScenario(N, n, float(phi)))
        return i_a - i_u

    phis = np.linspace(0.0, np.pi / 2, grid)
    vals = [gap(p) for p in phis]
    for lo, hi, vlo, vhi in zip(phis, phis[1:], vals, vals[1:]):
        if vlo == 0.0:
            return float(lo)
        if vlo * vhi < 0:
            return float(brentq(gap, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    raise InvalidInputError("no sign change of I_a - I_u on the grid")
