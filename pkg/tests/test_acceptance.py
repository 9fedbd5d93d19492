"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the summary lines are also
printed at the end of the pytest run) or directly as a script.
"""

import time

import numpy as np
import pytest

from nqss import tolerances as tol
from nqss.analysis import (
    analyze,
    authorized_state,
    bell_secure,
    crossing_scan,
    formula_is_exact,
    information_secure,
    s_a_closed_form,
    s_u_closed_form,
    unauthorized_state,
    unauthorized_threshold,
)
from nqss.bell import OptimizerConfig, horodecki_value, maximize_bell, verify_double_violation_state
from nqss.infotheory import (
    CoalitionSplit,
    coalition_informations,
    coalition_informations_from_state,
    joint_distribution,
    mutual_information,
)
from nqss.qlinalg import HermitianOperator, eigenstate, partial_trace
from nqss.reports import counterexample_state, figure1_closed_forms, figure1_from_state, overlap_table
from nqss.states import (
    AttackScenario,
    BasisLabel,
    MeasurementRecord,
    attacked_state,
    basis_state,
    conditional_state,
    ghz,
)

RESULTS = []
DEFAULT = OptimizerConfig()


def check(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}  [{detail}]"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_1_figure1():
    t0 = time.perf_counter()
    keys = ("I_AB", "I_AE", "I_BE", "S_AB", "S_AE", "S_BE")
    worst = dict.fromkeys(keys, 0.0)
    for phi in np.linspace(0, np.pi / 2, 101):
        closed, state = figure1_closed_forms(phi), figure1_from_state(phi)
        for k in keys:
            worst[k] = max(worst[k], abs(closed[k] - state[k]))
    c = figure1_closed_forms(np.pi / 4)
    s = figure1_from_state(np.pi / 4)
    crossing = max(abs(c["S_AB"] - 2), abs(c["S_AE"] - 2), abs(s["S_AB"] - 2), abs(s["S_AE"] - 2))
    elapsed = time.perf_counter() - t0
    bad = [k for k in keys if worst[k] > 1e-9]
    ok = not bad and crossing <= 1e-9 and elapsed < 5
    detail = ", ".join(f"{k} {worst[k]:.1e}" for k in keys)
    check(1, "figure-1 closed forms vs state", ok, f"max deviations {detail}; crossing {crossing:.1e}; {elapsed:.1f}s")


def test_criterion_2_mki_extremes():
    t0 = time.perf_counter()
    devs = {M: abs(maximize_bell(ghz(M), cfg=DEFAULT).value - 2 ** ((M + 1) / 2)) for M in range(2, 6)}
    elapsed = time.perf_counter() - t0
    ok = max(devs.values()) <= 1e-5 and elapsed < 60
    detail = ", ".join(f"M={M} {d:.1e}" for M, d in devs.items())
    check(2, "GHZ_M reaches 2^((M+1)/2)", ok, f"{detail}; {elapsed:.1f}s")


def test_criterion_3_security_equivalence():
    t0 = time.perf_counter()
    exceptions, checked = [], 0
    phis = [p for p in np.linspace(0, np.pi / 2, 41) if abs(p - np.pi / 4) > 1e-12]
    for N in range(2, 6):
        for n in range(1, N):
            for phi in phis:
                sc = AttackScenario(N, n, phi)
                secure = information_secure(*coalition_informations(sc))
                checked += 1
                if secure != bell_secure(s_a_closed_form(sc), sc):
                    exceptions.append((N, n, phi))
                elif secure and not s_u_closed_form(sc) < unauthorized_threshold(sc):
                    exceptions.append((N, n, phi))
    elapsed = time.perf_counter() - t0
    ok = not exceptions and elapsed < 10
    check(3, "I_a > I_u iff S_a > 2^(N/2)", ok, f"{len(exceptions)} exceptions in {checked} points; {elapsed:.1f}s")


def test_criterion_4_exact_branches():
    t0 = time.perf_counter()
    worst_a = worst_u = 0.0
    cases = [(N, n) for N in range(2, 6) for n in range(1, N) if (N - n) % 2]
    for N, n in cases:
        for phi in np.linspace(0, np.pi / 2, 9):
            sc = AttackScenario(N, n, phi)
            assert formula_is_exact(sc)
            s_a = maximize_bell(authorized_state(sc), cfg=DEFAULT).value
            s_u = maximize_bell(unauthorized_state(sc), cfg=DEFAULT).value
            worst_a = max(worst_a, abs(s_a - 2 ** ((N + 1) / 2) * np.cos(phi)))
            # the Eve-side coalition has N - n + 1 qubits, hence the exponent (N - n + 2)/2
            worst_u = max(worst_u, abs(s_u - 2 ** ((N - n + 2) / 2) * np.sin(phi)))
    elapsed = time.perf_counter() - t0
    ok = worst_a <= 2e-3 and worst_u <= 2e-3 and elapsed < 600
    check(4, "exact branches for different parities", ok, f"S_a {worst_a:.1e}, S_u {worst_u:.1e}; {len(cases)} (N,n) pairs; {elapsed:.1f}s")


def test_criterion_5_overlap_table():
    t0 = time.perf_counter()
    _, rows, ok_verdicts = overlap_table(DEFAULT)
    elapsed = time.perf_counter() - t0
    verdict_miss = [r["label"] for r in rows if r["verdict"] != r["reference_verdict"]]
    value_miss = [
        f"{r['label']} {r['max_value']:.5f} vs {r['reference_value']:.5f}"
        for r in rows
        if r["reference_verdict"] == "possible" and r["abs_deviation"] > 1e-2
    ]
    ok = ok_verdicts and not verdict_miss and not value_miss and elapsed < 1800
    detail = f"{len(rows)} cases; verdict mismatches {verdict_miss or 'none'}; value mismatches {value_miss or 'none'}; {elapsed:.0f}s"
    check(5, "overlap golden table", ok, detail)


def test_criterion_6_counterexample():
    s1, s2 = verify_double_violation_state(counterexample_state(0.955), [(0, 1, 2), (1, 2, 3)], DEFAULT)
    ok = abs(s1 - 3) <= 1e-3 and abs(s2 - 3) <= 1e-3
    check(6, "counterexample state gives S_ABC = S_BCD = 3", ok, f"S_ABC {s1:.6f}, S_BCD {s2:.6f}")


def test_criterion_7_oracle_equivalence():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for i in range(100):
        rank = 1 + i % 4
        g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
        rho = g @ g.conj().T
        rho = HermitianOperator(rho / np.trace(rho).real)
        worst = max(worst, abs(horodecki_value(rho) - maximize_bell(rho, cfg=DEFAULT).value))
    check(7, "Horodecki value equals optimizer on random states", worst <= 1e-5, f"max deviation {worst:.1e} over 100 states")


_TABLES = [
    ("x", "+", "x", 0), ("x", "-", "x", 1), ("y", "+", "y", 0), ("y", "-", "y", 1),
    ("xx", "++", "x", 0), ("xx", "+-", "x", 1), ("xx", "-+", "x", 1), ("xx", "--", "x", 0),
    ("xy", "++", "y", 0), ("xy", "+-", "y", 1), ("xy", "-+", "y", 1), ("xy", "--", "y", 0),
    ("yx", "++", "y", 0), ("yx", "+-", "y", 1), ("yx", "-+", "y", 1), ("yx", "--", "y", 0),
    ("yy", "++", "x", 1), ("yy", "+-", "x", 0), ("yy", "-+", "x", 0), ("yy", "--", "x", 1),
]  # fmt: skip


def _property_failures():
    fails = []
    phis = np.linspace(0, np.pi / 2, 50)

    for N in range(2, 7):
        for n in range(1, N):
            for phi in phis:
                a = attacked_state(AttackScenario(N, n, phi)).amplitudes
                if abs(np.vdot(a, a).real - 1) > 1e-12:
                    fails.append(f"norm N={N} n={n}")

    rng = np.random.default_rng(5)
    for _ in range(20):
        g = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
        rho = HermitianOperator(g @ g.conj().T / np.trace(g @ g.conj().T).real)
        direct = partial_trace(rho, [0, 2]).entries
        staged = partial_trace(partial_trace(rho, [0, 2, 3]), [0, 1]).entries
        if not np.allclose(direct, staged, atol=1e-12):
            fails.append("partial-trace composition")

    for phi in phis[::5]:
        psi = attacked_state(AttackScenario(2, 1, phi))
        for q in ((0, 1), (0, 2), (1, 2)):
            for ax in "xy":
                t = joint_distribution(psi, {q[0]: ax, q[1]: ax}, CoalitionSplit((q[0],), (q[1],)))
                if abs(t[(1, 1)] - t[(-1, -1)]) > 1e-12 or abs(t[(1, -1)] - t[(-1, 1)]) > 1e-12:
                    fails.append(f"statistics symmetry phi={phi:.3f}")

    for N in range(2, 6):
        for n in range(1, N):
            for phi in phis[::5]:
                i_a, _ = coalition_informations(AttackScenario(N, n, phi))
                _, i_u = coalition_informations(AttackScenario(N, n, max(0.0, np.pi / 2 - phi)))
                if abs(i_a - i_u) > 1e-12:
                    fails.append(f"role exchange N={N} n={n}")
                sc = AttackScenario(N, n, phi)
                if not np.allclose(coalition_informations(sc), coalition_informations_from_state(sc), atol=1e-9):
                    fails.append(f"information dual path N={N} n={n}")

    for phi in phis[::5]:
        psi = attacked_state(AttackScenario(3, 1, phi))
        mi = lambda l, r: mutual_information(psi, CoalitionSplit(l, r))
        if abs(mi((0,), (1, 2)) - mi((0, 1), (2,))) > 1e-12 or abs(mi((0,), (1, 3)) - mi((0, 1), (3,))) > 1e-12:
            fails.append(f"coalition merge phi={phi:.3f}")

    for N in range(3, 6):
        for k in range(1, N - 1):
            if mutual_information(ghz(N), CoalitionSplit((0,), tuple(range(1, 1 + k)))) > 1e-12:
                fails.append(f"partial coalition N={N} k={k}")

    # the printed odd-y rows use the opposite sigma_y outcome orientation
    for axes, signs, axis, bit in _TABLES:
        label = conditional_state(3, MeasurementRecord.parse(axes, signs))
        expected = BasisLabel(axis, bit ^ (axes.count("y") % 2), 3 - len(axes))
        projected = ghz(3).amplitudes.reshape((2,) * 3)
        for ax, s in zip(axes, signs):
            projected = np.tensordot(eigenstate(ax, 1 if s == "+" else -1).conj(), projected, axes=(0, 0))
        v = projected.reshape(-1)
        overlap = abs(np.vdot(basis_state(label).amplitudes, v / np.linalg.norm(v)))
        if label != expected or abs(overlap - 1) > 1e-12:
            fails.append(f"table row {axes} {signs}")

    for N, n in [(2, 1), (5, 4), (4, 2), (3, 1)]:
        if abs(crossing_scan(N, n) - np.pi / 4) > 1e-9:
            fails.append(f"crossing N={N} n={n}")

    # dual-path consistency of the Bell values on every scenario with N <= 5
    fast = OptimizerConfig(restarts=16)
    worst = {True: 0.0, False: 0.0}
    for N in range(2, 6):
        for n in range(1, N):
            for phi in np.linspace(0, np.pi / 2, 9):
                r = analyze(AttackScenario(N, n, phi), fast)
                d = max(abs(r.S_a - r.S_a_formula), abs(r.S_u - r.S_u_formula))
                worst[r.exact_formula] = max(worst[r.exact_formula], d)
    if worst[True] > tol.DUAL_PATH_EXACT:
        fails.append(f"dual path exact {worst[True]:.2e}")
    if worst[False] > tol.DUAL_PATH_CONJECTURED:
        fails.append(f"dual path conjectured {worst[False]:.2e} > {tol.DUAL_PATH_CONJECTURED:g}")
    return fails, worst


def test_criterion_8_property_suite():
    t0 = time.perf_counter()
    fails, worst = _property_failures()
    elapsed = time.perf_counter() - t0
    ok = not fails and elapsed < 120
    uniq = sorted(set(fails))
    detail = f"failures: {uniq or 'none'}; dual-path exact {worst[True]:.1e}, conjectured {worst[False]:.1e}; {elapsed:.0f}s"
    check(8, "module invariants", ok, detail)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
