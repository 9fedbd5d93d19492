import numpy as np
import pytest

from nqss.errors import InvalidInputError, UnsupportedInputError
from nqss.infotheory import CoalitionSplit, joint_distribution
from nqss.qlinalg import Ket, eigenstate, partial_trace, tensor
from nqss.states import (
    AttackScenario,
    BasisLabel,
    MeasurementRecord,
    apply_attack,
    attacked_state,
    basis_state,
    conditional_state,
    ghz,
    sample_round,
    sift_check,
)

# rows as printed: (measured axes, outcomes, axis, bit of the remaining qubits)
TABLE_1 = [
    ("x", "+", "x", 0),
    ("x", "-", "x", 1),
    ("y", "+", "y", 0),
    ("y", "-", "y", 1),
]
TABLE_2 = [
    ("xx", "++", "x", 0), ("xx", "+-", "x", 1), ("xx", "-+", "x", 1), ("xx", "--", "x", 0),
    ("xy", "++", "y", 0), ("xy", "+-", "y", 1), ("xy", "-+", "y", 1), ("xy", "--", "y", 0),
    ("yx", "++", "y", 0), ("yx", "+-", "y", 1), ("yx", "-+", "y", 1), ("yx", "--", "y", 0),
    ("yy", "++", "x", 1), ("yy", "+-", "x", 0), ("yy", "-+", "x", 0), ("yy", "--", "x", 1),
]  # fmt: skip
TABLE_ROWS = [(3, *r) for r in TABLE_1] + [(3, *r) for r in TABLE_2]


def printed_label(width, axes, axis, bit):
    """Printed entry mapped to our outcome orientation.

    The printed odd-y rows use the opposite sign for sigma_y outcomes, so
    their bit flips; even-y rows are unchanged.
    """
    flip = axes.count("y") % 2
    return BasisLabel(axis, bit ^ flip, width)


def project(width, axes, signs):
    psi = ghz(width).amplitudes.reshape((2,) * width)
    for ax, s in zip(axes, signs):
        psi = np.tensordot(eigenstate(ax, 1 if s == "+" else -1).conj(), psi, axes=(0, 0))
    v = psi.reshape(-1)
    return v / np.linalg.norm(v)


@pytest.mark.parametrize("N, axes, signs, axis, bit", TABLE_ROWS)
def test_conditional_state_matches_projection(N, axes, signs, axis, bit):
    label = conditional_state(N, MeasurementRecord.parse(axes, signs))
    direct = project(N, axes, signs)
    assert abs(abs(np.vdot(basis_state(label).amplitudes, direct)) - 1) < 1e-12


@pytest.mark.parametrize("N, axes, signs, axis, bit", TABLE_ROWS)
def test_conditional_state_matches_tables(N, axes, signs, axis, bit):
    label = conditional_state(N, MeasurementRecord.parse(axes, signs))
    assert label == printed_label(N - len(axes), axes, axis, bit)


@pytest.mark.parametrize("N, axes, signs, axis, bit", [r for r in TABLE_ROWS if r[1].count("y") % 2 == 0])
def test_even_rows_match_tables_literally(N, axes, signs, axis, bit):
    label = conditional_state(N, MeasurementRecord.parse(axes, signs))
    assert label == BasisLabel(axis, bit, N - len(axes))


def test_odd_rows_respect_stabilizer():
    # <x y y> = -1 on GHZ_3, so the remaining qubit must answer sigma_y with
    # the sign that makes the product -1
    label = conditional_state(3, MeasurementRecord.parse("xy", "++"))
    assert label == BasisLabel("y", 1, 1)


def test_conditional_state_ghz4():
    assert conditional_state(4, MeasurementRecord.parse("xxx", "+-+")) == BasisLabel("x", 1, 1)


def test_conditional_state_bad_input():
    with pytest.raises(InvalidInputError):
        MeasurementRecord.parse("xz", "++")
    with pytest.raises(InvalidInputError):
        conditional_state(3, MeasurementRecord.parse("xxx", "+++"))


def test_ghz_examples():
    assert np.allclose(ghz(2).amplitudes, [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)])
    v = np.zeros(8)
    v[[0, 7]] = 1 / np.sqrt(2)
    assert np.allclose(ghz(3).amplitudes, v)


def test_basis_state_examples():
    y = basis_state(BasisLabel("y", 0, 2)).amplitudes
    assert np.allclose(y, np.array([1, 0, 0, 1j]) / np.sqrt(2))
    assert np.allclose(basis_state(BasisLabel("z", 1, 3)).amplitudes, np.eye(8)[7])
    assert np.allclose(basis_state(BasisLabel("x", 1, 1)).amplitudes, np.array([1, -1]) / np.sqrt(2))
    assert str(BasisLabel("x", 0, 2)) == "|0^2>_x"


def test_scenario_validation():
    with pytest.raises(InvalidInputError):
        AttackScenario(3, 3, 0.1)
    with pytest.raises(InvalidInputError):
        AttackScenario(3, 0, 0.1)
    with pytest.raises(InvalidInputError):
        AttackScenario(2, 1, 2.0)
    with pytest.raises(InvalidInputError):
        AttackScenario(2, 1, -0.1)


def test_attacked_state_two_partners():
    phi = 0.37
    v = np.zeros(8)
    v[0b000] = 1
    v[0b110] = np.cos(phi)
    v[0b101] = np.sin(phi)
    assert np.allclose(attacked_state(AttackScenario(2, 1, phi)).amplitudes, v / np.sqrt(2))


def test_attacked_state_no_attack():
    psi = attacked_state(AttackScenario(2, 1, 0.0))
    assert np.allclose(psi.amplitudes, tensor(ghz(2), Ket(np.array([1.0, 0.0]))).amplitudes)


def test_attacked_state_full_interception():
    psi = attacked_state(AttackScenario(3, 1, np.pi / 2))
    rho = partial_trace(psi, [0, 1, 3])
    fidelity = np.vdot(ghz(3).amplitudes, rho.entries @ ghz(3).amplitudes).real
    assert fidelity == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("N", range(2, 7))
def test_attacked_state_normalized(N):
    for n in range(1, N):
        for phi in np.linspace(0, np.pi / 2, 50):
            amps = attacked_state(AttackScenario(N, n, phi)).amplitudes
            assert abs(np.vdot(amps, amps).real - 1) < 1e-12


@pytest.mark.parametrize("N, n", [(2, 1), (3, 1), (3, 2), (4, 2), (5, 3)])
def test_apply_attack_matches_construction(N, n):
    phi = 0.61
    built = apply_attack(ghz(N), range(N - n, N), phi)
    assert np.allclose(built.amplitudes, attacked_state(AttackScenario(N, n, phi)).amplitudes)


def test_apply_attack_identity_at_zero():
    psi = ghz(3)
    out = apply_attack(psi, [2], 0.0)
    assert np.allclose(out.amplitudes, tensor(psi, Ket(np.array([1.0, 0.0]))).amplitudes)


def test_apply_attack_full_strength_correlates_eve():
    psi = apply_attack(ghz(2), [1], np.pi / 2)
    table = joint_distribution(psi, {0: "x", 2: "x"}, CoalitionSplit((0,), (2,)))
    assert table.disagreement() == pytest.approx(0.0, abs=1e-12)


def test_apply_attack_rejects_foreign_support():
    with pytest.raises(UnsupportedInputError):
        apply_attack(Ket(np.array([0, 1, 0, 0], dtype=complex)), [0, 1], 0.3)


def test_sift_check_all_x():
    rng = np.random.default_rng(11)
    psi = ghz(3)
    for _ in range(50):
        out = sample_round(psi, "xxx", rng)
        assert sift_check(MeasurementRecord(tuple(zip("xxx", out)))) is True


def test_sift_check_yy_bell_pair():
    rng = np.random.default_rng(12)
    for _ in range(50):
        out = sample_round(ghz(2), "yy", rng)
        assert np.prod(out) == -1
        assert sift_check(MeasurementRecord(tuple(zip("yy", out)))) is True


def test_sift_check_discards_odd_y():
    assert sift_check(MeasurementRecord.parse("xyx", "+++")) is None


def test_sift_check_flags_wrong_parity():
    assert sift_check(MeasurementRecord.parse("xxx", "+-+")) is False
