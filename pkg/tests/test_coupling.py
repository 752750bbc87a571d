import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jjarch import constants
from jjarch.coupling import (
    YY,
    ZZ,
    CapacitiveNetwork,
    ChargeSpin,
    GroundEnergyCurve,
    TransformerCircuit,
    TunableJosephson,
    b_of_q0,
    b_zero_crossings,
    couple_charge_qubits,
    couple_phase_qubits,
    find_b_zero,
    makhlin_coefficient,
    makhlin_register,
    operating_point,
    transformer_couplings,
    transformer_effective,
    tune_ej,
)
from jjarch.errors import GroundLevelCrossing, RegimeViolation
from jjarch.qubits import JunctionParams, plasma_energy, width_printed

C = 1e-12
PHASE = JunctionParams.from_circuit(1e-6, C, 0.0)


def _spectrum(h):
    return np.linalg.eigvalsh(h)


# --- capacitive networks ---------------------------------------------------

caps = st.floats(min_value=1e-15, max_value=1e-11)


@given(c1=caps, c2=caps, ci=caps)
def test_effective_capacitances_match_matrix_inverse(c1, c2, ci):
    net = CapacitiveNetwork(c1, c2, ci)
    inv = np.linalg.inv(net.capacitance_matrix())
    assert net.c1_eff == pytest.approx(1 / inv[0, 0], rel=1e-12)
    assert net.c2_eff == pytest.approx(1 / inv[1, 1], rel=1e-12)
    assert net.c_int_eff == pytest.approx(1 / inv[0, 1], rel=1e-12)


@given(c1=caps, c2=caps, ci=caps, cg1=caps, cg2=caps)
def test_charge_case_uses_island_capacitances(c1, c2, ci, cg1, cg2):
    net = CapacitiveNetwork(c1, c2, ci, cg1, cg2)
    plain = CapacitiveNetwork(c1 + cg1, c2 + cg2, ci)
    assert net.c_int_eff == pytest.approx(plain.c_int_eff, rel=1e-12)
    assert net.c1_eff == pytest.approx(plain.c1_eff, rel=1e-12)


def test_network_validation():
    with pytest.raises(ValueError):
        CapacitiveNetwork(0.0, C, C)
    with pytest.raises(ValueError):
        CapacitiveNetwork(C, C, -C)


# --- phase qubits ----------------------------------------------------------


def test_phase_decoupled_limit():
    coupled = couple_phase_qubits(CapacitiveNetwork(C, C, 0.0), PHASE, PHASE)
    assert np.isinf(coupled.couplings["c_int_eff"])
    assert coupled.couplings["g_prime"] == 0 and coupled.couplings["g"] == 0
    assert not np.any(coupled.interaction)


def test_phase_interaction_pattern():
    coupled = couple_phase_qubits(CapacitiveNetwork(C, C, 0.01 * C), PHASE, PHASE)
    g = coupled.couplings["g"]
    pattern = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]])
    assert np.allclose(coupled.interaction, g * pattern, atol=0)
    assert np.allclose(YY, pattern)
    assert g == pytest.approx(coupled.couplings["g_prime"] / (2 * width_printed(PHASE) ** 2))


@given(r=st.floats(min_value=1e-4, max_value=0.02))
def test_g_prime_weak_coupling_limit(r):
    coupled = couple_phase_qubits(CapacitiveNetwork(C, C, r * C), PHASE, PHASE)
    arrow = 2 * r * PHASE.ec
    assert abs(coupled.couplings["g_prime"] - arrow) / arrow < 2 * r


def test_g_weak_limit_is_half_plasma_ratio():
    # g'/(2 l^2) with g' -> 2 r Ec and l^2 = sqrt(2 Ec/EJ) tends to r hbar omega_p / 2
    r = 1e-3
    g = couple_phase_qubits(CapacitiveNetwork(C, C, r * C), PHASE, PHASE).couplings["g"]
    assert g / (r * plasma_energy(PHASE)) == pytest.approx(0.5, rel=2 * r)


def test_phase_spin_hamiltonian_and_swap():
    q1 = JunctionParams.from_circuit(1e-6, C, 0.1)
    q2 = JunctionParams.from_circuit(1e-6, C, 0.1)
    coupled = couple_phase_qubits(CapacitiveNetwork(C, C, 0.02 * C), q1, q2)
    h = coupled.hamiltonian
    assert np.max(np.abs(h - h.conj().T)) < 1e-12 * np.max(np.abs(h))
    assert np.allclose(_spectrum(h), _spectrum(coupled.swapped().hamiltonian), rtol=0, atol=1e-12 * np.max(np.abs(h)))


# --- charge qubits ---------------------------------------------------------


def _charge_pair(ng1=0.5, ng2=0.5, ci=0.1e-15):
    net = CapacitiveNetwork(1e-15, 1e-15, ci, 0.1e-15, 0.1e-15)
    return couple_charge_qubits(net, (1e-5, 1e-5), (ng1, ng2))


def test_pure_ising_at_degeneracy():
    coupled = _charge_pair()
    g = coupled.couplings["g"]
    assert np.max(np.abs(coupled.interaction - g / 4 * ZZ)) <= 1e-14 * g


def test_charge_coupling_constant():
    net = CapacitiveNetwork(1e-15, 1e-15, 0.1e-15, 0.1e-15, 0.1e-15)
    coupled = couple_charge_qubits(net, (1e-5, 1e-5), (0.3, 0.6))
    assert coupled.couplings["g"] == pytest.approx(constants.charging_energy(net.c_int_eff))
    assert coupled.couplings["ising"] == coupled.couplings["g"] / 4


def test_charge_decoupled():
    assert _charge_pair(ci=0.0).couplings["g"] == 0


@given(ng1=st.floats(0, 1), ng2=st.floats(0, 1))
def test_charge_pair_swap_symmetry(ng1, ng2):
    a = _charge_pair(ng1, ng2).hamiltonian
    b = _charge_pair(ng2, ng1).swapped().hamiltonian
    assert np.allclose(a, b, atol=1e-12 * np.max(np.abs(a)))
    assert np.max(np.abs(a - a.conj().T)) <= 1e-12 * np.max(np.abs(a))


def test_charge_identical_spectrum_swap_invariant():
    h = _charge_pair().hamiltonian
    assert np.allclose(_spectrum(h), _spectrum(_charge_pair().swapped().hamiltonian))


def test_charge_gate_range():
    with pytest.raises(ValueError):
        _charge_pair(ng1=1.2)


# --- tunable Josephson energy ----------------------------------------------


def test_tune_ej_special_points():
    assert tune_ej(TunableJosephson(3.0, 0.0)) == 3.0
    assert tune_ej(TunableJosephson(3.0, 0.5)) == 0.0
    assert tune_ej(TunableJosephson(3.0, 1 / 3)) == pytest.approx(1.5, rel=1e-15)
    assert tune_ej(TunableJosephson(3.0, 0.75)) < 0


@given(f=st.floats(-3, 3))
def test_tune_ej_even_and_bounded(f):
    assert tune_ej(TunableJosephson(2.0, f)) == pytest.approx(tune_ej(TunableJosephson(2.0, -f)), abs=1e-15)
    assert abs(tune_ej(TunableJosephson(2.0, f))) <= 2.0


# --- Makhlin register ------------------------------------------------------

L = 1e-9
CQB = 1e-15
CJ = 1e-15


def test_makhlin_zero_ej_decouples():
    qubits = [ChargeSpin(1e-4, 0.0), ChargeSpin(1e-4, 1e-6), ChargeSpin(1e-4, 1e-6)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeViolation)
        reg = makhlin_register(qubits, L, CQB, CJ)
    pairs = reg.couplings["pairs"]
    assert pairs[(0, 1)] == 0 and pairs[(0, 2)] == 0 and pairs[(1, 2)] > 0


def test_makhlin_scaling():
    base = makhlin_coefficient(1e-6, 2e-6, L, CQB, CJ)
    assert makhlin_coefficient(1e-6, 2e-6, 3 * L, CQB, CJ) == pytest.approx(3 * base)
    assert makhlin_coefficient(1e-6, 2e-6, L, CQB, 2 * CJ) == pytest.approx(base / 4)


def test_makhlin_coefficient_formula():
    e1, e2 = 1e-6 * constants.E_CHARGE, 2e-6 * constants.E_CHARGE
    expected = L * CQB**2 * e1 * e2 / (4 * constants.ALPHA**2 * CJ**2) / constants.E_CHARGE
    assert makhlin_coefficient(1e-6, 2e-6, L, CQB, CJ) == pytest.approx(expected, rel=1e-12)


def test_makhlin_tuning_via_squid():
    squid = TunableJosephson(1e-6, 0.5)
    qubits = [ChargeSpin(1e-4, tune_ej(squid)), ChargeSpin(1e-4, 1e-6)]
    reg = makhlin_register(qubits, L, CQB, CJ)
    assert not np.any(reg.interaction)


def test_makhlin_regime_warning():
    qubits = [ChargeSpin(1e-4, 1e-6), ChargeSpin(1e-4, 1e-6)]
    with pytest.warns(RegimeViolation):
        makhlin_register(qubits, 1.0, 1e-9, CJ)


def test_makhlin_swap_symmetry():
    qubits = [ChargeSpin(1e-4, 1e-6, 0.4), ChargeSpin(1e-4, 1e-6, 0.4)]
    reg = makhlin_register(qubits, L, CQB, CJ)
    h = reg.hamiltonian
    assert np.allclose(_spectrum(h), _spectrum(reg.swapped().hamiltonian), atol=1e-12 * np.max(np.abs(h)))


# --- transformer -----------------------------------------------------------


def test_transformer_zero_ratio():
    a, b = transformer_couplings(GroundEnergyCurve(1.0, 0.3), 0.2, 0.0)
    assert a == 0 and b == 0


@given(c=st.floats(-5, 5), q0=st.floats(-1, 1), r=st.floats(0, 0.5))
def test_quadratic_oracle(c, q0, r):
    a, b = transformer_couplings(lambda q: c * q**2, q0, r)
    assert b == pytest.approx(c * r**2 / 2, abs=1e-12)
    assert a == pytest.approx(c * q0 * r, abs=1e-12)


def test_ground_curve_periodic():
    curve = GroundEnergyCurve(1.0, 0.3)
    for q in (0.1, 0.37, 0.8):
        assert curve.exact(q + 1) == pytest.approx(curve.exact(q), abs=1e-12)
        assert curve(q + 1) == pytest.approx(curve(q), abs=1e-12)
        assert curve(q) == pytest.approx(curve.exact(q), abs=1e-8)


def test_b_root_exists_and_is_grid_stable():
    ratio = 0.1
    roots = b_zero_crossings(GroundEnergyCurve(1.0, 0.3), ratio)
    assert roots, "b never changes sign"
    assert abs(b_of_q0(GroundEnergyCurve(1.0, 0.3), ratio, roots[0])) < 1e-9
    fine = find_b_zero(GroundEnergyCurve(1.0, 0.3, n_q=801), ratio, roots[0] - 0.01, roots[0] + 0.01)
    assert abs(fine - roots[0]) < 1e-6


def test_find_b_zero_requires_bracket():
    with pytest.raises(ValueError):
        find_b_zero(GroundEnergyCurve(1.0, 0.3), 0.1, 0.0, 0.05)


def test_level_crossing_detected():
    with pytest.raises(GroundLevelCrossing):
        GroundEnergyCurve(1.0, 0.0)(0.2)


def test_transformer_effective_hamiltonian():
    q = ChargeSpin(1.0, 0.1, 0.45)
    circuit = TransformerCircuit(q, q, 1.0, 0.3, 0.1, q0=0.25)
    eff = transformer_effective(circuit)
    a, b = eff.couplings["a"], eff.couplings["b"]
    z1 = np.kron(np.diag([1, -1]), np.eye(2))
    z2 = np.kron(np.eye(2), np.diag([1, -1]))
    assert np.allclose(eff.interaction, a * (z1 + z2) + b * ZZ)
    h = eff.hamiltonian
    assert np.allclose(_spectrum(h), _spectrum(eff.swapped().hamiltonian), atol=1e-12)


def test_transformer_gate_offset_and_operating_point():
    q = ChargeSpin(1.0, 0.1, 0.5)
    circuit = TransformerCircuit(q, q, 1.0, 0.3, 0.1, gate_charge=0.3)
    assert circuit.gate_offset == pytest.approx(2 * 0.3 * 0.9)
    assert operating_point(circuit) == pytest.approx(circuit.gate_offset)
