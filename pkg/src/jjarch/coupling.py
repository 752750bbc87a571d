"""Two-qubit Hamiltonians: fixed capacitive couplings and tunable schemes.

Two-qubit matrices use the ordering |00>, |01>, |10>, |11> with qubit 1 as the
left Kronecker factor and sigma_z |0> = +|0>. Capacitances are in farads and
energies in eV unless stated otherwise.
"""

import itertools
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from . import constants
from .errors import GroundLevelCrossing, RegimeViolation
from .qubits import (
    DEFAULT_CHARGE_CUTOFF,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    charge_basis_hamiltonian,
    plasma_energy,
    width_harmonic,
    width_printed,
)

I2 = np.eye(2, dtype=complex)
YY = np.kron(SIGMA_Y, SIGMA_Y)
ZZ = np.kron(SIGMA_Z, SIGMA_Z)


def _embed(op, site, n):
    mats = [I2] * n
    mats[site] = op
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def _two_qubit(h1, h2):
    return np.kron(h1, I2) + np.kron(I2, h2)


def _series(*caps):
    """Series combination (sum C^-1)^-1; a zero capacitance gives zero."""
    if any(c == 0 for c in caps):
        return 0.0
    return 1.0 / sum(1.0 / c for c in caps)


@dataclass(frozen=True)
class CapacitiveNetwork:
    """Two junction (or island) capacitances joined by a coupling capacitor.

    For charge qubits the gate capacitances add to each island; leave them at
    zero for phase qubits.
    """

    c1: float
    c2: float
    c_int: float
    c_g1: float = 0.0
    c_g2: float = 0.0

    def __post_init__(self):
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("junction capacitances must be positive")
        if self.c_int < 0 or self.c_g1 < 0 or self.c_g2 < 0:
            raise ValueError("coupling and gate capacitances must be non-negative")

    @property
    def island1(self):
        return self.c1 + self.c_g1

    @property
    def island2(self):
        return self.c2 + self.c_g2

    @property
    def c1_eff(self):
        return self.island1 + _series(self.c_int, self.island2)

    @property
    def c2_eff(self):
        return self.island2 + _series(self.c_int, self.island1)

    @property
    def c_int_eff(self):
        """C1 C2 (1/C1 + 1/C2 + 1/C_int); infinite when C_int = 0."""
        if self.c_int == 0:
            return np.inf
        a, b = self.island1, self.island2
        return a + b + a * b / self.c_int

    def capacitance_matrix(self):
        a, b, ci = self.island1, self.island2, self.c_int
        return np.array([[a + ci, -ci], [-ci, b + ci]])


@dataclass(frozen=True)
class CoupledSpinHamiltonian:
    singles: tuple
    interaction: np.ndarray
    couplings: dict = field(default_factory=dict)

    @property
    def hamiltonian(self):
        n = len(self.singles)
        h = sum(_embed(s, k, n) for k, s in enumerate(self.singles))
        return h + self.interaction

    def swapped(self):
        """Same system with qubit labels exchanged (two qubits only)."""
        swap = np.eye(4)[[0, 2, 1, 3]]
        return CoupledSpinHamiltonian(
            singles=tuple(reversed(self.singles)),
            interaction=swap @ self.interaction @ swap,
            couplings=dict(self.couplings),
        )


def couple_phase_qubits(network, qubit1, qubit2, width="printed"):
    """Capacitively coupled phase qubits in the instantaneous spin basis.

    ``qubit1``/``qubit2`` are JunctionParams (energies in eV). Returns
    sum_i -(hbar omega_p,i / 2) sigma_z,i + g sigma_y sigma_y with
    g' = (2e)^2 / C~int and g = g' / (2 l1 l2).
    """
    g_prime = 0.0 if np.isinf(network.c_int_eff) else 2 * constants.charging_energy(network.c_int_eff)
    w = {"printed": width_printed, "harmonic": width_harmonic}[width]
    l1, l2 = w(qubit1), w(qubit2)
    g = g_prime / (2 * l1 * l2)
    singles = (
        -0.5 * plasma_energy(qubit1) * SIGMA_Z,
        -0.5 * plasma_energy(qubit2) * SIGMA_Z,
    )
    return CoupledSpinHamiltonian(
        singles=singles,
        interaction=g * YY,
        couplings={
            "g_prime": g_prime,
            "g": g,
            "c1_eff": network.c1_eff,
            "c2_eff": network.c2_eff,
            "c_int_eff": network.c_int_eff,
        },
    )


def couple_charge_qubits(network, ej, gate_charges):
    """Capacitively coupled Cooper-pair boxes projected to the charge basis.

    Charging energies come from the renormalized island capacitances,
    E_ci = (2e)^2 / 2 C~i, and the coupling is g = (2e)^2 / 2 C~int.
    """
    ng1, ng2 = gate_charges
    for ng in gate_charges:
        if not 0 <= ng <= 1:
            raise ValueError(f"gate charge {ng} outside [0, 1]")
    ec1 = constants.charging_energy(network.c1_eff)
    ec2 = constants.charging_energy(network.c2_eff)
    g = 0.0 if np.isinf(network.c_int_eff) else constants.charging_energy(network.c_int_eff)
    singles = (
        ec1 * (ng1 - 0.5) * SIGMA_Z - 0.5 * ej[0] * SIGMA_X,
        ec2 * (ng2 - 0.5) * SIGMA_Z - 0.5 * ej[1] * SIGMA_X,
    )
    interaction = (
        0.5 * g * ((ng1 - 0.5) * np.kron(I2, SIGMA_Z) + (ng2 - 0.5) * np.kron(SIGMA_Z, I2))
        + 0.25 * g * ZZ
    )
    return CoupledSpinHamiltonian(
        singles=singles,
        interaction=interaction,
        couplings={"g": g, "ec1": ec1, "ec2": ec2, "ising": g / 4},
    )


# --- tunable couplings -----------------------------------------------------


def _cospi(x):
    """cos(pi x) with exact zeros at half-integers."""
    r = np.mod(x, 2.0)
    if r > 1:
        r = 2 - r
    # cos(pi r) = sin(pi (1/2 - r)), exact at r = 1/2
    return np.sin(np.pi * (0.5 - r))


@dataclass(frozen=True)
class TunableJosephson:
    """Symmetric dc SQUID: bare EJ0 and flux ratio Phi_x / Phi_sc."""

    ej0: float
    flux: float = 0.0

    @property
    def ej(self):
        return tune_ej(self)


def tune_ej(squid):
    """EJ(Phi_x) = EJ0 cos(pi Phi_x / Phi_sc); negative values are kept."""
    return squid.ej0 * _cospi(squid.flux)


@dataclass(frozen=True)
class ChargeSpin:
    """Charge qubit in spin form: Ec (Ng - 1/2) sigma_z - (EJ/2) sigma_x."""

    ec: float
    ej: float
    gate_charge: float = 0.5

    @property
    def hamiltonian(self):
        return self.ec * (self.gate_charge - 0.5) * SIGMA_Z - 0.5 * self.ej * SIGMA_X

    @property
    def splitting(self):
        return 2 * np.hypot(self.ec * (self.gate_charge - 0.5), 0.5 * self.ej)


def makhlin_coefficient(ej1, ej2, inductance, qubit_capacitance, junction_capacitance):
    """L C_qb^2 EJ1 EJ2 / (4 alpha^2 C^2), energies in eV."""
    e1 = constants.ev_to_joule(ej1)
    e2 = constants.ev_to_joule(ej2)
    coeff = inductance * qubit_capacitance**2 * e1 * e2 / (4 * constants.ALPHA**2 * junction_capacitance**2)
    return constants.joule_to_ev(coeff)


def makhlin_register(qubits, inductance, qubit_capacitance, junction_capacitance):
    """Charge qubits sharing one inductor, pairwise sigma_y sigma_y couplings.

    The LC frequency uses the qubit capacitances in parallel; a RegimeViolation
    warning is issued unless it exceeds five times the largest qubit splitting.
    """
    n = len(qubits)
    if n < 2:
        raise ValueError("a register needs at least two qubits")
    omega_lc = 1.0 / np.sqrt(inductance * n * qubit_capacitance)
    omega_q = max(constants.ev_to_angular_frequency(q.splitting) for q in qubits)
    if not omega_lc > 5 * omega_q:
        warnings.warn(
            f"oscillator frequency {omega_lc:.3e} rad/s is not >> qubit frequency {omega_q:.3e} rad/s",
            RegimeViolation,
            stacklevel=2,
        )
    dim = 2**n
    interaction = np.zeros((dim, dim), dtype=complex)
    pairs = {}
    for i, j in itertools.combinations(range(n), 2):
        c = makhlin_coefficient(qubits[i].ej, qubits[j].ej, inductance, qubit_capacitance, junction_capacitance)
        pairs[(i, j)] = c
        interaction += c * _embed(SIGMA_Y, i, n) @ _embed(SIGMA_Y, j, n)
    return CoupledSpinHamiltonian(
        singles=tuple(q.hamiltonian for q in qubits),
        interaction=interaction,
        couplings={"pairs": pairs, "omega_lc": omega_lc},
    )


# --- electrostatic transformer ---------------------------------------------


@dataclass(frozen=True)
class GroundEnergyCurve:
    """Transformer ground energy eps0(q) of Ec (N - Ng - q)^2 - EJ cos(phi).

    Sampled once on ``n_q`` points over one period and interpolated with a
    periodic cubic spline.
    """

    ec: float
    ej: float
    gate_charge: float = 0.0
    n_cutoff: int = DEFAULT_CHARGE_CUTOFF
    n_q: int = 401

    def exact_levels(self, q):
        h = charge_basis_hamiltonian(self.ec, self.ej, self.gate_charge + q, self.n_cutoff)
        return np.linalg.eigvalsh(h)

    def exact(self, q):
        return self.exact_levels(q)[0]

    @cached_property
    def _spline(self):
        qs = np.linspace(0.0, 1.0, self.n_q)
        levels = np.array([self.exact_levels(q)[:2] for q in qs])
        gaps = levels[:, 1] - levels[:, 0]
        if np.min(gaps) < 1e-6 * self.ec:
            i = int(np.argmin(gaps))
            raise GroundLevelCrossing(
                f"transformer levels cross at q = {qs[i]:.4f} (gap {gaps[i]:.3e});"
                " the instantaneous ground-state picture fails"
            )
        e0 = levels[:, 0].copy()
        e0[-1] = e0[0]
        return CubicSpline(qs, e0, bc_type="periodic")

    def __call__(self, q):
        return self._spline(np.mod(q, 1.0))


def transformer_couplings(eps0, q0, ratio):
    """(a, b) from symmetric differences of ``eps0`` at q0 +- ratio."""
    up, down, mid = eps0(q0 + ratio), eps0(q0 - ratio), eps0(q0)
    a = (up - down) / 4
    b = (up + down - 2 * mid) / 4
    return float(a), float(b)


@dataclass(frozen=True)
class TransformerCircuit:
    qubit1: ChargeSpin
    qubit2: ChargeSpin
    ec: float
    ej: float
    ratio: float
    q0: float = 0.0
    gate_charge: float = 0.0
    n_cutoff: int = DEFAULT_CHARGE_CUTOFF
    n_q: int = 401

    @cached_property
    def curve(self):
        return GroundEnergyCurve(self.ec, self.ej, self.gate_charge, self.n_cutoff, self.n_q)

    @property
    def gate_offset(self):
        """q_g = 2 Ng (1 - C_m / C_Sigma)."""
        return 2 * self.gate_charge * (1 - self.ratio)


def operating_point(circuit):
    """q0 implied by the transformer gate and the qubit gate charges."""
    ng_sum = circuit.qubit1.gate_charge + circuit.qubit2.gate_charge - 1.0
    return circuit.gate_offset + circuit.ratio * ng_sum


def transformer_effective(circuit):
    a, b = transformer_couplings(circuit.curve, circuit.q0, circuit.ratio)
    interaction = a * (np.kron(SIGMA_Z, I2) + np.kron(I2, SIGMA_Z)) + b * ZZ
    return CoupledSpinHamiltonian(
        singles=(circuit.qubit1.hamiltonian, circuit.qubit2.hamiltonian),
        interaction=interaction,
        couplings={"a": a, "b": b},
    )


def b_of_q0(curve, ratio, q0):
    return transformer_couplings(curve, q0, ratio)[1]


def find_b_zero(curve, ratio, lo, hi, tol=1e-10):
    """Bisection for b(q0) = 0 on a bracket with a sign change."""
    f_lo = b_of_q0(curve, ratio, lo)
    f_hi = b_of_q0(curve, ratio, hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise ValueError(f"b does not change sign on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = b_of_q0(curve, ratio, mid)
        if f_mid == 0:
            return mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def b_zero_crossings(curve, ratio, q_lo=0.0, q_hi=1.0, n=101, tol=1e-10):
    """All b = 0 roots found by scanning q0 on ``n`` points then bisecting."""
    qs = np.linspace(q_lo, q_hi, n)
    bs = np.array([b_of_q0(curve, ratio, q) for q in qs])
    roots = []
    for k in range(n - 1):
        if bs[k] == 0:
            roots.append(qs[k])
        elif np.sign(bs[k]) != np.sign(bs[k + 1]) and bs[k + 1] != 0:
            roots.append(find_b_zero(curve, ratio, qs[k], qs[k + 1], tol))
    return roots
