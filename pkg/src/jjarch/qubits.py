"""Phase, charge and flux qubit models and their two-level spin forms.

Energies are in whatever unit ``JunctionParams.ej`` / ``ec`` are given in
(eV when built with :meth:`JunctionParams.from_circuit`), with hbar = 1 so
angular frequencies and energies are interchangeable.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import constants
from .errors import (
    LevelsUnbound,
    LinearRangeWarning,
    NoWell,
    OutOfLinearRange,
    RegimeViolation,
    SingleWell,
)
from .spectral import GridBasis, Spectrum, diagonalize, expectation_matrix, kinetic_plus_potential

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

LINEAR_RANGE = 0.05
DEFAULT_CHARGE_CUTOFF = 10


@dataclass(frozen=True)
class JunctionParams:
    """Josephson energy, charging energy and bias s = I/I0 of one junction."""

    ej: float
    ec: float
    bias: float = 0.0

    def __post_init__(self):
        if self.ec <= 0:
            raise ValueError(f"ec must be positive, got {self.ec}")
        if self.ej < 0:
            raise ValueError(f"ej must be non-negative, got {self.ej}")

    @classmethod
    def from_circuit(cls, critical_current, capacitance, bias=0.0):
        """Build from I0 [A] and C [F]; energies come out in eV."""
        return cls(
            ej=constants.josephson_energy(critical_current),
            ec=constants.charging_energy(capacitance),
            bias=bias,
        )

    @property
    def critical_current(self):
        """I0 in amperes, assuming ``ej`` is in eV."""
        return constants.critical_current(self.ej)

    @property
    def capacitance(self):
        """C in farads, assuming ``ec`` is in eV."""
        return constants.capacitance(self.ec)

    @property
    def ratio(self):
        return self.ej / self.ec

    @property
    def phase_regime(self):
        return self.ej >= 10 * self.ec

    @property
    def charge_regime(self):
        return self.ej <= 0.1 * self.ec


# --- phase qubit -----------------------------------------------------------


def plasma_energy(params, bias=None):
    """hbar * omega_p = sqrt(2 Ec EJ) (1 - s^2)^(1/4)."""
    s = params.bias if bias is None else bias
    return np.sqrt(2 * params.ec * params.ej) * (1 - s**2) ** 0.25


def width_printed(params, s0=None):
    """Eigenstate width l = l0 (1 - s0)^(-1/8), l0 = (2 Ec/EJ)^(1/4).

    This is the literal textbook expression. The harmonic ground state of the
    washboard well actually has width l0 (1 - s0^2)^(-1/8) (see
    :func:`width_harmonic`); the two agree at s0 = 0. Grid dipoles decide.
    """
    s0 = params.bias if s0 is None else s0
    return (2 * params.ec / params.ej) ** 0.25 * (1 - s0) ** (-1 / 8)


def width_harmonic(params, s0=None):
    s0 = params.bias if s0 is None else s0
    return (2 * params.ec / params.ej) ** 0.25 * (1 - s0**2) ** (-1 / 8)


def washboard(params, phi, bias=None):
    s = params.bias if bias is None else bias
    return -params.ej * (np.cos(phi) + s * phi)


def _check_well(params):
    if params.ej <= 0:
        raise NoWell("a phase qubit needs ej > 0")
    if not 0 <= params.bias < 1:
        raise NoWell(f"bias s = {params.bias} leaves no metastable well (need 0 <= s < 1)")


def phase_grid(params, n_levels=2, n_points=401, margin_widths=3.0):
    """Grid covering the lowest ``n_levels`` turning points plus a margin.

    Clipped to the washboard period around the well minimum, i.e. between the
    barrier tops at -pi - arcsin(s) and pi - arcsin(s).
    """
    _check_well(params)
    s = params.bias
    phi0 = np.arcsin(s)
    sigma = width_harmonic(params)
    span = sigma * (np.sqrt(2 * n_levels - 1) + margin_widths)
    lo = max(phi0 - span, -np.pi - phi0)
    hi = min(phi0 + span, np.pi - phi0)
    return GridBasis(lo, hi, n_points)


@dataclass(frozen=True)
class PhaseQubitModel:
    params: JunctionParams
    grid: GridBasis
    hamiltonian: np.ndarray
    levels: Spectrum
    dipoles: np.ndarray
    barrier: float
    levels_unbound: bool

    @property
    def plasma(self):
        return plasma_energy(self.params)

    @property
    def width(self):
        return width_printed(self.params)

    @property
    def width_harmonic(self):
        return width_harmonic(self.params)

    @property
    def gap(self):
        return self.levels.energies[1] - self.levels.energies[0]


def build_phase_qubit(params, grid=None, n_levels=2):
    """Diagonalize Ec N^2 - EJ (cos phi + s phi) in one metastable well."""
    _check_well(params)
    s = params.bias
    if grid is None:
        grid = phase_grid(params, n_levels)
    phi = grid.points
    h = kinetic_plus_potential(grid, params.ec, washboard(params, phi))
    full = diagonalize(h)
    energies = full.energies[:n_levels]
    states = full.states[:, :n_levels]
    dipoles = expectation_matrix(states, phi).real

    phi_min = np.arcsin(s)
    phi_max = np.pi - phi_min
    barrier = washboard(params, phi_max) - washboard(params, phi_min)
    top = washboard(params, phi_max)
    unbound = bool(energies[-1] > top)
    if unbound:
        warnings.warn(
            f"level {n_levels - 1} lies above the barrier top; treated as bound",
            LevelsUnbound,
            stacklevel=2,
        )
    return PhaseQubitModel(
        params=params,
        grid=grid,
        hamiltonian=h,
        levels=Spectrum(energies, states),
        dipoles=dipoles,
        barrier=barrier,
        levels_unbound=unbound,
    )


@dataclass(frozen=True)
class SpinForm:
    hamiltonian: np.ndarray
    drive: float = 0.0
    phi_projection: np.ndarray = field(default=None)


def phase_spin_form(model, basis="instantaneous", s=None, strict=False):
    """Two-level projection of a phase qubit.

    ``basis="instantaneous"`` gives -(hbar omega_p / 2) sigma_z at the model's
    bias. ``basis="fixed"`` keeps the model's bias as s0 and adds the linear
    drive -(EJ l / sqrt 2)(s - s0) sigma_x for a new bias ``s``.
    """
    s0 = model.params.bias
    x01 = abs(model.dipoles[0, 1])
    phi_proj = x01 * SIGMA_X + np.arcsin(s0) * SIGMA_0
    if basis == "instantaneous":
        s_eff = s0 if s is None else s
        h = -0.5 * plasma_energy(model.params, s_eff) * SIGMA_Z
        return SpinForm(h, 0.0, phi_proj)
    if basis != "fixed":
        raise ValueError(f"unknown basis {basis!r}")
    s = s0 if s is None else s
    if abs(s - s0) >= LINEAR_RANGE:
        msg = f"|s - s0| = {abs(s - s0):.3g} outside the linear range {LINEAR_RANGE}"
        if strict:
            raise OutOfLinearRange(msg)
        warnings.warn(msg, LinearRangeWarning, stacklevel=2)
    drive = -model.params.ej * model.width / np.sqrt(2) * (s - s0)
    h = -0.5 * plasma_energy(model.params, s0) * SIGMA_Z + drive * SIGMA_X
    return SpinForm(h, drive, phi_proj)


# --- charge qubit ----------------------------------------------------------


def gate_charge(gate_capacitance, gate_voltage):
    """N_g = -C_g V_g / 2e."""
    return -gate_capacitance * gate_voltage / (2 * constants.E_CHARGE)


def charge_basis_hamiltonian(ec, ej, offset, n_cutoff=DEFAULT_CHARGE_CUTOFF):
    """Ec (N - offset)^2 - EJ cos(phi) on charge states -n_cutoff..n_cutoff.

    ``ej`` may be negative (flux-frustrated SQUID); the sign is kept.
    """
    n = np.arange(-n_cutoff, n_cutoff + 1)
    h = np.diag(ec * (n - offset) ** 2).astype(float)
    tunnel = -0.5 * ej * np.ones(len(n) - 1)
    return h + np.diag(tunnel, 1) + np.diag(tunnel, -1)


@dataclass(frozen=True)
class ChargeQubitModel:
    params: JunctionParams
    gate_charge: float
    n_cutoff: int
    hamiltonian: np.ndarray

    @property
    def charges(self):
        return np.arange(-self.n_cutoff, self.n_cutoff + 1)

    def spectrum(self):
        return diagonalize(self.hamiltonian)


def build_charge_qubit(params, gate_charge, n_cutoff=DEFAULT_CHARGE_CUTOFF):
    """Cooper-pair box in the charge basis.

    ``params.ec`` should already include the gate capacitance,
    i.e. (2e)^2 / 2(C + C_g); see :func:`box_charging_energy`.
    """
    if n_cutoff < 2:
        raise ValueError("n_cutoff must be at least 2")
    if not params.charge_regime:
        warnings.warn(
            f"EJ/Ec = {params.ratio:.3g} is not in the charge regime",
            RegimeViolation,
            stacklevel=2,
        )
    h = charge_basis_hamiltonian(params.ec, params.ej, gate_charge, n_cutoff)
    return ChargeQubitModel(params, gate_charge, n_cutoff, h)


def box_charging_energy(capacitance, gate_capacitance):
    return constants.charging_energy(capacitance + gate_capacitance)


@dataclass(frozen=True)
class ChargeSpinForm:
    charge_basis: np.ndarray
    plus_minus_basis: np.ndarray


def charge_spin_form(model=None, *, ec=None, ej=None, gate_charge=None):
    """Two-level forms in the {|0>, |1>} charge basis and the |+-> basis."""
    if model is not None:
        ec, ej, gate_charge = model.params.ec, model.params.ej, model.gate_charge
    if not 0 <= gate_charge <= 1:
        raise ValueError(f"gate charge {gate_charge} outside [0, 1]")
    bz = ec * (gate_charge - 0.5)
    charge = bz * SIGMA_Z - 0.5 * ej * SIGMA_X
    pm = bz * SIGMA_X - 0.5 * ej * SIGMA_Z
    return ChargeSpinForm(charge, pm)


# --- flux qubit ------------------------------------------------------------


def flux_inductive_energy(ec, hbar_omega_lc):
    """Coefficient (hbar omega_LC)^2 / 4 Ec of the loop's quadratic potential."""
    return hbar_omega_lc**2 / (4 * ec)


def frustration_center(flux):
    """2 pi (k + 1/2) for the frustration point nearest ``flux`` (= Phi_x / Phi_sc)."""
    return 2 * np.pi * (np.floor(flux) + 0.5)


def flux_potential(params, hbar_omega_lc, flux, phi):
    el = flux_inductive_energy(params.ec, hbar_omega_lc)
    return -params.ej * np.cos(phi) + el * (phi - 2 * np.pi * flux) ** 2


def flux_grid(params, hbar_omega_lc, flux=0.5, n_points=401, margin_widths=3.0):
    """Grid symmetric about the nearest frustration point spanning both wells."""
    center = frustration_center(flux)
    el = flux_inductive_energy(params.ec, hbar_omega_lc)
    x = np.linspace(0, 20 * np.pi, 20001)
    v = params.ej * np.cos(x) + el * x**2
    imin = int(np.argmin(v))
    curv = max(-params.ej * np.cos(x[imin]) + 2 * el, 1e-12)
    # oscillator width sqrt(2 Ec / omega) with omega = sqrt(2 Ec * curvature)
    sigma = np.sqrt(2 * params.ec / np.sqrt(2 * params.ec * curv))
    window = max(v[0] - v[imin], 0.0) + 10 * np.sqrt(2 * params.ec * curv)
    outside = np.nonzero((x > x[imin]) & (v > v[imin] + window))[0]
    edge = x[outside[0]] if len(outside) else x[-1]
    half = edge + margin_widths * sigma
    return GridBasis(center - half, center + half, n_points)


@dataclass(frozen=True)
class FluxQubitModel:
    params: JunctionParams
    hbar_omega_lc: float
    flux: float
    grid: GridBasis
    hamiltonian: np.ndarray
    levels: Spectrum
    bz: float
    bx: float
    localized: np.ndarray

    @property
    def spin_hamiltonian(self):
        return self.bz * SIGMA_Z + self.bx * SIGMA_X

    @property
    def inductive_energy(self):
        return flux_inductive_energy(self.params.ec, self.hbar_omega_lc)


def build_flux_qubit(params, hbar_omega_lc, flux, grid=None, n_levels=4):
    """rf-SQUID flux qubit on a phase grid with spin parameters Bz, Bx.

    ``flux`` is Phi_x / Phi_sc. The localized pair
    |up> = (psi0 + psi1)/sqrt2, |down> = (psi1 - psi0)/sqrt2 is taken from the
    lowest doublet at the nearest frustration point on the same grid, and
    Bz, Bx are read off the projection of H(flux) onto that pair, so that
    H = Bz sigma_z + Bx sigma_x with Bx = (E1 - E0)/2 at frustration.
    """
    el = flux_inductive_energy(params.ec, hbar_omega_lc)
    curvature = -params.ej + 2 * el
    if curvature >= 0:
        raise SingleWell(
            f"curvature EJ cos(pi) + 2 EL = {curvature:.4g} >= 0 at the frustration point:"
            " no double well"
        )
    if grid is None:
        grid = flux_grid(params, hbar_omega_lc, flux)
    phi = grid.points
    center = frustration_center(flux)

    h_ref = kinetic_plus_potential(grid, params.ec, flux_potential(params, hbar_omega_lc, center / (2 * np.pi), phi))
    ref = diagonalize(h_ref)
    psi0, psi1 = ref.states[:, 0], ref.states[:, 1]
    up = (psi0 + psi1) / np.sqrt(2)
    down = (psi1 - psi0) / np.sqrt(2)
    pair = np.column_stack([up, down])

    h = kinetic_plus_potential(grid, params.ec, flux_potential(params, hbar_omega_lc, flux, phi))
    full = diagonalize(h)
    proj = pair.T @ h @ pair
    bz = 0.5 * (proj[0, 0] - proj[1, 1])
    bx = 0.5 * (proj[0, 1] + proj[1, 0])
    return FluxQubitModel(
        params=params,
        hbar_omega_lc=hbar_omega_lc,
        flux=flux,
        grid=grid,
        hamiltonian=h,
        levels=Spectrum(full.energies[:n_levels], full.states[:, :n_levels]),
        bz=float(bz),
        bx=float(bx),
        localized=pair,
    )


def parity_operator(grid, center):
    """Reflection phi -> 2 center - phi as a permutation matrix on a symmetric grid."""
    phi = grid.points
    mirrored = 2 * center - phi
    idx = np.rint((mirrored - grid.phi_min) / grid.spacing).astype(int)
    if np.any(idx < 0) or np.any(idx >= grid.n_points):
        raise ValueError("grid is not symmetric about the center")
    p = np.zeros((grid.n_points, grid.n_points))
    p[np.arange(grid.n_points), idx] = 1.0
    return p
