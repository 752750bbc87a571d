"""Physical constants and SI <-> eV conversions used at the package boundary.

Energies produced here are in electron-volts. Everything downstream works in
natural units (hbar = 1) with a caller-chosen energy scale.
"""

import numpy as np
from scipy import constants as _c

E_CHARGE = _c.e
HBAR = _c.hbar
H_PLANCK = _c.h
# alpha = hbar / 2e, the phase-to-voltage conversion V = alpha * dphi/dt
ALPHA = HBAR / (2 * E_CHARGE)
# superconducting flux quantum h/2e (SI form of hc/2e)
FLUX_QUANTUM = H_PLANCK / (2 * E_CHARGE)


def joule_to_ev(energy):
    return energy / E_CHARGE


def ev_to_joule(energy):
    return energy * E_CHARGE


def josephson_energy(critical_current):
    """E_J = hbar I0 / 2e in eV for a critical current in amperes."""
    return joule_to_ev(HBAR * critical_current / (2 * E_CHARGE))


def charging_energy(capacitance):
    """Cooper-pair charging energy (2e)^2 / 2C in eV for C in farads."""
    return joule_to_ev((2 * E_CHARGE) ** 2 / (2 * capacitance))


def critical_current(ej_ev):
    return 2 * E_CHARGE * ev_to_joule(ej_ev) / HBAR


def capacitance(ec_ev):
    return (2 * E_CHARGE) ** 2 / (2 * ev_to_joule(ec_ev))


def lc_energy(inductance, capacitance):
    """hbar * omega_LC in eV, omega_LC = 1/sqrt(LC)."""
    return joule_to_ev(HBAR / np.sqrt(inductance * capacitance))


def ev_to_angular_frequency(energy_ev):
    return ev_to_joule(energy_ev) / HBAR
