"""Dense Hermitian eigenproblems, phase-grid Hamiltonians and unitary evolution.

Natural units throughout: hbar = 1, so ``evolve(H, psi, t)`` applies
``exp(-1j * H * t)`` with ``t`` measured in inverse energy units of ``H``.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .errors import GridTooCoarse, NonHermitian

HERMITIAN_RTOL = 1e-12
# components within this relative distance of the maximum count as tied
_PHASE_TIE_RTOL = 1e-9


def check_hermitian(h, rtol=HERMITIAN_RTOL):
    """Return ``h`` as a square ndarray, raising NonHermitian if it is not."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {h.shape}")
    asym = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
    scale = max(np.max(np.abs(h)), 1.0)
    if asym > rtol * scale:
        raise NonHermitian(asym)
    return h


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)."""

    energies: np.ndarray
    states: np.ndarray

    def __len__(self):
        return len(self.energies)

    def state(self, k):
        return self.states[:, k]

    @property
    def gap(self):
        return self.energies[1] - self.energies[0]


def fix_phases(vectors):
    """Make the largest-magnitude component of each column real and positive.

    Ties (to a relative 1e-9) go to the lowest index.
    """
    vectors = np.array(vectors, copy=True)
    mags = np.abs(vectors)
    for k in range(vectors.shape[1]):
        col = mags[:, k]
        idx = int(np.argmax(col >= col.max() * (1 - _PHASE_TIE_RTOL)))
        z = vectors[idx, k]
        if z != 0:
            vectors[:, k] *= np.conj(z) / abs(z)
    return vectors


def diagonalize(h):
    h = check_hermitian(h)
    if np.iscomplexobj(h) and not np.any(h.imag):
        h = h.real
    energies, states = la.eigh(h)
    return Spectrum(energies=energies, states=fix_phases(states))


def evolve(h, psi0, t, spectrum=None):
    """Propagate ``psi0`` for time ``t`` (or an array of times) under ``h``.

    For an array of times the result has shape ``(len(t), dim)``.
    """
    spec = spectrum if spectrum is not None else diagonalize(h)
    psi0 = np.asarray(psi0, dtype=complex)
    coeffs = spec.states.conj().T @ psi0
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("evolution time must be non-negative")
    phases = np.exp(-1j * np.multiply.outer(t, spec.energies))
    return (phases * coeffs) @ spec.states.T


def propagator(h, t, spectrum=None):
    """Full unitary exp(-iHt) for scalar ``t``."""
    spec = spectrum if spectrum is not None else diagonalize(h)
    v = spec.states
    return (v * np.exp(-1j * spec.energies * t)) @ v.conj().T


@dataclass(frozen=True)
class GridBasis:
    """Uniform grid on [phi_min, phi_max] with hard walls just outside the ends."""

    phi_min: float
    phi_max: float
    n_points: int = 401

    def __post_init__(self):
        if self.n_points < 3:
            raise GridTooCoarse(f"need at least 3 grid points, got {self.n_points}")
        if not self.phi_max > self.phi_min:
            raise ValueError("phi_max must exceed phi_min")

    @property
    def spacing(self):
        return (self.phi_max - self.phi_min) / (self.n_points - 1)

    @property
    def points(self):
        return np.linspace(self.phi_min, self.phi_max, self.n_points)

    def refined(self, factor=2):
        return GridBasis(self.phi_min, self.phi_max, factor * (self.n_points - 1) + 1)


def kinetic_plus_potential(basis, mass_coeff, potential):
    """Matrix of ``mass_coeff * N**2 + U(phi)`` with N = -i d/dphi.

    Three-point Laplacian, wavefunction zero one spacing beyond each end.
    """
    potential = np.asarray(potential, dtype=float)
    if potential.shape != (basis.n_points,):
        raise ValueError(f"potential has {potential.shape} entries, grid has {basis.n_points}")
    if mass_coeff <= 0:
        raise ValueError("mass_coeff must be positive")
    k = mass_coeff / basis.spacing**2
    h = np.diag(2 * k + potential)
    off = -k * np.ones(basis.n_points - 1)
    h += np.diag(off, 1) + np.diag(off, -1)
    return h


def expectation_matrix(states, values):
    """<m| f(phi) |m'> for grid eigenvectors (columns) and diagonal f."""
    return states.conj().T @ (values[:, None] * states)
