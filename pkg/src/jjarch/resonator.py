"""Junction-resonator dynamics: exact, rotating-wave and dressed-state perturbative.

Product states |m, n> (junction level m, phonon number n) are ordered m-major,
index ``m * (n_phonons + 1) + n``. Natural units: hbar = 1 and, for the
``harmonic``/``two_level`` factories, energies in units of the qubit spacing.
"""

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import CutoffTooSmall, SmallDenominator
from .qubits import width_harmonic
from .spectral import Spectrum, check_hermitian, diagonalize

DEGENERACY_TOL = 1e-8
SMALL_DENOMINATOR_TOL = 1e-10
CUTOFF_TOL = 1e-6


def destroy(n_levels):
    return np.diag(np.sqrt(np.arange(1, n_levels)), 1)


@dataclass(frozen=True)
class ResonatorSystem:
    """Junction levels and dipoles coupled to one resonator mode.

    ``levels`` are epsilon_m, ``dipoles`` the real symmetric x_mm' and ``g``
    the coupling energy; ``omega0`` is hbar * omega_0.
    """

    levels: np.ndarray
    dipoles: np.ndarray
    omega0: float
    g: float
    n_phonons: int = 5

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        dipoles = np.asarray(self.dipoles, dtype=float)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "dipoles", dipoles)
        if len(levels) < 2:
            raise ValueError("need at least two junction levels")
        if dipoles.shape != (len(levels), len(levels)):
            raise ValueError("dipole matrix must be M x M")
        if not np.allclose(dipoles, dipoles.T, atol=1e-14):
            raise ValueError("dipole matrix must be symmetric")
        if self.n_phonons < 1:
            raise ValueError("n_phonons must be at least 1")

    @classmethod
    def two_level(cls, g, x01, x00=0.0, x11=None, n_phonons=5, gap=1.0):
        """Resonant two-level junction with explicit dipoles."""
        x11 = x00 if x11 is None else x11
        return cls(
            levels=np.array([0.0, gap]),
            dipoles=np.array([[x00, x01], [x01, x11]]),
            omega0=gap,
            g=g,
            n_phonons=n_phonons,
        )

    @classmethod
    def harmonic(cls, g, bias=0.32, ej_over_ec=1e4, n_phonons=5):
        """Two-level junction with harmonic-well dipoles.

        x01 = l / sqrt(2) with the harmonic width l0 (1 - s0^2)^(-1/8) and
        x00 = x11 = arcsin(s0); energies in units of the level spacing.
        """
        from .qubits import JunctionParams

        width = width_harmonic(JunctionParams(ej_over_ec, 1.0, bias))
        return cls.two_level(g, width / np.sqrt(2), np.arcsin(bias), np.arcsin(bias), n_phonons)

    @classmethod
    def from_qubit(cls, model, g, n_phonons=5, n_levels=None):
        """Use grid levels and dipoles of a PhaseQubitModel, in units of its gap.

        Level signs are chosen so that x_0m >= 0, which makes x01 positive.
        """
        n = len(model.levels) if n_levels is None else n_levels
        e = model.levels.energies[:n]
        gap = e[1] - e[0]
        x = model.dipoles[:n, :n].copy()
        signs = np.where(x[0] < 0, -1.0, 1.0)
        signs[0] = 1.0
        x = signs[:, None] * x * signs[None, :]
        return cls(levels=(e - e[0]) / gap, dipoles=x, omega0=1.0, g=g, n_phonons=n_phonons)

    @property
    def n_levels(self):
        return len(self.levels)

    @property
    def dim(self):
        return self.n_levels * (self.n_phonons + 1)

    @property
    def detuning(self):
        """omega_d = (eps1 - eps0) - hbar omega0."""
        return self.levels[1] - self.levels[0] - self.omega0

    @property
    def x01(self):
        return self.dipoles[0, 1]

    @property
    def rabi0(self):
        """Vacuum Rabi frequency on resonance, 2 g |x01|."""
        return 2 * abs(self.g * self.x01)

    @property
    def transfer_time(self):
        """pi / Omega0: complete |10> -> |01> transfer under the RWA."""
        return np.pi / self.rabi0 if self.rabi0 > 0 else np.inf

    def with_detuning(self, detuning):
        """Shift every excited level so that eps1 - eps0 = omega0 + detuning."""
        shift = self.omega0 + detuning - (self.levels[1] - self.levels[0])
        levels = self.levels.copy()
        levels[1:] += shift
        return replace(self, levels=levels)

    def index(self, m, n):
        return m * (self.n_phonons + 1) + n

    def basis_state(self, m, n):
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(m, n)] = 1.0
        return v

    def bare_energies(self):
        """E_mn = eps_m + n hbar omega0 in product-basis order."""
        n = np.arange(self.n_phonons + 1)
        return (self.levels[:, None] + self.omega0 * n[None, :]).ravel()


def _ladder(sys):
    a = destroy(sys.n_phonons + 1)
    return a, a.T


def build_full_hamiltonian(sys):
    """sum eps_m |m><m| + omega0 a^dag a - i g sum x_mm' |m><m'| (a - a^dag)."""
    a, ad = _ladder(sys)
    h = np.diag(sys.bare_energies()).astype(complex)
    h += -1j * sys.g * np.kron(sys.dipoles, a - ad)
    return check_hermitian(h)


def _projector(m, mp, n_levels):
    p = np.zeros((n_levels, n_levels))
    p[m, mp] = 1.0
    return p


def split_jc(sys):
    """(H_JC, V) for a two-level junction; H_JC keeps only x01 co-rotating terms."""
    if sys.n_levels != 2:
        raise ValueError("the Jaynes-Cummings split needs exactly two junction levels")
    a, ad = _ladder(sys)
    x = sys.dipoles
    c10 = _projector(1, 0, 2)
    c01 = _projector(0, 1, 2)
    c00 = _projector(0, 0, 2)
    c11 = _projector(1, 1, 2)
    diag = np.diag(sys.bare_energies()).astype(complex)
    h_jc = diag - 1j * sys.g * x[0, 1] * (np.kron(c10, a) - np.kron(c01, ad))
    v = -1j * sys.g * (
        x[0, 0] * np.kron(c00, a - ad)
        + x[0, 1] * np.kron(c01, a)
        - x[0, 1] * np.kron(c10, ad)
        + x[1, 1] * np.kron(c11, a - ad)
    )
    return check_hermitian(h_jc), check_hermitian(v)


@dataclass(frozen=True)
class DressedBasis:
    """Eigenbasis of H_JC as columns of ``vectors``.

    ``labels`` holds ``(j, sigma)`` for each doublet state, ``"ground"`` for
    |00> and ``"top"`` for |1, N>, which has no partner in the truncated space.
    """

    vectors: np.ndarray
    energies: np.ndarray
    labels: tuple

    def position(self, label):
        return self.labels.index(label)

    def vector(self, label):
        return self.vectors[:, self.position(label)]

    def energy(self, label):
        return self.energies[self.position(label)]


def dressed_states(sys):
    """Dressed states of H_JC.

    On resonance the closed forms (|0, j+1> - i sigma |1, j>)/sqrt2 with
    W = eps0 + (j+1) omega0 + sigma sqrt(j+1) g |x01| are used (the sign of
    g x01 is absorbed into the relative phase). Off resonance each
    (|0, j+1>, |1, j>) block is diagonalized, sigma = +1 for the upper level,
    phases fixed so the |0, j+1> component is real and non-negative.
    """
    if sys.n_levels != 2:
        raise ValueError("dressed states need exactly two junction levels")
    nph = sys.n_phonons
    dim = sys.dim
    e0, e1 = sys.levels
    k = sys.g * sys.x01
    sgn = 1.0 if k >= 0 else -1.0
    vectors = np.zeros((dim, dim), dtype=complex)
    energies = np.zeros(dim)
    labels = []

    col = 0
    vectors[sys.index(0, 0), col] = 1.0
    energies[col] = e0
    labels.append("ground")
    col += 1
    resonant = sys.detuning == 0
    for j in range(nph):
        i0, i1 = sys.index(0, j + 1), sys.index(1, j)
        root = np.sqrt(j + 1)
        if resonant:
            base = e0 + (j + 1) * sys.omega0
            for sigma in (-1, +1):
                vectors[i0, col] = 1 / np.sqrt(2)
                vectors[i1, col] = -1j * sigma * sgn / np.sqrt(2)
                energies[col] = base + sigma * root * abs(k)
                labels.append((j, sigma))
                col += 1
        else:
            block = np.array(
                [[e0 + (j + 1) * sys.omega0, 1j * k * root], [-1j * k * root, e1 + j * sys.omega0]]
            )
            w, u = np.linalg.eigh(block)
            for sigma, idx in ((-1, 0), (+1, 1)):
                vec = u[:, idx]
                ref = vec[0] if abs(vec[0]) > 1e-14 else vec[1]
                vec = vec * np.conj(ref) / abs(ref)
                vectors[i0, col], vectors[i1, col] = vec
                energies[col] = w[idx]
                labels.append((j, sigma))
                col += 1
    vectors[sys.index(1, nph), col] = 1.0
    energies[col] = e1 + nph * sys.omega0
    labels.append("top")
    return DressedBasis(vectors=vectors, energies=energies, labels=tuple(labels))


def perturbed_spectrum(unperturbed, coupling, scale=1.0, degeneracy_tol=DEGENERACY_TOL, groups=None):
    """Energies to second order and states to first order in ``coupling``.

    ``unperturbed`` are the diagonal energies of H0 and ``coupling`` is V in
    the same basis. States closer in energy than ``degeneracy_tol * scale``
    are grouped and the group's effective Hamiltonian (H0 + V + second-order
    couplings to the outside) is diagonalized first. The first-order states
    are then symmetrically orthonormalized, which changes them only at second
    order and keeps the propagator unitary.

    ``groups`` optionally lists index sets to treat as quasi-degenerate; any
    two groups closer than the tolerance are merged.
    """
    w = np.asarray(unperturbed, dtype=float)
    v = np.asarray(coupling)
    dim = len(w)
    if groups is None:
        groups = [[k] for k in range(dim)]
    groups = [sorted(int(k) for k in grp) for grp in groups]
    if sorted(k for grp in groups for k in grp) != list(range(dim)):
        raise ValueError("groups must partition the basis indices")
    groups = _merge_close(groups, w, degeneracy_tol * scale)

    energies = np.zeros(dim)
    states = np.zeros((dim, dim), dtype=complex)
    col = 0
    smallest = np.inf
    for grp in groups:
        inside = np.array(grp)
        outside = np.setdiff1d(np.arange(dim), inside)
        # inv[l, a] = 1 / (E_a - E_l) for outside l, inside a
        inv = 1.0 / (w[inside][None, :] - w[outside][:, None])
        if outside.size:
            smallest = min(smallest, np.min(np.abs(1.0 / inv)))
        v_out_in = v[np.ix_(outside, inside)]
        coupled = v_out_in * inv
        h_eff = np.diag(w[inside]) + v[np.ix_(inside, inside)]
        second = v_out_in.conj().T @ coupled
        h_eff = h_eff + 0.5 * (second + second.conj().T)
        e_grp, u_grp = np.linalg.eigh(h_eff)
        for k in range(len(inside)):
            vec = np.zeros(dim, dtype=complex)
            vec[inside] = u_grp[:, k]
            vec[outside] = coupled @ u_grp[:, k]
            states[:, col] = vec
            energies[col] = e_grp[k]
            col += 1
    if smallest < SMALL_DENOMINATOR_TOL * scale:
        warnings.warn(f"perturbative denominator {smallest:.3e} is nearly zero", SmallDenominator, stacklevel=2)
    overlap = states.conj().T @ states
    evals, evecs = np.linalg.eigh(overlap)
    states = states @ (evecs / np.sqrt(evals)) @ evecs.conj().T
    idx = np.argsort(energies)
    return Spectrum(energies[idx], states[:, idx])


def _merge_close(groups, w, tol):
    groups = sorted(groups, key=lambda grp: w[grp].min())
    merged = [list(groups[0])]
    for grp in groups[1:]:
        # exact ties always merge so a zero tolerance never divides by zero
        if w[grp].min() - w[merged[-1]].max() <= tol:
            merged[-1].extend(grp)
        else:
            merged.append(list(grp))
    return merged


def _manifold_groups(basis):
    """Index sets of the dressed doublets; ground and top stand alone."""
    by_j = {}
    for pos, label in enumerate(basis.labels):
        key = label[0] if isinstance(label, tuple) else label
        by_j.setdefault(key, []).append(pos)
    return list(by_j.values())


def _dressed_spectrum(sys, method):
    """Eigen-decomposition of H expressed in the dressed basis."""
    basis = dressed_states(sys)
    h = build_full_hamiltonian(sys)
    if method == "exact":
        full = diagonalize(h)
        return basis, Spectrum(full.energies, basis.vectors.conj().T @ full.states)
    if method == "pt":
        _, v = split_jc(sys)
        v_d = basis.vectors.conj().T @ v @ basis.vectors
        # doublet partners split at O(g) while V mixes them at O(g^2)
        groups = _manifold_groups(basis)
        return basis, perturbed_spectrum(basis.energies, v_d, scale=sys.omega0, groups=groups)
    raise ValueError(f"unknown propagator order {method!r}")


def dressed_propagator(sys, t, order="exact"):
    """<d_a| exp(-iHt) |d_b> over the full dressed basis (ground, pairs, top).

    Built from the eigenfunction expansion sum_alpha <a|Psi><Psi|b> e^{-iE t}
    with exact (``order="exact"``) or perturbative (``order="pt"``) Psi, E.
    Returns ``(G, basis)``; ``G`` has shape (dim, dim) or (len(t), dim, dim).
    """
    basis, spec = _dressed_spectrum(sys, order)
    return _propagate(spec, t), basis


def _propagate(spec, t):
    u = spec.states
    phases = np.exp(-1j * np.multiply.outer(np.asarray(t, dtype=float), spec.energies))
    return np.einsum("ak,...k,bk->...ab", u, phases, u.conj())


@dataclass(frozen=True)
class AmplitudeTrace:
    """Interaction-picture amplitudes c_mn(t) for all product states."""

    times: np.ndarray
    amplitudes: np.ndarray
    method: str
    n_phonons: int

    def c(self, m, n):
        return self.amplitudes[:, m * (self.n_phonons + 1) + n]

    def p(self, m, n):
        return np.abs(self.c(m, n)) ** 2

    @property
    def norm(self):
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)


def _initial_vector(sys, initial):
    if isinstance(initial, tuple) and len(initial) == 2 and all(isinstance(q, (int, np.integer)) for q in initial):
        return sys.basis_state(*initial)
    psi = np.asarray(initial, dtype=complex)
    if psi.shape != (sys.dim,):
        raise ValueError(f"initial state must have dimension {sys.dim}")
    return psi


def amplitudes(sys, initial=(1, 0), times=None, method="exact", check_cutoff=True):
    """c_mn(t) = e^{i E_mn t} <mn| exp(-iHt) |initial>.

    ``method`` is ``"exact"`` (full H), ``"rwa"`` (H_JC only) or
    ``"dressed_pt"`` (perturbative dressed-state propagator contraction).
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    psi0 = _initial_vector(sys, initial)
    if method == "exact":
        spec = diagonalize(build_full_hamiltonian(sys))
        states = _evolve_spec(spec, psi0, times)
    elif method == "rwa":
        h_jc, _ = split_jc(sys)
        states = _evolve_spec(diagonalize(h_jc), psi0, times)
    elif method == "dressed_pt":
        basis, spec = _dressed_spectrum(sys, "pt")
        d = basis.vectors
        g = _propagate(spec, times)
        states = np.einsum("ia,tab,b->ti", d, g, d.conj().T @ psi0)
    else:
        raise ValueError(f"unknown method {method!r}")
    if check_cutoff and method != "dressed_pt":
        top = [sys.index(m, sys.n_phonons) for m in range(sys.n_levels)]
        pop = np.max(np.sum(np.abs(states[:, top]) ** 2, axis=1))
        if pop > CUTOFF_TOL:
            raise CutoffTooSmall(
                f"top phonon level reaches population {pop:.2e} > {CUTOFF_TOL:g}; raise n_phonons"
            )
    c = states * np.exp(1j * np.multiply.outer(times, sys.bare_energies()))
    return AmplitudeTrace(times=times, amplitudes=c, method=method, n_phonons=sys.n_phonons)


def _evolve_spec(spec, psi0, times):
    coeffs = spec.states.conj().T @ psi0
    return (np.exp(-1j * np.multiply.outer(times, spec.energies)) * coeffs) @ spec.states.T


def contracted_amplitudes(sys, initial, times, order="exact"):
    """c_mn(t) assembled from dressed overlaps and the dressed propagator.

    Identical to direct evolution when ``order="exact"``; kept separate so the
    contraction can be checked against :func:`amplitudes`.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    psi0 = _initial_vector(sys, initial)
    g, basis = dressed_propagator(sys, times, order)
    overlaps_in = basis.vectors.conj().T @ psi0
    out = np.einsum("ia,tab,b->ti", basis.vectors, g, overlaps_in)
    return out * np.exp(1j * np.multiply.outer(times, sys.bare_energies()))
