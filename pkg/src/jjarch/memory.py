"""Store-hold-retrieve quantum memory through a resonator.

A qubit state alpha|0> + beta|1> on the junction (resonator in its ground
state) is swapped into the resonator, held while the junction is detuned,
then swapped back. Each segment is a piecewise-constant Hamiltonian with the
excited junction levels shifted by the segment detuning. Amplitudes are
reported in the interaction picture of the free Hamiltonian actually applied,
so the free phase exp(i E_mn tau) accumulates segment by segment.
"""

import csv
import io
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from .errors import BoundsInfeasible, CutoffTooSmall
from .resonator import CUTOFF_TOL, _dressed_spectrum, build_full_hamiltonian, split_jc
from .spectral import diagonalize

ROLES = ("store", "hold", "retrieve")
METHODS = ("exact", "rwa", "dressed_pt")
HOLD_DETUNING_FACTOR = 10.0
GOLDEN_HEADER = ("g_over_gap", "F2_rwa", "F2_opt", "t_f_rwa", "t_f_opt")

EQUATOR = (2**-0.5, 2**-0.5)
ZERO = (1.0, 0.0)
ONE = (0.0, 1.0)


@dataclass(frozen=True)
class Segment:
    duration: float
    detuning: float = 0.0
    role: str = "hold"

    def __post_init__(self):
        if not self.duration >= 0:
            raise ValueError(f"segment duration must be non-negative, got {self.duration}")
        if self.role not in ROLES:
            raise ValueError(f"segment role must be one of {ROLES}, got {self.role!r}")


@dataclass(frozen=True)
class PulseSchedule:
    """Ordered piecewise-constant segments (duration, detuning, role)."""

    segments: tuple

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def total_time(self):
        return float(sum(s.duration for s in self.segments))

    def parameters(self):
        """Flat vector [duration_0, detuning_0, duration_1, ...]."""
        return np.array([v for s in self.segments for v in (s.duration, s.detuning)], dtype=float)

    def with_parameters(self, params):
        params = np.asarray(params, dtype=float).reshape(len(self.segments), 2)
        return PulseSchedule(tuple(Segment(d, w, s.role) for (d, w), s in zip(params, self.segments)))


@dataclass(frozen=True)
class MemoryResult:
    alpha: complex
    beta: complex
    c00: complex
    c10: complex
    fidelity_sq: float
    schedule: PulseSchedule
    method: str
    phase_free: bool = False
    final_state: np.ndarray = field(default=None, repr=False)


def normalize_state(state):
    """Return (alpha, beta) as complex numbers with unit norm."""
    alpha, beta = (complex(z) for z in state)
    norm = np.hypot(abs(alpha), abs(beta))
    if norm == 0:
        raise ValueError("qubit state must be non-zero")
    return alpha / norm, beta / norm


def fidelity_sq(alpha, beta, c00, c10, phase_free=False):
    """F^2 = |alpha* c00 + beta* c10|^2.

    With ``phase_free`` the relative phase of the retrieved amplitudes is
    compensated, giving (|alpha||c00| + |beta||c10|)^2.
    """
    if phase_free:
        f = (abs(alpha) * abs(c00) + abs(beta) * abs(c10)) ** 2
    else:
        f = abs(np.conj(alpha) * c00 + np.conj(beta) * c10) ** 2
    return float(min(max(f, 0.0), 1.0))


def hold_detuning(sys, factor=HOLD_DETUNING_FACTOR):
    return factor * sys.rabi0


def rwa_schedule(sys, detuning=None):
    """Resonant swap, far-detuned hold, resonant swap back.

    Each swap lasts pi / Omega0. The hold lasts one generalized Rabi period
    2 pi / sqrt(omega_d^2 + Omega0^2), after which the one-excitation
    manifold returns to itself under the RWA.
    """
    wd = hold_detuning(sys) if detuning is None else float(detuning)
    t_tr = sys.transfer_time
    t_hold = 2 * np.pi / np.hypot(wd, sys.rabi0)
    return PulseSchedule(
        (
            Segment(t_tr, 0.0, "store"),
            Segment(t_hold, wd, "hold"),
            Segment(t_tr, 0.0, "retrieve"),
        )
    )


def _base_hamiltonian(sys, method):
    if method == "exact":
        return build_full_hamiltonian(sys)
    if method == "rwa":
        return split_jc(sys)[0]
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def segment_propagator(sys, duration, method="exact"):
    """exp(-i H tau) in the product basis for one segment system ``sys``."""
    if method == "dressed_pt":
        basis, spec = _dressed_spectrum(sys, "pt")
        u, energies = basis.vectors @ spec.states, spec.energies
    else:
        energies, u = np.linalg.eigh(_base_hamiltonian(sys, method))
    return (u * np.exp(-1j * energies * duration)) @ u.conj().T


def evolve_schedule(sys, psi0, schedule, method="exact", check_cutoff=True):
    """Interaction-picture state(s) after the whole schedule.

    ``psi0`` is one state vector or a matrix whose columns are states.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    psi = np.array(psi0, dtype=complex)
    phase = np.zeros(sys.dim)
    top = [sys.index(m, sys.n_phonons) for m in range(sys.n_levels)]
    base = None if method == "dressed_pt" else _base_hamiltonian(sys, method)
    # detuning only moves the excited junction levels
    excited = np.repeat(np.arange(sys.n_levels) > 0, sys.n_phonons + 1).astype(float)
    for seg in schedule.segments:
        if base is None:
            seg_sys = sys.with_detuning(seg.detuning)
            u = segment_propagator(seg_sys, seg.duration, method)
            energies = seg_sys.bare_energies()
        else:
            shift = seg.detuning - sys.detuning
            energies, vecs = np.linalg.eigh(base + np.diag(shift * excited))
            u = (vecs * np.exp(-1j * energies * seg.duration)) @ vecs.conj().T
            energies = sys.bare_energies() + shift * excited
        psi = u @ psi
        phase += energies * seg.duration
        if check_cutoff:
            pop = float(np.max(np.sum(np.abs(psi[top]) ** 2, axis=0)))
            if pop > CUTOFF_TOL:
                raise CutoffTooSmall(
                    f"top phonon level holds population {pop:.2e} after a {seg.role} segment; raise n_phonons"
                )
    factor = np.exp(1j * phase)
    return psi * (factor if psi.ndim == 1 else factor[:, None])


def run_memory(sys, state, schedule=None, method="exact", phase_free=False, check_cutoff=True):
    """Store and retrieve ``state`` = (alpha, beta) and return F^2.

    ``sys`` must be resonant; segment detunings are applied on top of it.
    The default schedule is :func:`rwa_schedule`.
    """
    alpha, beta = normalize_state(state)
    schedule = rwa_schedule(sys) if schedule is None else schedule
    psi0 = alpha * sys.basis_state(0, 0) + beta * sys.basis_state(1, 0)
    final = evolve_schedule(sys, psi0, schedule, method, check_cutoff)
    c00, c10 = final[sys.index(0, 0)], final[sys.index(1, 0)]
    return MemoryResult(
        alpha=alpha,
        beta=beta,
        c00=complex(c00),
        c10=complex(c10),
        fidelity_sq=fidelity_sq(alpha, beta, c00, c10, phase_free),
        schedule=schedule,
        method=method,
        phase_free=phase_free,
        final_state=final,
    )


def min_fidelity(sys, states, schedule, method="exact", phase_free=False, check_cutoff=False):
    """Minimum F^2 over ``states``, all evolved in one pass."""
    pairs = [normalize_state(st) for st in states]
    psi0 = np.zeros((sys.dim, len(pairs)), dtype=complex)
    psi0[sys.index(0, 0)] = [a for a, _ in pairs]
    psi0[sys.index(1, 0)] = [b for _, b in pairs]
    final = evolve_schedule(sys, psi0, schedule, method, check_cutoff)
    c00, c10 = final[sys.index(0, 0)], final[sys.index(1, 0)]
    return min(fidelity_sq(a, b, c00[k], c10[k], phase_free) for k, (a, b) in enumerate(pairs))


def three_state_fidelity(sys, schedule=None, method="exact", phase_free=False):
    """F^2 for |0>, |1> and the equator state, with their min and mean."""
    schedule = rwa_schedule(sys) if schedule is None else schedule
    named = {"zero": ZERO, "one": ONE, "equator": EQUATOR}
    out = {k: run_memory(sys, st, schedule, method, phase_free).fidelity_sq for k, st in named.items()}
    vals = list(out.values())
    out["min"], out["mean"] = min(vals), float(np.mean(vals))
    return out


def default_bounds(sys, init):
    """Durations within +-50 % of their initial value; detunings within
    +-Omega0 of theirs (hold detuning within +-50 %)."""
    bounds = []
    for seg in init.segments:
        bounds.append((0.5 * seg.duration, 1.5 * seg.duration))
        if seg.detuning != 0:
            lo, hi = sorted((0.5 * seg.detuning, 1.5 * seg.detuning))
        else:
            lo, hi = -sys.rabi0, sys.rabi0
        bounds.append((lo, hi))
    return bounds


def _check_bounds(x0, bounds):
    bounds = np.asarray(bounds, dtype=float)
    if bounds.shape != (len(x0), 2):
        raise ValueError(f"need {len(x0)} (lo, hi) bound pairs, got shape {bounds.shape}")
    if np.any(bounds[:, 0] > bounds[:, 1]):
        raise BoundsInfeasible("a lower bound exceeds its upper bound")
    outside = (x0 < bounds[:, 0]) | (x0 > bounds[:, 1])
    if np.any(outside):
        raise BoundsInfeasible(f"initial schedule violates bounds at parameters {np.flatnonzero(outside).tolist()}")
    if np.any((bounds[0::2, 0] < 0)):
        raise BoundsInfeasible("duration bounds must be non-negative")
    return bounds


def optimize_schedule(
    sys,
    states,
    init=None,
    bounds=None,
    method="exact",
    seed=0,
    restarts=5,
    phase_free=False,
    maxiter=300,
    simplex_step=0.01,
    restart_spread=0.02,
):
    """Maximize the minimum F^2 over ``states`` by Nelder-Mead on all segment
    durations and detunings.

    Parameters are scaled by their initial values (detunings that start at
    zero by Omega0). The first start is ``init``; the remaining
    ``restarts - 1`` starts are seeded Gaussian perturbations of relative
    size ``restart_spread``. ``bounds`` is a list of (lo, hi) pairs in
    :meth:`PulseSchedule.parameters` order. The returned schedule is never
    worse than ``init``.
    """
    if not states:
        raise ValueError("need at least one test state")
    init = rwa_schedule(sys) if init is None else init
    x0 = init.parameters()
    bounds = _check_bounds(x0, default_bounds(sys, init) if bounds is None else bounds)
    scale = np.where(np.abs(x0) > 0, np.abs(x0), sys.rabi0 if sys.rabi0 > 0 else 1.0)
    lo, hi = bounds[:, 0] / scale, bounds[:, 1] / scale
    y0 = x0 / scale

    def objective(y):
        sched = init.with_parameters(np.clip(y, lo, hi) * scale)
        return -min_fidelity(sys, states, sched, method, phase_free)

    best_y, best_f = y0, objective(y0)
    if best_f <= -1 + 1e-14:
        return init
    rng = np.random.default_rng(seed)
    n = len(y0)
    for k in range(restarts):
        start = y0 if k == 0 else np.clip(y0 + restart_spread * rng.standard_normal(n), lo, hi)
        # step inward so the simplex respects the bounds
        steps = np.where(start + simplex_step <= hi, simplex_step, -simplex_step)
        simplex = np.vstack([start, start + np.diag(steps)])
        res = minimize(
            objective,
            start,
            method="Nelder-Mead",
            bounds=list(zip(lo, hi)),
            options={"maxiter": maxiter, "initial_simplex": simplex, "xatol": 1e-9, "fatol": 1e-13},
        )
        if res.fun < best_f - 1e-13:
            best_f, best_y = float(res.fun), np.clip(res.x, lo, hi)
    return init.with_parameters(best_y * scale)


@dataclass(frozen=True)
class SweepRow:
    g_over_gap: float
    f2_rwa: float
    f2_opt: float
    t_f_rwa: float
    t_f_opt: float

    def as_tuple(self):
        return (self.g_over_gap, self.f2_rwa, self.f2_opt, self.t_f_rwa, self.t_f_opt)


def sweep_fidelity(template, g_values, state=EQUATOR, optimize=False, method="exact", seed=0, restarts=5, phase_free=False):
    """RWA-schedule (and optionally optimized) F^2 and t_f for each g.

    ``template`` is a resonant ResonatorSystem whose ``g`` is replaced; g is
    in units of the level spacing. Without ``optimize`` the optimized columns
    repeat the RWA ones.
    """
    g_values = np.asarray(g_values, dtype=float)
    if np.any(g_values <= 0) or np.any(np.diff(g_values) <= 0):
        raise ValueError("g values must be positive and strictly ascending")
    gap = template.levels[1] - template.levels[0]
    rows = []
    for g in g_values:
        sys = replace(template, g=float(g))
        sched = rwa_schedule(sys)
        f_rwa = run_memory(sys, state, sched, method, phase_free).fidelity_sq
        if optimize:
            opt = optimize_schedule(sys, [state], sched, method=method, seed=seed, restarts=restarts, phase_free=phase_free)
            f_opt = run_memory(sys, state, opt, method, phase_free).fidelity_sq
        else:
            opt, f_opt = sched, f_rwa
        rows.append(SweepRow(float(g / gap), f_rwa, f_opt, sched.total_time, opt.total_time))
    return rows


def format_number(x):
    """12 significant digits, locale-independent."""
    return format(float(x), ".12g")


def write_golden(rows, path=None):
    """Write sweep rows as golden CSV; returns the text."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(GOLDEN_HEADER)
    for row in rows:
        writer.writerow([format_number(v) for v in row.as_tuple()])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def read_golden(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != GOLDEN_HEADER:
            raise ValueError(f"unexpected golden header {header}")
        return [SweepRow(*(float(v) for v in rec)) for rec in reader if rec]
