import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jjarch.errors import BoundsInfeasible, CutoffTooSmall
from jjarch.memory import (
    EQUATOR,
    GOLDEN_HEADER,
    ONE,
    ZERO,
    PulseSchedule,
    Segment,
    SweepRow,
    default_bounds,
    evolve_schedule,
    fidelity_sq,
    min_fidelity,
    optimize_schedule,
    read_golden,
    run_memory,
    rwa_schedule,
    sweep_fidelity,
    three_state_fidelity,
    write_golden,
)
from jjarch.resonator import ResonatorSystem


def _sys(g, n_phonons=10, **kw):
    return ResonatorSystem.harmonic(g, n_phonons=n_phonons, **kw)


# --- schedule types ----------------------------------------------------------


def test_segment_validation():
    with pytest.raises(ValueError):
        Segment(-1.0)
    with pytest.raises(ValueError):
        Segment(1.0, 0.0, "wait")


def test_schedule_parameters_round_trip():
    sched = rwa_schedule(_sys(0.05))
    again = sched.with_parameters(sched.parameters())
    assert again == sched
    assert sched.total_time == pytest.approx(sum(s.duration for s in sched.segments))
    assert [s.role for s in sched.segments] == ["store", "hold", "retrieve"]


def test_total_time_inverse_in_g():
    products = [rwa_schedule(_sys(g)).total_time * g for g in (0.01, 0.05, 0.3)]
    assert np.allclose(products, products[0], rtol=1e-12)


# --- fidelity ----------------------------------------------------------------


def test_fidelity_formula():
    a, b = 0.6, 0.8j
    assert fidelity_sq(a, b, a, b) == pytest.approx(1.0)
    assert fidelity_sq(a, b, a, -b) == pytest.approx((0.36 - 0.64) ** 2)
    assert fidelity_sq(a, b, a, -b, phase_free=True) == pytest.approx(1.0)
    assert 0 <= fidelity_sq(1, 1, 1, 1) <= 1


def test_ground_state_untouched_without_diagonal_dipole():
    sys = ResonatorSystem.two_level(0.1, 0.4, n_phonons=10)
    odd = PulseSchedule((Segment(3.1, 0.0, "store"), Segment(0.7, 2.0), Segment(11.0, -0.3, "retrieve")))
    for sched in (rwa_schedule(sys), odd):
        assert run_memory(sys, ZERO, sched, "rwa").fidelity_sq == pytest.approx(1.0, abs=1e-14)


def test_ground_state_leaks_under_counter_rotating_terms():
    sys = ResonatorSystem.two_level(0.3, 0.4, n_phonons=10)
    f = run_memory(sys, ZERO, method="exact").fidelity_sq
    assert 1 - 1e-2 < f < 1


def test_small_coupling_rwa_schedule_restores_basis_states():
    sys = _sys(0.01)
    assert run_memory(sys, ZERO, method="rwa").fidelity_sq == pytest.approx(1.0, abs=1e-6)
    assert run_memory(sys, ONE, method="rwa").fidelity_sq == pytest.approx(1.0, abs=1e-6)


def test_equator_picks_up_double_swap_sign():
    sys = _sys(0.01)
    literal = run_memory(sys, EQUATOR, method="rwa")
    free = run_memory(sys, EQUATOR, method="rwa", phase_free=True)
    assert free.fidelity_sq == pytest.approx(1.0, abs=1e-6)
    assert literal.fidelity_sq < 1e-3
    # a pi phase from the two swaps plus a small dispersive phase from the hold
    assert literal.c10 / literal.c00 == pytest.approx(-1.0, abs=2e-2)


def test_strong_coupling_fidelity_below_one():
    f = run_memory(_sys(0.3), EQUATOR, method="exact", phase_free=True).fidelity_sq
    assert f < 0.995


def test_phase_compensation_matches_basis_average():
    sys = _sys(0.01)
    res = run_memory(sys, EQUATOR, method="rwa")
    thetas = np.linspace(0, 2 * np.pi, 4001)
    a, b = res.alpha, res.beta
    best = np.max(np.abs(np.conj(a) * res.c00 + np.exp(1j * thetas) * np.conj(b) * res.c10) ** 2)
    free = run_memory(sys, EQUATOR, method="rwa", phase_free=True).fidelity_sq
    assert best == pytest.approx(free, abs=1e-6)
    basis = three_state_fidelity(sys, method="rwa")
    assert free == pytest.approx(0.5 * (basis["zero"] + basis["one"]), abs=1e-6)


@given(phase=st.floats(0, 2 * np.pi), theta=st.floats(0, np.pi / 2), free=st.booleans())
def test_global_phase_invariance(phase, theta, free):
    sys = _sys(0.1)
    state = (np.cos(theta), np.sin(theta))
    rotated = tuple(np.exp(1j * phase) * z for z in state)
    f1 = run_memory(sys, state, method="exact", phase_free=free).fidelity_sq
    f2 = run_memory(sys, rotated, method="exact", phase_free=free).fidelity_sq
    assert abs(f1 - f2) < 1e-14
    assert 0 <= f1 <= 1


def test_three_state_summary():
    out = three_state_fidelity(_sys(0.1), phase_free=True)
    assert out["min"] == min(out["zero"], out["one"], out["equator"])
    assert out["mean"] == pytest.approx(np.mean([out["zero"], out["one"], out["equator"]]))


def test_batched_evolution_matches_single():
    sys = _sys(0.2)
    sched = rwa_schedule(sys)
    psi = np.stack([sys.basis_state(0, 0), sys.basis_state(1, 0)], axis=1)
    batched = evolve_schedule(sys, psi, sched)
    for k in range(2):
        assert np.allclose(batched[:, k], evolve_schedule(sys, psi[:, k], sched), atol=1e-14)
    assert min_fidelity(sys, [ZERO, ONE], sched) == pytest.approx(
        min(run_memory(sys, s, sched).fidelity_sq for s in (ZERO, ONE)), abs=1e-14
    )


def test_dressed_pt_memory_close_to_exact():
    sys = _sys(0.02)
    exact = run_memory(sys, EQUATOR, phase_free=True).fidelity_sq
    pt = run_memory(sys, EQUATOR, method="dressed_pt", phase_free=True).fidelity_sq
    assert pt == pytest.approx(exact, abs=1e-3)


def test_cutoff_check():
    with pytest.raises(CutoffTooSmall):
        run_memory(_sys(0.3, n_phonons=1), ONE)


def test_unknown_method():
    with pytest.raises(ValueError):
        run_memory(_sys(0.1), ONE, method="bogus")


# --- optimizer ----------------------------------------------------------------


def test_optimizer_keeps_small_coupling_schedule():
    sys = _sys(0.01)
    init = rwa_schedule(sys)
    opt = optimize_schedule(sys, [ZERO, ONE, EQUATOR], init, phase_free=True)
    t_tr = sys.transfer_time
    for a, b in zip(init.segments, opt.segments):
        if a.role != "hold":
            assert abs(a.duration - b.duration) < 0.02 * t_tr


def test_optimizer_improves_at_strong_coupling():
    sys = _sys(0.2)
    init = rwa_schedule(sys)
    opt = optimize_schedule(sys, [EQUATOR], init, phase_free=True)
    f_rwa = run_memory(sys, EQUATOR, init, phase_free=True).fidelity_sq
    f_opt = run_memory(sys, EQUATOR, opt, phase_free=True).fidelity_sq
    assert f_opt > f_rwa


def test_optimizer_exits_at_perfect_start():
    sys = ResonatorSystem.harmonic(0.0, bias=0.0, n_phonons=3)
    init = PulseSchedule((Segment(5.0, 0.0, "store"), Segment(1.0, 2.0), Segment(5.0, 0.0, "retrieve")))
    assert run_memory(sys, ZERO, init).fidelity_sq == 1.0
    assert optimize_schedule(sys, [ZERO], init) is init


def test_optimizer_rejects_excluding_bounds():
    sys = _sys(0.1)
    init = rwa_schedule(sys)
    bounds = default_bounds(sys, init)
    bounds[0] = (2 * init.segments[0].duration, 3 * init.segments[0].duration)
    with pytest.raises(BoundsInfeasible):
        optimize_schedule(sys, [EQUATOR], init, bounds=bounds)
    with pytest.raises(ValueError):
        optimize_schedule(sys, [], init)


def test_optimizer_deterministic_and_never_worse():
    sys = _sys(0.15)
    init = rwa_schedule(sys)
    kw = dict(method="exact", seed=3, restarts=2, maxiter=60)
    a = optimize_schedule(sys, [ONE, EQUATOR], init, **kw)
    b = optimize_schedule(sys, [ONE, EQUATOR], init, **kw)
    assert a == b
    assert min_fidelity(sys, [ONE, EQUATOR], a) >= min_fidelity(sys, [ONE, EQUATOR], init)
    bounds = np.array(default_bounds(sys, init))
    x = a.parameters()
    assert np.all(x >= bounds[:, 0] - 1e-12) and np.all(x <= bounds[:, 1] + 1e-12)


# --- sweep and golden data ---------------------------------------------------------


def test_sweep_rows_and_validation(tmp_path):
    rows = sweep_fidelity(_sys(0.1), [0.05, 0.1], phase_free=True)
    assert [r.g_over_gap for r in rows] == [0.05, 0.1]
    assert all(r.f2_opt == r.f2_rwa for r in rows)
    assert rows[0].t_f_rwa == pytest.approx(2 * rows[1].t_f_rwa)
    with pytest.raises(ValueError):
        sweep_fidelity(_sys(0.1), [0.1, 0.05])
    with pytest.raises(ValueError):
        sweep_fidelity(_sys(0.1), [0.0, 0.05])


def test_golden_round_trip(tmp_path):
    rows = [SweepRow(0.01, 0.999999999999, 1.0, 123.456, 120.0), SweepRow(0.3, 0.98, 0.99, 4.1, 4.2)]
    path = tmp_path / "g.csv"
    text = write_golden(rows, path)
    assert text.splitlines()[0] == ",".join(GOLDEN_HEADER)
    assert text.splitlines()[1] == "0.01,0.999999999999,1,123.456,120"
    assert read_golden(path) == rows
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_golden(path)
