"""Memory fidelity of the equator state against coupling strength.

Prints RWA-schedule and optimized F^2 with the total gate time, plus the
three-state (|0>, |1>, equator) minimum for the RWA schedule.
"""

import argparse

import numpy as np

from jjarch.memory import EQUATOR, rwa_schedule, sweep_fidelity, three_state_fidelity
from jjarch.resonator import ResonatorSystem


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--g-min", type=float, default=0.01)
    parser.add_argument("--g-max", type=float, default=0.30)
    parser.add_argument("--points", type=int, default=10)
    parser.add_argument("--phonons", type=int, default=10)
    parser.add_argument("--literal", action="store_true", help="keep the retrieved relative phase in F^2")
    parser.add_argument("--no-optimize", action="store_true")
    args = parser.parse_args()

    g_values = np.linspace(args.g_min, args.g_max, args.points)
    template = ResonatorSystem.harmonic(g_values[0], n_phonons=args.phonons)
    phase_free = not args.literal
    rows = sweep_fidelity(template, g_values, EQUATOR, optimize=not args.no_optimize, phase_free=phase_free)
    print("g_over_gap,F2_rwa,F2_opt,t_f_rwa,t_f_opt,F2_rwa_three_state_min")
    for row in rows:
        sys = ResonatorSystem.harmonic(row.g_over_gap, n_phonons=args.phonons)
        three = three_state_fidelity(sys, rwa_schedule(sys), phase_free=phase_free)
        print(",".join(f"{v:.8g}" for v in (*row.as_tuple(), three["min"])))


if __name__ == "__main__":
    main()
