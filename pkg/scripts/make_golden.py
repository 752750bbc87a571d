"""Regenerate the golden memory-fidelity table used by the acceptance suite.

Exact evolution, ten phonons, equator state, phase-compensated fidelity,
optimized schedules with seed 0, 30 couplings over [0.01, 0.30].
"""

import argparse
import pathlib
import time

import numpy as np

from jjarch.memory import EQUATOR, sweep_fidelity, write_golden
from jjarch.resonator import ResonatorSystem

DEFAULT = pathlib.Path(__file__).resolve().parents[1] / "tests" / "data" / "golden_memory.csv"
G_VALUES = np.linspace(0.01, 0.30, 30)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--output", type=pathlib.Path, default=DEFAULT)
    args = parser.parse_args()
    start = time.perf_counter()
    template = ResonatorSystem.harmonic(G_VALUES[0], n_phonons=10)
    rows = sweep_fidelity(template, G_VALUES, EQUATOR, optimize=True, method="exact", seed=0, phase_free=True)
    args.output.parent.mkdir(parents=True, exist_ok=True)
    write_golden(rows, args.output)
    print(f"wrote {len(rows)} rows to {args.output} in {time.perf_counter() - start:.1f} s")


if __name__ == "__main__":
    main()
