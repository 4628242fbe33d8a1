#!/usr/bin/env python3
"""Sweep the coupling across its critical value and emit phase-diagram plot data.

Writes out/sweep/sweep.json and out/sweep/plot_phase-diagram.txt whose columns
are: kappa, final order parameter, outcome code (0 escaped, 1 undecided,
2 synchronized).
"""

import sys
from pathlib import Path

from winfree_sphere.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    out = ROOT / "out" / "sweep"
    code = main(["sweep", str(ROOT / "configs" / "sweep_kappa.json"), "--out", str(out)])
    if code == 0:
        code = main(["plotdata", str(out / "sweep.json"), "phase-diagram", "--out", str(out)])
    print(f"sweep summary and plot data in {out} (exit {code})")
    sys.exit(code)
