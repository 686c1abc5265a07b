#!/usr/bin/env python3
"""End-to-end experiment: compute the three critical curves for the built-in
Gaussian potential and render the phase diagram.

Usage: python3 scripts/make_phase_figure.py [outdir]

Writes curves.csv and phase_diagram.png into outdir (default ./out).
"""

import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]


def main():
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "out")
    outdir.mkdir(parents=True, exist_ok=True)
    curves = outdir / "curves.csv"

    cmd = [sys.executable, "-m", "polarfermi.cli", "curves",
           "--t-grid", "0:100:61", "--lambda", "0.4", "--mu_bar", "1.0",
           "--potential", "gaussian", "--depth", "-1", "--width", "1",
           "--kinds", "i,g,o", "--out", str(curves)]
    print("+", " ".join(cmd))
    subprocess.run(cmd, check=True)

    fig = outdir / "phase_diagram.png"
    cmd = [sys.executable, str(ROOT / "frontend" / "phase_diagram.py"),
           str(curves), "--out", str(fig)]
    print("+", " ".join(cmd))
    subprocess.run(cmd, check=True)
    print(f"wrote {curves} and {fig}")


if __name__ == "__main__":
    main()
