"""Diffusion of 11 units from point 1 of the searched 11-point projective plane.

Usage: python scripts/run_projective.py [OUTDIR]
"""

import sys

from digispace.experiments import run_experiment

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/projective"
    rep = run_experiment("projective", out)
    print(f"max conservation drift  {rep.max_conservation_drift:.2e}")
    print(f"stable                  {rep.stable}")
    print(f"spectral vs iteration   {rep.spectral_max_deviation:.2e}")
    print(f"|f - 1| at t=10^4       {rep.extra['extended_stationary_distance']:.2e}")
    print(f"outputs in {out}")
