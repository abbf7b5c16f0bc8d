"""Diffusion of 12 units from point 1 of the 12-point Moebius strip.

Usage: python scripts/run_moebius.py [OUTDIR]
"""

import sys

from digispace.experiments import run_experiment

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "results/moebius"
    rep = run_experiment("moebius", out)
    print(f"max conservation drift  {rep.max_conservation_drift:.2e}")
    print(f"stable                  {rep.stable}")
    print(f"spectral vs iteration   {rep.spectral_max_deviation:.2e}")
    print(f"|f - 1| at t=10^4       {rep.extra['extended_stationary_distance']:.2e}")
    print(f"profile checks          {rep.extra['shape']}")
    print(f"outputs in {out}")
