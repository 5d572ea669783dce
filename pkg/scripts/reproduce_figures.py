"""Write the CSV data behind the capacity-vs-SNR, capacity-vs-correlation and
capacity CDF/PDF plots.

    python scripts/reproduce_figures.py --out results --trials 10000
"""

import argparse
from pathlib import Path

from corrmimo.cli import run_command
from corrmimo.config import ScenarioConfig

SNR_GRID = tuple(float(s) for s in range(0, 31, 2))


def jobs(trials, seed, split):
    base = ScenarioConfig(trials=trials, seed=seed, power_split=split, kind="nakagami-kronecker")
    # capacity vs SNR, uncorrelated, m=3, growing arrays
    for n in (2, 4, 8):
        yield f"snr_m3_{n}x{n}", "sweep-snr", base.replace(nt=n, nr=n, m=3.0, snr_db_grid=SNR_GRID)
    # capacity vs correlation coefficient, 4x4 Rayleigh
    yield "rho_4x4_m1", "sweep-rho", base.replace(
        nt=4, nr=4, m=1.0, kind="gaussian-kronecker", snr_db_grid=(10.0,),
        rho_grid=(0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95))
    # capacity vs SNR for several fading figures on a correlated 2x2 link
    for m in (1.0, 2.0, 3.0):
        yield f"snr_corr_2x2_m{m:g}", "sweep-snr", base.replace(
            nt=2, nr=2, m=m, rho_tx=0.5, rho_rx=0.5, snr_db_grid=SNR_GRID)
    # capacity distributions
    yield "cdf_2x2_corr", "cdf", base.replace(nt=2, nr=2, m=2.0, rho_tx=0.5, rho_rx=0.5, snr_db_grid=(10.0,))
    for n in (4, 8):
        yield f"cdf_{n}x{n}_rx02", "cdf", base.replace(nt=n, nr=n, m=1.0, rho_rx=0.2, snr_db_grid=(10.0,))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--power-split", default="per-stream-full")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    for name, command, cfg in jobs(args.trials, args.seed, args.power_split):
        man = run_command(command, cfg, args.out / name, {"workers": args.workers})
        print(f"{name:>22}: {', '.join(man['outputs'])} ({man['duration_s']:.1f}s)")


if __name__ == "__main__":
    main()
