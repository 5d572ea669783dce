"""Best-fit reproduction of the F(x)=0.8 capacity table for both power splits.

    python scripts/table1_fit.py --trials 10000
"""

import argparse

from corrmimo import montecarlo as mc
from corrmimo.config import ScenarioConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=707)
    args = ap.parse_args()
    for split in ("per-stream-full", "per-stream-total"):
        cfg = ScenarioConfig(m=1.0, rho_rx=0.2, trials=args.trials, seed=args.seed, power_split=split)
        res = mc.table1_search(cfg)
        print(f"{split}: best-fit SNR {res.extra['best_snr_db']:g} dB")
        for r in res.extra["best_rows"]:
            print(f"  {r.row_id} {r.nr}x{r.nt} {r.receiver:>4}: {r.quantile:7.3f} (target {r.target:6.3f},"
                  f" rel err {r.relative_error:+.2f})")
        ratios = mc.quantile_ratios(res.extra["best_rows"])
        print("  8x8/4x4 ratios: " + ", ".join(f"{k} {v:.3f}" for k, v in ratios.items()))


if __name__ == "__main__":
    main()
