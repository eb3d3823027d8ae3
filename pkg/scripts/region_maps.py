"""Region-map sweeps for several alpha values (data behind the shaded-region figure).

    python scripts/region_maps.py --grid 200 --out figures/
"""

import argparse
from pathlib import Path

from churnflow.cli import main as cli_main

ALPHAS = {"1_4": "1/4", "1_6": "1/6", "1_3": "1/3"}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=200)
    ap.add_argument("--out", default="figures")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for tag, alpha in ALPHAS.items():
        path = out / f"sweep_alpha_{tag}.csv"
        cli_main(["sweep", "--alpha", alpha, "--grid", str(args.grid), "--out", str(path)])
        with open(path, encoding="utf-8") as fh:
            n_deceptive = sum(line.rstrip().endswith(",true") for line in fh)
        print(f"alpha={alpha}: {n_deceptive} deceptive grid points -> {path}")


if __name__ == "__main__":
    raise SystemExit(main())
