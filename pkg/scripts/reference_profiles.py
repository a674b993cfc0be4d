"""Profiles for the seven reference (beta, c) pairs, one CSV each, plus a summary table."""
import argparse
import pathlib

import numpy as np

from rmwave import cli, transition
from rmwave.model import FlowParams, ModelParams

CASES = [
    (0.8, 2.5),
    (1.7675, 2.5),
    (0.582, 2.5),
    (0.4, 2.5),
    (0.4, 2.0),
    (0.615, 2.0),
    (3.0, 2.5),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--tol-class", type=float, default=2e-2)
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = ModelParams()
    print(f"{'beta':>8} {'c':>5}  {'type':<16} {'T(-ell)':>10} {'max T':>10}")
    for beta, c in CASES:
        flow = FlowParams(beta, c)
        kind = transition.classify(params, flow, args.tol_class)
        if not kind.is_solution:
            print(f"{beta:8.4f} {c:5.2f}  {kind.variant!s:<16}")
            continue
        w = transition.profile(params, flow, -6.0, 2.0, 401, args.tol_class)
        t_ell = w.t_val[np.searchsorted(w.xi, -w.ell)]
        print(f"{beta:8.4f} {c:5.2f}  {w.variant!s:<16} {t_ell:10.6f} {w.t_val.max():10.6f}")
        with open(out / f"profile_b{beta}_c{c}.csv", "w", newline="") as fh:
            cli.write_csv(fh, ["xi", "T", "Z", "region"], list(w.rows()), [("ell", w.ell)])


if __name__ == "__main__":
    main()
