"""Trace beta0(c), beta1(c) for Heaviside and Arrhenius kinetics and write CSVs.

    python scripts/trace_bifurcation.py --out-dir results --jobs 4
"""
import argparse
import pathlib

from rmwave import cli


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--c-max", type=float, default=5.0)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for kin in ("heaviside", "arrhenius"):
        path = out / f"trace_{kin}.csv"
        code = cli.main([
            "trace", "--kinetics", kin, "--c-max", str(args.c_max),
            "--jobs", str(args.jobs), "--out", str(path),
        ])
        print(f"{kin}: exit {code} -> {path}")


if __name__ == "__main__":
    main()
