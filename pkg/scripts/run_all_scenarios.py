"""Run every registered CLI scenario with default parameters and store the tables.

    python scripts/run_all_scenarios.py --out results/ --format csv
"""
import argparse
import pathlib
import time

from qmbench.cli import REGISTRY, resolve, run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results", help="output directory")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in sorted(REGISTRY):
        path = out / f"{name}.{args.format}"
        start = time.perf_counter()
        code = run(resolve(name, {"output": str(path), "format": args.format}))
        print(f"{name:18s} exit={code} {time.perf_counter() - start:6.2f}s -> {path}")


if __name__ == "__main__":
    main()
