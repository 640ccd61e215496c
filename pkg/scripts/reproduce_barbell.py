"""Two-vertex graph, k = 2..8, all four encodings, depths 1..3.

Prints exact and 8192-shot ratios per depth and writes ``barbell.json``.
"""
import argparse
import json
import time

from kcut_qaoa.graph import barbell
from kcut_qaoa.hamiltonian import Encoding, make_scheme
from kcut_qaoa.qaoa import run_qaoa


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="barbell.json")
    args = ap.parse_args()

    g = barbell()
    report = {}
    print(f"{'k':>2} {'scheme':<15} " + " ".join(f"a{p}(exact/shots)" for p in range(1, args.p + 1)))
    for k in range(2, 9):
        for kind in Encoding:
            t0 = time.perf_counter()
            run = run_qaoa(g, make_scheme(kind, k, g), args.p, seed=args.seed)
            cells = " ".join(f"{d.ratio:.3f}/{d.ratio_shots:.3f}   " for d in run.depths)
            print(f"{k:>2} {kind.value:<15} {cells} {time.perf_counter() - t0:5.1f}s", flush=True)
            report[f"{kind.value}/k{k}"] = run.to_dict()
    with open(args.out, "w") as fh:
        json.dump(report, fh, indent=1)


if __name__ == "__main__":
    main()
