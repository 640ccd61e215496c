"""Depth trend on 10-vertex random graphs with the binary encoding.

Defaults run the pinned Erdos-Renyi fixture for k = 2, 3, 4. ``--ba`` switches
to a weighted Barabasi-Albert graph with |E| = 24 (m = 4).
Alongside each ratio row it prints the qubit and CX-per-layer counts.
"""
import argparse
import time
from pathlib import Path

from kcut_qaoa.circuit import count_resources
from kcut_qaoa.cut import random_baseline, reference_ratio
from kcut_qaoa.graph import gen_barabasi_albert, read_graph
from kcut_qaoa.hamiltonian import make_scheme
from kcut_qaoa.qaoa import run_qaoa

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "er10.txt"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--ba", action="store_true")
    args = ap.parse_args()

    g = gen_barabasi_albert(10, 4, args.seed, weighted=True) if args.ba else read_graph(FIXTURE)
    print(f"|V|={g.num_vertices} |E|={g.num_edges}")
    print(f"{'k':>2} {'rand':>5} {'ref':>6} {'#q':>4} {'#CX':>6}  alphas")
    for k in args.k:
        scheme = make_scheme("binary", k)
        res = count_resources(g, scheme)
        t0 = time.perf_counter()
        run = run_qaoa(g, scheme, args.p, seed=args.seed)
        alphas = " ".join(f"{a:.3f}" for a in run.ratios)
        print(f"{k:>2} {random_baseline(k):5.3f} {reference_ratio(k):6.3f} {res.qubits_total:>4} "
              f"{res.cx_per_layer:>5}p  {alphas}   ({time.perf_counter() - t0:.0f} s)", flush=True)


if __name__ == "__main__":
    main()
