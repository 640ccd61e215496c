"""Command-line entry point: ``kcut-qaoa <command> [options]``.

Exit codes: 0 success, 1 usage or input error, 2 capacity exceeded, 3 circuit verification failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import circuit as circ
from .cut import brute_force, random_baseline, reference_ratio
from .errors import CapacityError, KCutError, ParameterError, VerificationError
from .graph import Graph, barbell, gen_barabasi_albert, gen_erdos_renyi, read_graph, triangle
from .hamiltonian import Encoding, build_phase_diagonal, make_scheme
from .qaoa import DEFAULT_SHOTS, GridConfig, QaoaProblem, QaoaSchedule, grid_search_p1, run_qaoa

SCHEMES = [e.value for e in Encoding]


@dataclass
class ExperimentConfig:
    graph: str
    k: int
    scheme: str = "binary"
    p_max: int = 1
    shots: int = DEFAULT_SHOTS
    seed: int = 0
    n_gamma: int = 20
    n_beta: int = 20
    gamma_max: float | None = None
    beta_max: float = math.pi
    penalty_beta: float | None = None
    out: str | None = None

    def __post_init__(self):
        if self.k < 2:
            raise ParameterError("--k must be >= 2")
        if self.p_max < 1:
            raise ParameterError("--p must be >= 1")
        if self.shots < 1:
            raise ParameterError("--shots must be >= 1")

    def grid(self) -> GridConfig:
        return GridConfig(self.n_gamma, self.n_beta, self.gamma_max, self.beta_max)


def load_graph(spec: str, seed: int) -> Graph:
    """``barbell``, ``triangle``, ``er:n,p[,w]``, ``ba:n,m[,w]`` or a file path.

    A trailing ``,w`` draws uniform [0, 1] weights. Generators use ``seed``.
    """
    if spec == "barbell":
        return barbell()
    if spec == "triangle":
        return triangle()
    for prefix in ("er:", "ba:"):
        if spec.startswith(prefix):
            fields = spec[3:].split(",")
            weighted = fields[-1] == "w"
            if weighted:
                fields = fields[:-1]
            if len(fields) != 2:
                raise ParameterError(f"bad generator spec {spec!r}")
            try:
                if prefix == "er:":
                    return gen_erdos_renyi(int(fields[0]), float(fields[1]), seed, weighted)
                return gen_barabasi_albert(int(fields[0]), int(fields[1]), seed, weighted)
            except ValueError as exc:
                raise ParameterError(f"bad generator spec {spec!r}: {exc}") from None
    return read_graph(spec)


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 20x20, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(sp: argparse.ArgumentParser, scheme=True):
    sp.add_argument("--graph", required=True, help="path | barbell | triangle | er:n,p[,w] | ba:n,m[,w]")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    if scheme:
        sp.add_argument("--scheme", choices=SCHEMES, default="binary")
        sp.add_argument("--penalty-beta", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="kcut-qaoa", description="QAOA for weighted MAX k-CUT")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name in ("solve", "landscape"):
        sp = sub.add_parser(name)
        _common(sp)
        sp.add_argument("--p", type=int, default=1)
        sp.add_argument("--grid", type=_parse_grid, default=(20, 20))
        sp.add_argument("--gamma-max", type=float, default=None)
        sp.add_argument("--beta-max", type=float, default=math.pi)
        sp.add_argument("--out", default=None)
        if name == "solve":
            sp.add_argument("--shots", type=int, default=DEFAULT_SHOTS)

    sp = sub.add_parser("resources")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--k", default="2-8", help="single k or range a-b")
    sp.add_argument("--scheme", action="append", choices=SCHEMES)

    sp = sub.add_parser("brute-force")
    _common(sp, scheme=False)

    sp = sub.add_parser("dump-diagonal")
    _common(sp)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("dump-probs")
    _common(sp)
    sp.add_argument("--gammas", type=float, nargs="+", required=True)
    sp.add_argument("--betas", type=float, nargs="+", required=True)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("circuit")
    _common(sp)
    sp.add_argument("--gamma", type=float, default=0.1)
    sp.add_argument("--raw", action="store_true", help="keep multi-controlled IR gates")
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--out", default=None)
    return ap


def _config(args) -> ExperimentConfig:
    n_gamma, n_beta = args.grid
    return ExperimentConfig(
        graph=args.graph, k=args.k, scheme=args.scheme, p_max=args.p,
        shots=getattr(args, "shots", DEFAULT_SHOTS), seed=args.seed,
        n_gamma=n_gamma, n_beta=n_beta, gamma_max=args.gamma_max, beta_max=args.beta_max,
        penalty_beta=args.penalty_beta, out=args.out)


def _out_dir(path: str | None) -> Path:
    out = Path(path or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _writer(path: str | None):
    return open(path, "w", newline="") if path else sys.stdout


def cmd_solve(args) -> int:
    cfg = _config(args)
    g = load_graph(cfg.graph, cfg.seed)
    scheme = make_scheme(cfg.scheme, cfg.k, g, cfg.penalty_beta)
    run = run_qaoa(g, scheme, cfg.p_max, cfg.grid(), cfg.shots, cfg.seed)
    out = _out_dir(cfg.out)
    config = {k: v for k, v in asdict(cfg).items() if k != "out"}
    report = {"config": config, "graph": {"num_vertices": g.num_vertices,
                                               "edges": [list(e) for e in g.edges]},
              "random_baseline": random_baseline(cfg.k), **run.to_dict()}
    (out / "run.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    with open(out / "params.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "layer", "gamma_initial", "beta_initial", "gamma_optimal", "beta_optimal"])
        for d in run.depths:
            for t in range(d.p):
                w.writerow([d.p, t + 1, d.initial.gammas[t], d.initial.betas[t],
                            d.optimal.gammas[t], d.optimal.betas[t]])
    timing = {"seed": cfg.seed, "seconds_per_depth": [d.seconds for d in run.depths]}
    (out / "timing.json").write_text(json.dumps(timing, indent=2) + "\n")
    print(f"C* = {run.optimum.best_value:g}  random = {random_baseline(cfg.k):.3f}")
    print("p  alpha_exact  alpha_shots  alpha_best")
    for d in run.depths:
        print(f"{d.p:<2d} {d.ratio:11.3f}  {d.ratio_shots:11.3f}  {d.ratio_best_sample:10.3f}")
    return 0


def cmd_landscape(args) -> int:
    cfg = _config(args)
    if cfg.p_max != 1:
        raise ParameterError("landscape export is defined for p = 1 only")
    g = load_graph(cfg.graph, cfg.seed)
    scheme = make_scheme(cfg.scheme, cfg.k, g, cfg.penalty_beta)
    res = grid_search_p1(QaoaProblem(g, scheme), cfg.grid())
    path = None
    if cfg.out:
        path = _out_dir(cfg.out) / "landscape.csv"
    fh = _writer(path)
    try:
        fh.write("# " + json.dumps(asdict(cfg), sort_keys=True) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gamma", "beta", "energy"])
        for row in res.rows():
            w.writerow([repr(x) for x in row])
    finally:
        if path:
            fh.close()
    return 0


def _k_range(text: str) -> list[int]:
    if "-" in text:
        a, b = text.split("-")
        return list(range(int(a), int(b) + 1))
    return [int(text)]


def cmd_resources(args) -> int:
    g = load_graph(args.graph, args.seed)
    schemes = args.scheme or ["binary", "onehot-x", "onehot-xy"]
    print(f"|V|={g.num_vertices} |E|={g.num_edges}")
    print(f"{'scheme':<15} {'k':>2} {'qubits':>7} {'cx_init':>8} {'cx_mixer':>9} {'cx_phase':>9} {'cx_layer':>9}")
    for kind in schemes:
        for k in _k_range(args.k):
            r = circ.count_resources(g, make_scheme(kind, k, g))
            print(f"{kind:<15} {k:>2} {r.qubits_total:>7} {r.cx_init:>8} {r.cx_mixer_per_layer:>9} "
                  f"{r.cx_phase_per_layer:>9} {r.cx_per_layer:>9}")
    return 0


def cmd_brute_force(args) -> int:
    g = load_graph(args.graph, args.seed)
    res = brute_force(g, args.k)
    print(f"best_value {res.best_value:g}")
    print("assignment " + " ".join(map(str, res.best_assignment)))
    try:
        print(f"reference_guarantee {reference_ratio(args.k):.6f}")
    except ParameterError:
        pass
    return 0


def cmd_dump_diagonal(args) -> int:
    g = load_graph(args.graph, args.seed)
    diag = build_phase_diagonal(g, make_scheme(args.scheme, args.k, g, args.penalty_beta))
    fh = _writer(args.out)
    try:
        fh.write("index,value\n")
        for z, v in enumerate(diag.values):
            fh.write(f"{z},{float(v)!r}\n")
    finally:
        if args.out:
            fh.close()
    return 0


def cmd_dump_probs(args) -> int:
    g = load_graph(args.graph, args.seed)
    problem = QaoaProblem(g, make_scheme(args.scheme, args.k, g, args.penalty_beta))
    state = problem.evolve(QaoaSchedule(tuple(args.gammas), tuple(args.betas)))
    probs = state.probabilities()
    fh = _writer(args.out)
    try:
        fh.write("index,probability\n")
        for z in np.flatnonzero(probs > 0):
            fh.write(f"{z},{float(probs[z])!r}\n")
    finally:
        if args.out:
            fh.close()
    return 0


def cmd_circuit(args) -> int:
    g = load_graph(args.graph, args.seed)
    scheme = make_scheme(args.scheme, args.k, g, args.penalty_beta)
    c = circ.build_phase_circuit(g, scheme, args.gamma)
    if not args.raw:
        c = circ.decompose(c)
    if args.verify:
        dev = circ.verify_against_diagonal(c, build_phase_diagonal(g, scheme), args.gamma)
        if dev > 1e-10:
            raise VerificationError(f"deviation {dev:.3e} exceeds 1e-10")
        print(f"# verified: deviation {dev:.3e}", file=sys.stderr)
    fh = _writer(args.out)
    try:
        fh.write(c.to_text())
    finally:
        if args.out:
            fh.close()
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "landscape": cmd_landscape,
    "resources": cmd_resources,
    "brute-force": cmd_brute_force,
    "dump-diagonal": cmd_dump_diagonal,
    "dump-probs": cmd_dump_probs,
    "circuit": cmd_circuit,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        code = COMMANDS[args.command](args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 3
    except BrokenPipeError:
        return 0
    except (KCutError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.command == "solve":
        print(f"# {time.perf_counter() - t0:.2f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
