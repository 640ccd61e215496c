"""Weighted undirected graphs, seeded random generators and edge-list I/O.

Edge-list text format::

    # comment
    p <num_vertices> <num_edges>
    e <u> <v> <w>
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import GraphParseError, ParameterError

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class Graph:
    """Immutable weighted undirected graph with canonical edges ``u < v``."""

    num_vertices: int
    edges: tuple[Edge, ...] = field(default=())

    def __post_init__(self):
        if self.num_vertices < 1:
            raise ParameterError("graph needs at least one vertex")
        canon = []
        seen = set()
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise ParameterError(f"self-loop on vertex {u}")
            if u > v:
                u, v = v, u
            if u < 0 or v >= self.num_vertices:
                raise ParameterError(f"edge ({u}, {v}) out of range for {self.num_vertices} vertices")
            if (u, v) in seen:
                raise ParameterError(f"duplicate edge ({u}, {v})")
            if not math.isfinite(w):
                raise ParameterError(f"non-finite weight on edge ({u}, {v})")
            seen.add((u, v))
            canon.append((u, v, w))
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(us, vs, ws)`` as numpy arrays, for vectorised cost evaluation."""
        if not self.edges:
            return (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0))
        us, vs, ws = zip(*self.edges)
        return np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64), np.array(ws, dtype=float)

    @property
    def is_weighted(self) -> bool:
        return any(w != 1.0 for _, _, w in self.edges)


def total_weight(g: Graph) -> float:
    return float(sum(w for _, _, w in g.edges))


def barbell(weight: float = 1.0) -> Graph:
    """Two vertices joined by a single edge."""
    return Graph(2, ((0, 1, weight),))


def triangle() -> Graph:
    return Graph(3, ((0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)))


def _weights(rng: np.random.Generator, count: int, weighted: bool, weight_range) -> list[float]:
    if not weighted:
        return [1.0] * count
    lo, hi = weight_range
    if not hi >= lo:
        raise ParameterError(f"bad weight range {weight_range}")
    return [float(x) for x in rng.uniform(lo, hi, size=count)]


def gen_erdos_renyi(n: int, p: float, seed: int, weighted: bool = False,
                    weight_range: tuple[float, float] = (0.0, 1.0)) -> Graph:
    """G(n, p): every unordered pair is kept independently with probability ``p``.

    Pairs are visited in lexicographic order and each consumes exactly one
    uniform draw, so the edge set is a pure function of ``(n, p, seed)``.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"edge probability {p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = rng.random(len(pairs)) < p
    chosen = [pr for pr, k in zip(pairs, keep) if k]
    ws = _weights(rng, len(chosen), weighted, weight_range)
    return Graph(n, tuple((u, v, w) for (u, v), w in zip(chosen, ws)))


def gen_barabasi_albert(n: int, m: int, seed: int, weighted: bool = False,
                        weight_range: tuple[float, float] = (0.0, 1.0)) -> Graph:
    """Preferential attachment starting from ``m`` isolated vertices.

    Each new vertex ``v = m, ..., n-1`` links to ``m`` distinct existing
    vertices drawn without replacement with probability proportional to
    ``degree + 1``. The result has exactly ``m * (n - m)`` edges.
    """
    if not 1 <= m < n:
        raise ParameterError(f"need 1 <= m < n, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    degree = np.zeros(n)
    pairs = []
    for v in range(m, n):
        weight = degree[:v] + 1.0
        targets = rng.choice(v, size=m, replace=False, p=weight / weight.sum())
        for t in sorted(int(t) for t in targets):
            pairs.append((t, v))
            degree[t] += 1
            degree[v] += 1
    ws = _weights(rng, len(pairs), weighted, weight_range)
    return Graph(n, tuple((u, v, w) for (u, v), w in zip(pairs, ws)))


def write_graph(g: Graph, path, comments: tuple[str, ...] = ()) -> None:
    lines = [f"# {c}" for c in comments]
    lines.append(f"p {g.num_vertices} {g.num_edges}")
    lines.extend(f"e {u} {v} {w!r}" for u, v, w in g.edges)
    Path(path).write_text("\n".join(lines) + "\n")


def parse_graph(text: str) -> Graph:
    n = None
    declared_edges = None
    edges: list[Edge] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None:
                raise GraphParseError(lineno, "duplicate header")
            if len(tok) != 3:
                raise GraphParseError(lineno, "header must be 'p <|V|> <|E|>'")
            try:
                n, declared_edges = int(tok[1]), int(tok[2])
            except ValueError:
                raise GraphParseError(lineno, "non-integer header field") from None
            if n < 1 or declared_edges < 0:
                raise GraphParseError(lineno, "header counts out of range")
        elif tok[0] == "e":
            if n is None:
                raise GraphParseError(lineno, "edge before header")
            if len(tok) != 4:
                raise GraphParseError(lineno, "edge must be 'e <u> <v> <w>'")
            try:
                u, v, w = int(tok[1]), int(tok[2]), float(tok[3])
            except ValueError:
                raise GraphParseError(lineno, "malformed edge fields") from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphParseError(lineno, f"vertex index out of range [0, {n})")
            if u == v:
                raise GraphParseError(lineno, f"self-loop on vertex {u}")
            if not math.isfinite(w):
                raise GraphParseError(lineno, "non-finite weight")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphParseError(lineno, f"duplicate edge {key}, first on line {seen[key]}")
            seen[key] = lineno
            edges.append((key[0], key[1], w))
        else:
            raise GraphParseError(lineno, f"unknown record type {tok[0]!r}")
    if n is None:
        raise GraphParseError(0, "missing 'p' header")
    if declared_edges != len(edges):
        raise GraphParseError(0, f"header declares {declared_edges} edges, found {len(edges)}")
    return Graph(n, tuple(edges))


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())
