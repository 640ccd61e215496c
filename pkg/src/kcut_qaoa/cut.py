"""Classical MAX k-CUT objective, exhaustive solver and reference ratios."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ParameterError
from .graph import Graph

DEFAULT_BUDGET = 10**8

# Published SDP-based guarantees (Goemans-Williamson for k=2, de Klerk et al. above).
# Lookup only: nothing here solves an SDP.
_REFERENCE_RATIOS = {
    2: 0.878567,
    3: 0.836008,
    4: 0.857487,
    5: 0.876610,
    6: 0.891543,
    7: 0.903259,
    8: 0.912664,
    9: 0.920367,
}


@dataclass(frozen=True)
class CutResult:
    best_value: float
    best_assignment: tuple[int, ...]
    evaluated: int


def _check_assignment(g: Graph, k: int, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (g.num_vertices,):
        raise ParameterError(f"assignment length {x.shape} does not match |V|={g.num_vertices}")
    if x.size and (x.min() < 0 or x.max() >= k):
        raise ParameterError(f"colors must lie in [0, {k})")
    return x


def cut_value(g: Graph, k: int, x) -> float:
    """Total weight of edges whose endpoints receive different colors."""
    x = _check_assignment(g, k, x)
    return float(sum(w for u, v, w in g.edges if x[u] != x[v]))


def cut_values_many(g: Graph, colors: np.ndarray) -> np.ndarray:
    """Vectorised cut value for a batch of assignments, shape ``(batch, |V|)``."""
    us, vs, ws = g.edge_arrays
    if not len(ws):
        return np.zeros(colors.shape[0])
    return (colors[:, us] != colors[:, vs]).astype(float) @ ws


def _enumerate(g: Graph, k: int, n_free: int, chunk: int):
    n = g.num_vertices
    total = k**n_free
    powers = k ** np.arange(n_free - 1, -1, -1, dtype=np.int64)
    best_val, best_x = -np.inf, None
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % k
        colors = np.zeros((len(idx), n), dtype=np.int64)
        colors[:, n - n_free:] = digits
        vals = cut_values_many(g, colors)
        i = int(np.argmax(vals))
        # strict '>' keeps the earliest (lexicographically smallest) optimum
        if vals[i] > best_val:
            best_val, best_x = float(vals[i]), tuple(int(c) for c in colors[i])
    return best_val, best_x, total


def brute_force(g: Graph, k: int, budget: int = DEFAULT_BUDGET,
                symmetry: bool = True, chunk: int = 1 << 16) -> CutResult:
    """Exact optimum by enumeration.

    With ``symmetry`` vertex 0 is pinned to color 0. Any optimum can be
    relabelled so that holds, so the optimal value and the lexicographically
    smallest optimal assignment are unchanged.
    """
    if k < 1:
        raise ParameterError("k must be >= 1")
    n = g.num_vertices
    n_free = n - 1 if symmetry else n
    if k**n_free > budget:
        raise CapacityError(f"{k}^{n_free} assignments exceed budget {budget}")
    _, x, count = _enumerate(g, k, n_free, chunk)
    # re-sum in edge order so best_value == cut_value(best_assignment) bit for bit
    return CutResult(cut_value(g, k, x), x, count)


def random_baseline(k: int) -> float:
    """Expected ratio of a uniformly random coloring: ``1 - 1/k``."""
    if k < 2:
        raise ParameterError("k must be >= 2")
    return 1.0 - 1.0 / k


def reference_ratio(k: int) -> float:
    try:
        return _REFERENCE_RATIOS[k]
    except KeyError:
        raise ParameterError(f"no tabulated reference ratio for k={k} (2..9)") from None
