"""QAOA for MAX k-CUT: layered evolution, p=1 grid search, interpolation and refinement."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import sim
from .circuit import xy_pairs
from .cut import CutResult, brute_force
from .errors import ParameterError
from .graph import Graph
from .hamiltonian import (
    DEFAULT_QUBIT_BUDGET,
    Encoding,
    EncodingScheme,
    build_phase_diagonal,
    cost_vector,
)
from .optim import NMResult, nelder_mead

DEFAULT_SHOTS = 8192


@dataclass(frozen=True)
class QaoaSchedule:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        g = tuple(float(x) for x in self.gammas)
        b = tuple(float(x) for x in self.betas)
        if len(g) != len(b):
            raise ParameterError("gammas and betas must have equal length")
        if not all(math.isfinite(x) for x in g + b):
            raise ParameterError("schedule entries must be finite")
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "betas", b)

    @property
    def depth(self) -> int:
        return len(self.gammas)

    @classmethod
    def from_vector(cls, x) -> "QaoaSchedule":
        x = np.asarray(x, dtype=float)
        p = x.size // 2
        return cls(tuple(x[:p]), tuple(x[p:]))

    def as_vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)


@dataclass
class GridConfig:
    n_gamma: int = 20
    n_beta: int = 20
    gamma_max: float | None = None
    beta_max: float = math.pi

    def resolved_gamma_max(self, g: Graph) -> float:
        if self.gamma_max is not None:
            return self.gamma_max
        if not g.is_weighted or not g.edges:
            return 2 * math.pi
        mean_abs = float(np.mean(np.abs(g.edge_arrays[2])))
        return 2 * math.pi / mean_abs if mean_abs > 0 else 2 * math.pi


class QaoaProblem:
    """Everything about one (graph, encoding) pair that does not depend on the angles."""

    def __init__(self, g: Graph, scheme: EncodingScheme, budget: int = DEFAULT_QUBIT_BUDGET):
        self.graph = g
        self.scheme = scheme
        self.n_qubits = scheme.n_qubits(g)
        self.diag = build_phase_diagonal(g, scheme, budget)
        self.cost = cost_vector(g, scheme, budget)
        self._initial = initial_state(g, scheme, budget).amplitudes
        self._optimum: CutResult | None = None

    @property
    def optimum(self) -> CutResult:
        if self._optimum is None:
            self._optimum = brute_force(self.graph, self.scheme.k)
        return self._optimum

    def initial(self) -> sim.Statevector:
        return sim.Statevector(self._initial.copy(), self.n_qubits)

    def apply_mixer(self, state: sim.Statevector, beta: float) -> None:
        if self.scheme.kind is Encoding.ONEHOT_XY:
            k = self.scheme.k
            for v in range(self.graph.num_vertices):
                for a, b in xy_pairs(k):
                    sim._apply_xy(state.amplitudes, state.n_qubits, v * k + a, v * k + b, beta)
        else:
            sim.apply_rx_all(state, beta)

    def evolve(self, schedule: QaoaSchedule) -> sim.Statevector:
        state = self.initial()
        for gamma, beta in zip(schedule.gammas, schedule.betas):
            sim.apply_diagonal_phase(state, self.diag, gamma)
            self.apply_mixer(state, beta)
        return state

    def energy(self, schedule: QaoaSchedule) -> float:
        return sim.expectation(self.evolve(schedule), self.diag)

    def expected_cost(self, state: sim.Statevector) -> float:
        return sim.expectation_of(state, self.cost)

    def ratio(self, value: float) -> float:
        return approximation_ratio(value, self.optimum)


def initial_state(g: Graph, scheme: EncodingScheme, budget: int = DEFAULT_QUBIT_BUDGET) -> sim.Statevector:
    """Uniform superposition, or ``|W_k>`` on every vertex for the XY mixer."""
    n = scheme.n_qubits(g)
    if scheme.kind is Encoding.ONEHOT_XY:
        if n > budget:
            from .errors import CapacityError
            raise CapacityError(f"{n} qubits exceed budget {budget}")
        wk = sim.prepare_wk(scheme.k)
        return sim.tensor(*([wk] * g.num_vertices), budget=budget)
    return sim.prepare_plus(n, budget)


def evolve(g: Graph, scheme: EncodingScheme, schedule: QaoaSchedule,
           budget: int = DEFAULT_QUBIT_BUDGET) -> sim.Statevector:
    return QaoaProblem(g, scheme, budget).evolve(schedule)


def expected_cost(state: sim.Statevector, g: Graph, scheme: EncodingScheme) -> float:
    """Mean cut value of the measurement distribution; infeasible one-hot outcomes count as 0."""
    if state.n_qubits != scheme.n_qubits(g):
        raise ParameterError("state does not match the encoding's qubit layout")
    return sim.expectation_of(state, cost_vector(g, scheme))


def approximation_ratio(value: float, best: CutResult | float) -> float:
    c_star = best.best_value if isinstance(best, CutResult) else float(best)
    return 1.0 if c_star == 0 else value / c_star


def interpolate(params) -> np.ndarray:
    """Seed ``p+1`` angles from ``p`` optimal ones by linear interpolation.

    ``out[i] = (i-1)/p * x[i-1] + (p-i+1)/p * x[i]`` for ``i = 1 .. p+1``
    (1-based), with ``x[0] = x[p+1] = 0``.
    """
    x = np.asarray(params, dtype=float).ravel()
    p = x.size
    if p == 0:
        raise ParameterError("cannot interpolate an empty parameter vector")
    padded = np.concatenate([[0.0], x, [0.0]])
    i = np.arange(1, p + 2)
    return (i - 1) / p * padded[i - 1] + (p - i + 1) / p * padded[i]


@dataclass
class GridResult:
    gamma: float
    beta: float
    gammas: np.ndarray
    betas: np.ndarray
    energies: np.ndarray  # shape (n_gamma, n_beta)

    def rows(self):
        for i, gm in enumerate(self.gammas):
            for j, bt in enumerate(self.betas):
                yield float(gm), float(bt), float(self.energies[i, j])


def grid_search_p1(problem: QaoaProblem, grid: GridConfig) -> GridResult:
    """Exact p=1 energy on a Cartesian grid over ``[0, gamma_max] x [0, beta_max]``.

    Returns the lowest node; near-ties (1e-12) go to the smallest ``(gamma, beta)``.
    """
    if grid.n_gamma < 2 or grid.n_beta < 2:
        raise ParameterError("grid needs at least 2 points per axis")
    gammas = np.linspace(0.0, grid.resolved_gamma_max(problem.graph), grid.n_gamma)
    betas = np.linspace(0.0, grid.beta_max, grid.n_beta)
    energies = np.empty((grid.n_gamma, grid.n_beta))
    for i, gm in enumerate(gammas):
        phased = problem.initial()
        sim.apply_diagonal_phase(phased, problem.diag, gm)
        for j, bt in enumerate(betas):
            st = phased.copy()
            problem.apply_mixer(st, bt)
            energies[i, j] = sim.expectation(st, problem.diag)
    flat = energies.ravel()
    idx = int(np.flatnonzero(flat <= flat.min() + 1e-12)[0])
    i, j = divmod(idx, grid.n_beta)
    return GridResult(float(gammas[i]), float(betas[j]), gammas, betas, energies)


@dataclass
class DepthResult:
    p: int
    initial: QaoaSchedule
    optimal: QaoaSchedule
    energy: float
    expected_cost: float
    ratio: float
    ratio_shots: float
    ratio_best_sample: float
    samples: sim.SampleSet
    nfev: int
    seconds: float

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "gammas_initial": list(self.initial.gammas),
            "betas_initial": list(self.initial.betas),
            "gammas": list(self.optimal.gammas),
            "betas": list(self.optimal.betas),
            "energy": self.energy,
            "expected_cost": self.expected_cost,
            "ratio": self.ratio,
            "ratio_shots": self.ratio_shots,
            "ratio_best_sample": self.ratio_best_sample,
            "nfev": self.nfev,
            "shots": self.samples.shots,
            "sample_seed": self.samples.seed,
            "counts": {str(z): c for z, c in sorted(self.samples.counts.items())},
        }


@dataclass
class QaoaRun:
    scheme: EncodingScheme
    optimum: CutResult
    grid: GridResult
    depths: list[DepthResult] = field(default_factory=list)

    @property
    def ratios(self) -> list[float]:
        return [d.ratio for d in self.depths]

    @property
    def ratios_shots(self) -> list[float]:
        return [d.ratio_shots for d in self.depths]

    def to_dict(self) -> dict:
        """JSON-ready report. Wall-clock times are left out so equal inputs give equal bytes."""
        return {
            "scheme": self.scheme.kind.value,
            "k": self.scheme.k,
            "penalty_beta": self.scheme.penalty_beta,
            "optimum": {"value": self.optimum.best_value,
                        "assignment": list(self.optimum.best_assignment)},
            "grid_node": {"gamma": self.grid.gamma, "beta": self.grid.beta},
            "depths": [d.to_dict() for d in self.depths],
        }


def _optimise(problem: QaoaProblem, start: QaoaSchedule, tol: float, max_iter: int) -> NMResult:
    def objective(x):
        return problem.energy(QaoaSchedule.from_vector(x))

    return nelder_mead(objective, start.as_vector(), tol=tol, max_iter=max_iter)


def _depth_result(problem: QaoaProblem, p: int, start: QaoaSchedule, res: NMResult,
                  shots: int, seed: int, t0: float) -> DepthResult:
    sched = QaoaSchedule.from_vector(res.x)
    state = problem.evolve(sched)
    exp_cost = problem.expected_cost(state)
    samples = sim.sample(state, shots, seed)
    zs = np.fromiter(samples.counts.keys(), dtype=np.int64)
    cs = np.fromiter(samples.counts.values(), dtype=float)
    sampled = problem.cost[zs]
    return DepthResult(
        p=p, initial=start, optimal=sched, energy=res.fun, expected_cost=exp_cost,
        ratio=problem.ratio(exp_cost),
        ratio_shots=problem.ratio(float(sampled @ cs) / shots),
        ratio_best_sample=problem.ratio(float(sampled.max())),
        samples=samples, nfev=res.nfev, seconds=time.perf_counter() - t0)


def run_qaoa(g: Graph, scheme: EncodingScheme, p_max: int, grid: GridConfig | None = None,
             shots: int = DEFAULT_SHOTS, seed: int = 0, tol: float = 1e-8, max_iter: int = 2000,
             budget: int = DEFAULT_QUBIT_BUDGET, problem: QaoaProblem | None = None) -> QaoaRun:
    """Grid search + Nelder-Mead at p=1, then interpolate-and-refine up to ``p_max``.

    The sampler for depth ``p`` uses seed ``seed + p``.
    """
    if p_max < 1:
        raise ParameterError("p_max must be >= 1")
    if shots < 1:
        raise ParameterError("shots must be >= 1")
    grid = grid or GridConfig()
    problem = problem or QaoaProblem(g, scheme, budget)
    t0 = time.perf_counter()
    gres = grid_search_p1(problem, grid)
    start = QaoaSchedule((gres.gamma,), (gres.beta,))
    run = QaoaRun(scheme, problem.optimum, gres)
    for p in range(1, p_max + 1):
        if p > 1:
            prev = run.depths[-1].optimal
            start = QaoaSchedule(tuple(interpolate(prev.gammas)), tuple(interpolate(prev.betas)))
            t0 = time.perf_counter()
        res = _optimise(problem, start, tol, max_iter)
        run.depths.append(_depth_result(problem, p, start, res, shots, seed + p, t0))
    return run
