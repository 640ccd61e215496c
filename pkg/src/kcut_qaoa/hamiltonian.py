"""Diagonal problem Hamiltonians for the binary and one-hot encodings.

Bit-order conventions used everywhere in the package:

* qubit ``q`` of an ``n``-qubit register is bit ``n - 1 - q`` of the basis
  index, so qubit 0 is the most significant bit;
* binary encoding: vertex ``i`` owns qubits ``i*L ... i*L + L - 1`` and the
  first of them is the most significant bit of its label ``l_i``; labels
  ``k-1 ... 2**L - 1`` are merged into color ``k-1``;
* one-hot encoding: vertex ``v`` owns qubits ``v*k ... v*k + k - 1`` and a
  single 1 at position ``a`` of the group (counted from the group's most
  significant qubit) means color ``a``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ParameterError
from .graph import Graph, total_weight

DEFAULT_QUBIT_BUDGET = 26


class Encoding(enum.Enum):
    BINARY = "binary"
    ONEHOT_X = "onehot-x"
    ONEHOT_PENALTY_X = "onehot-penalty"
    ONEHOT_XY = "onehot-xy"

    @property
    def is_onehot(self) -> bool:
        return self is not Encoding.BINARY


def qubits_per_vertex_binary(k: int) -> int:
    return max(1, math.ceil(math.log2(k)))


@dataclass(frozen=True)
class EncodingScheme:
    kind: Encoding
    k: int
    penalty_beta: float | None = None

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", Encoding(self.kind))
        if self.k < 2:
            raise ParameterError("k must be >= 2")
        if (self.penalty_beta is not None) != (self.kind is Encoding.ONEHOT_PENALTY_X):
            raise ParameterError("penalty_beta is required for, and only for, the penalty scheme")

    @property
    def L(self) -> int:
        return qubits_per_vertex_binary(self.k) if self.kind is Encoding.BINARY else self.k

    def n_qubits(self, g: Graph) -> int:
        return self.L * g.num_vertices

    def check_penalty(self, g: Graph) -> None:
        b = self.penalty_beta
        if b is None:
            return
        if not (b >= g.num_vertices / self.k and b > self.k * g.num_edges):
            raise ParameterError(
                f"penalty weight {b} violates beta >= |V|/k = {g.num_vertices / self.k} "
                f"and beta > k|E| = {self.k * g.num_edges}")


def default_penalty_beta(g: Graph, k: int) -> float:
    """Smallest integer-offset weight satisfying both penalty bounds."""
    return float(max(g.num_vertices / k, k * g.num_edges) + 1)


def make_scheme(kind, k: int, g: Graph | None = None, penalty_beta: float | None = None) -> EncodingScheme:
    kind = Encoding(kind)
    if kind is Encoding.ONEHOT_PENALTY_X and penalty_beta is None:
        if g is None:
            raise ParameterError("graph needed to choose a default penalty weight")
        penalty_beta = default_penalty_beta(g, k)
    if kind is not Encoding.ONEHOT_PENALTY_X:
        penalty_beta = None
    return EncodingScheme(kind, k, penalty_beta)


@dataclass(frozen=True, eq=False)
class DiagonalHamiltonian:
    values: np.ndarray
    n_qubits: int
    scheme: EncodingScheme | None = None
    graph: Graph | None = None

    def __post_init__(self):
        if self.values.shape != (1 << self.n_qubits,):
            raise ParameterError(f"diagonal has shape {self.values.shape}, expected ({1 << self.n_qubits},)")

    def __add__(self, other: "DiagonalHamiltonian") -> "DiagonalHamiltonian":
        if other.n_qubits != self.n_qubits:
            raise ParameterError("qubit count mismatch")
        return DiagonalHamiltonian(self.values + other.values, self.n_qubits, self.scheme, self.graph)

    def scaled(self, factor: float) -> "DiagonalHamiltonian":
        return DiagonalHamiltonian(factor * self.values, self.n_qubits, self.scheme, self.graph)


def _check_budget(n: int, budget: int) -> None:
    if n > budget:
        raise CapacityError(f"{n} qubits exceed the simulator budget of {budget}")


def basis_indices(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def group_values(z, n: int, group: int, width: int):
    """Integer held by qubits ``group*width ... group*width + width - 1`` of ``z``."""
    shift = n - (group + 1) * width
    return (z >> shift) & ((1 << width) - 1)


def build_D(k: int) -> np.ndarray:
    """``2**L x 2**L`` matrix of +-1: -1 exactly where two labels are distinct colors."""
    if k < 2:
        raise ParameterError("k must be >= 2")
    size = 1 << qubits_per_vertex_binary(k)
    l0 = np.arange(size)[:, None]
    l1 = np.arange(size)[None, :]
    cut = (l0 != l1) & ~((l0 >= k - 1) & (l1 >= k - 1))
    return np.where(cut, -1.0, 1.0)


def build_binary_diagonal(g: Graph, k: int, budget: int = DEFAULT_QUBIT_BUDGET) -> DiagonalHamiltonian:
    L = qubits_per_vertex_binary(k)
    n = L * g.num_vertices
    _check_budget(n, budget)
    D = build_D(k)
    z = basis_indices(n)
    values = np.zeros(1 << n)
    labels = {}
    for u, v, w in g.edges:
        for x in (u, v):
            if x not in labels:
                labels[x] = group_values(z, n, x, L)
        values += w * D[labels[u], labels[v]]
    return DiagonalHamiltonian(values, n, EncodingScheme(Encoding.BINARY, k), g)


def decode_binary(z: int, num_vertices: int, k: int) -> tuple[int, ...]:
    L = qubits_per_vertex_binary(k)
    n = L * num_vertices
    if not 0 <= z < (1 << n):
        raise ParameterError(f"basis index {z} out of range for {n} qubits")
    return tuple(min(int(group_values(z, n, i, L)), k - 1) for i in range(num_vertices))


def _zeta(z: np.ndarray, n: int, qubit: int) -> np.ndarray:
    """Pauli-Z eigenvalue (+1 for bit 0, -1 for bit 1) of ``qubit`` on every index."""
    return 1 - 2 * ((z >> (n - 1 - qubit)) & 1)


def build_onehot_diagonal(g: Graph, k: int, budget: int = DEFAULT_QUBIT_BUDGET) -> DiagonalHamiltonian:
    n = k * g.num_vertices
    _check_budget(n, budget)
    z = basis_indices(n)
    values = np.zeros(1 << n)
    for u, v, w in g.edges:
        acc = np.zeros(1 << n, dtype=np.int64)
        for a in range(k):
            acc += _zeta(z, n, u * k + a) * _zeta(z, n, v * k + a)
        values += w * acc
    return DiagonalHamiltonian(values, n, EncodingScheme(Encoding.ONEHOT_X, k), g)


def build_penalty_diagonal(num_vertices: int, k: int, budget: int = DEFAULT_QUBIT_BUDGET) -> DiagonalHamiltonian:
    """Half the sum of same-vertex ZZ products over all color pairs."""
    n = k * num_vertices
    _check_budget(n, budget)
    z = basis_indices(n)
    acc = np.zeros(1 << n, dtype=np.int64)
    for v in range(num_vertices):
        zs = [_zeta(z, n, v * k + a) for a in range(k)]
        for a in range(k):
            for b in range(a + 1, k):
                acc += zs[a] * zs[b]
    return DiagonalHamiltonian(0.5 * acc, n)


def build_phase_diagonal(g: Graph, scheme: EncodingScheme,
                         budget: int = DEFAULT_QUBIT_BUDGET) -> DiagonalHamiltonian:
    """The Hamiltonian whose exponential is the phase separator of ``scheme``."""
    if scheme.kind is Encoding.BINARY:
        return build_binary_diagonal(g, scheme.k, budget)
    h = build_onehot_diagonal(g, scheme.k, budget)
    if scheme.kind is Encoding.ONEHOT_PENALTY_X:
        scheme.check_penalty(g)
        pen = build_penalty_diagonal(g.num_vertices, scheme.k, budget)
        return DiagonalHamiltonian(h.values + scheme.penalty_beta * pen.values, h.n_qubits, scheme, g)
    return DiagonalHamiltonian(h.values, h.n_qubits, scheme, g)


INFEASIBLE = None


def decode_onehot(z: int, num_vertices: int, k: int):
    """Color tuple, or ``INFEASIBLE`` when any group is not Hamming weight 1."""
    n = k * num_vertices
    if not 0 <= z < (1 << n):
        raise ParameterError(f"basis index {z} out of range for {n} qubits")
    colors = []
    for v in range(num_vertices):
        grp = int(group_values(z, n, v, k))
        if grp == 0 or grp & (grp - 1):
            return INFEASIBLE
        colors.append(k - grp.bit_length())
    return tuple(colors)


def feasible_fraction(k: int, n: int) -> float:
    """Share of the one-hot Hilbert space spanned by valid assignments."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    return (k / 2**k) ** n


def cost_vector(g: Graph, scheme: EncodingScheme, budget: int = DEFAULT_QUBIT_BUDGET) -> np.ndarray:
    """Classical cut value ``c(z)`` of every basis state; 0 for infeasible one-hot states."""
    k = scheme.k
    n = scheme.n_qubits(g)
    _check_budget(n, budget)
    z = basis_indices(n)
    cost = np.zeros(1 << n)
    if scheme.kind is Encoding.BINARY:
        L = scheme.L
        colors = [np.minimum(group_values(z, n, i, L), k - 1) for i in range(g.num_vertices)]
        for u, v, w in g.edges:
            cost += w * (colors[u] != colors[v])
        return cost
    groups = [group_values(z, n, v, k) for v in range(g.num_vertices)]
    feasible = np.ones(1 << n, dtype=bool)
    for grp in groups:
        feasible &= (grp != 0) & ((grp & (grp - 1)) == 0)
    for u, v, w in g.edges:
        cost += w * (groups[u] != groups[v])
    cost[~feasible] = 0.0
    return cost


def binary_energy_to_cut(g: Graph, energy: float) -> float:
    """Each edge contributes -w when cut and +w otherwise."""
    return (total_weight(g) - energy) / 2.0


def onehot_energy_to_cut(g: Graph, k: int, energy: float) -> float:
    """Feasible states only: uncut edges give k*w, cut edges (k-4)*w."""
    return (k * total_weight(g) - energy) / 4.0
