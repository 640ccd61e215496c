"""Dense statevector engine.

Angle conventions:

* ``U3(theta, phi, lam) = [[cos(t/2), -e^{i lam} sin(t/2)], [e^{i phi} sin(t/2), e^{i(phi+lam)} cos(t/2)]]``,
  so ``U3(0, phi, 0) = diag(1, e^{i phi})``;
* ``apply_rx(beta)`` is ``exp(-i beta X)`` (full angle in the exponent);
* ``apply_xy_pair(beta)`` is ``exp(-i beta (XX + YY))``;
* ``apply_diagonal_phase(gamma)`` multiplies amplitude ``z`` by ``exp(-i gamma H[z])``.

The raw kernels (``_apply_1q`` and friends) act on arrays of shape
``(2**n,)`` or ``(batch, 2**n)``; the public functions wrap a ``Statevector``.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass

import numba
import numpy as np

from .errors import CapacityError, ParameterError
from .hamiltonian import DEFAULT_QUBIT_BUDGET, DiagonalHamiltonian


@dataclass(eq=False)
class Statevector:
    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ParameterError("amplitude vector length must be 2**n_qubits")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        a = self.amplitudes
        return a.real**2 + a.imag**2

    def copy(self) -> "Statevector":
        return Statevector(self.amplitudes.copy(), self.n_qubits)


@dataclass(frozen=True)
class SampleSet:
    counts: dict[int, int]
    shots: int
    seed: int


def _check_qubits(n: int, *qubits: int) -> None:
    for q in qubits:
        if not 0 <= q < n:
            raise ParameterError(f"qubit {q} out of range for {n} qubits")
    if len(set(qubits)) != len(qubits):
        raise ParameterError(f"qubit operands must be distinct, got {qubits}")


def _tensor_view(amps: np.ndarray, n: int) -> np.ndarray:
    return amps.reshape((-1,) + (2,) * n)


def _index(n: int, fixed: dict[int, int]) -> tuple:
    idx = [slice(None)] * (n + 1)
    for q, bit in fixed.items():
        idx[q + 1] = bit
    return tuple(idx)


def _apply_1q(amps: np.ndarray, n: int, q: int, m: np.ndarray) -> None:
    a = amps.reshape(-1, 1 << q, 2, 1 << (n - q - 1))
    a0 = a[:, :, 0, :].copy()
    a1 = a[:, :, 1, :].copy()
    a[:, :, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
    a[:, :, 1, :] = m[1, 0] * a0 + m[1, 1] * a1


def _apply_cx(amps: np.ndarray, n: int, c: int, t: int) -> None:
    a = _tensor_view(amps, n)
    s10 = _index(n, {c: 1, t: 0})
    s11 = _index(n, {c: 1, t: 1})
    tmp = a[s10].copy()
    a[s10] = a[s11]
    a[s11] = tmp


def _apply_mcx(amps: np.ndarray, n: int, controls, t: int) -> None:
    a = _tensor_view(amps, n)
    fixed = {c: 1 for c in controls}
    s0 = _index(n, {**fixed, t: 0})
    s1 = _index(n, {**fixed, t: 1})
    tmp = a[s0].copy()
    a[s0] = a[s1]
    a[s1] = tmp


def _apply_mcphase(amps: np.ndarray, n: int, controls, t: int, phi: float) -> None:
    a = _tensor_view(amps, n)
    a[_index(n, {**{c: 1 for c in controls}, t: 1})] *= np.exp(1j * phi)


def _apply_xy(amps: np.ndarray, n: int, qa: int, qb: int, beta: float) -> None:
    a = _tensor_view(amps, n)
    s01 = _index(n, {qa: 0, qb: 1})
    s10 = _index(n, {qa: 1, qb: 0})
    c, s = np.cos(2 * beta), np.sin(2 * beta)
    x01 = a[s01].copy()
    x10 = a[s10].copy()
    a[s01] = c * x01 - 1j * s * x10
    a[s10] = -1j * s * x01 + c * x10


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -np.exp(1j * lam) * s],
                     [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]], dtype=complex)


_X = np.array([[0, 1], [1, 0]], dtype=complex)


@numba.njit(cache=True)
def _rx_kernel(psi, n, qubits, c, s):
    ms = -1j * s
    size = psi.size
    for q in qubits:
        stride = 1 << (n - 1 - q)
        for base in range(0, size, 2 * stride):
            for i in range(base, base + stride):
                a0 = psi[i]
                a1 = psi[i + stride]
                psi[i] = c * a0 + ms * a1
                psi[i + stride] = ms * a0 + c * a1


@numba.njit(cache=True)
def _phase_lookup_kernel(psi, level_index, table):
    for i in range(psi.size):
        psi[i] *= table[level_index[i]]


@numba.njit(cache=True)
def _expectation_kernel(psi, values):
    acc = 0.0
    for i in range(psi.size):
        z = psi[i]
        acc += (z.real * z.real + z.imag * z.imag) * values[i]
    return acc


# --- state preparation -------------------------------------------------------

def prepare_basis(n_qubits: int, index: int = 0, budget: int = DEFAULT_QUBIT_BUDGET) -> Statevector:
    if n_qubits > budget:
        raise CapacityError(f"{n_qubits} qubits exceed budget {budget}")
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[index] = 1.0
    return Statevector(amps, n_qubits)


def prepare_plus(n_qubits: int, budget: int = DEFAULT_QUBIT_BUDGET) -> Statevector:
    if n_qubits > budget:
        raise CapacityError(f"{n_qubits} qubits exceed budget {budget}")
    amps = np.full(1 << n_qubits, 2.0 ** (-n_qubits / 2), dtype=complex)
    return Statevector(amps, n_qubits)


def prepare_wk(k: int) -> Statevector:
    """Equal superposition of the ``k`` Hamming-weight-1 states of ``k`` qubits."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    amps = np.zeros(1 << k, dtype=complex)
    amps[[1 << j for j in range(k)]] = 1.0 / np.sqrt(k)
    return Statevector(amps, k)


def tensor(*states: Statevector, budget: int = DEFAULT_QUBIT_BUDGET) -> Statevector:
    """Kronecker product; the first factor occupies the most significant qubits."""
    n = sum(s.n_qubits for s in states)
    if n > budget:
        raise CapacityError(f"{n} qubits exceed budget {budget}")
    amps = np.ones(1, dtype=complex)
    for s in states:
        amps = np.kron(amps, s.amplitudes)
    return Statevector(amps, n)


# --- gates -------------------------------------------------------------------

def apply_u3(state: Statevector, qubit: int, theta: float, phi: float, lam: float) -> None:
    _check_qubits(state.n_qubits, qubit)
    _apply_1q(state.amplitudes, state.n_qubits, qubit, u3_matrix(theta, phi, lam))


def apply_x(state: Statevector, qubit: int) -> None:
    _check_qubits(state.n_qubits, qubit)
    _apply_1q(state.amplitudes, state.n_qubits, qubit, _X)


def apply_cx(state: Statevector, control: int, target: int) -> None:
    _check_qubits(state.n_qubits, control, target)
    _apply_cx(state.amplitudes, state.n_qubits, control, target)


def apply_mcx(state: Statevector, controls, target: int) -> None:
    _check_qubits(state.n_qubits, *controls, target)
    _apply_mcx(state.amplitudes, state.n_qubits, tuple(controls), target)


def apply_controlled_phase(state: Statevector, controls, target: int, phi: float) -> None:
    """Multiply by ``e^{i phi}`` where every control and the target read 1."""
    _check_qubits(state.n_qubits, *controls, target)
    _apply_mcphase(state.amplitudes, state.n_qubits, tuple(controls), target, phi)


def apply_rx(state: Statevector, qubit: int, beta: float) -> None:
    _check_qubits(state.n_qubits, qubit)
    _rx_kernel(state.amplitudes, state.n_qubits, np.array([qubit], dtype=np.int64),
               np.cos(beta), np.sin(beta))


def apply_rx_all(state: Statevector, beta: float, qubits=None) -> None:
    """``exp(-i beta X)`` on each listed qubit (default: all)."""
    n = state.n_qubits
    qs = np.arange(n, dtype=np.int64) if qubits is None else np.asarray(qubits, dtype=np.int64)
    _check_qubits(n, *qs.tolist())
    _rx_kernel(state.amplitudes, n, qs, np.cos(beta), np.sin(beta))


def apply_xy_pair(state: Statevector, qubit_a: int, qubit_b: int, beta: float) -> None:
    _check_qubits(state.n_qubits, qubit_a, qubit_b)
    _apply_xy(state.amplitudes, state.n_qubits, qubit_a, qubit_b, beta)


# --- diagonal operators ------------------------------------------------------

_MAX_LEVELS = 1 << 16
_level_cache: "weakref.WeakKeyDictionary[DiagonalHamiltonian, tuple]" = weakref.WeakKeyDictionary()


def _levels(diag: DiagonalHamiltonian):
    """``(levels, index)`` when the diagonal has few distinct values, else ``None``."""
    try:
        return _level_cache[diag]
    except KeyError:
        pass
    levels, index = np.unique(diag.values, return_inverse=True)
    entry = (levels, index.astype(np.int64)) if len(levels) <= _MAX_LEVELS else None
    _level_cache[diag] = entry
    return entry


def _check_sizes(state: Statevector, diag: DiagonalHamiltonian) -> None:
    if diag.n_qubits != state.n_qubits:
        raise ParameterError(f"diagonal acts on {diag.n_qubits} qubits, state has {state.n_qubits}")


def apply_diagonal_phase(state: Statevector, diag: DiagonalHamiltonian, gamma: float) -> None:
    _check_sizes(state, diag)
    lv = _levels(diag)
    if lv is None:
        state.amplitudes *= np.exp(-1j * gamma * diag.values)
    else:
        levels, index = lv
        _phase_lookup_kernel(state.amplitudes, index, np.exp(-1j * gamma * levels))


def expectation(state: Statevector, diag: DiagonalHamiltonian) -> float:
    _check_sizes(state, diag)
    return float(_expectation_kernel(state.amplitudes, np.ascontiguousarray(diag.values, dtype=float)))


def expectation_of(state: Statevector, values: np.ndarray) -> float:
    if values.shape != state.amplitudes.shape:
        raise ParameterError("value vector does not match the state size")
    return float(_expectation_kernel(state.amplitudes, np.ascontiguousarray(values, dtype=float)))


def sample(state: Statevector, shots: int, seed: int) -> SampleSet:
    if shots < 1:
        raise ParameterError("shots must be >= 1")
    p = state.probabilities()
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, p)
    nz = np.flatnonzero(counts)
    return SampleSet({int(i): int(counts[i]) for i in nz}, shots, seed)
