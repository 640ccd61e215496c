"""Gate-level circuits for the QAOA building blocks and their {U3, CX} compilation.

Qubit layout matches :mod:`kcut_qaoa.hamiltonian`; ancillas (when present)
follow the work qubits, so they are the least significant bits.

IR gate kinds:

``u3``       ``(q,)``, params ``(theta, phi, lam)``
``x``        ``(q,)``
``cx``       ``(control, target)``
``mcphase``  ``(*controls, target)``, params ``(phi,)``; phase ``e^{i phi}`` on all-ones
``mcx``      ``(*controls, target)``
``rmcx``     relative-phase multi-controlled X, and ``rmcx_dg`` its inverse. Only
             valid as a compute/uncompute pair around operations that are
             diagonal on the control qubits, where the relative phases cancel.

Compiled circuits hold only ``u3`` and ``cx``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import sim
from .errors import ParameterError, UnsupportedFeatureError, VerificationError
from .graph import Graph
from .hamiltonian import DiagonalHamiltonian, Encoding, EncodingScheme, qubits_per_vertex_binary

PI = math.pi
PRIMITIVE = frozenset({"u3", "cx"})
KINDS = frozenset({"u3", "x", "cx", "mcphase", "mcx", "rmcx", "rmcx_dg"})


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown gate kind {self.kind!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ParameterError(f"repeated operand in {self.kind} {self.qubits}")

    @property
    def controls(self) -> tuple[int, ...]:
        return self.qubits[:-1]

    @property
    def target(self) -> int:
        return self.qubits[-1]


@dataclass
class Circuit:
    n_work_qubits: int
    n_ancillas: int = 0
    gates: list[Gate] = field(default_factory=list)

    @property
    def n_qubits(self) -> int:
        return self.n_work_qubits + self.n_ancillas

    def add(self, kind: str, qubits, params=()) -> None:
        qubits = tuple(int(q) for q in qubits)
        if any(not 0 <= q < self.n_qubits for q in qubits):
            raise ParameterError(f"{kind} operands {qubits} out of range for {self.n_qubits} qubits")
        self.gates.append(Gate(kind, qubits, tuple(float(p) for p in params)))

    def u3(self, q, theta, phi, lam):
        self.add("u3", (q,), (theta, phi, lam))

    def x(self, q):
        self.add("x", (q,))

    def cx(self, c, t):
        self.add("cx", (c, t))

    def mcphase(self, controls, t, phi):
        self.add("mcphase", (*controls, t), (phi,))

    def mcx(self, controls, t):
        self.add("mcx", (*controls, t))

    def extend(self, other: "Circuit") -> None:
        for g in other.gates:
            self.add(g.kind, g.qubits, g.params)

    def count(self, kind: str) -> int:
        return sum(g.kind == kind for g in self.gates)

    @property
    def cx_count(self) -> int:
        return self.count("cx")

    @property
    def is_compiled(self) -> bool:
        return all(g.kind in PRIMITIVE for g in self.gates)

    def to_text(self) -> str:
        """One line per gate: ``u3 theta phi lam q`` or ``cx c t``; IR gates spelled out."""
        lines = [f"# qubits {self.n_work_qubits} ancillas {self.n_ancillas}"]
        for g in self.gates:
            if g.kind == "u3":
                lines.append("u3 {:.17g} {:.17g} {:.17g} {}".format(*g.params, g.qubits[0]))
            else:
                args = " ".join(f"{p:.17g}" for p in g.params)
                lines.append(" ".join(filter(None, [g.kind, args, " ".join(map(str, g.qubits))])))
        return "\n".join(lines) + "\n"


# --- single-qubit shorthands (all exact as U3) --------------------------------

def _h(c: Circuit, q):
    c.u3(q, PI / 2, 0.0, PI)


def _phase(c: Circuit, q, lam):
    c.u3(q, 0.0, 0.0, lam)


def _rx(c: Circuit, q, theta):
    """``exp(-i theta/2 X)``."""
    c.u3(q, theta, -PI / 2, PI / 2)


def _ry(c: Circuit, q, theta):
    c.u3(q, theta, 0.0, 0.0)


def _zz(c: Circuit, a, b, angle):
    """``exp(-i angle Z_a Z_b)`` up to global phase."""
    c.cx(a, b)
    _phase(c, b, 2 * angle)
    c.cx(a, b)


# --- binary encoding phase separator ------------------------------------------

def _subcube_members(pattern) -> frozenset[int]:
    L = len(pattern)
    return frozenset(x for x in range(1 << L)
                     if all(b is None or ((x >> (L - 1 - i)) & 1) == b for i, b in enumerate(pattern)))


@lru_cache(maxsize=None)
def merged_pair_cover(k: int) -> tuple[tuple[tuple, tuple], ...]:
    """Fewest label rectangles ``A x B`` that tile the distinct pairs of merged labels.

    Labels ``k-1 ... 2**L - 1`` all mean color ``k-1``; the base circuit
    marks distinct labels as cut, so every ordered pair of distinct merged
    labels needs a phase correction. ``A`` and ``B`` are subcubes of label
    bits (``None`` = free bit) inside the merged set with ``A`` and ``B``
    disjoint, which keeps diagonal pairs untouched.
    """
    L = qubits_per_vertex_binary(k)
    merged = frozenset(range(k - 1, 1 << L))
    cells = frozenset((c, d) for c in merged for d in merged if c != d)
    if not cells:
        return ()
    cubes = []
    for pat in itertools.product((0, 1, None), repeat=L):
        mem = _subcube_members(pat)
        if mem and mem <= merged:
            cubes.append((pat, mem))
    rects = [(a, b, frozenset(itertools.product(ma, mb)))
             for a, ma in cubes for b, mb in cubes if not ma & mb]
    rects.sort(key=lambda r: -len(r[2]))

    def search(uncovered, depth):
        if not uncovered:
            return []
        if depth == 0:
            return None
        cell = min(uncovered)
        for a, b, cs in rects:
            if cell in cs and cs <= uncovered:
                rest = search(uncovered - cs, depth - 1)
                if rest is not None:
                    return [(a, b)] + rest
        return None

    for depth in range(1, len(cells) + 1):
        found = search(cells, depth)
        if found is not None:
            return tuple(found)
    raise AssertionError("unreachable: singleton rectangles always cover")


def _mark(c: Circuit, qubits, pattern, anc):
    fixed = [q for q, b in zip(qubits, pattern) if b is not None]
    if len(fixed) >= 3:
        c.add("rmcx", (*fixed, anc))
    else:
        c.mcx(fixed, anc)


def _unmark(c: Circuit, qubits, pattern, anc):
    fixed = [q for q, b in zip(qubits, pattern) if b is not None]
    if len(fixed) >= 3:
        c.add("rmcx_dg", (*fixed, anc))
    else:
        c.mcx(fixed, anc)


def _flip_zeros(c: Circuit, qubits, pattern):
    for q, b in zip(qubits, pattern):
        if b == 0:
            c.x(q)


def _pair_block(c: Circuit, gi, gj, pat_i, pat_j, a0, a1, phi):
    """Phase ``e^{i phi}`` when vertex i's label is in ``pat_i`` and j's in ``pat_j``.

    X layers turn both patterns into all-ones; multi-controlled NOTs record the
    matches on the two ancillas; a phase on a fixed bit of j controlled by both
    ancillas applies the correction; everything is then uncomputed.
    """
    fixed_j = [q for q, b in zip(gj, pat_j) if b is not None]
    if not fixed_j:
        raise ParameterError("pattern for vertex j must fix at least one bit")
    _flip_zeros(c, gi, pat_i)
    _flip_zeros(c, gj, pat_j)
    _mark(c, gi, pat_i, a0)
    _mark(c, gj, pat_j, a1)
    c.mcphase((a0, a1), fixed_j[-1], phi)
    _unmark(c, gj, pat_j, a1)
    _unmark(c, gi, pat_i, a0)
    _flip_zeros(c, gj, pat_j)
    _flip_zeros(c, gi, pat_i)


def _equal_labels_block(c: Circuit, gi, gj, phi):
    """Phase ``e^{i phi}`` when the two label registers hold equal values."""
    for qi, qj in zip(gi, gj):
        c.cx(qi, qj)
    for q in gj:
        c.x(q)
    c.mcphase(gj[:-1], gj[-1], phi)
    for q in gj:
        c.x(q)
    for qi, qj in reversed(list(zip(gi, gj))):
        c.cx(qi, qj)


def binary_needs_ancillas(k: int) -> bool:
    return k & (k - 1) != 0


def build_binary_phase_circuit(g: Graph, k: int, gamma: float) -> Circuit:
    """IR circuit for ``exp(-i gamma H_P)`` under the binary encoding (up to global phase).

    Per edge with ``theta = gamma * w``: the equal-label block applies
    ``e^{-2i theta}`` to equal labels (``2I - J`` part), then one ancilla
    block per rectangle of :func:`merged_pair_cover` applies ``e^{-2i theta}``
    to distinct labels that denote the same merged color.
    """
    if k < 2:
        raise ParameterError("k must be >= 2")
    L = qubits_per_vertex_binary(k)
    n = L * g.num_vertices
    anc = 2 if binary_needs_ancillas(k) else 0
    c = Circuit(n, anc)
    cover = merged_pair_cover(k)
    for u, v, w in g.edges:
        phi = -2.0 * gamma * w
        gi = list(range(u * L, (u + 1) * L))
        gj = list(range(v * L, (v + 1) * L))
        _equal_labels_block(c, gi, gj, phi)
        for pat_i, pat_j in cover:
            _pair_block(c, gi, gj, pat_i, pat_j, n, n + 1, phi)
    return c


# --- one-hot encoding ------------------------------------------------------------

def build_onehot_phase_circuit(g: Graph, k: int, gamma: float, penalty_beta: float | None = None) -> Circuit:
    """ZZ blocks for every (edge, color) and, with a penalty, every (vertex, color pair)."""
    c = Circuit(k * g.num_vertices)
    for u, v, w in g.edges:
        for a in range(k):
            _zz(c, u * k + a, v * k + a, gamma * w)
    if penalty_beta is not None:
        for v in range(g.num_vertices):
            for a in range(k):
                for b in range(a + 1, k):
                    _zz(c, v * k + a, v * k + b, gamma * penalty_beta / 2)
    return c


def xy_pairs(k: int) -> list[tuple[int, int]]:
    """Color pairs of the parity-partitioned ring: odd layer, then even layer with the wrap pair."""
    odd = [(a, a + 1) for a in range(0, k - 1, 2)]
    even = [(a, a + 1) for a in range(1, k - 1, 2)] + [(k - 1, 0)]
    return odd + even


def _xy_block(c: Circuit, a, b, beta):
    """``exp(-i beta (XX + YY))`` up to global phase: an XX rotation then a YY rotation."""
    _h(c, a)
    _h(c, b)
    _zz(c, a, b, beta)
    _h(c, a)
    _h(c, b)
    _rx(c, a, -PI / 2)
    _rx(c, b, -PI / 2)
    _zz(c, a, b, beta)
    _rx(c, a, PI / 2)
    _rx(c, b, PI / 2)


def build_mixer_circuit(scheme: EncodingScheme, num_vertices: int, beta: float) -> Circuit:
    n = scheme.L * num_vertices
    c = Circuit(n)
    if scheme.kind is Encoding.ONEHOT_XY:
        k = scheme.k
        for v in range(num_vertices):
            for a, b in xy_pairs(k):
                _xy_block(c, v * k + a, v * k + b, beta)
    else:
        for q in range(n):
            _rx(c, q, 2 * beta)
    return c


def build_wk_prep_circuit(k: int) -> Circuit:
    """``|0...0> -> |W_k>`` with ``2(k-1)`` CX.

    The excitation starts on qubit 0 and each step moves all but a
    ``1/sqrt(k - a)`` share of the remaining amplitude from qubit ``a``
    to qubit ``a+1`` with a Givens-type rotation (two CX).
    """
    if k < 2:
        raise ParameterError("k must be >= 2")
    c = Circuit(k)
    c.x(0)
    for a in range(k - 1):
        theta = math.asin(1.0 / math.sqrt(k - a))
        _ry(c, a + 1, theta)
        c.cx(a, a + 1)
        _ry(c, a + 1, -theta)
        c.cx(a + 1, a)
    return c


def build_initial_state_circuit(scheme: EncodingScheme, num_vertices: int) -> Circuit:
    n = scheme.L * num_vertices
    c = Circuit(n)
    if scheme.kind is Encoding.ONEHOT_XY:
        wk = build_wk_prep_circuit(scheme.k)
        for v in range(num_vertices):
            for gate in wk.gates:
                c.add(gate.kind, tuple(q + v * scheme.k for q in gate.qubits), gate.params)
    else:
        for q in range(n):
            _h(c, q)
    return c


def build_phase_circuit(g: Graph, scheme: EncodingScheme, gamma: float) -> Circuit:
    if scheme.kind is Encoding.BINARY:
        return build_binary_phase_circuit(g, scheme.k, gamma)
    return build_onehot_phase_circuit(g, scheme.k, gamma, scheme.penalty_beta)


# --- decomposition ---------------------------------------------------------------

def _cphase(out: Circuit, ctl, tgt, phi):
    _phase(out, ctl, phi / 2)
    out.cx(ctl, tgt)
    _phase(out, tgt, -phi / 2)
    out.cx(ctl, tgt)
    _phase(out, tgt, phi / 2)


def _ccphase(out: Circuit, c0, c1, tgt, phi):
    _cphase(out, c1, tgt, phi / 2)
    out.cx(c0, c1)
    _cphase(out, c1, tgt, -phi / 2)
    out.cx(c0, c1)
    _cphase(out, c0, tgt, phi / 2)


def _toffoli(out: Circuit, a, b, t):
    T, TDG = PI / 4, -PI / 4
    _h(out, t)
    out.cx(b, t)
    _phase(out, t, TDG)
    out.cx(a, t)
    _phase(out, t, T)
    out.cx(b, t)
    _phase(out, t, TDG)
    out.cx(a, t)
    _phase(out, b, T)
    _phase(out, t, T)
    _h(out, t)
    out.cx(a, b)
    _phase(out, a, T)
    _phase(out, b, TDG)
    out.cx(a, b)


def _rc3x_gates(a, b, c, d) -> list[Gate]:
    """Relative-phase 3-control Toffoli with 6 CX."""
    tmp = Circuit(max(a, b, c, d) + 1)
    T = PI / 4
    _h(tmp, d)
    _phase(tmp, d, T)
    tmp.cx(c, d)
    _phase(tmp, d, -T)
    _h(tmp, d)
    tmp.cx(a, d)
    _phase(tmp, d, T)
    tmp.cx(b, d)
    _phase(tmp, d, -T)
    tmp.cx(a, d)
    _phase(tmp, d, T)
    tmp.cx(b, d)
    _phase(tmp, d, -T)
    _h(tmp, d)
    _phase(tmp, d, T)
    tmp.cx(c, d)
    _phase(tmp, d, -T)
    _h(tmp, d)
    return tmp.gates


def _inverse(gates: list[Gate]) -> list[Gate]:
    out = []
    for g in reversed(gates):
        if g.kind == "u3":
            theta, phi, lam = g.params
            out.append(Gate("u3", g.qubits, (-theta, -lam, -phi)))
        else:
            out.append(g)
    return out


def _expand(g: Gate, out: Circuit) -> None:
    kind, qs = g.kind, g.qubits
    if kind in PRIMITIVE:
        out.gates.append(g)
    elif kind == "x":
        out.u3(qs[0], PI, 0.0, PI)
    elif kind == "mcphase":
        ctl, t, (phi,) = g.controls, g.target, g.params
        if len(ctl) == 0:
            _phase(out, t, phi)
        elif len(ctl) == 1:
            _cphase(out, ctl[0], t, phi)
        elif len(ctl) == 2:
            _ccphase(out, ctl[0], ctl[1], t, phi)
        else:
            raise UnsupportedFeatureError(f"phase with {len(ctl)} controls is not decomposed")
    elif kind == "mcx":
        ctl, t = g.controls, g.target
        if len(ctl) == 0:
            out.u3(t, PI, 0.0, PI)
        elif len(ctl) == 1:
            out.cx(ctl[0], t)
        elif len(ctl) == 2:
            _toffoli(out, ctl[0], ctl[1], t)
        else:
            raise UnsupportedFeatureError(f"exact X with {len(ctl)} controls is not decomposed")
    elif kind in ("rmcx", "rmcx_dg"):
        if len(g.controls) != 3:
            raise UnsupportedFeatureError(f"relative-phase X with {len(g.controls)} controls")
        gates = _rc3x_gates(*qs)
        out.gates.extend(gates if kind == "rmcx" else _inverse(gates))
    else:
        raise UnsupportedFeatureError(kind)


def decompose(c: Circuit) -> Circuit:
    """Rewrite into ``u3`` and ``cx`` only; equal to ``c`` up to global phase."""
    out = Circuit(c.n_work_qubits, c.n_ancillas)
    for g in c.gates:
        _expand(g, out)
    return out


# --- simulation and verification ---------------------------------------------------

_X = np.array([[0, 1], [1, 0]], dtype=complex)


def apply_gates(c: Circuit, amps: np.ndarray) -> np.ndarray:
    """Run ``c`` in place on amplitudes of shape ``(2**n,)`` or ``(batch, 2**n)``."""
    n = c.n_qubits
    if amps.shape[-1] != 1 << n:
        raise ParameterError("amplitude array does not match circuit width")
    for g in c.gates:
        k, qs = g.kind, g.qubits
        if k == "u3" and g.params[0] == 0.0:
            q = qs[0]
            amps.reshape(-1, 1 << q, 2, 1 << (n - q - 1))[:, :, 1, :] *= np.exp(1j * (g.params[1] + g.params[2]))
        elif k == "u3":
            sim._apply_1q(amps, n, qs[0], sim.u3_matrix(*g.params))
        elif k == "x":
            sim._apply_1q(amps, n, qs[0], _X)
        elif k == "cx":
            sim._apply_cx(amps, n, qs[0], qs[1])
        elif k == "mcx":
            sim._apply_mcx(amps, n, g.controls, g.target)
        elif k == "mcphase":
            sim._apply_mcphase(amps, n, g.controls, g.target, g.params[0])
        else:
            sub = Circuit(c.n_work_qubits, c.n_ancillas)
            _expand(g, sub)
            apply_gates(sub, amps)
    return amps


def run_circuit(c: Circuit, state: sim.Statevector) -> None:
    if state.n_qubits != c.n_qubits:
        raise ParameterError("state width does not match circuit")
    apply_gates(c, state.amplitudes)


MAX_VERIFY_QUBITS = 14


def verify_against_diagonal(c: Circuit, diag: DiagonalHamiltonian | np.ndarray, gamma: float,
                            weight: float = 1.0, tol: float = 1e-10) -> float:
    """Spread of ``<z|C|z> / exp(-i gamma weight H[z])`` over all work basis states.

    Ancillas start in ``|0>``. Raises :class:`VerificationError` when some
    input leaks out of its own basis state (not diagonal, or ancillas left
    dirty). Zero spread means ``C`` equals the target up to one global phase.
    """
    values = diag.values if isinstance(diag, DiagonalHamiltonian) else np.asarray(diag)
    nw, na, n = c.n_work_qubits, c.n_ancillas, c.n_qubits
    if n > MAX_VERIFY_QUBITS:
        raise ParameterError(f"{n} qubits is too wide for dense verification (max {MAX_VERIFY_QUBITS})")
    if values.shape != (1 << nw,):
        raise ParameterError("diagonal does not match the circuit's work qubits")
    chunk = max(1, (1 << 20) >> n)
    ratios = np.empty(1 << nw, dtype=complex)
    for start in range(0, 1 << nw, chunk):
        zs = np.arange(start, min(start + chunk, 1 << nw))
        cols = zs << na
        amps = np.zeros((len(zs), 1 << n), dtype=complex)
        amps[np.arange(len(zs)), cols] = 1.0
        apply_gates(c, amps)
        kept = amps[np.arange(len(zs)), cols]
        leak = np.sum(np.abs(amps) ** 2, axis=1) - np.abs(kept) ** 2
        bad = np.flatnonzero(leak > tol)
        if bad.size:
            raise VerificationError("circuit is not diagonal on the work register", int(zs[bad[0]]))
        ratios[zs] = kept / np.exp(-1j * gamma * weight * values[zs])
    return float(np.max(np.abs(ratios - ratios[0])))


# --- resource accounting ------------------------------------------------------------

@dataclass(frozen=True)
class ResourceReport:
    qubits_total: int
    n_ancillas: int
    cx_init: int
    cx_mixer_per_layer: int
    cx_phase_per_layer: int

    @property
    def cx_per_layer(self) -> int:
        """Initial state + mixer + phase separator, the per-layer figure used in result tables."""
        return self.cx_init + self.cx_mixer_per_layer + self.cx_phase_per_layer

    def cx_total(self, p: int) -> int:
        return self.cx_init + p * (self.cx_mixer_per_layer + self.cx_phase_per_layer)


def count_resources(g: Graph, scheme: EncodingScheme) -> ResourceReport:
    """Count CX gates by compiling the actual circuits for ``g``."""
    phase = decompose(build_phase_circuit(g, scheme, 0.1))
    mixer = decompose(build_mixer_circuit(scheme, g.num_vertices, 0.1))
    init = decompose(build_initial_state_circuit(scheme, g.num_vertices))
    return ResourceReport(phase.n_qubits, phase.n_ancillas, init.cx_count,
                          mixer.cx_count, phase.cx_count)
