import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kcut_qaoa import sim
from kcut_qaoa.errors import ParameterError
from kcut_qaoa.graph import Graph, barbell, total_weight
from kcut_qaoa.hamiltonian import DiagonalHamiltonian, make_scheme
from kcut_qaoa.qaoa import (
    GridConfig, QaoaProblem, QaoaSchedule, approximation_ratio, evolve, expected_cost,
    grid_search_p1, interpolate, run_qaoa,
)


def test_schedule_validation():
    with pytest.raises(ParameterError):
        QaoaSchedule((0.1, 0.2), (0.3,))
    with pytest.raises(ParameterError):
        QaoaSchedule((np.nan,), (0.3,))
    s = QaoaSchedule.from_vector([1, 2, 3, 4])
    assert s.gammas == (1.0, 2.0) and s.betas == (3.0, 4.0) and s.depth == 2


@pytest.mark.parametrize("kind", ["binary", "onehot-x", "onehot-xy"])
def test_identity_schedules(kind):
    g = barbell()
    s = make_scheme(kind, 3, g)
    p = QaoaProblem(g, s)
    assert np.array_equal(p.evolve(QaoaSchedule((), ())).amplitudes, p.initial().amplitudes)
    assert np.allclose(evolve(g, s, QaoaSchedule((0.0,), (0.0,))).amplitudes, p.initial().amplitudes)


def test_uniform_expected_costs():
    g = barbell()
    for k, ref in [(2, 0.5), (4, 0.75), (8, 0.875), (3, 0.625)]:
        s = make_scheme("binary", k)
        assert expected_cost(sim.prepare_plus(s.n_qubits(g)), g, s) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("k", range(2, 7))
def test_wk_expected_cost(k):
    g = Graph(3, ((0, 1, 1.0), (1, 2, 0.5), (0, 2, 2.0)))
    s = make_scheme("onehot-xy", k)
    state = QaoaProblem(g, s).initial()
    assert expected_cost(state, g, s) == pytest.approx((1 - 1 / k) * total_weight(g), abs=1e-12)


def test_expected_cost_layout_check():
    with pytest.raises(ParameterError):
        expected_cost(sim.prepare_plus(3), barbell(), make_scheme("binary", 2))


def test_approximation_ratio():
    assert approximation_ratio(2.0, 2.0) == 1.0
    assert approximation_ratio(0.0, 0.0) == 1.0


def test_interpolate():
    assert np.allclose(interpolate([0.4]), [0.4, 0.4])
    a, b = 0.3, 1.1
    assert np.allclose(interpolate([a, b]), [a, (a + b) / 2, b])
    assert np.allclose(interpolate([0.7] * 5), [0.7] * 6)
    with pytest.raises(ParameterError):
        interpolate([])


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=8))
def test_interpolate_formula(x):
    p = len(x)
    padded = [0.0] + list(x) + [0.0]
    ref = [(i - 1) / p * padded[i - 1] + (p - i + 1) / p * padded[i] for i in range(1, p + 2)]
    assert np.allclose(interpolate(x), ref)


@pytest.mark.parametrize("kind,k", [("binary", 3), ("binary", 4), ("onehot-x", 3),
                                     ("onehot-penalty", 3), ("onehot-xy", 2), ("onehot-xy", 4)])
def test_grid_zero_gamma_row_is_flat(kind, k):
    g = Graph(3, ((0, 1, 1.0), (1, 2, 1.0)))
    res = grid_search_p1(QaoaProblem(g, make_scheme(kind, k, g)), GridConfig(6, 9))
    assert np.ptp(res.energies[0]) < 1e-10


def test_odd_ring_mixer_moves_wk():
    # with odd k the first parity layer leaves one color unpaired, so W_k is not
    # an eigenvector of the layered mixer and E(0, beta) varies with beta
    g = Graph(3, ((0, 1, 1.0), (1, 2, 1.0)))
    res = grid_search_p1(QaoaProblem(g, make_scheme("onehot-xy", 3)), GridConfig(6, 9))
    assert np.ptp(res.energies[0]) > 0.1


def test_grid_tiny_and_argmin():
    p = QaoaProblem(barbell(), make_scheme("binary", 2))
    res = grid_search_p1(p, GridConfig(2, 2))
    assert res.energies.shape == (2, 2)
    res = grid_search_p1(p, GridConfig(7, 5))
    i, j = np.unravel_index(np.argmin(res.energies), res.energies.shape)
    assert res.energies[i, j] == pytest.approx(p.energy(QaoaSchedule((res.gamma,), (res.beta,))))
    with pytest.raises(ParameterError):
        grid_search_p1(p, GridConfig(1, 5))


def test_weighted_gamma_max():
    g = Graph(2, ((0, 1, 0.5),))
    assert GridConfig().resolved_gamma_max(g) == pytest.approx(4 * np.pi)
    assert GridConfig().resolved_gamma_max(barbell()) == pytest.approx(2 * np.pi)
    assert GridConfig(gamma_max=1.0).resolved_gamma_max(g) == 1.0


def test_energy_bounded_by_min_diagonal():
    rng = np.random.default_rng(0)
    g = Graph(4, ((0, 1, 1.0), (1, 2, 0.4), (2, 3, 1.3), (0, 3, 0.2)))
    for kind in ("binary", "onehot-penalty", "onehot-xy"):
        p = QaoaProblem(g, make_scheme(kind, 3, g))
        for _ in range(20):
            d = int(rng.integers(1, 4))
            e = p.energy(QaoaSchedule(tuple(rng.uniform(-4, 4, d)), tuple(rng.uniform(-4, 4, d))))
            assert e >= p.diag.values.min() - 1e-12


def test_affine_rescaling_of_phase():
    g = Graph(3, ((0, 1, 1.0), (1, 2, 0.5)))
    p = QaoaProblem(g, make_scheme("binary", 3))
    a = p.evolve(QaoaSchedule((0.8,), (0.4,)))
    p.diag = DiagonalHamiltonian(2 * p.diag.values, p.diag.n_qubits)
    b = p.evolve(QaoaSchedule((0.4,), (0.4,)))
    assert np.allclose(a.amplitudes, b.amplitudes, atol=1e-12)


def test_run_qaoa_barbell_k2():
    run = run_qaoa(barbell(), make_scheme("binary", 2), 2)
    assert all(r >= 0.999 for r in run.ratios)
    assert run.depths[1].initial.gammas == tuple(interpolate(run.depths[0].optimal.gammas))
    d = run.to_dict()
    json.dumps(d)
    assert d["depths"][0]["sample_seed"] == 1 and d["depths"][1]["sample_seed"] == 2


def test_run_qaoa_deterministic():
    g = Graph(3, ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)))
    a = run_qaoa(g, make_scheme("binary", 3), 2, GridConfig(8, 8), seed=4).to_dict()
    b = run_qaoa(g, make_scheme("binary", 3), 2, GridConfig(8, 8), seed=4).to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_run_qaoa_argument_checks():
    with pytest.raises(ParameterError):
        run_qaoa(barbell(), make_scheme("binary", 2), 0)
    with pytest.raises(ParameterError):
        run_qaoa(barbell(), make_scheme("binary", 2), 1, shots=0)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_ratios_in_unit_interval(k):
    g = Graph(3, ((0, 1, 1.0), (1, 2, 2.0)))
    run = run_qaoa(g, make_scheme("binary", k), 2, GridConfig(8, 8))
    for d in run.depths:
        assert 0 <= d.ratio <= 1 + 1e-12
        assert 0 <= d.ratio_shots <= 1 + 1e-12


def test_shots_converge_to_exact():
    for k, kind in [(3, "binary"), (3, "onehot-xy")]:
        run = run_qaoa(barbell(), make_scheme(kind, k), 1, shots=2**17, seed=11)
        assert abs(run.depths[0].ratio - run.depths[0].ratio_shots) < 0.01
