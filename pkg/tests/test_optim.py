import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kcut_qaoa.errors import OptimizationError
from kcut_qaoa.optim import nelder_mead


def test_quadratic():
    res = nelder_mead(lambda x: (x[0] - 1) ** 2 + (x[1] - 2) ** 2, [0.0, 0.0])
    assert np.allclose(res.x, [1, 2], atol=1e-4)


def test_constant_stops_immediately():
    res = nelder_mead(lambda x: 3.0, [0.5, -0.2])
    assert res.nit == 0 and res.nfev == 3
    assert np.array_equal(res.x, [0.5, -0.2])


def test_rosenbrock():
    f = lambda x: (1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2
    res = nelder_mead(f, [-1.2, 1.0], tol=1e-12, max_iter=5000)
    assert np.allclose(res.x, [1, 1], atol=1e-3)


def test_non_finite_objective():
    with pytest.raises(OptimizationError) as info:
        nelder_mead(lambda x: np.nan, [1.0])
    assert list(info.value.point) == [1.0]
    with pytest.raises(OptimizationError):
        nelder_mead(lambda x: 0.0, [np.inf])


def test_max_iter_respected():
    res = nelder_mead(lambda x: float(np.sum(x**2)), [3.0, 4.0], tol=0, max_iter=7)
    assert res.nit == 7


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=4))
def test_deterministic_and_never_worse(x0):
    f = lambda x: float(np.sum((x - 0.3) ** 2) + np.sin(3 * x).sum())
    a = nelder_mead(f, x0, max_iter=200)
    b = nelder_mead(f, x0, max_iter=200)
    assert np.array_equal(a.x, b.x) and a.fun == b.fun
    assert a.fun <= f(np.asarray(x0)) + 1e-12


def test_agrees_with_scipy_on_smooth_problem():
    from scipy.optimize import minimize
    f = lambda x: (x[0] - 0.7) ** 2 + 3 * (x[1] + 0.2) ** 4 + 0.1 * x[0] * x[1]
    ours = nelder_mead(f, [1.0, 1.0], tol=1e-12, max_iter=5000)
    ref = minimize(f, [1.0, 1.0], method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12})
    assert abs(ours.fun - ref.fun) < 1e-7
