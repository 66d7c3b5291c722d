"""Line search oracles: accept/reject stepping and exact 1-D minimization."""

import math

import numpy as np
import pytest

from randpursuit import (
    LineSearchMode,
    NumericError,
    Objective,
    ass_factors,
    ass_step,
    exact_ls,
    line_search,
)


def _half_sq(x):
    return 0.5 * float(x @ x)


def test_ass_factors_small_case():
    up, down = ass_factors(0.27)
    assert up == pytest.approx(math.exp(1.0 / 3.0), rel=1e-15)
    assert down == pytest.approx(math.exp(-0.27 / (3.0 * 0.73)), rel=1e-15)


@pytest.mark.parametrize("p", [0.05, 0.27, 0.5, 0.9])
def test_ass_factors_drift_neutral(p):
    # p*log(up) + (1-p)*log(down) = 0: the stationary step-size identity
    up, down = ass_factors(p)
    assert abs(p * math.log(up) + (1.0 - p) * math.log(down)) < 1e-14


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_ass_factors_rejects_degenerate_probability(p):
    with pytest.raises(ValueError):
        ass_factors(p)


def test_ass_step_accept_small_case():
    st = ass_step(_half_sq, np.array([1.0]), np.array([-1.0]), 0.5)
    assert st.accepted
    assert np.array_equal(st.x_next, [0.5])
    assert st.sigma_taken == 0.5
    assert st.fval == 0.125
    assert st.sigma_next == pytest.approx(0.6978062125430448, rel=1e-12)


def test_ass_step_reject_small_case():
    st = ass_step(_half_sq, np.array([0.0]), np.array([1.0]), 1.0, p=0.27)
    assert not st.accepted
    assert np.array_equal(st.x_next, [0.0])
    assert st.sigma_taken == 0.0
    assert st.fval == 0.0
    assert st.sigma_next == pytest.approx(0.8840093219278197, rel=1e-12)


def test_ass_step_equality_counts_as_acceptance():
    st = ass_step(lambda x: 1.0, np.zeros(3), np.ones(3), 0.7)
    assert st.accepted
    assert st.sigma_taken == 0.7


def test_ass_step_cached_value_spends_one_evaluation():
    calls = []

    def f(x):
        calls.append(1)
        return _half_sq(x)

    x, u = np.array([1.0, 2.0]), np.array([-1.0, 0.0])
    st1 = ass_step(f, x, u, 0.3)
    assert len(calls) == 2 and st1.evals == 2
    calls.clear()
    st2 = ass_step(f, x, u, 0.3, fx=_half_sq(x))
    assert len(calls) == 1 and st2.evals == 1
    assert st1.sigma_next == st2.sigma_next
    assert np.array_equal(st1.x_next, st2.x_next)


def test_ass_step_displacement_identity():
    rng = np.random.default_rng(3)
    f = Objective("fexp", 6, 50.0)
    for _ in range(20):
        x = rng.standard_normal(6)
        u = rng.standard_normal(6)
        st = ass_step(f, x, u, 0.4)
        assert np.array_equal(st.x_next, x + st.sigma_taken * u)


def test_ass_step_validation():
    x = np.ones(2)
    with pytest.raises(ValueError):
        ass_step(_half_sq, x, np.zeros(2), 1.0)
    with pytest.raises(ValueError):
        ass_step(_half_sq, x, np.ones(3), 1.0)
    with pytest.raises(ValueError):
        ass_step(_half_sq, x, np.ones(2), 0.0)
    with pytest.raises(ValueError):
        ass_step(_half_sq, x, np.ones(2), 1.0, p=1.0)


def test_ass_step_nonfinite_candidate_aborts():
    def f(x):
        return float("inf") if x[0] > 0.5 else 0.0

    with pytest.raises(NumericError) as exc:
        ass_step(f, np.zeros(1), np.ones(1), 1.0)
    assert exc.value.iterate is not None


def test_exact_ls_quadratic_small_case():
    # isotropic bowl: minimizing from (1,1) along e1 lands on (0,1)
    f = Objective("fexp", 2, 1.0)
    st = exact_ls(f, np.array([1.0, 1.0]), np.array([1.0, 0.0]))
    assert st.sigma_taken == -1.0
    assert np.array_equal(st.x_next, [0.0, 1.0])
    assert st.fval == 0.5
    assert st.accepted
    assert st.evals >= 3


def test_exact_ls_orthogonal_direction_zero_step():
    f = Objective("fexp", 2, 1.0)
    x = np.array([1.0, 0.0])
    st = exact_ls(f, x, np.array([0.0, 1.0]))
    assert st.sigma_taken == 0.0
    assert np.array_equal(st.x_next, x)
    assert st.fval == f.value(x)


def test_exact_ls_anisotropic_small_case():
    f = Objective("fexp", 2, 4.0)
    st = exact_ls(f, np.array([1.0, 1.0]), np.array([0.0, 1.0]))
    assert st.sigma_taken == -1.0
    assert np.array_equal(st.x_next, [1.0, 0.0])
    assert st.fval == 0.5


def test_exact_ls_displacement_identity():
    rng = np.random.default_rng(5)
    f = Objective("ftwo", 8, 300.0)
    for _ in range(20):
        x = rng.standard_normal(8)
        u = rng.standard_normal(8)
        st = exact_ls(f, x, u)
        assert np.array_equal(st.x_next, x + st.sigma_taken * u)


def test_exact_ls_first_order_optimality():
    # directional derivative at the landing point is zero to tight relative
    # accuracy on diagonal quadratics
    rng = np.random.default_rng(17)
    for _ in range(200):
        kind = ("fexp", "flin", "ftwo")[rng.integers(3)]
        n = int(rng.integers(2, 51))
        f = Objective(kind, n, float(rng.uniform(1.0, 1e4)))
        x = rng.standard_normal(n) * 3.0
        u = rng.standard_normal(n)
        st = exact_ls(f, x, u)
        resid = abs(float(f.gradient(st.x_next) @ u))
        bound = 1e-8 * float(np.linalg.norm(f.gradient(x))) * float(np.linalg.norm(u))
        assert resid <= bound


def test_exact_ls_grid_optimality():
    # no probe point on a two-decade log grid around the taken step wins
    rng = np.random.default_rng(23)
    f = Objective("fexp", 5, 100.0)
    for _ in range(10):
        x = rng.standard_normal(5)
        u = rng.standard_normal(5)
        st = exact_ls(f, x, u)
        fstar = f.value(st.x_next)
        for scale in np.logspace(-1.0, 1.0, 10):
            for s in (scale, -scale):
                t = st.sigma_taken * s
                assert fstar <= f.value(x + t * u) + 1e-10


def test_exact_ls_nonconvex_descends_and_flattens():
    rng = np.random.default_rng(31)
    f = Objective("frosen", 6)
    for _ in range(20):
        x = rng.uniform(-1.0, 1.0, 6)
        u = rng.standard_normal(6)
        st = exact_ls(f, x, u)
        assert st.fval <= f.value(x)
        resid = abs(float(f.gradient(st.x_next) @ u))
        assert resid <= 1e-5 * max(1.0, float(np.linalg.norm(f.gradient(x)))) * float(np.linalg.norm(u))


def test_exact_ls_generic_callable_matches_objective_path():
    f = Objective("flin", 4, 20.0)
    rng = np.random.default_rng(41)
    for _ in range(10):
        x = rng.standard_normal(4)
        u = rng.standard_normal(4)
        st_obj = exact_ls(f, x, u)
        st_gen = exact_ls(lambda y: f.value(y), x, u)
        assert st_gen.sigma_taken == pytest.approx(st_obj.sigma_taken, rel=1e-6, abs=1e-9)
        assert st_gen.fval <= st_obj.fval + 1e-12


def test_exact_ls_generic_zero_slope_stays_put():
    st = exact_ls(lambda x: 1.0 + float(x[0] ** 4), np.zeros(2), np.array([0.0, 1.0]))
    assert st.sigma_taken == 0.0
    assert st.fval == 1.0


def test_exact_ls_unbounded_ray_raises():
    with pytest.raises(NumericError):
        exact_ls(lambda x: float(x[0]), np.zeros(1), np.ones(1))


def test_exact_ls_validation():
    f = Objective("fexp", 3, 10.0)
    with pytest.raises(ValueError):
        exact_ls(f, np.ones(3), np.zeros(3))
    with pytest.raises(ValueError):
        exact_ls(f, np.ones(2), np.ones(2))
    with pytest.raises(ValueError):
        exact_ls(f, np.ones(3), np.ones(3), tol=0.0)


def test_line_search_mode_dispatch():
    f = Objective("fexp", 2, 4.0)
    x, u = np.array([1.0, 1.0]), np.array([0.0, 1.0])
    st = line_search(LineSearchMode("exact"), f, x, u, sigma=123.0)
    assert st.sigma_taken == -1.0  # sigma is ignored by the exact oracle
    st = line_search(LineSearchMode("adaptive"), f, x, u, sigma=0.5)
    assert st.sigma_next in (0.5 * ass_factors(0.27)[0], 0.5 * ass_factors(0.27)[1])
    st = line_search(LineSearchMode("adaptive"), f, x, u, sigma=0.5, p=0.5)
    assert st.sigma_next in (0.5 * ass_factors(0.5)[0], 0.5 * ass_factors(0.5)[1])


def test_line_search_mode_validation():
    with pytest.raises(ValueError):
        LineSearchMode("newton")
    with pytest.raises(ValueError):
        LineSearchMode("adaptive", p=0.0)
    with pytest.raises(ValueError):
        LineSearchMode("adaptive", p=1.0)
    with pytest.raises(ValueError):
        LineSearchMode("exact", tol=-1.0)
