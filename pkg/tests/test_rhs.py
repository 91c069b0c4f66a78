import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from inexact_dde import ProblemId, closed_form_lip, eval_rhs, make_test_problem

CATALOG = ["f1", "f2", "f3", "f4"]


def test_f4_example():
    p = make_test_problem("f4", 1.0)
    assert eval_rhs(p, math.pi / 2, [0.0], [2.0])[0] == pytest.approx(6.0, rel=1e-15)


@pytest.mark.parametrize("gamma", [0.225, 0.5, 1.0])
def test_f2_vanishes_at_origin(gamma):
    assert eval_rhs(make_test_problem("f2", gamma), 0.0, [0.0], [0.0])[0] == 0.0


def test_f1_constant_term():
    assert eval_rhs(make_test_problem("f1", 1.0), 0.0, [0.0], [0.0])[0] == 1.7137


def test_catalog_parameters():
    p = make_test_problem("f1", 0.225)
    assert dict(p.params) == {"A": 1.7137, "B": 0.7769, "C": 0.5895, "D": -0.82615, "rho1": 0.973}
    assert p.eta[0] == 0.05854 and p.gamma == 0.225
    assert make_test_problem("f4", 1.0).params["lam"] == 1.0
    for pid in ("f2", "f3"):
        assert dict(make_test_problem(pid, 1.0).params) == {"beta": 0.7, "a": 0.2, "c": 2.0}


def test_regularity_metadata():
    assert make_test_problem("f1", 0.225).regularity.beta1 == 0.973
    assert make_test_problem("f2", 0.225).regularity.beta1 == 0.7
    r = make_test_problem("lip").regularity
    assert (r.alpha, r.beta1, r.beta2, r.gamma) == (1.0, 1.0, 1.0, 1.0)


def test_lip_bench():
    p = make_test_problem("lip", 1.0)
    assert p.id is ProblemId.LIP_BENCH and p.eta[0] == 1.0
    assert eval_rhs(p, 0.3, [5.0], [-2.5])[0] == -2.5
    assert make_test_problem("lip", 0.3).gamma == 1.0
    assert make_test_problem("lip", eta=[1.0, 2.0, 3.0]).d == 3


@pytest.mark.parametrize("args", [("f9", 1.0), ("f1", 0.0), ("f1", 1.5), ("f1", math.nan)])
def test_make_test_problem_rejects(args):
    with pytest.raises(ValueError):
        make_test_problem(*args)


def test_catalog_eta_fixed():
    with pytest.raises(ValueError):
        make_test_problem("f1", 1.0, eta=2.0)


def test_eval_rhs_rejects_nonfinite():
    p = make_test_problem("f3", 1.0)
    for args in ((math.nan, [0.0], [0.0]), (0.0, [math.inf], [0.0]), (0.0, [0.0], [math.nan])):
        with pytest.raises(ValueError):
            eval_rhs(p, *args)


def test_sign_and_power_conventions():
    # sgn(0) = 0 and |0|^p = 0: f4 vanishes when the delayed state is 0
    assert eval_rhs(make_test_problem("f4", 0.225), 1.0, [3.0], [0.0])[0] == 0.0
    # (max{y,0})^beta = 0 for y <= 0
    p = make_test_problem("f2", 1.0)
    assert eval_rhs(p, 0.0, [-4.0], [0.0])[0] == pytest.approx(0.8)


@pytest.mark.parametrize("pid", CATALOG)
def test_deterministic(pid):
    p = make_test_problem(pid, 0.225)
    a = eval_rhs(p, 1.1, [0.3], [-0.7])
    b = eval_rhs(p, 1.1, [0.3], [-0.7])
    assert a.tobytes() == b.tobytes()


@given(t=st.floats(0, 100), y=st.floats(-1e3, 1e3), z=st.floats(-1e3, 1e3),
       gamma=st.sampled_from([0.225, 0.5, 1.0]))
def test_f3_z_term_is_odd(t, y, z, gamma):
    p = make_test_problem("f3", gamma)
    diff = eval_rhs(p, t, [y], [z])[0] - eval_rhs(p, t, [y], [-z])[0]
    expected = 2 * 2.0 * math.copysign(abs(z) ** gamma, z) if z else 0.0
    assert diff == pytest.approx(expected, rel=1e-9, abs=1e-9 * (1 + abs(y)) * (1 + abs(z)))


@pytest.mark.parametrize("pid", CATALOG)
@pytest.mark.parametrize("gamma", [0.225, 1.0])
def test_linear_growth_constant_transfers(pid, gamma):
    p = make_test_problem(pid, gamma)
    f = p.kernel()

    def ratios(seed):
        r = np.random.default_rng(seed)
        t = r.uniform(0, 200, 4000)
        y = r.uniform(-1e3, 1e3, (4000, 1)) * r.choice([1e-3, 1, 1e-6], (4000, 1))
        z = r.uniform(-1e3, 1e3, (4000, 1)) * r.choice([1e-3, 1, 1e-6], (4000, 1))
        vals = np.array([f(ti, yi, zi) for ti, yi, zi in zip(t, y, z)])[:, 0]
        return np.abs(vals) / ((1 + np.abs(y[:, 0])) * (1 + np.abs(z[:, 0])))

    K_fit = ratios(1).max()
    assert np.isfinite(K_fit)
    assert np.all(ratios(2) <= 1.5 * K_fit)


def test_closed_form_values():
    assert closed_form_lip(0.0, 1.0, 1.0, 3) == 1.0
    assert closed_form_lip(1.0, 1.0, 1.0, 3) == 2.0
    assert closed_form_lip(2.0, 1.0, 1.0, 3) == 3.5
    assert closed_form_lip(0.0, 2.0, 0.7, 0) == 0.7
    with pytest.raises(ValueError):
        closed_form_lip(4.5, 1.0, 1.0, 3)


def _fine_euler(t_end, tau, eta, steps_per_tau=20000):
    # independent oracle: plain-list Euler for z' = z(t - tau)
    h = tau / steps_per_tau
    hist = [eta] * (steps_per_tau + 1)
    ys = [eta]
    for k in range(int(round(t_end / h))):
        ys.append(ys[-1] + h * hist[k])
        hist.append(ys[-1])
    return ys[-1]


@pytest.mark.parametrize("t,expected", [(1.0, 2.0), (2.0, 3.5)])
def test_closed_form_matches_fine_euler(t, expected):
    assert _fine_euler(t, 1.0, 1.0) == pytest.approx(expected, abs=5e-4)
    assert closed_form_lip(t, 1.0, 1.0, 2) == pytest.approx(_fine_euler(t, 1.0, 1.0), abs=5e-4)


@pytest.mark.parametrize("tau,eta", [(1.0, 1.0), (0.37, -2.0), (5.0, 0.05854)])
def test_closed_form_continuous_at_layer_boundaries(tau, eta):
    n = 6
    for j in range(1, n + 1):
        t = j * tau
        left = eta * math.fsum((t - (i - 1) * tau) ** i / math.factorial(i) for i in range(j + 1))
        assert closed_form_lip(t, tau, eta, n) == pytest.approx(left, rel=1e-12)
