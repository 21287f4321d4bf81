import math

import numpy as np
import pytest

from ctrap.beta_solver import solve_beta
from ctrap.bounds import composite_bound
from ctrap.quadcore import Interval, conjugate
from ctrap.rules import (
    PRESETS,
    FunctionModel,
    MissingDerivativeError,
    SampledFunction,
    composite,
    endpoint_derivatives_fd,
    panelwise_sum,
    preset,
    single_panel,
    uniform_nodes,
    with_fd_derivatives,
)
from ctrap.verify import catalog_function, convergence_study

UNIT = Interval(0.0, 1.0)


def poly_model(coefs):
    """``sum c_k x^k`` with exact derivatives and integral."""
    c = np.asarray(coefs, dtype=float)
    p = np.polynomial.Polynomial(c)
    d1, d2, anti = p.deriv(), p.deriv(2), p.integ()
    return FunctionModel(p, d1, d2, "poly"), anti


def all_specs():
    out = []
    for name in PRESETS:
        if name == "optimal-p":
            out += [preset(name, p) for p in (1, 4 / 3, 1.5, 2, 3, math.inf)]
        else:
            out.append(preset(name))
    return out


def test_preset_coefficients():
    assert preset("trapezoid").k_unit == 0
    assert preset("alexiewicz").k_unit == 0
    assert preset("fallback-a").k_unit == 1 / 16
    assert preset("fallback-b").k_unit == 1 / 12
    assert preset("fallback-c").k_unit == 1 / 8
    assert preset("cubic-exact").k_unit == 1 / 12
    assert preset("optimal-p", 2).k_unit == 1 / 12
    assert preset("optimal-p", math.inf).k_unit == 3 / 32
    assert preset("optimal-p", 1).k_unit == 1 / 16
    b4 = solve_beta(4).beta
    assert preset("optimal-p", 4 / 3).k_unit == pytest.approx((1 - b4**-2) / 8, rel=1e-14)


def test_preset_errors():
    with pytest.raises(ValueError):
        preset("simpson")
    with pytest.raises(ValueError):
        preset("optimal-p")


def test_linear_exact_every_preset():
    m, anti = poly_model([0.0, 1.0])
    for spec in all_specs():
        assert single_panel(m, UNIT, spec).estimate == pytest.approx(0.5, abs=1e-15)


def test_cubic_exact_single_panel():
    m, _ = poly_model([0, 0, 0, 1])
    assert single_panel(m, UNIT, preset("cubic-exact")).estimate == pytest.approx(0.25, abs=1e-15)


def test_x4_optimal_inf():
    m, _ = poly_model([0, 0, 0, 0, 1])
    res = single_panel(m, UNIT, preset("optimal-p", math.inf), norm=12.0)
    assert res.estimate == pytest.approx(0.125, abs=1e-15)
    assert abs(0.2 - res.estimate) <= res.bound
    assert res.bound == pytest.approx(12 / 32)


def test_composite_quadratic_exact():
    m, _ = poly_model([0, 0, 1])
    assert composite(m, UNIT, 2, preset("optimal-p", 2)).estimate == pytest.approx(1 / 3, abs=1e-15)


def test_composite_linear_trapezoid():
    m, _ = poly_model([0, 1])
    assert composite(m, UNIT, 5, preset("trapezoid")).estimate == pytest.approx(0.5, abs=1e-15)


def test_composite_exp_within_bound():
    m = FunctionModel(np.exp, np.exp, np.exp, "exp")
    norm = math.sqrt((math.e**2 - 1) / 2)
    res = composite(m, UNIT, 4, preset("optimal-p", 2), norm=norm)
    assert res.bound == pytest.approx(norm / (12 * math.sqrt(5) * 16), rel=1e-14)
    assert abs(math.e - 1 - res.estimate) <= res.bound


def test_n1_matches_single_panel_bitwise():
    m = FunctionModel(np.sin, np.cos, lambda x: -np.sin(x), "sin")
    iv = Interval(0.3, 2.1)
    for spec in all_specs():
        assert composite(m, iv, 1, spec).estimate == single_panel(m, iv, spec).estimate


def test_rejects_zero_panels():
    m, _ = poly_model([1.0])
    with pytest.raises(ValueError):
        composite(m, UNIT, 0, preset("trapezoid"))


def test_missing_derivatives():
    m = FunctionModel(np.exp, None, None, "exp")
    assert composite(m, UNIT, 4, preset("trapezoid")).estimate > 0
    with pytest.raises(MissingDerivativeError):
        composite(m, UNIT, 4, preset("optimal-p", 2))
    est = composite(m, UNIT, 4, preset("optimal-p", 2), fprime_a=1.0, fprime_b=math.e).estimate
    full = composite(FunctionModel(np.exp, np.exp, np.exp, "exp"), UNIT, 4, preset("optimal-p", 2)).estimate
    assert est == full


def test_sampled_function():
    nodes = uniform_nodes(UNIT, 8)
    s = SampledFunction(UNIT, np.exp(nodes))
    trap = composite(s, spec=preset("trapezoid")).estimate
    assert trap == pytest.approx(composite(FunctionModel(np.exp, None, None, "e"), UNIT, 8, preset("trapezoid")).estimate, rel=1e-15)
    with pytest.raises(MissingDerivativeError):
        composite(s, spec=preset("cubic-exact"))
    da, db = endpoint_derivatives_fd(s)
    assert da == pytest.approx(1.0, abs=1e-2)  # O(h^2) one-sided difference, h = 1/8
    assert db == pytest.approx(math.e, abs=3e-2)
    est = composite(with_fd_derivatives(s), spec=preset("cubic-exact")).estimate
    assert est == pytest.approx(math.e - 1, abs=1e-4)


def test_sampled_rejects_short():
    with pytest.raises(ValueError):
        SampledFunction(UNIT, [1.0])


def test_cubic_exactness_random(rng=np.random.default_rng(7)):
    for _ in range(30):
        coefs = rng.normal(size=4)
        a = rng.uniform(-3, 3)
        iv = Interval(a, a + rng.uniform(0.1, 4))
        m, anti = poly_model(coefs)
        exact = anti(iv.b) - anti(iv.a)
        scale = max(1.0, abs(exact))
        for spec in (preset("cubic-exact"), preset("optimal-p", 2)):
            assert abs(composite(m, iv, 3, spec).estimate - exact) <= 1e-13 * scale * 10


def test_cubic_exactness_only_at_one_twelfth():
    m, _ = poly_model([0, 0, 0, 1])
    for spec in all_specs():
        err = abs(single_panel(m, UNIT, spec).estimate - 0.25)
        if spec.k_unit == 1 / 12:
            assert err <= 1e-15
        else:
            assert err > 1e-3


def test_quadratic_exactness_iff_alpha_squared():
    # exact on x^2 over [a, b] exactly when alpha^2 = (b-a)^2 / 12, i.e. k_unit = 1/12
    iv = Interval(-0.4, 1.7)
    m, anti = poly_model([0, 0, 1])
    exact = anti(iv.b) - anti(iv.a)
    for spec in all_specs():
        err = abs(single_panel(m, iv, spec).estimate - exact)
        alpha_sq = (iv.width**2 / 4) * (1 - 8 * spec.k_unit)
        assert (err < 1e-13) == (abs(alpha_sq - iv.width**2 / 12) < 1e-13)


def test_telescoping(rng=np.random.default_rng(11)):
    for _ in range(10):
        w = rng.uniform(0.5, 3)
        m = FunctionModel(
            lambda x: np.sin(w * x) + x**2,
            lambda x: w * np.cos(w * x) + 2 * x,
            lambda x: -w * w * np.sin(w * x) + 2,
            "s",
        )
        iv = Interval(0.0, rng.uniform(0.5, 2))
        for spec in (preset("optimal-p", 1.5), preset("fallback-c")):
            n = int(rng.integers(1, 40))
            t = composite(m, iv, n, spec).estimate
            assert panelwise_sum(m, iv, n, spec) == pytest.approx(t, rel=1e-13)


def test_trapezoid_worse_than_optimal():
    spec_opt, spec_trap = preset("optimal-p", 2), preset("trapezoid")
    for name in ("exp(x)", "sin(x)", "1/(1+x^2)"):
        cf = catalog_function(name)
        opt = convergence_study(cf.model, UNIT, spec_opt, (8, 16, 32), exact=cf.exact)
        trap = convergence_study(cf.model, UNIT, spec_trap, (8, 16, 32), exact=cf.exact)
        assert all(o.error < t.error for o, t in zip(opt, trap))
        assert all(abs(r.order - 2) < 0.1 for r in trap[1:])


def test_composite_error_within_bound():
    pair = conjugate(2)
    for name in ("exp(x)", "sin(x)", "1/(1+x^2)"):
        cf = catalog_function(name)
        norm = cf.norm(pair)
        for n in (1, 2, 8, 64):
            res = composite(cf.model, UNIT, n, preset("optimal-p", 2), norm=norm)
            assert abs(cf.exact - res.estimate) <= res.bound
            assert res.bound == pytest.approx(composite_bound(pair, norm, UNIT, n).bound)


def test_alexiewicz_rule_on_rough_function():
    cf = catalog_function("|x-1/3|^(3/2)")
    rows = convergence_study(cf.model, UNIT, preset("alexiewicz"), (8, 16, 32, 64, 128), exact=cf.exact)
    assert min(r.order for r in rows[1:]) >= 1.0
