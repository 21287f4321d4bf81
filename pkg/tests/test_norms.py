import math

import numpy as np
import pytest

from ctrap.norms import OracleError, alexiewicz_norm, lp_norm, reference_integral
from ctrap.quadcore import Interval
from ctrap.rules import FunctionModel

UNIT = Interval(0.0, 1.0)


def one(x):
    return np.ones_like(np.asarray(x, dtype=float))


def test_reference_integrals():
    assert reference_integral(lambda x: x**2, UNIT) == pytest.approx(1 / 3, abs=1e-12)
    assert reference_integral(np.exp, UNIT) == pytest.approx(math.e - 1, abs=1e-12)
    assert reference_integral(lambda x: np.sin(np.pi * x), UNIT) == pytest.approx(2 / math.pi, abs=1e-12)


def test_reference_uses_breakpoints():
    f = lambda x: np.abs(x - 1 / 3)
    exact = (1 / 3) ** 2 / 2 + (2 / 3) ** 2 / 2
    assert reference_integral(f, UNIT, 1e-12, (1 / 3,)) == pytest.approx(exact, abs=1e-13)
    model = FunctionModel(f, None, None, "kink", (1 / 3,))
    assert reference_integral(model, UNIT) == pytest.approx(exact, abs=1e-13)


def test_reference_failures():
    with pytest.raises(ValueError):
        reference_integral(np.exp, UNIT, 1e-15)
    with pytest.raises(OracleError):
        reference_integral(lambda x: 1 / np.sqrt(np.abs(x - 0.5)), UNIT, 1e-12)


@pytest.mark.parametrize("p", [1, 1.5, 2, 7, 300, math.inf])
def test_lp_of_one(p):
    assert lp_norm(one, p, UNIT).value == pytest.approx(1.0, rel=1e-13)


def test_lp_examples():
    assert lp_norm(lambda x: x, 2, UNIT).value == pytest.approx(1 / math.sqrt(3), rel=1e-13)
    assert lp_norm(lambda x: np.sin(2 * np.pi * x), math.inf, UNIT).value == pytest.approx(1.0, abs=1e-12)
    assert lp_norm(lambda x: np.sin(2 * np.pi * x), 1, UNIT).value == pytest.approx(2 / math.pi, rel=1e-12)


def test_lp_large_p_no_overflow():
    r = lp_norm(lambda x: 1e200 * (1 + x), 50, UNIT)
    exact = 1e200 * ((2**51 - 1) / 51) ** (1 / 50)
    assert r.value == pytest.approx(exact, rel=1e-12)


def test_lp_singular_breakpoint_reports_error():
    g = lambda x: 0.75 * np.abs(x - 1 / 3) ** -0.5
    r = lp_norm(g, 1, UNIT, breakpoints=(1 / 3,))
    exact = 1.5 * (math.sqrt(1 / 3) + math.sqrt(2 / 3))
    assert abs(r.value - exact) <= max(r.est_error, 1e-12)


def test_lp_validation():
    with pytest.raises(ValueError):
        lp_norm(one, 0.5, UNIT)
    with pytest.raises(ValueError):
        lp_norm(one, 2, UNIT, mesh=10)


def test_alexiewicz_examples():
    assert alexiewicz_norm(one, UNIT).value == pytest.approx(1.0, abs=1e-14)
    assert alexiewicz_norm(one, UNIT, star=True).value == pytest.approx(1.0, abs=1e-14)
    s = lambda x: np.sin(2 * np.pi * x)
    assert alexiewicz_norm(s, UNIT).value == pytest.approx(1 / math.pi, abs=1e-12)
    assert alexiewicz_norm(s, UNIT, star=True).value == pytest.approx(1 / math.pi, abs=1e-12)
    sg = lambda x: np.sign(x - 0.5)
    assert alexiewicz_norm(sg, UNIT, breakpoints=(0.5,)).value == pytest.approx(0.5, abs=1e-14)
    assert alexiewicz_norm(sg, UNIT, star=True, breakpoints=(0.5,)).value == pytest.approx(0.5, abs=1e-14)


def test_alexiewicz_interior_extremum():
    # F = sin(3x) - ... ; extremum of the primitive of cos(3x) at x = pi/6
    g = lambda x: np.cos(3 * x)
    assert alexiewicz_norm(g, UNIT).value == pytest.approx(1 / 3, abs=1e-13)
    # primitive ranges over [sin(3)/3, 1/3] with sin(3) > 0; oscillation from 0
    assert alexiewicz_norm(g, UNIT, star=True).value == pytest.approx(1 / 3, abs=1e-13)


def test_alexiewicz_with_primitive():
    # point mass: f' jumps by 2 at 1/2, f'' = 0 elsewhere
    fp = lambda x: np.where(x < 0.5, -1.0, 1.0)
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    assert alexiewicz_norm(zero, UNIT, primitive=fp).value == pytest.approx(2.0)


def test_sandwich_random(rng=np.random.default_rng(3)):
    for _ in range(10):
        c = rng.normal(size=4)
        cut = rng.uniform(0.2, 0.8)
        g = lambda x, c=c, cut=cut: np.where(x < cut, c[0] + c[1] * np.sin(5 * x), c[2] * x + c[3])
        n = alexiewicz_norm(g, UNIT, breakpoints=(cut,)).value
        s = alexiewicz_norm(g, UNIT, star=True, breakpoints=(cut,)).value
        assert n <= s + 1e-14 <= 2 * n + 2e-14
