import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dkpwell.logcomplex import LogComplex
from dkpwell.special import (
    ConvergenceError,
    DegenerateParameterError,
    DomainError,
    Hyp2F1Args,
    PoleError,
    gamma_ratio,
    hyp2f1,
    hyp2f1_complex,
    hyp2f1_connection_1mz,
    hyp2f1_series,
    ln_gamma,
)
from oracles import GAUSS_SUM_0507, HYP2F1_TABLE, LN_GAMMA_TABLE, direct_series


def _wrap_2pi(x: complex) -> complex:
    k = round(x.imag / (2 * math.pi))
    return complex(x.real, x.imag - 2 * math.pi * k)


@pytest.mark.parametrize("z, expected", LN_GAMMA_TABLE)
def test_ln_gamma_reference_values(z, expected):
    assert ln_gamma(z) == pytest.approx(expected, rel=1e-14, abs=1e-14)


def test_ln_gamma_real_part_at_one_plus_i_from_reflection():
    assert ln_gamma(1 + 1j).real == pytest.approx(0.5 * math.log(math.pi / math.sinh(math.pi)),
                                                  rel=1e-14)


@pytest.mark.parametrize("z", [0, -1, -7])
def test_ln_gamma_poles(z):
    with pytest.raises(PoleError):
        ln_gamma(z)


@pytest.mark.parametrize("re", np.linspace(-4.7, 4.3, 10))
@pytest.mark.parametrize("im", [-3.0, -0.4, 0.7, 2.5])
def test_ln_gamma_reflection(re, im):
    z = complex(re, im)
    lhs = ln_gamma(z) + ln_gamma(1 - z)
    rhs = cmath.log(math.pi / cmath.sin(math.pi * z))
    assert _wrap_2pi(lhs - rhs) == pytest.approx(0, abs=1e-12)


@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=30, allow_nan=False,
                          allow_infinity=False).filter(lambda z: z.imag != 0 or z.real > 0))
def test_ln_gamma_recurrence(z):
    step = ln_gamma(z + 1) - ln_gamma(z) - cmath.log(z)
    assert _wrap_2pi(step) == pytest.approx(0, abs=1e-12 * max(1.0, abs(ln_gamma(z))))


def test_series_at_origin_is_one():
    assert hyp2f1_series(Hyp2F1Args(3 + 1j, -2.5, 0.7j, 0)) == 1


def test_series_closed_form():
    assert hyp2f1_series(Hyp2F1Args(1, 1, 2, 0.5)) == pytest.approx(2 * math.log(2), rel=1e-15)


@pytest.mark.parametrize("params, expected", HYP2F1_TABLE)
def test_hyp2f1_reference_values(params, expected):
    assert hyp2f1_complex(*params) == pytest.approx(expected, rel=1e-12)


def test_series_refuses_outside_radius():
    with pytest.raises(DomainError):
        hyp2f1_series(Hyp2F1Args(1, 1, 2, 0.9))


def test_gamma_pole_rejected():
    with pytest.raises(PoleError):
        Hyp2F1Args(1, 1, -3, 0.1)


def test_series_cap_raises(monkeypatch):
    import dkpwell.special as sp
    monkeypatch.setattr(sp, "SERIES_MAX_TERMS", 5)
    with pytest.raises(ConvergenceError):
        sp.hyp2f1_series(Hyp2F1Args(0.5, 0.5, 1.5, 0.79))


def test_connection_terminating_alpha_zero():
    out = hyp2f1_connection_1mz(Hyp2F1Args(0, 2.3 - 1j, 0.4 + 2j, 1.0, log1m_z=-5000.0))
    assert out.to_complex() == 1


def test_connection_log_case_near_one():
    # 1 - z is taken from the float z actually passed, not the decimal 1e-6
    z = 1 - 1e-6
    w = 1 - z
    value = hyp2f1_connection_1mz(Hyp2F1Args(1, 1, 2, z)).to_complex()
    assert value == pytest.approx(-math.log(w) / z, rel=1e-13)
    assert value.real == pytest.approx(13.815524373459892297, rel=1e-13)


def test_connection_binomial_case_far_below_underflow():
    # F(a, b; b; z) = (1 - z)^(-a)
    a, b = 0.3 + 0.7j, 1.2 - 0.4j
    log_w = -13333.0
    out = hyp2f1_connection_1mz(Hyp2F1Args(a, b, b, 1.0, log1m_z=log_w))
    assert out.log_mag == pytest.approx((-a * log_w).real, rel=1e-13)
    assert cmath.exp(1j * out.phase) == pytest.approx(cmath.exp(1j * (-a * log_w).imag), abs=1e-9)


def test_connection_rejects_near_integer_s():
    with pytest.raises(DegenerateParameterError):
        hyp2f1_connection_1mz(Hyp2F1Args(0.5, 0.5, 2 + 1e-10, 0.95))


def test_connection_integer_s_negative():
    # s = -1: F(1, 2; 2; z) = 1/(1-z)
    z = 0.97
    assert hyp2f1_connection_1mz(Hyp2F1Args(1, 2, 2, z)).to_complex() == \
        pytest.approx(1 / (1 - z), rel=1e-12)


def test_w_power_folds_prefactor():
    args = Hyp2F1Args(0.4 + 0.2j, 0.9, 1.7 - 0.3j, 0.93)
    plain = hyp2f1_connection_1mz(args).to_complex()
    folded = hyp2f1_connection_1mz(args, w_power=1).to_complex()
    assert folded == pytest.approx((1 - 0.93) * plain, rel=1e-13)


def test_dispatcher_domain_error():
    with pytest.raises(DomainError):
        hyp2f1(Hyp2F1Args(1, 1, 2, 0.85 + 0.5j))


def test_overlap_series_vs_connection_closed_form():
    args = Hyp2F1Args(1, 1, 2, 0.5)
    a = LogComplex.from_complex(hyp2f1_series(args)).to_complex()
    b = hyp2f1_connection_1mz(args).to_complex()
    assert a == pytest.approx(b, rel=1e-10)
    assert a == pytest.approx(2 * math.log(2), rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(min_magnitude=0.5, max_magnitude=3, allow_nan=False,
                          allow_infinity=False),
       st.floats(0.65, 0.8))
def test_overlap_region_agrees(a, b, c, x):
    s = c - a - b
    if abs(s - round(s.real)) < 1e-3 or any(abs(c + k) < 0.3 for k in range(6)):
        return
    args = Hyp2F1Args(a, b, c, x)
    series = hyp2f1_series(args)
    conn = hyp2f1_connection_1mz(args).to_complex()
    assert conn == pytest.approx(series, rel=1e-10)


def test_gauss_summation():
    args = Hyp2F1Args(0.5, 0.7, 3, 1.0, log1m_z=float("-inf"))
    assert hyp2f1(args).to_complex() == pytest.approx(GAUSS_SUM_0507, rel=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_gauss_summation_random(seed):
    rng = np.random.default_rng(seed)
    a, b = complex(*rng.uniform(-2, 2, 2)), complex(*rng.uniform(-2, 2, 2))
    c = a + b + complex(rng.uniform(0.3, 3), rng.uniform(-1, 1))
    expected = gamma_ratio([c, c - a - b], [c - a, c - b]).to_complex()
    got = hyp2f1(Hyp2F1Args(a, b, c, 1.0, log1m_z=float("-inf"))).to_complex()
    assert got == pytest.approx(expected, rel=1e-9)


def _random_points(n, seed):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        a = complex(*rng.uniform(-3, 3, 2))
        b = complex(*rng.uniform(-3, 3, 2))
        c = complex(rng.uniform(0.5, 4), rng.uniform(-3, 3))
        r, th = 0.6 * math.sqrt(rng.uniform()), rng.uniform(0, 2 * math.pi)
        yield a, b, c, cmath.rect(r, th)


def test_derivative_against_finite_differences():
    h = 1e-6
    for a, b, c, z in _random_points(100, seed=7):
        f = lambda x: hyp2f1_complex(a, b, c, x)
        fd = (f(z + h) - f(z - h)) / (2 * h)
        exact = a * b / c * hyp2f1_complex(a + 1, b + 1, c + 1, z)
        assert fd == pytest.approx(exact, rel=1e-5, abs=1e-9)


def test_contiguous_relation():
    # c(c-1)(z-1) F(c-1) + c[c-1-(2c-a-b-1)z] F(c) + (c-a)(c-b) z F(c+1) = 0
    for a, b, c, z in _random_points(100, seed=11):
        z = 0.6 * z / abs(z)
        c = c + 1
        t1 = c * (c - 1) * (z - 1) * hyp2f1_complex(a, b, c - 1, z)
        t2 = c * (c - 1 - (2 * c - a - b - 1) * z) * hyp2f1_complex(a, b, c, z)
        t3 = (c - a) * (c - b) * z * hyp2f1_complex(a, b, c + 1, z)
        scale = abs(t1) + abs(t2) + abs(t3)
        assert abs(t1 + t2 + t3) <= 1e-9 * scale


def test_against_extended_precision_sample():
    # a light version of the 1000-point acceptance sweep
    for a, b, c, z in _random_points(25, seed=3):
        assert hyp2f1_complex(a, b, c, z) == pytest.approx(direct_series(a, b, c, z), rel=1e-10)
