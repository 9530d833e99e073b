import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dkpwell.logcomplex import LogComplex
from dkpwell.scattering import (
    PhysicalSetup,
    ThresholdError,
    amplitudes,
    coefficients,
    derive_params,
    find_resonances,
    parity_ratios,
    sweep,
    sweep_point,
    woods_saxon,
)
from dkpwell.square_well import SquareWellSetup, transmission_square
from oracles import ode_transmission


def test_setup_validation():
    with pytest.raises(ValueError):
        PhysicalSetup(a=0, r=0.1, eV0=1, E=2)
    with pytest.raises(ValueError):
        PhysicalSetup(a=1, r=0.1, eV0=-1, E=2)
    with pytest.raises(ValueError):
        PhysicalSetup(a=1, r=0.1, eV0=1, E=2, m=0)


def test_potential_profile():
    s = PhysicalSetup(a=2, r=1 / 3, eV0=3, E=2)
    assert s.potential(2.0) == pytest.approx(-1.5)
    assert s.potential(0.0) == pytest.approx(-3 / (1 + math.exp(-6)))
    assert woods_saxon(1e6, 2, 1e-4, 3) == 0.0  # no overflow warning turned error


def test_free_params():
    p = derive_params(PhysicalSetup(a=2, r=0.0003, eV0=0, E=2))
    assert p.nu == p.mu
    assert p.nu0 == 1
    assert p.alpha1 == 0
    assert p.beta1 == 1


def test_params_reference_point():
    p = derive_params(PhysicalSetup(a=2, r=0.0003, eV0=2.5, E=-2))
    assert p.k == pytest.approx(math.sqrt(3), rel=1e-14)
    assert p.mu == pytest.approx(0.0003j * math.sqrt(3), rel=1e-14)
    assert p.nu == pytest.approx(0.0003 * math.sqrt(0.75), rel=1e-14)
    assert p.nu.imag == 0
    assert p.nu0 == pytest.approx(math.sqrt(1 - (2 * 0.0003 * 2.5) ** 2), rel=1e-15)
    assert p.nu0.real == pytest.approx(0.99999888, abs=1e-8)


def test_lambda_value():
    p = derive_params(PhysicalSetup(a=2, r=1 / 3, eV0=1, E=2))
    assert p.lam == pytest.approx(0.99752738, abs=1e-8)
    assert p.log1m_lambda == pytest.approx(math.log(1 - p.lam), rel=1e-12)


def test_log1m_lambda_far_below_underflow():
    p = derive_params(PhysicalSetup(a=4, r=0.0003, eV0=1, E=2))
    assert p.log1m_lambda == pytest.approx(-4 / 0.0003, rel=1e-15)
    assert p.lam == 1.0


@pytest.mark.parametrize("E", [1.0, -1.0, 0.5])
def test_thresholds_rejected(E):
    # E = 0.5 with eV0 = 0.5 sits on E + eV0 = m
    with pytest.raises(ThresholdError):
        derive_params(PhysicalSetup(a=1, r=0.1, eV0=0.5, E=E))


@settings(max_examples=60, deadline=None)
@given(st.floats(-5, 5).filter(lambda e: abs(abs(e) - 1) > 1e-6), st.floats(0, 6))
def test_branch_conventions(E, V):
    if abs(abs(E + V) - 1) < 1e-6:
        return
    p = derive_params(PhysicalSetup(a=1, r=0.01, eV0=V, E=E))
    if abs(E) > 1:
        assert p.mu.real == 0 and p.mu.imag > 0
        assert p.k.real > 0
    else:
        assert p.mu.real > 0 and p.mu.imag == 0
    assert p.nu.real >= 0


def test_free_amplitudes_closed_form():
    p = derive_params(PhysicalSetup(a=1, r=0.05, eV0=0, E=1.7))
    amps = amplitudes(p)
    w_pow = LogComplex.exp(-2 * p.mu * p.log1m_lambda).to_complex()
    assert amps.F1.to_complex() == pytest.approx(1, abs=1e-14)
    assert amps.F5.to_complex() == pytest.approx(-p.mu, rel=1e-12)
    assert (amps.F2 / amps.F1).to_complex() == pytest.approx(w_pow, rel=1e-12)
    assert (amps.F6 / amps.F5).to_complex() == pytest.approx(-w_pow, rel=1e-12)


def test_half_lambda_structure():
    # a/r tiny puts lambda at 1/2: F5 = -(mu + nu)/2 F1 + (alpha1 beta1 / gamma1)/4 F3
    p = derive_params(PhysicalSetup(a=1e-9, r=1.0, eV0=0.3, E=1.5))
    amps = amplitudes(p)
    assert p.lam == pytest.approx(0.5, abs=1e-9)
    lhs = amps.F5.to_complex()
    rhs = (-(p.mu + p.nu) / 2 * amps.F1.to_complex()
           + p.alpha1 * p.beta1 / p.gamma1 / 4 * amps.F3.to_complex())
    assert lhs == pytest.approx(rhs, rel=1e-7)
    assert cmath.isfinite(lhs)


def test_pure_phase_of_inner_factor():
    p = derive_params(PhysicalSetup(a=4, r=0.0003, eV0=4, E=2))
    assert p.nu.real == 0
    assert (-2 * p.nu * p.log1m_lambda).real == 0


@pytest.mark.parametrize("E", np.linspace(1.01, 6, 7))
def test_free_particle(E):
    R, T, _ = coefficients(PhysicalSetup(a=4, r=0.0003, eV0=0, E=float(E)))
    assert T == pytest.approx(1, abs=1e-12)
    assert R == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("args", [(2, 0.3, 3.5, -2.0), (1, 0.1, 1.2, 1.5), (2, 0.05, 6.0, -2.0),
                                  (1, 0.2, 2.5, -1.2)])
def test_against_direct_integration(args):
    R_ode, T_ode = ode_transmission(*args)
    R, T, _ = coefficients(PhysicalSetup(*args))
    assert T == pytest.approx(T_ode, abs=1e-8)
    assert R == pytest.approx(R_ode, abs=1e-8)


@settings(max_examples=80, deadline=None)
@given(st.floats(1.05, 8), st.sampled_from([-1, 1]), st.floats(0, 8),
       st.sampled_from([0.0003, 0.01, 0.2]), st.sampled_from([1.0, 2.0, 4.0]))
def test_unitarity_and_positivity(absE, sign, V, r, a):
    E = sign * absE
    if abs(abs(E + V) - 1) < 1e-3:
        return
    R, T, _ = coefficients(PhysicalSetup(a=a, r=r, eV0=V, E=E))
    assert R >= 0 and T >= 0
    if abs(E + V) > 1:
        assert R + T == pytest.approx(1, abs=1e-8)


def test_square_well_limit():
    a, V = 2.0, 3.5
    sq = SquareWellSetup(a, V)
    for E in np.linspace(-6, -1.1, 15):
        if abs(abs(E + V) - 1) < 1e-3:
            continue
        T = coefficients(PhysicalSetup(a, 1e-5 * a, V, float(E)))[1]
        assert T == pytest.approx(transmission_square(sq, float(E)), abs=1e-3)


def test_square_well_limit_is_first_order_in_r():
    sq = SquareWellSetup(2.0, 3.5)
    gap = lambda r: coefficients(PhysicalSetup(2.0, r, 3.5, -1.1))[1] - transmission_square(sq, -1.1)
    assert gap(2e-4) / gap(2e-5) == pytest.approx(10, rel=1e-2)


def test_parity_factors_are_unimodular_when_both_momenta_real():
    p = derive_params(PhysicalSetup(a=2, r=0.01, eV0=4, E=1.5))
    even, odd = parity_ratios(amplitudes(p))
    assert even.log_mag == pytest.approx(0, abs=1e-9)
    assert odd.log_mag == pytest.approx(0, abs=1e-9)


def test_sweep_point_flags():
    base = PhysicalSetup(a=2, r=0.0003, eV0=1, E=-2)
    assert sweep_point(base, 1.0).flags == ("skipped-threshold",)
    assert sweep_point(base.with_(E=0.5), 0.5).flags == ("bound-regime",)
    row = sweep_point(base.with_(eV0=4), 4.0)
    assert row.flags == ()
    assert row.unitarity_residual == pytest.approx(0, abs=1e-8)


def test_single_step_sweep_matches_direct_call():
    s = PhysicalSetup(a=2, r=0.0003, eV0=0, E=-2)
    rows = sweep(s, "eV0", 4.5, 4.5, 1)
    R, T, _ = coefficients(s.with_(eV0=4.5))
    assert len(rows) == 1
    assert (rows[0].R, rows[0].T) == (R, T)


def test_sweep_parallel_is_order_preserving():
    s = PhysicalSetup(a=2, r=0.0003, eV0=0, E=-2)
    serial = sweep(s, "eV0", 0, 10, 60)
    parallel = sweep(s, "eV0", 0, 10, 60, jobs=2)
    assert [(r.x, r.R, r.T, r.flags) for r in serial] == \
        [(r.x, r.R, r.T, r.flags) for r in parallel]


def test_sweep_rejects_unknown_variable():
    with pytest.raises(ValueError):
        sweep(PhysicalSetup(1, 0.1, 1, 2), "a", 0, 1, 3)


def test_resonances_monotone_table_is_empty():
    xs = np.linspace(0, 1, 50)
    assert find_resonances(xs, xs) == []


def test_resonances_recover_injected_peak():
    xs = np.linspace(0, 10, 201)
    Ts = 0.1 + 0.85 * np.exp(-((xs - 6.3217) / 0.4) ** 2)
    res = find_resonances(xs, Ts)
    assert len(res) == 1
    assert res[0].x == pytest.approx(6.3217, abs=2e-3)
    assert res[0].T == pytest.approx(0.95, abs=1e-3)


def test_resonances_skip_nan_neighbours():
    Ts = np.array([0.1, np.nan, 0.9, 0.2, 0.95, 0.3])
    res = find_resonances(np.arange(6.0), Ts)
    assert [r.index for r in res] == [4]
