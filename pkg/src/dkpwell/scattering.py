"""Scattering off the Woods-Saxon well: kinematics, amplitudes, R and T.

Conventions: hbar = c = 1, energies in units of ``m`` unless ``m`` is set
otherwise.  ``eV0 >= 0`` is the depth, so the potential energy is
``-eV0 / (1 + exp((|z| - a)/r))``.

The four hypergeometric functions are evaluated at ``lambda = 1/(1+exp(-a/r))``,
the value of the Fermi profile at the centre of the well.  For the sharp walls
of interest ``1 - lambda ~ exp(-a/r)`` is far below double range, so all of them
are carried as :class:`LogComplex` with ``log(1 - lambda)`` supplied explicitly.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .logcomplex import LogComplex
from .special import (
    DegenerateParameterError,
    Hyp2F1Args,
    SpecialFunctionError,
    hyp2f1,
    hyp2f1_connection_1mz,
)

DEFAULT_OFFSET = 1e-6
NUDGE_REL = 1e-10
MAX_NUDGES = 16
POLE_LOG_MAG = math.log(1e-300)
UNITARITY_FLAG_TOL = 1e-6


class ThresholdError(ValueError):
    """Energy sits exactly on |E| = m or |E + eV0| = m."""


class AmplitudeError(SpecialFunctionError):
    """A hypergeometric evaluation failed; ``which`` names the amplitude."""

    def __init__(self, which: str, cause: Exception):
        super().__init__(f"{which}: {cause}")
        self.which = which
        self.cause = cause


class ScatteringPole(SpecialFunctionError):
    pass


@dataclass(frozen=True)
class PhysicalSetup:
    a: float
    r: float
    eV0: float
    E: float
    m: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"m must be positive, got {self.m}")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")
        if not self.eV0 >= 0:
            raise ValueError(f"eV0 is a depth and must be >= 0, got {self.eV0}")

    def with_(self, **changes) -> PhysicalSetup:
        return replace(self, **changes)

    def potential(self, z):
        return woods_saxon(z, self.a, self.r, self.eV0)


def woods_saxon(z, a: float, r: float, eV0: float):
    """Potential energy of the well, ``-eV0 / (1 + exp((|z| - a)/r))``."""
    x = (np.abs(np.asarray(z, dtype=float)) - a) / r
    # expit(-x) without overflow warnings for |x| >> 1
    with np.errstate(over="ignore"):
        out = -eV0 / (1.0 + np.exp(x))
    return out if out.ndim else float(out)


def _root(x: complex) -> complex:
    """Square root with Re >= 0, and Im > 0 on the imaginary axis."""
    s = cmath.sqrt(x)
    if s.real < 0 or (s.real == 0 and s.imag < 0):
        s = -s
    return s


@dataclass(frozen=True)
class KinematicParams:
    setup: PhysicalSetup
    lam: float
    log_lambda: float
    log1m_lambda: float
    mu: complex
    nu: complex
    nu0: complex
    k: complex
    p: complex
    alpha1: complex
    beta1: complex
    gamma1: complex
    alpha2: complex
    beta2: complex
    gamma2: complex

    @property
    def scattering(self) -> bool:
        return abs(self.setup.E) > self.setup.m


def derive_params(setup: PhysicalSetup) -> KinematicParams:
    m, a, r, V, E = setup.m, setup.a, setup.r, setup.eV0, setup.E
    if (m - E) * (m + E) == 0 or (m - E - V) * (m + E + V) == 0:
        raise ThresholdError(f"E = {E} sits on a threshold (m = {m}, eV0 = {V})")

    mu = _root(r * r * (m - E) * (m + E))
    nu = _root(r * r * (m - (E + V)) * (m + (E + V)))
    nu0 = _root((1.0 - 2.0 * r * V) * (1.0 + 2.0 * r * V))

    log_lambda = -math.log1p(math.exp(-a / r))
    log1m_lambda = -a / r + log_lambda

    # (1 - nu0)/2 without cancellation
    half = 2.0 * (r * V) ** 2 / (1.0 + nu0)
    # alpha = s + 1/2 - nu0/2, beta = s + 1/2 + nu0/2
    alpha1 = (-mu + nu) + half
    beta1 = (-mu + nu + 0.5) + 0.5 * nu0
    alpha2 = (mu + nu) + half
    beta2 = (mu + nu + 0.5) + 0.5 * nu0
    return KinematicParams(
        setup=setup,
        lam=math.exp(log_lambda),
        log_lambda=log_lambda,
        log1m_lambda=log1m_lambda,
        mu=mu,
        nu=nu,
        nu0=nu0,
        k=-1j * mu / r,
        p=-1j * nu / r,
        alpha1=alpha1,
        beta1=beta1,
        gamma1=1.0 - 2.0 * mu,
        alpha2=alpha2,
        beta2=beta2,
        gamma2=1.0 + 2.0 * mu,
    )


@dataclass(frozen=True)
class AmplitudeSet:
    F1: LogComplex
    F2: LogComplex
    F3: LogComplex
    F4: LogComplex
    F5: LogComplex
    F6: LogComplex
    lambda_pow_2mu: LogComplex


def _f(which: str, a, b, c, params: KinematicParams, w_power: int = 0) -> LogComplex:
    try:
        args = Hyp2F1Args(a, b, c, 1.0, log1m_z=params.log1m_lambda)
        if w_power:
            return hyp2f1_connection_1mz(args, w_power=w_power)
        return hyp2f1(args)
    except SpecialFunctionError as exc:
        if isinstance(exc, DegenerateParameterError):
            raise
        raise AmplitudeError(which, exc) from exc


def _derivative_combination(sign: int, f_plain: LogComplex, wf_shift: LogComplex,
                            a, b, c, params: KinematicParams) -> LogComplex:
    # [+-mu(1 - lambda) - lambda nu] F + lambda (a b / c) [(1 - lambda) F_shift]
    one_minus = math.exp(params.log1m_lambda)
    lead = sign * params.mu * one_minus - params.lam * params.nu
    return f_plain * lead + wf_shift * (params.lam * a * b / c)


def decaying_pair(params: KinematicParams) -> tuple[LogComplex, LogComplex, LogComplex]:
    """F2, F4 and F6: the branch built on ``y**mu`` and its derivative."""
    p = params
    F2 = _f("F2", p.alpha2, p.beta2, p.gamma2, p)
    wF4 = _f("F4", p.alpha2 + 1, p.beta2 + 1, p.gamma2 + 1, p, w_power=1)
    F6 = _derivative_combination(+1, F2, wF4, p.alpha2, p.beta2, p.gamma2, p)
    return F2, wF4 / LogComplex(p.log1m_lambda), F6


def amplitudes(params: KinematicParams) -> AmplitudeSet:
    p = params
    F1 = _f("F1", p.alpha1, p.beta1, p.gamma1, p)
    wF3 = _f("F3", p.alpha1 + 1, p.beta1 + 1, p.gamma1 + 1, p, w_power=1)
    F2, F4, F6 = decaying_pair(p)
    F5 = _derivative_combination(-1, F1, wF3, p.alpha1, p.beta1, p.gamma1, p)
    return AmplitudeSet(
        F1=F1, F2=F2, F3=wF3 / LogComplex(p.log1m_lambda), F4=F4, F5=F5, F6=F6,
        lambda_pow_2mu=LogComplex.exp(2.0 * p.mu * p.log_lambda),
    )


def parity_ratios(amps: AmplitudeSet) -> tuple[LogComplex, LogComplex]:
    """``lambda^(2mu) F6/F5`` and ``lambda^(2mu) F2/F1``.

    In the scattering regime these are the unimodular even/odd channel
    factors; R and T are a quarter of the squared sum and difference.
    """
    for name, f in (("F5", amps.F5), ("F1", amps.F1)):
        if f.log_mag < POLE_LOG_MAG:
            raise ScatteringPole(f"{name} vanishes (|{name}| < 1e-300)")
    lp = amps.lambda_pow_2mu
    return lp * amps.F6 / amps.F5, lp * amps.F2 / amps.F1


def _quarter_abs2(x: LogComplex) -> float:
    if x.is_zero:
        return 0.0
    return math.exp(2.0 * x.log_mag - 2.0 * math.log(2.0))


def _require_scattering(params: KinematicParams):
    if not params.scattering:
        raise ValueError("R and T are defined for |E| > m only")


def reflection(amps: AmplitudeSet, params: KinematicParams) -> float:
    _require_scattering(params)
    even, odd = parity_ratios(amps)
    return _quarter_abs2(even + odd)


def transmission(amps: AmplitudeSet, params: KinematicParams) -> float:
    _require_scattering(params)
    even, odd = parity_ratios(amps)
    return _quarter_abs2(even - odd)


def nudged(setup: PhysicalSetup, func):
    """Call ``func(setup)``; on a degenerate hypergeometric nudge E and retry.

    Returns ``(result, was_nudged)``.
    """
    current = setup
    for attempt in range(MAX_NUDGES + 1):
        try:
            return func(current), attempt > 0
        except DegenerateParameterError:
            if attempt == MAX_NUDGES:
                raise
            step = NUDGE_REL * max(abs(setup.E), setup.m) * 2**attempt
            current = setup.with_(E=setup.E + step)
    raise AssertionError("unreachable")


def coefficients(setup: PhysicalSetup) -> tuple[float, float, bool]:
    """``(R, T, nudged)`` at one scattering point."""

    def run(s):
        params = derive_params(s)
        amps = amplitudes(params)
        return reflection(amps, params), transmission(amps, params)

    (R, T), was_nudged = nudged(setup, run)
    return R, T, was_nudged


@dataclass(frozen=True)
class SweepRow:
    x: float
    E: float
    eV0: float
    R: float
    T: float
    flags: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict)

    @property
    def unitarity_residual(self) -> float:
        return self.R + self.T - 1.0


def near_threshold(E: float, eV0: float, m: float, offset: float) -> bool:
    tol = offset * m
    return abs(abs(E) - m) < tol or abs(abs(E + eV0) - m) < tol


def sweep_point(setup: PhysicalSetup, x: float, offset: float = DEFAULT_OFFSET) -> SweepRow:
    nan = float("nan")
    E, V, m = setup.E, setup.eV0, setup.m
    if near_threshold(E, V, m, offset):
        return SweepRow(x, E, V, nan, nan, ("skipped-threshold",))
    if abs(E) < m:
        return SweepRow(x, E, V, nan, nan, ("bound-regime",))
    try:
        R, T, was_nudged = coefficients(setup)
    except ScatteringPole:
        return SweepRow(x, E, V, nan, nan, ("pole",))
    except (SpecialFunctionError, OverflowError, ValueError):
        return SweepRow(x, E, V, nan, nan, ("error",))
    flags = ["nudged"] if was_nudged else []
    if abs(R + T - 1.0) > UNITARITY_FLAG_TOL:
        flags.append("unitarity")
    return SweepRow(x, E, V, R, T, tuple(flags))


def sweep_grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    return np.linspace(lo, hi, steps)


def _row_for(args):
    template, variable, x, offset = args
    setup = template.with_(**{variable: float(x)})
    return sweep_point(setup, float(x), offset)


def sweep(template: PhysicalSetup, variable: str, lo: float, hi: float, steps: int,
          offset: float = DEFAULT_OFFSET, jobs: int = 1) -> list[SweepRow]:
    """Uniform sweep of ``E`` or ``eV0``; rows come back in grid order."""
    if variable not in ("E", "eV0"):
        raise ValueError(f"can only sweep E or eV0, not {variable!r}")
    tasks = [(template, variable, x, offset) for x in sweep_grid(lo, hi, steps)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_row_for, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [_row_for(t) for t in tasks]


@dataclass(frozen=True)
class Resonance:
    x: float
    T: float
    index: int


def find_resonances(xs, Ts, threshold: float = 0.5) -> list[Resonance]:
    """Local maxima of a sorted table with T above ``threshold``.

    Each maximum is refined by the vertex of the parabola through it and its
    two neighbours; NaN rows break the neighbourhood.
    """
    xs = np.asarray(xs, dtype=float)
    Ts = np.asarray(Ts, dtype=float)
    out = []
    for i in range(1, len(xs) - 1):
        t0, t1, t2 = Ts[i - 1], Ts[i], Ts[i + 1]
        if not (np.isfinite(t0) and np.isfinite(t1) and np.isfinite(t2)):
            continue
        if not (t1 > t0 and t1 >= t2 and t1 > threshold):
            continue
        x0, x1, x2 = xs[i - 1], xs[i], xs[i + 1]
        d0, d2 = x0 - x1, x2 - x1
        # parabola through (d0, t0), (0, t1), (d2, t2)
        s0, s2 = (t0 - t1) / d0, (t2 - t1) / d2
        curv = (s2 - s0) / (d2 - d0)
        slope = s0 - curv * d0
        if curv < 0:
            dx = -slope / (2 * curv)
            dx = min(max(dx, d0), d2)
            out.append(Resonance(x1 + dx, t1 + slope * dx + curv * dx * dx, i))
        else:
            out.append(Resonance(x1, t1, i))
    return out
