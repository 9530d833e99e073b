"""Bound states of the well and the supercritical point.

Two quantization conditions are available:

``"parity"`` (default)
    The solution that decays as ``z -> +inf`` is ``y**mu (1-y)**nu F2`` with
    ``y`` the Fermi profile; at the centre ``y = lambda`` its value is
    proportional to ``F2`` and its slope to ``F6``.  Even states need
    ``F6 = 0``, odd states ``F2 = 0``.  Both quantities are real once the common
    prefactor ``lambda**mu (1-lambda)**nu`` is restored, so roots are bracketed
    by sign changes.

``"unitarity"``
    The literal condition ``1 = |lambda^(2mu)|^2 (|F6/F5|^2 + |F2/F1|^2) / 2``
    continued to ``|E| < m``.  Kept for comparison; its roots do not coincide
    with the square-well spectrum in the sharp-wall limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .logcomplex import LogComplex, logsumexp2
from .scattering import (
    DEFAULT_OFFSET,
    PhysicalSetup,
    ScatteringPole,
    amplitudes,
    decaying_pair,
    derive_params,
    nudged,
    parity_ratios,
)

ROOT_TOL = 1e-10
DEFAULT_GRID = 2000
PROBE_TOL = 1e-2
TANGENT_TOL = 1e-8
CONDITIONS = ("parity", "unitarity")


class NoCoalescenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class MatchResidual:
    E: float
    g: float


@dataclass(frozen=True)
class BoundRoot:
    E: float
    parity: str  # "even", "odd", or "-" for the unitarity condition
    residual: float
    nudged: bool = False


def _bound_params(setup: PhysicalSetup):
    if not abs(setup.E) < setup.m:
        raise ValueError(f"bound states need |E| < m, got E = {setup.E}")
    return derive_params(setup)


def matching_residual(setup: PhysicalSetup) -> MatchResidual:
    """g(E) = |lambda^(2mu)|^2 (|F6/F5|^2 + |F2/F1|^2) / 2 - 1.

    A vanishing F5 or F1 is reported as ``+inf``.
    """

    def run(s):
        params = _bound_params(s)
        amps = amplitudes(params)
        try:
            even, odd = parity_ratios(amps)
        except ScatteringPole:
            return math.inf
        log_sum = logsumexp2(even.abs2_log(), odd.abs2_log()) - math.log(2.0)
        if log_sum > 700:
            return math.inf
        return math.expm1(log_sum)

    g, _ = nudged(setup, run)
    return MatchResidual(setup.E, g)


def centre_values(setup: PhysicalSetup) -> tuple[LogComplex, LogComplex]:
    """Value and ``-r`` times slope at ``z = 0`` of the decaying solution."""
    params = _bound_params(setup)
    F2, _, F6 = decaying_pair(params)
    pref = LogComplex.exp(params.mu * params.log_lambda + params.nu * params.log1m_lambda)
    return pref * F2, pref * F6


def parity_residuals(setup: PhysicalSetup) -> tuple[float, float]:
    """``(even, odd)`` residuals, each in [-1, 1].

    The centre value ``u`` and scaled slope ``v`` are normalised together, with
    ``u`` weighted by ``|mu| + |nu|`` so both enter on the same footing.
    """

    def run(s):
        params = _bound_params(s)
        F2, _, F6 = decaying_pair(params)
        pref = LogComplex.exp(params.mu * params.log_lambda + params.nu * params.log1m_lambda)
        u, v = pref * F2, pref * F6
        log_s0 = math.log(abs(params.mu) + abs(params.nu))
        lu = u.log_mag + log_s0
        norm = 0.5 * logsumexp2(2 * lu, 2 * v.log_mag)
        odd = 0.0 if u.is_zero else math.exp(lu - norm) * math.cos(u.phase)
        even = 0.0 if v.is_zero else math.exp(v.log_mag - norm) * math.cos(v.phase)
        return even, odd

    (even, odd), _ = nudged(setup, run)
    return even, odd


def _residual_fn(template: PhysicalSetup, condition: str):
    if condition == "parity":
        def f(E):
            return parity_residuals(template.with_(E=E))
    elif condition == "unitarity":
        def f(E):
            return (matching_residual(template.with_(E=E)).g,)
    else:
        raise ValueError(f"unknown condition {condition!r}; choose from {CONDITIONS}")
    return f


def _labels(condition: str) -> tuple[str, ...]:
    return ("even", "odd") if condition == "parity" else ("-",)


def _bisect(f, lo: float, hi: float, flo: float, tol: float = ROOT_TOL) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 80):
    """Minimiser of a unimodal ``f`` on [lo, hi]; returns ``(x, f(x))``."""
    x1 = hi - _GOLD * (hi - lo)
    x2 = lo + _GOLD * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo < tol:
            break
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLD * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLD * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 < f2 else (x2, f2)


def _finite(x) -> bool:
    return x is not None and math.isfinite(x)


def find_spectrum(template: PhysicalSetup, grid_size: int = DEFAULT_GRID,
                  offset: float = DEFAULT_OFFSET, condition: str = "parity",
                  window: tuple[float, float] | None = None,
                  hints=(), probe_tol: float = PROBE_TOL) -> list[BoundRoot]:
    """Bound energies at the depth of ``template`` (its ``E`` is ignored).

    A uniform scan over ``(-m + offset, m - offset)`` brackets sign changes,
    each refined by bisection to ``ROOT_TOL``.  Local minima of ``|residual|``
    below ``probe_tol`` are searched for a hidden pair of roots or a
    tangential (double) root.  ``hints`` adds a fine patch of grid points
    around each given energy.
    """
    if grid_size < 100:
        raise ValueError("grid_size must be >= 100")
    m, V = template.m, template.eV0
    lo, hi = -m + offset * m, m - offset * m
    if window is not None:
        lo, hi = max(lo, window[0]), min(hi, window[1])
    grid = np.linspace(lo, hi, grid_size)
    if len(hints):
        h = (hi - lo) / (grid_size - 1)
        patches = [np.linspace(e - 2 * h, e + 2 * h, 41) for e in hints]
        grid = np.unique(np.concatenate([grid, *patches]))
        grid = grid[(grid >= lo) & (grid <= hi)]
    # inner-momentum threshold |E + eV0| = m
    keep = np.abs(np.abs(grid + V) - m) >= offset * m
    grid = grid[keep]

    f = _residual_fn(template, condition)
    labels = _labels(condition)
    values = []
    for E in grid:
        try:
            values.append(f(float(E)))
        except (ArithmeticError, ValueError):
            values.append((math.nan,) * len(labels))
    values = np.array(values, dtype=float)

    roots: list[BoundRoot] = []
    for j, label in enumerate(labels):
        comp = lambda E, j=j: f(E)[j]
        col = values[:, j]
        found = []
        for i in range(len(grid) - 1):
            a, b = col[i], col[i + 1]
            if not (_finite(a) and _finite(b)):
                continue
            if a == 0:
                found.append(float(grid[i]))
            elif a * b < 0 and not (math.isinf(a) or math.isinf(b)):
                found.append(_bisect(comp, float(grid[i]), float(grid[i + 1]), a))
        # hidden pairs / tangencies between samples
        for i in range(1, len(grid) - 1):
            a, b, c = col[i - 1], col[i], col[i + 1]
            if not (_finite(a) and _finite(b) and _finite(c)):
                continue
            if not (abs(b) <= abs(a) and abs(b) <= abs(c) and abs(b) < probe_tol):
                continue
            if a * b <= 0 or b * c <= 0:
                continue
            s = 1.0 if b > 0 else -1.0
            x_lo, x_hi = float(grid[i - 1]), float(grid[i + 1])
            E_star, val = _golden_min(lambda E: s * comp(E), x_lo, x_hi)
            if val < 0:
                found.append(_bisect(comp, x_lo, E_star, a))
                found.append(_bisect(comp, E_star, x_hi, s * val))
            elif val < TANGENT_TOL:
                found.append(E_star)
        for E in sorted(found):
            if roots and roots[-1].parity == label and abs(roots[-1].E - E) < 10 * ROOT_TOL:
                continue
            roots.append(BoundRoot(E, label, comp(E)))
    roots.sort(key=lambda r: r.E)
    return roots


@dataclass
class SpectrumCurve:
    eV0_grid: list[float]
    roots: list[list[BoundRoot]]
    flags: list[tuple[str, ...]] = field(default_factory=list)

    def energies(self) -> list[list[float]]:
        return [[r.E for r in depth] for depth in self.roots]

    def rows(self):
        """``(eV0, root_index, root, flags)`` in depth-then-energy order."""
        for V, depth, fl in zip(self.eV0_grid, self.roots, self.flags):
            for idx, root in enumerate(depth):
                yield V, idx, root, fl


MAX_SLOPE = 1.0


def track_spectrum(template: PhysicalSetup, lo: float, hi: float, steps: int,
                   grid_size: int = DEFAULT_GRID, offset: float = DEFAULT_OFFSET,
                   condition: str = "parity", warm_start: bool = True) -> SpectrumCurve:
    """Spectrum on a uniform depth grid, each depth seeded by the previous one.

    Flags per depth: ``count-change`` when the number of roots differs from
    the previous depth, ``jump`` when a root moved more than ``10 * dV *
    MAX_SLOPE`` from its nearest predecessor, ``error`` when the scan failed.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    depths = np.linspace(lo, hi, steps)
    if np.any(np.diff(depths) < 0):
        raise ValueError("depth range must be increasing")
    dV = (hi - lo) / max(steps - 1, 1)
    curve = SpectrumCurve([], [], [])
    prev: list[BoundRoot] | None = None
    for V in depths:
        setup = template.with_(eV0=float(V))
        hints = [r.E for r in prev] if (warm_start and prev) else ()
        flags = []
        try:
            roots = find_spectrum(setup, grid_size, offset, condition, hints=hints)
        except (ArithmeticError, ValueError):
            roots, flags = [], ["error"]
        if prev is not None:
            if len(roots) != len(prev):
                flags.append("count-change")
            if prev and roots:
                before = np.array([r.E for r in prev])
                moved = max(np.min(np.abs(before - r.E)) for r in roots)
                if moved > 10 * dV * MAX_SLOPE:
                    flags.append("jump")
        curve.eV0_grid.append(float(V))
        curve.roots.append(roots)
        curve.flags.append(tuple(flags))
        prev = roots
    return curve


@dataclass(frozen=True)
class CriticalPoint:
    eV0_cr: float
    E_cr: float
    method: str  # "root-merge", "count-drop" or "threshold"
    bracket: tuple[float, float]
    a: float
    r: float
    m: float

    def record(self) -> dict:
        return {
            "eV0_cr": self.eV0_cr,
            "E_cr": self.E_cr,
            "method": self.method,
            "bracket": list(self.bracket),
            "r": self.r,
            "a": self.a,
            "m": self.m,
        }


def _band_roots(template: PhysicalSetup, V: float, band: float, band_grid: int,
                offset: float) -> list[BoundRoot]:
    m = template.m
    return find_spectrum(template.with_(eV0=V), band_grid, offset,
                         window=(-m + offset * m, -m + band * m))


def _merge_pair(roots: list[BoundRoot]):
    """Closest neighbouring pair of equal parity."""
    best = None
    for r0, r1 in zip(roots[:-1], roots[1:]):
        if r0.parity != r1.parity:
            continue
        gap = r1.E - r0.E
        if best is None or gap < best[0]:
            best = (gap, r0, r1)
    return best


def _tangency(template: PhysicalSetup, V_lo: float, V_hi: float, pair, tol: float):
    """Bisect the depth at which the pair's residual extremum touches zero."""
    _, r0, r1 = pair
    j = 0 if r0.parity == "even" else 1
    pad = max(r1.E - r0.E, 1e-6)
    # the pair closes inwards, so its interior extremum stays in [r0.E, r1.E]
    E_lo, E_hi = r0.E, r1.E

    def extremum(V):
        comp = lambda E: parity_residuals(template.with_(eV0=V, E=E))[j]
        outside = comp(r0.E - pad)
        s = 1.0 if outside > 0 else -1.0
        # between the roots the residual has the opposite sign to outside
        E_star, val = _golden_min(lambda E: s * comp(E), E_lo, E_hi)
        return E_star, val  # val < 0 while the pair exists

    E_star, val = extremum(V_lo)
    if val >= 0:
        return None
    while V_hi - V_lo > tol:
        V_mid = 0.5 * (V_lo + V_hi)
        E_mid, val = extremum(V_mid)
        if val < 0:
            V_lo, E_star = V_mid, E_mid
        else:
            V_hi = V_mid
    return V_lo, E_star


def find_critical(template: PhysicalSetup, bracket: tuple[float, float],
                  reading: str = "coalescence", band: float = 0.2,
                  depth_steps: int = 200, band_grid: int = 400,
                  tol: float = 1e-5, offset: float = DEFAULT_OFFSET) -> CriticalPoint:
    """Depth at which the well turns supercritical.

    ``reading="coalescence"``: the antiparticle branch meets the lowest
    particle branch and both leave the spectrum.  The count of roots in the
    band ``(-m, -m + band*m)`` is scanned over the bracket; a drop by two is
    bisected to ``tol`` and then refined as the depth where the residual
    extremum between the two roots touches zero.

    ``reading="threshold"``: a root enters or leaves through ``E = -m``; the
    sign of the residuals just above ``-m`` is bisected in depth.
    """
    lo, hi = bracket
    if not lo < hi:
        raise ValueError("bracket must be increasing")
    m = template.m
    base = dict(bracket=(lo, hi), a=template.a, r=template.r, m=m)

    if reading == "threshold":
        E_edge = -m * (1.0 - 1e-12)

        def sign(V):
            even, odd = parity_residuals(template.with_(eV0=V, E=E_edge))
            return (even > 0) == (odd > 0)

        Vs = np.linspace(lo, hi, depth_steps + 1)
        s0 = sign(float(Vs[0]))
        for V0_, V1_ in zip(Vs[:-1], Vs[1:]):
            if sign(float(V1_)) != s0:
                a_, b_ = float(V0_), float(V1_)
                while b_ - a_ > min(tol, 1e-10):
                    mid = 0.5 * (a_ + b_)
                    if sign(mid) == s0:
                        a_ = mid
                    else:
                        b_ = mid
                return CriticalPoint(0.5 * (a_ + b_), -m, "threshold", **base)
        raise NoCoalescenceError(f"no root crosses E = -m for eV0 in [{lo}, {hi}]")

    if reading != "coalescence":
        raise ValueError(f"unknown reading {reading!r}")

    count = lambda V: len(_band_roots(template, V, band, band_grid, offset))
    Vs = np.linspace(lo, hi, depth_steps + 1)
    counts = [count(float(V)) for V in Vs]
    for i in range(depth_steps):
        if counts[i] - counts[i + 1] >= 2:
            break
    else:
        raise NoCoalescenceError(f"no pair of bound states merges for eV0 in [{lo}, {hi}]")

    n_before = counts[i]
    V_lo, V_hi = float(Vs[i]), float(Vs[i + 1])
    while V_hi - V_lo > tol:
        mid = 0.5 * (V_lo + V_hi)
        if count(mid) >= n_before:
            V_lo = mid
        else:
            V_hi = mid

    roots = _band_roots(template, V_lo, band, band_grid, offset)
    pair = _merge_pair(roots)
    if pair is None:
        return CriticalPoint(0.5 * (V_lo + V_hi), math.nan, "count-drop", **base)
    refined = _tangency(template, V_lo, V_hi, pair, tol=1e-10)
    if refined is None:
        _, r0, r1 = pair
        return CriticalPoint(0.5 * (V_lo + V_hi), 0.5 * (r0.E + r1.E), "count-drop", **base)
    return CriticalPoint(refined[0], refined[1], "root-merge", **base)
