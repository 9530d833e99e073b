"""Sharp-edged limit of the well, solved from scratch by wave matching.

Nothing here touches the hypergeometric machinery: transmission comes from
the textbook closed form and, independently, from a 4x4 linear solve of the
continuity conditions at ``z = -a`` and ``z = +a``; bound energies are roots
of the even/odd matching conditions found by bisection.  These serve as the
reference the Woods-Saxon solver must approach as ``r -> 0``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SquareWellSetup:
    a: float
    V0: float
    m: float = 1.0

    def __post_init__(self):
        if not (self.a > 0 and self.m > 0 and self.V0 >= 0):
            raise ValueError(f"invalid square well {self}")


def _momenta(setup: SquareWellSetup, E: float) -> tuple[complex, complex]:
    m, V = setup.m, setup.V0
    k = cmath.sqrt((E - m) * (E + m))
    p = cmath.sqrt((E + V - m) * (E + V + m))
    return k, p


def transmission_square(setup: SquareWellSetup, E: float) -> float:
    """T = 1 / (1 + (k^2 - p^2)^2 / (4 k^2 p^2) sin^2(2 p a)).

    With p imaginary the same expression continues to sinh.
    """
    m, V = setup.m, setup.V0
    if abs(E) <= m:
        raise ValueError("transmission needs |E| > m")
    if (E + V - m) * (E + V + m) == 0:
        raise ValueError("E + V0 = +-m is a threshold of the inner momentum")
    k2 = (E - m) * (E + m)
    p2 = (E + V - m) * (E + V + m)
    p = cmath.sqrt(p2)
    s = cmath.sin(2 * p * setup.a)
    denom = 1 + (k2 - p2) ** 2 / (4 * k2 * p2) * s * s
    return 1.0 / denom.real


def transmission_matching(setup: SquareWellSetup, E: float) -> float:
    """T from solving the continuity equations for (r, C, D, t) directly.

    Left: e^{ikz} + r e^{-ikz}; inside: C e^{ipz} + D e^{-ipz}; right: t e^{ikz}.
    """
    a = setup.a
    k, p = _momenta(setup, E)
    if p == 0:
        raise ValueError("E + V0 = +-m is a threshold of the inner momentum")
    e = cmath.exp
    M = np.array(
        [
            # psi continuous at -a
            [-e(1j * k * a), e(-1j * p * a), e(1j * p * a), 0],
            # psi' continuous at -a
            [1j * k * e(1j * k * a), 1j * p * e(-1j * p * a), -1j * p * e(1j * p * a), 0],
            # psi continuous at +a
            [0, e(1j * p * a), e(-1j * p * a), -e(1j * k * a)],
            # psi' continuous at +a
            [0, 1j * p * e(1j * p * a), -1j * p * e(-1j * p * a), -1j * k * e(1j * k * a)],
        ],
        dtype=complex,
    )
    rhs = np.array([e(-1j * k * a), 1j * k * e(-1j * k * a), 0, 0], dtype=complex)
    _, _, _, t = np.linalg.solve(M, rhs)
    return float(abs(t) ** 2)


def even_condition(setup: SquareWellSetup, E: float) -> float:
    """``p sin(pa) - kappa cos(pa)``: zero where ``p tan(pa) = kappa``."""
    p, kappa = _inner_outer(setup, E)
    return p * math.sin(p * setup.a) - kappa * math.cos(p * setup.a)


def odd_condition(setup: SquareWellSetup, E: float) -> float:
    """``p cos(pa) + kappa sin(pa)``: zero where ``-p cot(pa) = kappa``."""
    p, kappa = _inner_outer(setup, E)
    return p * math.cos(p * setup.a) + kappa * math.sin(p * setup.a)


def _inner_outer(setup: SquareWellSetup, E: float) -> tuple[float, float]:
    m, V = setup.m, setup.V0
    p2 = (E + V - m) * (E + V + m)
    if p2 < 0 or abs(E) > m:
        raise ValueError(f"E = {E} is outside the bound window")
    return math.sqrt(p2), math.sqrt((m - E) * (m + E))


def _bisect(f, lo: float, hi: float, tol: float) -> float:
    flo = f(lo)
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


def bound_energies_square(setup: SquareWellSetup, tol: float = 1e-12,
                          samples_per_branch: int = 200) -> list[float]:
    """All bound energies in (-m, m), ascending.

    The inner momentum ``p`` is real on ``E + V0 > m``; each half-period of
    ``tan(pa)`` / ``cot(pa)`` is sampled and every sign change bisected.
    """
    return [E for E, _ in bound_states_square(setup, tol, samples_per_branch)]


def bound_states_square(setup: SquareWellSetup, tol: float = 1e-12,
                        samples_per_branch: int = 200) -> list[tuple[float, str]]:
    """Like :func:`bound_energies_square` but tagged ``"even"`` / ``"odd"``."""
    m, V, a = setup.m, setup.V0, setup.a
    if V <= 0:
        return []
    E_lo = max(-m, m - V)
    E_hi = m
    if E_lo >= E_hi:
        return []
    p_of = lambda E: math.sqrt(max((E + V - m) * (E + V + m), 0.0))
    E_of = lambda p: math.sqrt(p * p + m * m) - V
    p_lo, p_hi = p_of(E_lo), p_of(E_hi)

    # branch boundaries where tan or cot change sign: p a = j pi / 2
    cuts = [p_lo]
    j = math.floor(2 * p_lo * a / math.pi) + 1
    while j * math.pi / (2 * a) < p_hi:
        cuts.append(j * math.pi / (2 * a))
        j += 1
    cuts.append(p_hi)

    found = []
    for parity, f in (("even", even_condition), ("odd", odd_condition)):
        g = lambda E, f=f: f(setup, E)
        for p0, p1 in zip(cuts[:-1], cuts[1:]):
            Es = [E_of(p) for p in np.linspace(p0, p1, samples_per_branch)]
            Es[0] = max(Es[0], E_lo)
            Es[-1] = min(Es[-1], E_hi)
            # stay strictly inside (-m, m)
            Es = [min(max(E, -m + 1e-15 * m), m - 1e-15 * m) for E in Es]
            vals = [g(E) for E in Es]
            for i in range(len(Es) - 1):
                if vals[i] == 0:
                    found.append((Es[i], parity))
                elif vals[i] * vals[i + 1] < 0:
                    found.append((_bisect(g, Es[i], Es[i + 1], tol), parity))
    # p = 0 solves the odd condition trivially (the zero function)
    found = sorted((E, parity) for E, parity in found if p_of(E) > 1e-7 * m)
    # a root sitting exactly on a sample is reported once
    out = []
    for E, parity in found:
        if out and abs(E - out[-1][0]) < 10 * tol and parity == out[-1][1]:
            continue
        out.append((E, parity))
    return out
