"""Complex log-gamma and Gauss 2F1 with log-scaled output.

Two kernels cover what the scattering problem needs:

* the power series, for ``|z| <= 0.8``;
* the ``1 - z`` connection formula, for ``z`` close to 1.  The caller may pass
  ``log(1 - z)`` directly, which is how ``lambda = 1/(1 + exp(-a/r))`` is handled
  when ``1 - lambda`` is below the smallest double.

Branches: ``log(1 - z)`` is taken on the ``Im z -> 0-`` side, i.e. for real
``z > 1`` the argument of ``1 - z`` is ``+pi``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.special import psi

from .logcomplex import LogComplex

SERIES_RADIUS = 0.8
CONNECTION_RADIUS = 0.2
SERIES_RTOL = 1e-15
SERIES_MAX_TERMS = 100_000
DEGENERATE_TOL = 1e-8
_INT_TOL = 1e-13

# Lanczos approximation, g = 671/128 with 14 coefficients.
_LANCZOS_SHIFT = 671.0 / 128.0
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COEF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = 2.5066282746310005


class SpecialFunctionError(ArithmeticError):
    pass


class PoleError(SpecialFunctionError):
    pass


class DegenerateParameterError(SpecialFunctionError):
    pass


class ConvergenceError(SpecialFunctionError):
    pass


class DomainError(SpecialFunctionError):
    pass


def nonpositive_integer(z: complex, tol: float = _INT_TOL) -> bool:
    z = complex(z)
    if abs(z.imag) > tol or z.real > tol:
        return False
    return abs(z.real - round(z.real)) <= tol


def _near_integer(z: complex, tol: float) -> int | None:
    z = complex(z)
    n = round(z.real)
    if abs(z - n) < tol:
        return int(n)
    return None


def _lanczos(z: complex) -> complex:
    tmp = z + _LANCZOS_SHIFT
    tmp = (z + 0.5) * cmath.log(tmp) - tmp
    ser = _LANCZOS_C0
    y = z
    for c in _LANCZOS_COEF:
        y += 1.0
        ser += c / y
    return tmp + cmath.log(_SQRT_2PI * ser / z)


def ln_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z).

    The left half-plane is reached through ``ln_gamma(z) = ln_gamma(z + n) -
    sum(log(z + k))``, which keeps the principal branch intact.
    """
    z = complex(z)
    if nonpositive_integer(z, 0.0):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.real >= 0.5:
        return _lanczos(z)
    n = math.ceil(0.5 - z.real)
    acc = 0j
    for k in range(n):
        acc += cmath.log(z + k)
    return _lanczos(z + n) - acc


def gamma_ratio(num, den) -> LogComplex:
    """``prod Gamma(num) / prod Gamma(den)``; a pole in ``den`` gives zero."""
    for d in den:
        if nonpositive_integer(d):
            return LogComplex.zero()
    acc = 0j
    for n in num:
        acc += ln_gamma(n)
    for d in den:
        acc -= ln_gamma(d)
    return LogComplex.exp(acc)


@dataclass(frozen=True)
class Hyp2F1Args:
    """Arguments of F(alpha, beta; gamma; z).

    ``log1m_z`` is ``log(1 - z)``; supply it when ``1 - z`` underflows, in which
    case ``z`` itself may be given as ``1.0``.
    """

    alpha: complex
    beta: complex
    gamma: complex
    z: complex
    log1m_z: complex | None = None

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "z"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.log1m_z is not None:
            object.__setattr__(self, "log1m_z", complex(self.log1m_z))
        if nonpositive_integer(self.gamma):
            raise PoleError(f"gamma = {self.gamma} is a non-positive integer")

    def one_minus_z(self) -> complex:
        if self.log1m_z is not None:
            return cmath.exp(self.log1m_z)
        return 1.0 - self.z

    def log_one_minus_z(self) -> complex:
        if self.log1m_z is not None:
            return self.log1m_z
        w = 1.0 - self.z
        if w == 0:
            return complex(float("-inf"), 0.0)
        if w.imag == 0 and w.real < 0:
            return complex(math.log(-w.real), math.pi)
        return cmath.log(w)


def _series(a: complex, b: complex, c: complex, z: complex) -> complex:
    if z == 0:
        return 1.0 + 0j
    total = 1.0 + 0j
    term = 1.0 + 0j
    small = 0
    for n in range(SERIES_MAX_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if abs(term) <= SERIES_RTOL * abs(total):
            small += 1
            if small == 3:
                return total
        else:
            small = 0
    raise ConvergenceError(
        f"2F1 series did not converge in {SERIES_MAX_TERMS} terms "
        f"(a={a}, b={b}, c={c}, z={z})"
    )


def hyp2f1_series(args: Hyp2F1Args) -> complex:
    """Plain hypergeometric power series, ``|z| <= 0.8``."""
    if abs(args.z) > SERIES_RADIUS:
        raise DomainError(f"|z| = {abs(args.z):.3g} exceeds series radius {SERIES_RADIUS}")
    return _series(args.alpha, args.beta, args.gamma, args.z)


def _terminating(args: Hyp2F1Args) -> LogComplex | None:
    """Polynomial case: alpha or beta a non-positive integer."""
    for p in (args.alpha, args.beta):
        if nonpositive_integer(p):
            n = -int(round(p.real))
            z = 1.0 - args.one_minus_z() if args.log1m_z is not None else args.z
            a = complex(round(p.real))
            b = args.beta if p is args.alpha else args.alpha
            c = args.gamma
            total = 1.0 + 0j
            term = 1.0 + 0j
            for k in range(n):
                term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
                total += term
            return LogComplex.from_complex(total)
    return None


def _log_case(a: complex, b: complex, m: int, w: complex, log_w: complex) -> LogComplex:
    """F(a, b; a + b + m; 1 - w) for integer m >= 0 (logarithmic case)."""
    c = a + b + m
    first = LogComplex.zero()
    if m > 0:
        acc = 0j
        term = 1.0 + 0j
        for k in range(m):
            if k:
                term *= (a + k - 1) * (b + k - 1) / (k * (1 - m + k - 1)) * w
            acc += term
        first = gamma_ratio([m, c], [a + m, b + m]) * acc

    acc = 0j
    term = 1.0 / math.factorial(m) + 0j
    small = 0
    for k in range(SERIES_MAX_TERMS):
        if k:
            term *= (a + m + k - 1) * (b + m + k - 1) / (k * (k + m)) * w
        bracket = log_w - psi(k + 1) - psi(k + m + 1) + psi(a + k + m) + psi(b + k + m)
        piece = term * bracket
        acc += piece
        if term == 0 or abs(piece) <= SERIES_RTOL * abs(acc):
            small += 1
            if small == 3:
                break
        else:
            small = 0
    else:
        raise ConvergenceError("logarithmic 2F1 series did not converge")
    # (z - 1)^m = (-1)^m w^m
    second = gamma_ratio([c], [a, b]) * LogComplex.exp(m * log_w) * acc
    if m % 2:
        second = -second
    return first - second


def hyp2f1_connection_1mz(args: Hyp2F1Args, w_power: int = 0) -> LogComplex:
    """F(alpha, beta; gamma; z) through the ``1 - z`` connection formula.

    F = A F(a, b; a+b-c+1; w) + B w^s F(c-a, c-b; s+1; w), with w = 1 - z and
    s = c - a - b.  ``w^s`` is formed as ``exp(s * log(w))`` so that ``w`` may
    underflow.  An exactly integer ``s`` takes the logarithmic limit; an
    ``s`` within ``DEGENERATE_TOL`` of an integer but not on it is refused.

    ``w_power`` returns ``w**w_power * F`` instead, folding the prefactor into
    the exponents; with ``|log w| ~ 1e4`` multiplying afterwards costs about
    ``1e4 * eps`` in relative accuracy.
    """
    a, b, c = args.alpha, args.beta, args.gamma
    w = args.one_minus_z()
    log_w = args.log_one_minus_z()
    if abs(w) > SERIES_RADIUS:
        raise DomainError(f"|1 - z| = {abs(w):.3g} too large for the 1-z connection")

    scale = LogComplex.exp(w_power * log_w) if w_power else LogComplex.one()
    poly = _terminating(args)
    if poly is not None:
        return scale * poly

    s = c - a - b
    n = _near_integer(s, DEGENERATE_TOL)
    if n is not None:
        if abs(s - n) > _INT_TOL:
            raise DegenerateParameterError(
                f"gamma - alpha - beta = {s} is within {DEGENERATE_TOL:g} of the integer {n}"
            )
        if n >= 0:
            return scale * _log_case(a, b, n, w, log_w)
        # Euler: F(a,b;c;z) = w^s F(c-a, c-b; c; z), flipping the sign of s
        return LogComplex.exp((s + w_power) * log_w) * _log_case(c - a, c - b, -n, w, log_w)

    coef_a = gamma_ratio([c, s], [c - a, c - b])
    coef_b = gamma_ratio([c, -s], [a, b])
    out = LogComplex.zero()
    if not coef_a.is_zero:
        out = scale * coef_a * _series(a, b, 1.0 - s, w)
    if not coef_b.is_zero:
        if log_w.real == float("-inf"):
            if s.real <= 0:
                raise DomainError("F diverges at z = 1 when Re(gamma - alpha - beta) <= 0")
        else:
            w_s = LogComplex.exp((s + w_power) * log_w)
            out = out + coef_b * w_s * _series(c - a, c - b, 1.0 + s, w)
    return out


def hyp2f1(args: Hyp2F1Args) -> LogComplex:
    """Gauss hypergeometric function, dispatching to the appropriate kernel."""
    if args.log1m_z is not None:
        return hyp2f1_connection_1mz(args)
    if abs(args.z) <= SERIES_RADIUS:
        z = args.z
        if z.real < 0:
            # Pfaff: F(a,b;c;z) = (1-z)^-a F(a, c-b; c; z/(z-1)), smaller argument
            a, b, c = args.alpha, args.beta, args.gamma
            inner = _series(a, c - b, c, z / (z - 1.0))
            return LogComplex.exp(-a * cmath.log(1.0 - z)) * inner
        return LogComplex.from_complex(hyp2f1_series(args))
    if abs(1.0 - args.z) < CONNECTION_RADIUS:
        return hyp2f1_connection_1mz(args)
    raise DomainError(f"z = {args.z} lies outside both evaluation regions")


def hyp2f1_complex(alpha, beta, gamma, z) -> complex:
    """Convenience wrapper returning an ordinary complex number."""
    return hyp2f1(Hyp2F1Args(alpha, beta, gamma, z)).to_complex()
