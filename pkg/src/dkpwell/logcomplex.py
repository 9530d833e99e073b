"""Complex numbers held as (log-magnitude, phase).

Factors such as ``(1 - lambda)**(-2*nu)`` with ``|log(1 - lambda)| ~ 1e4`` are
far outside float range, so every amplitude in the solver is carried in this
form and only collapsed to an ordinary ``complex`` once ratios are formed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

NEG_INF = float("-inf")


@dataclass(frozen=True)
class LogComplex:
    """``exp(log_mag) * exp(1j * phase)``.

    Zero is ``log_mag == -inf`` (phase is then ignored). The phase is not
    reduced modulo 2*pi, so products stay exact in both components.
    """

    log_mag: float
    phase: float = 0.0

    @classmethod
    def zero(cls) -> LogComplex:
        return cls(NEG_INF, 0.0)

    @classmethod
    def one(cls) -> LogComplex:
        return cls(0.0, 0.0)

    @classmethod
    def from_complex(cls, z: complex) -> LogComplex:
        z = complex(z)
        if z == 0:
            return cls.zero()
        if not cmath.isfinite(z):
            raise OverflowError(f"cannot represent non-finite value {z!r}")
        return cls(math.log(abs(z)), math.atan2(z.imag, z.real))

    @classmethod
    def exp(cls, w: complex) -> LogComplex:
        """``exp(w)`` without ever forming it."""
        w = complex(w)
        if w.real == NEG_INF:
            return cls.zero()
        return cls(w.real, w.imag)

    @property
    def is_zero(self) -> bool:
        return self.log_mag == NEG_INF

    def log(self) -> complex:
        """A logarithm of the value (branch follows the stored phase)."""
        if self.is_zero:
            raise ValueError("log of zero")
        return complex(self.log_mag, self.phase)

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        r = math.exp(self.log_mag)
        return complex(r * math.cos(self.phase), r * math.sin(self.phase))

    __complex__ = to_complex

    def abs2_log(self) -> float:
        """``log(|value|**2)``."""
        return 2.0 * self.log_mag

    def __abs__(self) -> float:
        return math.exp(self.log_mag)

    def _coerce(self, other) -> LogComplex:
        if isinstance(other, LogComplex):
            return other
        if isinstance(other, (int, float, complex)):
            return LogComplex.from_complex(other)
        return NotImplemented

    def __mul__(self, other) -> LogComplex:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag + other.log_mag, self.phase + other.phase)

    __rmul__ = __mul__

    def __truediv__(self, other) -> LogComplex:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise ZeroDivisionError("LogComplex division by zero")
        if self.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag - other.log_mag, self.phase - other.phase)

    def __rtruediv__(self, other) -> LogComplex:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self) -> LogComplex:
        if self.is_zero:
            return self
        return LogComplex(self.log_mag, self.phase + math.pi)

    def __pow__(self, w: complex) -> LogComplex:
        if self.is_zero:
            if complex(w).real > 0:
                return LogComplex.zero()
            raise ZeroDivisionError("zero raised to a non-positive power")
        return LogComplex.exp(complex(w) * self.log())

    def __add__(self, other) -> LogComplex:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        big, small = (self, other) if self.log_mag >= other.log_mag else (other, self)
        # big * (1 + small/big), the ratio has modulus <= 1
        ratio = cmath.rect(math.exp(small.log_mag - big.log_mag), small.phase - big.phase)
        s = 1.0 + ratio
        if s == 0:
            return LogComplex.zero()
        return LogComplex(big.log_mag + math.log(abs(s)), big.phase + math.atan2(s.imag, s.real))

    __radd__ = __add__

    def __sub__(self, other) -> LogComplex:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other == self:
            return LogComplex.zero()
        return self + (-other)

    def __rsub__(self, other) -> LogComplex:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def real_sign(self) -> int:
        """Sign of the real part (+1, -1 or 0)."""
        if self.is_zero:
            return 0
        c = math.cos(self.phase)
        return (c > 0) - (c < 0)

    def __repr__(self) -> str:
        return f"LogComplex(log_mag={self.log_mag!r}, phase={self.phase!r})"


def logsumexp2(a: float, b: float) -> float:
    """``log(exp(a) + exp(b))`` for real log-magnitudes."""
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))
