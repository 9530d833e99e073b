"""DKP beta matrices, the trilinear algebra check, and spinor reconstruction.

Matrices are stored over the Gaussian integers as a pair of integer arrays
``(re, im)`` so the algebra identity

    b^mu b^nu b^la + b^la b^nu b^mu = g^{mu nu} b^la + g^{nu la} b^mu

is checked with no tolerance at all.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from enum import Enum
from itertools import product

import numpy as np

METRIC = (1, -1, -1, -1)


class Spin(Enum):
    ZERO = 0
    ONE = 1

    @classmethod
    def parse(cls, value) -> Spin:
        if isinstance(value, Spin):
            return value
        if value in (0, "0", "zero"):
            return cls.ZERO
        if value in (1, "1", "one"):
            return cls.ONE
        raise ValueError(f"spin must be 0 or 1, got {value!r}")


@dataclass(frozen=True)
class GaussMatrix:
    """Square matrix with Gaussian-integer entries ``re + 1j * im``."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re = np.array(self.re, dtype=np.int64)
        im = np.array(self.im, dtype=np.int64)
        if re.shape != im.shape or re.ndim != 2 or re.shape[0] != re.shape[1]:
            raise ValueError("GaussMatrix needs two square arrays of equal shape")
        re.setflags(write=False)
        im.setflags(write=False)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @classmethod
    def zeros(cls, n: int) -> GaussMatrix:
        return cls(np.zeros((n, n), np.int64), np.zeros((n, n), np.int64))

    @property
    def n(self) -> int:
        return self.re.shape[0]

    def __matmul__(self, other: GaussMatrix) -> GaussMatrix:
        return GaussMatrix(self.re @ other.re - self.im @ other.im,
                           self.re @ other.im + self.im @ other.re)

    def __add__(self, other: GaussMatrix) -> GaussMatrix:
        return GaussMatrix(self.re + other.re, self.im + other.im)

    def __sub__(self, other: GaussMatrix) -> GaussMatrix:
        return GaussMatrix(self.re - other.re, self.im - other.im)

    def scale(self, k: int) -> GaussMatrix:
        return GaussMatrix(k * self.re, k * self.im)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussMatrix):
            return NotImplemented
        return bool(np.array_equal(self.re, other.re) and np.array_equal(self.im, other.im))

    __hash__ = None

    def trace(self) -> complex:
        return complex(int(np.trace(self.re)), int(np.trace(self.im)))

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    def nonzero(self) -> list[tuple[int, int]]:
        mask = (self.re != 0) | (self.im != 0)
        return [tuple(map(int, ij)) for ij in np.argwhere(mask)]

    def with_entry(self, i: int, j: int, value: complex) -> GaussMatrix:
        re, im = self.re.copy(), self.im.copy()
        re[i, j], im[i, j] = int(value.real), int(value.imag)
        return GaussMatrix(re, im)


def _real(rows) -> GaussMatrix:
    a = np.array(rows, dtype=np.int64)
    return GaussMatrix(a, np.zeros_like(a))


@dataclass(frozen=True)
class BetaSet:
    spin: Spin
    beta: tuple[GaussMatrix, GaussMatrix, GaussMatrix, GaussMatrix]
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def dim(self) -> int:
        return self.beta[0].n

    def mutated(self, index: int, i: int, j: int, value: complex) -> BetaSet:
        betas = list(self.beta)
        betas[index] = betas[index].with_entry(i, j, value)
        return BetaSet(self.spin, tuple(betas), self.metadata)


# standard spin-1 matrices (s_i)_{jk} = -i eps_{ijk}; the blocks use -i s_i
def _minus_i_s(i: int) -> np.ndarray:
    out = np.zeros((3, 3), dtype=np.int64)
    for j, k in product(range(3), repeat=2):
        out[j, k] = -_levi_civita(i, j, k)
    return out


def _levi_civita(i: int, j: int, k: int) -> int:
    return (i - j) * (j - k) * (k - i) // 2


def spin_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``s_1, s_2, s_3`` as complex arrays."""
    return tuple(1j * _minus_i_s(i) for i in range(3))


def _spin_zero() -> BetaSet:
    b0 = np.zeros((5, 5), dtype=np.int64)
    b0[0, 1] = b0[1, 0] = 1
    betas = [_real(b0)]
    for i in range(3):
        rho = np.zeros((2, 3), dtype=np.int64)
        rho[0, i] = -1
        b = np.zeros((5, 5), dtype=np.int64)
        b[:2, 2:] = rho
        b[2:, :2] = -rho.T
        betas.append(_real(b))
    meta = {"components": ["theta_1", "theta_2", "rho_1", "rho_2", "rho_3"]}
    return BetaSet(Spin.ZERO, tuple(betas), meta)


# block offsets in kappa = (phi, A, B, C)
_PHI, _A, _B, _C = 0, 1, 4, 7


def _spin_one() -> BetaSet:
    b0 = np.zeros((10, 10), dtype=np.int64)
    b0[_A:_A + 3, _B:_B + 3] = np.eye(3, dtype=np.int64)
    b0[_B:_B + 3, _A:_A + 3] = np.eye(3, dtype=np.int64)
    betas = [_real(b0)]
    for i in range(3):
        re = np.zeros((10, 10), dtype=np.int64)
        re[_PHI, _B + i] = 1
        re[_B + i, _PHI] = -1
        ms = _minus_i_s(i)
        re[_A:_A + 3, _C:_C + 3] = ms
        re[_C:_C + 3, _A:_A + 3] = ms
        # -i s_i happens to be real; the imaginary part is kept for exactness
        betas.append(GaussMatrix(re, np.zeros_like(re)))
    meta = {
        "components": ["phi", "A1", "A2", "A3", "B1", "B2", "B3", "C1", "C2", "C3"],
        "reduction": {
            "Psi": ["A1", "A2", "B3"],
            "Phi": ["B1", "B2", "A3"],
            "Theta": ["C2", "-C1", "phi"],
            "zero": ["C3"],
        },
    }
    return BetaSet(Spin.ONE, tuple(betas), meta)


def build_betas(spin) -> BetaSet:
    spin = Spin.parse(spin)
    return _spin_zero() if spin is Spin.ZERO else _spin_one()


@dataclass(frozen=True)
class Violation:
    mu: int
    nu: int
    la: int
    max_abs_defect: int


def triple_defect(betas: BetaSet, mu: int, nu: int, la: int) -> GaussMatrix:
    b = betas.beta
    lhs = b[mu] @ b[nu] @ b[la] + b[la] @ b[nu] @ b[mu]
    rhs = GaussMatrix.zeros(betas.dim)
    if mu == nu:
        rhs = rhs + b[la].scale(METRIC[mu])
    if nu == la:
        rhs = rhs + b[mu].scale(METRIC[nu])
    return lhs - rhs


def verify_algebra(betas: BetaSet) -> list[Violation]:
    """Every index triple where the DKP identity fails (empty when it holds)."""
    out = []
    for mu, nu, la in product(range(4), repeat=3):
        d = triple_defect(betas, mu, nu, la)
        worst = int(max(np.abs(d.re).max(), np.abs(d.im).max()))
        if worst:
            out.append(Violation(mu, nu, la, worst))
    return out


@dataclass(frozen=True)
class ReducedSolution:
    """``Psi`` and its derivative at one point, with the local kinematics."""

    Psi: tuple[complex, complex, complex]
    dPsi: tuple[complex, complex, complex]
    E: float
    eV: float
    m: float = 1.0


def reconstruct_spinor(red: ReducedSolution) -> tuple[tuple[complex, ...], tuple[complex, ...]]:
    """``Phi = (E - eV)/m * Psi`` and ``Theta = (i/m) dPsi/dz``."""
    if not red.m > 0:
        raise ValueError(f"m must be positive, got {red.m}")
    f = (red.E - red.eV) / red.m
    g = 1j / red.m
    return tuple(f * complex(p) for p in red.Psi), tuple(g * complex(d) for d in red.dPsi)


def assemble_kappa(Psi, Phi, Theta) -> np.ndarray:
    """The ten components ``(phi, A, B, C)`` from the reduced triples."""
    k = np.zeros(10, dtype=complex)
    k[_A + 0], k[_A + 1], k[_B + 2] = Psi
    k[_B + 0], k[_B + 1], k[_A + 2] = Phi
    k[_C + 1], k[_C + 0], k[_PHI] = Theta[0], -Theta[1], Theta[2]
    return k


def first_order_residual(Psi, dPsi, d2Psi, E: float, eV: float, deV: float,
                         m: float = 1.0) -> np.ndarray:
    """``[b0 (E - eV) + i b3 d/dz - m] kappa`` at one point.

    ``kappa`` is assembled from ``Psi`` through the reduction, and its
    derivative from ``Psi'``, ``Psi''`` and the slope ``deV`` of the potential.
    A vanishing result (C3 row included) means the reduced solution is a
    genuine solution of the ten-component equation.
    """
    b = build_betas(Spin.ONE).beta
    Psi, dPsi, d2Psi = (tuple(complex(x) for x in v) for v in (Psi, dPsi, d2Psi))
    Phi, Theta = reconstruct_spinor(ReducedSolution(Psi, dPsi, E, eV, m))
    dPhi = tuple(((E - eV) * d - deV * p) / m for p, d in zip(Psi, dPsi))
    dTheta = tuple(1j / m * x for x in d2Psi)
    kappa = assemble_kappa(Psi, Phi, Theta)
    dkappa = assemble_kappa(dPsi, dPhi, dTheta)
    return (E - eV) * (b[0].to_complex() @ kappa) + 1j * (b[3].to_complex() @ dkappa) - m * kappa


def plane_wave_residual(E: float, eV: float, m: float, amplitude=(1, 0, 0)) -> float:
    """Norm of :func:`first_order_residual` for ``Psi = amplitude * exp(ikz)``."""
    k = cmath.sqrt((E - eV) ** 2 - m * m)
    Psi = tuple(complex(x) for x in amplitude)
    dPsi = tuple(1j * k * x for x in Psi)
    d2Psi = tuple(-k * k * x for x in Psi)
    return float(np.linalg.norm(first_order_residual(Psi, dPsi, d2Psi, E, eV, 0.0, m)))
