"""Band-limited periodic fields on T^n and their norms.

A field is a truncated Fourier series: complex coefficients on the sup-norm
band |k|_inf <= K, stored densely with index offset K. On the band every
spectral statement is exact; grids only enter through the DFT bridge.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import BandTooLarge, DimensionMismatch
from .lattice import IntVec, RationalSubspace

HERMITIAN_TOL = 1e-10


@lru_cache(maxsize=32)
def k_axes(n: int, K: int) -> tuple[np.ndarray, ...]:
    return tuple(np.arange(-K, K + 1, dtype=np.int64) for _ in range(n))


@lru_cache(maxsize=32)
def k_grids(n: int, K: int) -> tuple[np.ndarray, ...]:
    """Integer coordinate grids of shape (2K+1,)*n, one per axis."""
    return tuple(np.meshgrid(*k_axes(n, K), indexing="ij"))


@lru_cache(maxsize=128)
def bracket_sq(n: int, K: int) -> np.ndarray:
    """<k>^2 = 1 + |k|^2 over the band, float64."""
    out = np.ones((2 * K + 1,) * n)
    for g in k_grids(n, K):
        out += g.astype(np.float64) ** 2
    return out


@lru_cache(maxsize=4096)
def dot_mask(basis: tuple[IntVec, ...], K: int) -> np.ndarray:
    """Boolean band mask of frequencies orthogonal to every basis row."""
    n = len(basis[0])
    grids = k_grids(n, K)
    mask = np.ones((2 * K + 1,) * n, dtype=bool)
    for row in basis:
        dot = np.zeros((2 * K + 1,) * n, dtype=np.int64)
        for c, g in zip(row, grids):
            if c:
                dot += c * g
        mask &= dot == 0
    return mask


def orthogonality_mask(A: RationalSubspace, K: int) -> np.ndarray:
    return dot_mask(A.basis, K)


def _hermitian_defect(coeffs: np.ndarray) -> float:
    flipped = coeffs[(slice(None, None, -1),) * coeffs.ndim]
    return float(np.max(np.abs(coeffs - np.conj(flipped))))


@dataclass(frozen=True)
class TorusField:
    """Truncated Fourier representation of a function on T^n.

    coeffs[k + K] holds the coefficient of exp(2 pi i k.x); a field flagged
    real satisfies coeff(-k) == conj(coeff(k)) on the whole band.
    """

    n: int
    K: int
    coeffs: np.ndarray
    real: bool = False

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        if arr.shape != (2 * self.K + 1,) * self.n:
            raise ValueError(f"coefficient array shape {arr.shape} does not match band K={self.K}")
        object.__setattr__(self, "coeffs", arr)
        if self.real:
            scale = max(1.0, float(np.max(np.abs(arr))))
            if _hermitian_defect(arr) > HERMITIAN_TOL * scale:
                raise ValueError("field flagged real but coefficients are not Hermitian")

    def coeff(self, k: Sequence[int]) -> complex:
        idx = tuple(int(x) + self.K for x in k)
        if any(i < 0 or i > 2 * self.K for i in idx):
            return 0j
        return complex(self.coeffs[idx])

    def items(self) -> Iterator[tuple[IntVec, complex]]:
        """Nonzero coefficients in lexicographic frequency order."""
        nz = np.argwhere(self.coeffs != 0)
        for idx in nz:
            k = tuple(int(i) - self.K for i in idx)
            yield k, complex(self.coeffs[tuple(idx)])

    def _check_compatible(self, other: "TorusField") -> None:
        if self.n != other.n or self.K != other.K:
            raise DimensionMismatch(
                f"fields on (n={self.n}, K={self.K}) and (n={other.n}, K={other.K})"
            )

    def __add__(self, other: "TorusField") -> "TorusField":
        self._check_compatible(other)
        return TorusField(self.n, self.K, self.coeffs + other.coeffs, self.real and other.real)

    def __sub__(self, other: "TorusField") -> "TorusField":
        self._check_compatible(other)
        return TorusField(self.n, self.K, self.coeffs - other.coeffs, self.real and other.real)

    def __mul__(self, scalar: complex) -> "TorusField":
        c = complex(scalar)
        return TorusField(self.n, self.K, self.coeffs * c, self.real and c.imag == 0.0)

    __rmul__ = __mul__

    def scaled_by(self, multiplier: np.ndarray) -> "TorusField":
        """Apply a (conjugation-symmetric) real Fourier multiplier."""
        return TorusField(self.n, self.K, self.coeffs * multiplier, self.real)

    def mean(self) -> complex:
        return self.coeff((0,) * self.n)


def zero_field(n: int, K: int, real: bool = False) -> TorusField:
    return TorusField(n, K, np.zeros((2 * K + 1,) * n, dtype=np.complex128), real)


def field_from_coeffs(n: int, K: int, entries: dict, real: bool = False) -> TorusField:
    arr = np.zeros((2 * K + 1,) * n, dtype=np.complex128)
    for k, val in entries.items():
        idx = tuple(int(x) + K for x in k)
        if any(i < 0 or i > 2 * K for i in idx):
            raise ValueError(f"frequency {k} outside band K={K}")
        arr[idx] = val
    return TorusField(n, K, arr, real)


def unit_harmonic(n: int, K: int, k: Sequence[int]) -> TorusField:
    """The single complex harmonic exp(2 pi i k.x)."""
    return field_from_coeffs(n, K, {tuple(int(x) for x in k): 1.0})


def random_field(n: int, K: int, rng: np.random.Generator, real: bool = False,
                 decay: float = 0.0) -> TorusField:
    """Gaussian coefficients, optionally Hermitian-symmetrized and damped
    by <k>^-decay so Sobolev norms of any order stay finite-ish."""
    shape = (2 * K + 1,) * n
    arr = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    if decay:
        arr = arr * bracket_sq(n, K) ** (-decay / 2.0)
    if real:
        flipped = arr[(slice(None, None, -1),) * n]
        arr = (arr + np.conj(flipped)) / 2.0
    return TorusField(n, K, arr, real)


# --- discrete Fourier bridge ------------------------------------------------

def _require_grid(N: int, K: int) -> None:
    if N < 2 * K + 2:
        raise BandTooLarge(f"grid N={N} too coarse for band K={K} (need N >= 2K+2)")


def _band_ix(n: int, K: int, N: int):
    return np.ix_(*[np.arange(-K, K + 1) % N for _ in range(n)])


def to_coefficients(samples: np.ndarray, K: int) -> TorusField:
    """Band-restricted DFT of a uniform N^n sample grid.

    coeff(k) = N^-n sum_j samples[j] exp(-2 pi i k.j / N); exact for
    band-limited input when N >= 2K+2.
    """
    samples = np.asarray(samples)
    n = samples.ndim
    N = samples.shape[0]
    if samples.shape != (N,) * n:
        raise ValueError("sample grid must be square")
    _require_grid(N, K)
    spec = np.fft.fftn(samples) / float(N) ** n
    band = spec[_band_ix(n, K, N)]
    return TorusField(n, K, band, real=bool(np.isrealobj(samples)))


def to_samples(f: TorusField, N: int) -> np.ndarray:
    """Evaluate the truncated series on the uniform grid x_j = j/N."""
    _require_grid(N, f.K)
    spec = np.zeros((N,) * f.n, dtype=np.complex128)
    spec[_band_ix(f.n, f.K, N)] = f.coeffs
    return np.fft.ifftn(spec) * float(N) ** f.n


def evaluate_at(f: TorusField, points: np.ndarray) -> np.ndarray:
    """Direct series evaluation at arbitrary points, shape (m, n)."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    nz = np.argwhere(f.coeffs != 0)
    if nz.size == 0:
        return np.zeros(pts.shape[0], dtype=np.complex128)
    freqs = nz - f.K
    vals = f.coeffs[tuple(nz.T)]
    phases = np.exp(2j * np.pi * (pts @ freqs.T))
    return phases @ vals


# --- norms -------------------------------------------------------------------

def sobolev_norm(f: TorusField, s: float) -> float:
    """H^s norm: sqrt of sum of <k>^(2s) |coeff(k)|^2 over the band."""
    w = bracket_sq(f.n, f.K) ** float(s)
    return float(np.sqrt(np.sum(w * np.abs(f.coeffs) ** 2)))


def bessel_multiplier(f: TorusField, s: float) -> TorusField:
    """Apply the Fourier multiplier <k>^s."""
    return f.scaled_by(bracket_sq(f.n, f.K) ** (s / 2.0))


def grid_lp_norm(values: np.ndarray, p) -> float:
    """Discrete L^p norm on the unit torus: Riemann sum for finite p,
    max for p = inf."""
    a = np.abs(values)
    if p == np.inf or p == "inf":
        return float(np.max(a))
    p = float(p)
    return float((np.mean(a**p)) ** (1.0 / p))


def bessel_norm(f: TorusField, s: float, p, N: int | None = None) -> float:
    """L^p_s norm via the <k>^s multiplier and grid quadrature.

    p = 2 is evaluated spectrally (Parseval makes it the H^s norm)."""
    if p == 2:
        return sobolev_norm(f, s)
    if N is None:
        N = 2 * f.K + 2
    _require_grid(N, f.K)
    return grid_lp_norm(to_samples(bessel_multiplier(f, s), N), p)
