"""Forward transforms over closed geodesics and rational d-planes.

Period-1 parametrization throughout: the closed geodesic of integer
direction v is t -> x + t v, t in [0, 1]. On band-limited fields the
transform is the exact Fourier multiplier that keeps the coefficients
orthogonal to the direction/subspace; the spatial midpoint quadrature is
kept as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, QuadratureTooCoarse
from .fields import TorusField, evaluate_at, orthogonality_mask
from .lattice import PrimitiveDirection, RationalSubspace
from .sinogram import TorusSinogram, as_subspace


@dataclass(frozen=True)
class GeodesicSpec:
    """A base point and a direction (closed geodesic) or an integer-basis
    subspace (periodic d-plane)."""

    x: tuple[float, ...]
    direction: PrimitiveDirection | RationalSubspace

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if not all(0.0 <= t < 1.0 for t in self.x):
            raise ValueError("base point components must lie in [0, 1)")

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        if isinstance(self.direction, PrimitiveDirection):
            return (self.direction.v,)
        return self.direction.basis


def forward_direction(f: TorusField, v: PrimitiveDirection | Sequence[int]) -> TorusField:
    """X-ray transform along v: keeps exactly the coefficients with k.v = 0."""
    A = as_subspace(v)
    if A.n != f.n:
        raise DimensionMismatch(f"direction in Z^{A.n}, field on T^{f.n}")
    mask = orthogonality_mask(A, f.K)
    return TorusField(f.n, f.K, np.where(mask, f.coeffs, 0j), f.real)


def forward_subspace(f: TorusField, A: RationalSubspace) -> TorusField:
    """d-plane transform: keeps the coefficients orthogonal to every basis row."""
    if A.n != f.n:
        raise DimensionMismatch(f"subspace in Q^{A.n}, field on T^{f.n}")
    mask = orthogonality_mask(A, f.K)
    return TorusField(f.n, f.K, np.where(mask, f.coeffs, 0j), f.real)


def quadrature_threshold(f_K: int, rows: Sequence[Sequence[int]]) -> int:
    """Smallest admissible midpoint step count: the line-restricted
    frequencies satisfy |k.v| <= K |v|_1, so any N_q above twice that is
    exact for band-limited integrands."""
    worst = max(sum(abs(int(x)) for x in row) for row in rows)
    return 2 * f_K * worst


def quadrature_line_integral(f: TorusField, spec: GeodesicSpec, N_q: int | None = None) -> complex:
    """Midpoint-rule value of the parameter integral over [0,1]^d.

    Exact on the band once N_q exceeds the threshold; serves as the
    independent oracle for the Fourier-multiplier path.
    """
    rows = spec.rows
    if len(spec.x) != f.n or any(len(r) != f.n for r in rows):
        raise DimensionMismatch("geodesic spec does not match the field dimension")
    threshold = quadrature_threshold(f.K, rows)
    if N_q is None:
        N_q = threshold + 1
    if N_q <= threshold:
        raise QuadratureTooCoarse(f"N_q={N_q} <= exactness threshold {threshold}")
    d = len(rows)
    t = (np.arange(N_q) + 0.5) / N_q
    grids = np.meshgrid(*[t] * d, indexing="ij")
    pts = np.array(spec.x)[None, :] + sum(
        g.reshape(-1, 1) * np.array(row, dtype=float)[None, :]
        for g, row in zip(grids, rows)
    )
    vals = evaluate_at(f, pts % 1.0)
    return complex(vals.mean())


def forward_sinogram(f: TorusField, family) -> TorusSinogram:
    """Batched forward map into the data space: one slice per member with
    the k = 0 component stripped, the shared average stored once."""
    members = sorted(as_subspace(A) for A in family)
    if not members:
        raise ValueError("family must be nonempty")
    d = members[0].d
    if any(A.d != d for A in members):
        raise DimensionMismatch("family mixes subspace dimensions")
    center = (f.K,) * f.n
    slices = {}
    for A in members:
        g = forward_subspace(f, A)
        arr = g.coeffs.copy()
        arr[center] = 0
        slices[A] = TorusField(f.n, f.K, arr)
    return TorusSinogram(f.n, d, f.K, f.mean(), slices)


def rescale_convention(value: complex, v: PrimitiveDirection | Sequence[int],
                       target: str) -> complex:
    """Convert a line datum between the period-1 and arc-length conventions;
    the period-1 value is |v|^-1 times the arc-length value."""
    vec = v.v if isinstance(v, PrimitiveDirection) else tuple(int(x) for x in v)
    speed = float(np.sqrt(sum(x * x for x in vec)))
    if target == "arc-length":
        return complex(value) * speed
    if target == "period-1":
        return complex(value) / speed
    raise ValueError(f"unknown convention {target!r}")
