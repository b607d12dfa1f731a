"""Inversion paths: axis-integral slice reconstruction, adjoint and normal
operators, filtered and normalized-weight inversion, and the filter-free
hyperplane summation formula.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    AxisDegenerate,
    DimensionMismatch,
    IncompleteCover,
    NonzeroMean,
    SingularFilter,
)
from .fields import TorusField, evaluate_at, orthogonality_mask
from .lattice import (
    IntVec,
    PrimitiveDirection,
    frequency_band,
    orthogonal_complement,
    orthogonal_primitive,
)
from .sinogram import (
    TorusSinogram,
    WeightRule,
    _check_weight_defined,
    _slice_field_with_mean,
    as_subspace,
    plain_magnitude,
)

NONZERO_MEAN_RTOL = 1e-12


def _default_axis(k: IntVec, v: PrimitiveDirection) -> int:
    """Integration axis: the one with the larger |k_i| (tie -> axis 2);
    for k = 0 the valid axis is fixed by the direction."""
    if not any(k):
        # integrating over axis j kills the nonzero multiples iff v_j != 0
        return 1 if v.v[0] != 0 else 0
    if abs(k[0]) > abs(k[1]):
        return 0
    return 1


def slice_reconstruct_coeff(g_v: TorusField, k: Sequence[int], v: PrimitiveDirection,
                            N_q: int | None = None, axis: int | None = None) -> complex:
    """One Fourier coefficient of f from its transform along v, by a
    one-dimensional periodic midpoint quadrature of the axis integral.

    For k with k_2 != 0 this is the integral of g_v(0, y) e^{-2 pi i k_2 y};
    for k_1 != 0 the x-axis line is used instead, and k = 0 reduces to the
    plain average along the valid axis. Exact on the band."""
    if g_v.n != 2:
        raise DimensionMismatch("slice reconstruction is a planar (n=2) operation")
    kk = tuple(int(x) for x in k)
    if v.dot(kk) != 0:
        raise ValueError(f"direction {v.v} is not orthogonal to k={kk}")
    if axis is None:
        axis = _default_axis(kk, v)
    if axis not in (0, 1):
        raise ValueError("axis must be 0 or 1")
    if any(kk) and kk[axis] == 0:
        raise AxisDegenerate(f"axis {axis} formula needs k[{axis}] != 0, got k={kk}")
    if not any(kk) and v.v[1 - axis] == 0:
        raise AxisDegenerate(f"k = 0 along axis {axis} needs v[{1 - axis}] != 0, got v={v.v}")
    threshold = 2 * g_v.K * sum(abs(x) for x in v.v)
    if N_q is None:
        N_q = max(threshold, 2 * g_v.K) + 1
    if N_q <= threshold:
        raise ValueError(f"N_q={N_q} <= threshold {threshold}")
    t = (np.arange(N_q) + 0.5) / N_q
    pts = np.zeros((N_q, 2))
    pts[:, axis] = t
    vals = evaluate_at(g_v, pts)
    phase = np.exp(-2j * np.pi * kk[axis] * t)
    return complex(np.mean(vals * phase))


def reconstruct_slices(g: TorusSinogram, N_q: int | None = None) -> TorusField:
    """Full-field reconstruction through the axis integrals, one coefficient
    at a time, reading each frequency off its orthogonal direction's slice."""
    if g.n != 2 or g.d != 1:
        raise DimensionMismatch("slice reconstruction is the n=2, d=1 path")
    K = g.K
    arr = np.zeros((2 * K + 1,) * 2, dtype=np.complex128)
    stored = {A: _slice_field_with_mean(g, A) for A in g.subspaces}
    for k in frequency_band(2, K, punctured=True):
        A = as_subspace(orthogonal_primitive(k))
        if A not in stored:
            raise IncompleteCover(f"no slice orthogonal to k={k}")
        v = PrimitiveDirection(A.basis[0])
        arr[k[0] + K, k[1] + K] = slice_reconstruct_coeff(stored[A], k, v, N_q=N_q)
    first = g.subspaces[0]
    v0 = PrimitiveDirection(first.basis[0])
    arr[K, K] = slice_reconstruct_coeff(stored[first], (0, 0), v0, N_q=N_q)
    return TorusField(2, K, arr)


def adjoint(g: TorusSinogram, w: WeightRule) -> TorusField:
    """Data-space adjoint: coefficient k collects w(k,A)^2 g^(k,A) over the
    stored subspaces orthogonal to k; the k = 0 slot gets the shared mean
    against the summed squared zero-frequency weights."""
    _check_weight_defined(g, w)
    out = np.zeros((2 * g.K + 1,) * g.n, dtype=np.complex128)
    center = (g.K,) * g.n
    w0_sum = 0.0
    for A in g.subspaces:
        mask = orthogonality_mask(A, g.K)
        wa = np.nan_to_num(w.weight_array(A), nan=0.0)
        out += np.where(mask, wa**2 * g.slices[A].coeffs, 0j)
        w0_sum += float(wa[center]) ** 2
    out[center] = w0_sum * g.mean
    return TorusField(g.n, g.K, out)


def normal_multiplier(w: WeightRule, k: Sequence[int]) -> float:
    """W(k): the diagonal symbol of the normal operator over the rule's
    family; values are cached bandwide on the rule."""
    return w.normal_value(k)


def effective_normal_array(g: TorusSinogram, w: WeightRule) -> np.ndarray:
    """W(k) restricted to the subspaces actually stored in g; coincides with
    the rule's certified array when the data lives on the full family."""
    out = np.zeros((2 * g.K + 1,) * g.n)
    for A in g.subspaces:
        mask = orthogonality_mask(A, g.K)
        wa = np.nan_to_num(w.weight_array(A), nan=0.0)
        out += np.where(mask, wa**2, 0.0)
    return out


def invert_filtered(g: TorusSinogram, w: WeightRule) -> TorusField:
    """Exact left inverse on range data: adjoint followed by division by the
    normal multiplier. Raises SingularFilter if W vanishes on the band."""
    W = effective_normal_array(g, w)
    if float(W.min()) <= 0.0:
        k_bad = tuple(int(i) - g.K for i in np.argwhere(W == W.min())[0])
        raise SingularFilter(f"normal multiplier vanishes at k={k_bad}")
    back = adjoint(g, w)
    return TorusField(g.n, g.K, back.coeffs / W)


def adjoint_normalized(g: TorusSinogram, w: WeightRule) -> TorusField:
    """Adjoint computed with the normalized weight w / sqrt(W); composed with
    the forward map it is the identity and preserves every Bessel norm."""
    W = effective_normal_array(g, w)
    if float(W.min()) <= 0.0:
        k_bad = tuple(int(i) - g.K for i in np.argwhere(W == W.min())[0])
        raise SingularFilter(f"normal multiplier vanishes at k={k_bad}")
    _check_weight_defined(g, w)
    out = np.zeros((2 * g.K + 1,) * g.n, dtype=np.complex128)
    center = (g.K,) * g.n
    w0_sum = 0.0
    for A in g.subspaces:
        mask = orthogonality_mask(A, g.K)
        wa = np.nan_to_num(w.weight_array(A), nan=0.0)
        out += np.where(mask, (wa**2 / W) * g.slices[A].coeffs, 0j)
        w0_sum += float(wa[center]) ** 2
    out[center] = (w0_sum / W[center]) * g.mean
    return TorusField(g.n, g.K, out)


def invert_sum(g: TorusSinogram) -> TorusField:
    """Filter-free inversion for hyperplane data (d = n-1): a zero-average
    function is the plain sum of its slices.

    The mean must vanish (subtract it first) and every band frequency needs
    its orthogonal hyperplane in the family; missing coverage raises rather
    than returning a silently wrong field."""
    if g.d != g.n - 1:
        raise DimensionMismatch("summation inversion needs hyperplane data (d = n-1)")
    scale = max(1.0, plain_magnitude(g))
    if abs(g.mean) > NONZERO_MEAN_RTOL * scale:
        raise NonzeroMean(f"|mean| = {abs(g.mean):.3e} exceeds {NONZERO_MEAN_RTOL:.0e} x norm")
    stored = set(g.subspaces)
    for k in frequency_band(g.n, g.K, punctured=True):
        if orthogonal_complement(k) not in stored:
            raise IncompleteCover(f"family lacks the hyperplane orthogonal to k={k}")
    out = np.zeros((2 * g.K + 1,) * g.n, dtype=np.complex128)
    for A in g.subspaces:
        out += g.slices[A].coeffs
    return TorusField(g.n, g.K, out)


def sum_pairing(g: TorusSinogram, weight_table: dict, h: TorusField) -> complex:
    """Evaluate sum_A (F_{w(.,A)} g(., A), h) with unsquared weights; when
    the weights sum to one over each orthogonality set this equals the
    distributional pairing (f, h) for g in the range of the transform."""
    if h.n != g.n or h.K != g.K:
        raise DimensionMismatch("test function does not match the data band")
    K = g.K
    acc = 0j
    for A in g.subspaces:
        fa = _slice_field_with_mean(g, A).coeffs
        warr = np.zeros_like(fa, dtype=float)
        for (k, B), val in weight_table.items():
            if B == A:
                warr[tuple(int(x) + K for x in k)] = val
        weighted = fa * warr
        flipped = h.coeffs[(slice(None, None, -1),) * h.n]
        acc += complex(np.sum(weighted * flipped))
    return acc


def field_pairing(f: TorusField, h: TorusField) -> complex:
    """Distributional pairing (f, h) = sum_k f^(k) h^(-k)."""
    if (f.n, f.K) != (h.n, h.K):
        raise DimensionMismatch("fields on different bands")
    flipped = h.coeffs[(slice(None, None, -1),) * h.n]
    return complex(np.sum(f.coeffs * flipped))


def equal_split_table(g: TorusSinogram) -> dict:
    """Unsquared weights 1/|Omega_k| on the stored family: each band
    frequency splits evenly over its orthogonal members."""
    K = g.K
    members = g.subspaces
    masks = {A: orthogonality_mask(A, K) for A in members}
    counts = np.zeros((2 * K + 1,) * g.n)
    for A in members:
        counts += masks[A]
    table = {}
    for A in members:
        idx = np.argwhere(masks[A])
        for i in idx:
            k = tuple(int(x) - K for x in i)
            table[(k, A)] = 1.0 / counts[tuple(i)]
    return table


@dataclass
class ReconstructionReport:
    """Per-method error summary for one reconstruction run."""

    method: str
    parameters: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    duration_s: float = 0.0

    def __post_init__(self):
        for v in self.errors.values():
            if v < 0:
                raise ValueError("errors must be nonnegative")

    def to_json(self, include_timing: bool = False) -> str:
        payload = {"method": self.method, "parameters": self.parameters,
                   "errors": self.errors}
        if include_timing:
            payload["duration_s"] = self.duration_s
        return json.dumps(payload, sort_keys=True, indent=2)

    def errors_csv(self) -> str:
        lines = ["method,s,error"]
        for name in sorted(self.errors):
            lines.append(f"{self.method},{name},{self.errors[name]:.17g}")
        return "\n".join(lines) + "\n"
