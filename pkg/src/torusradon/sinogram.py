"""Transform-side data objects: sinograms on T^n x Gr(d,n) and the weight
rules that define the data-space norms.

A sinogram stores one band-limited field per subspace plus a single shared
average; the k = 0 slot of every slice is owned by that scalar. A weight
rule lives on an explicit finite subspace family (the working truncation of
the Grassmannian) and certifies its constants on the band by exhaustive
summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateWeight, DimensionMismatch, WeightUndefined
from .fields import (
    TorusField,
    bracket_sq,
    grid_lp_norm,
    orthogonality_mask,
    to_samples,
    zero_field,
)
from .lattice import (
    PrimitiveDirection,
    RationalSubspace,
    enumerate_grassmannian,
    line,
)

CANONICAL = "canonical-singleton"
HEIGHT_DECAY = "height-decay"
CUSTOM = "custom-table"


def as_subspace(member: RationalSubspace | PrimitiveDirection | Sequence[int]) -> RationalSubspace:
    if isinstance(member, RationalSubspace):
        return member
    if isinstance(member, PrimitiveDirection):
        return line(member)
    return line(tuple(int(x) for x in member))


@dataclass(frozen=True)
class TorusSinogram:
    """Transform data: per-subspace fields (frequencies k != 0 only) plus
    the one shared average, stored once."""

    n: int
    d: int
    K: int
    mean: complex
    slices: Mapping[RationalSubspace, TorusField]

    def __post_init__(self):
        object.__setattr__(self, "mean", complex(self.mean))
        store = dict(self.slices)
        center = (0,) * self.n
        for A, f in store.items():
            if A.n != self.n or A.d != self.d:
                raise DimensionMismatch(f"slice subspace {A} does not match (n={self.n}, d={self.d})")
            if f.n != self.n or f.K != self.K:
                raise DimensionMismatch(f"slice field for {A} does not match (n={self.n}, K={self.K})")
            if f.coeff(center) != 0:
                raise ValueError("slice fields must not carry a k=0 coefficient; the mean is shared")
        object.__setattr__(self, "slices", store)

    @property
    def subspaces(self) -> list[RationalSubspace]:
        return sorted(self.slices)

    def slice(self, member) -> TorusField:
        return self.slices[as_subspace(member)]

    def map_slices(self, fn) -> "TorusSinogram":
        return TorusSinogram(self.n, self.d, self.K, self.mean,
                             {A: fn(A, f) for A, f in self.slices.items()})

    def _check_compatible(self, other: "TorusSinogram") -> None:
        if (self.n, self.d, self.K) != (other.n, other.d, other.K):
            raise DimensionMismatch("sinograms have different (n, d, K)")
        if set(self.slices) != set(other.slices):
            raise DimensionMismatch("sinograms live on different subspace families")

    def __add__(self, other: "TorusSinogram") -> "TorusSinogram":
        self._check_compatible(other)
        return TorusSinogram(self.n, self.d, self.K, self.mean + other.mean,
                             {A: f + other.slices[A] for A, f in self.slices.items()})

    def __sub__(self, other: "TorusSinogram") -> "TorusSinogram":
        self._check_compatible(other)
        return TorusSinogram(self.n, self.d, self.K, self.mean - other.mean,
                             {A: f - other.slices[A] for A, f in self.slices.items()})

    def __mul__(self, scalar: complex) -> "TorusSinogram":
        c = complex(scalar)
        return TorusSinogram(self.n, self.d, self.K, self.mean * c,
                             {A: f * c for A, f in self.slices.items()})

    __rmul__ = __mul__

    def without_mean(self) -> "TorusSinogram":
        return TorusSinogram(self.n, self.d, self.K, 0j, dict(self.slices))

    def with_mean(self, mean: complex) -> "TorusSinogram":
        return TorusSinogram(self.n, self.d, self.K, mean, dict(self.slices))


def zero_sinogram(n: int, d: int, K: int, family) -> TorusSinogram:
    return TorusSinogram(n, d, K, 0j, {as_subspace(A): zero_field(n, K) for A in family})


# --- weight rules -------------------------------------------------------------


@dataclass(frozen=True)
class WeightRule:
    """A positive weight w(k, A) on band frequencies and a finite subspace
    family, with its certified normal-multiplier constants.

    kind 'canonical-singleton' (d = n-1): w = 1 off the mean and
    1/sqrt(|family|) at k = 0, so the data norm is the unweighted one.
    kind 'height-decay': w = base^-height(A), any d.
    kind 'custom-table': explicit values per (k, A); missing pairs are
    undefined and raise when data actually sits there.
    """

    kind: str
    d: int
    n: int
    K: int
    family: tuple[RationalSubspace, ...]
    params: tuple = ()
    c_w: float = field(default=0.0, compare=False)
    C_w: float = field(default=0.0, compare=False)

    @cached_property
    def _custom(self) -> dict:
        return dict(self.params) if self.kind == CUSTOM else {}

    def weight_array(self, A: RationalSubspace) -> np.ndarray:
        """w(. , A) over the whole band (NaN where undefined)."""
        shape = (2 * self.K + 1,) * self.n
        if self.kind == CANONICAL:
            out = np.ones(shape)
            out[(self.K,) * self.n] = 1.0 / math.sqrt(len(self.family))
            return out
        if self.kind == HEIGHT_DECAY:
            base = self.params[0] if self.params else 2.0
            return np.full(shape, float(base) ** (-A.height))
        out = np.full(shape, np.nan)
        for (k, B), w in self._custom.items():
            if B == A:
                out[tuple(int(x) + self.K for x in k)] = w
        return out

    def weight(self, k: Sequence[int], A: RationalSubspace) -> float:
        kk = tuple(int(x) for x in k)
        if self.kind == CANONICAL:
            return 1.0 / math.sqrt(len(self.family)) if not any(kk) else 1.0
        if self.kind == HEIGHT_DECAY:
            base = self.params[0] if self.params else 2.0
            return float(base) ** (-A.height)
        try:
            return self._custom[(kk, A)]
        except KeyError:
            raise WeightUndefined(f"no weight value for k={kk}, A={A.serialize()!r}")

    @cached_property
    def normal_array(self) -> np.ndarray:
        """W(k) = sum over the family's orthogonal members of w(k, A)^2."""
        out = np.zeros((2 * self.K + 1,) * self.n)
        for A in self.family:
            mask = orthogonality_mask(A, self.K)
            wa = self.weight_array(A)
            contrib = np.where(mask, np.nan_to_num(wa, nan=0.0) ** 2, 0.0)
            out += contrib
        return out

    def normal_value(self, k: Sequence[int]) -> float:
        return float(self.normal_array[tuple(int(x) + self.K for x in k)])

    @property
    def W0(self) -> float:
        return self.normal_value((0,) * self.n)

    def decay_certificate(self, A: RationalSubspace) -> tuple[float, float]:
        """(c_A, m_A) with w(k, A) >= c_A <k>^-m_A on the stored band;
        the implemented families are k-independent, so m_A = 0."""
        wa = self.weight_array(A)
        defined = wa[~np.isnan(wa)]
        if defined.size == 0:
            raise WeightUndefined(f"no weight values stored for {A.serialize()!r}")
        return float(defined.min()), 0.0


def _certify(rule: WeightRule) -> WeightRule:
    W = rule.normal_array
    c = math.sqrt(float(W.min()))
    C = math.sqrt(float(W.max()))
    if c == 0.0:
        raise DegenerateWeight(
            "normal multiplier vanishes somewhere on the band; the family does not cover it"
        )
    object.__setattr__(rule, "c_w", c)
    object.__setattr__(rule, "C_w", C)
    return rule


def weight_on_family(kind: str, family, K: int, params: tuple = (),
                     d: int | None = None, n: int | None = None,
                     certify: bool = True) -> WeightRule:
    """Build a weight rule on an explicit subspace family; certification
    scans the band for the constants and rejects vanishing ones. Custom
    tables meant only for pairings need not generate a norm, so they may
    skip it."""
    fam = tuple(sorted(as_subspace(A) for A in family))
    if not fam:
        raise ValueError("family must be nonempty")
    n = fam[0].n if n is None else n
    d = fam[0].d if d is None else d
    if kind == CANONICAL and d != n - 1:
        raise ValueError("canonical-singleton weights are a d = n-1 construction")
    if kind not in (CANONICAL, HEIGHT_DECAY, CUSTOM):
        raise ValueError(f"unknown weight kind {kind!r}")
    if kind == CUSTOM and any(v <= 0 for _, v in params):
        raise ValueError("weights must be positive wherever defined")
    rule = WeightRule(kind=kind, d=d, n=n, K=K, family=fam, params=params)
    return _certify(rule) if certify else rule


def weight_build(kind: str, params: tuple, d: int, n: int, H: int, K: int) -> WeightRule:
    """Weight rule on the height-H truncated Grassmannian Gr_H(d, n)."""
    fam = enumerate_grassmannian(d, n, H)
    return weight_on_family(kind, fam, K, params=params, d=d, n=n)


def canonical_weight(family, K: int) -> WeightRule:
    """The unweighted data-space rule (w = 1 off the mean)."""
    return weight_on_family(CANONICAL, family, K)


def normalized_weight_sums(w: WeightRule) -> np.ndarray:
    """Band array of sum_A wtilde(k, A)^2 with wtilde = w / sqrt(W); equal
    to one wherever W(k) > 0."""
    W = w.normal_array
    return np.where(W > 0, W / np.where(W > 0, W, 1.0), 0.0)


# --- norms and the moment constraint ------------------------------------------


def _slice_field_with_mean(g: TorusSinogram, A: RationalSubspace) -> TorusField:
    arr = g.slices[A].coeffs.copy()
    arr[(g.K,) * g.n] = g.mean
    return TorusField(g.n, g.K, arr)


def _check_weight_defined(g: TorusSinogram, w: WeightRule) -> None:
    if w.kind != CUSTOM:
        return
    for A in g.subspaces:
        wa = w.weight_array(A)
        arr = _slice_field_with_mean(g, A).coeffs
        bad = np.isnan(wa) & (arr != 0)
        if np.any(bad):
            idx = tuple(int(i) - g.K for i in np.argwhere(bad)[0])
            raise WeightUndefined(f"no weight value for k={idx}, A={A.serialize()!r}")


def sinogram_norm(g: TorusSinogram, s: float, w: WeightRule | None = None,
                  p=2, l=2, N: int | None = None) -> float:
    """Weighted data-space norm: per-slice Bessel norms with the weight
    folded into the multiplier, aggregated in l over the family.

    For p = l = 2 this is |mean|^2 W_0 + sum over k != 0 and orthogonal A of
    <k>^(2s) w(k,A)^2 |coeff|^2, which is the spec formula (the mean enters
    once because every slice shares it and the canonical rule normalizes
    W_0 to one).
    """
    if w is None:
        w = canonical_weight(g.subspaces, g.K)
    _check_weight_defined(g, w)
    bs = bracket_sq(g.n, g.K)
    per_slice = []
    for A in g.subspaces:
        wa = np.nan_to_num(w.weight_array(A), nan=0.0)
        f = _slice_field_with_mean(g, A)
        weighted = f.scaled_by(wa * bs ** (float(s) / 2.0))
        if p == 2:
            val = float(np.sqrt(np.sum(np.abs(weighted.coeffs) ** 2)))
        else:
            NN = N if N is not None else 2 * g.K + 2
            val = grid_lp_norm(to_samples(weighted, NN), p)
        per_slice.append(val)
    a = np.array(per_slice)
    if l == np.inf or l == "inf":
        return float(a.max()) if a.size else 0.0
    l = float(l)
    return float((a**l).sum() ** (1.0 / l))


def sinogram_inner(g: TorusSinogram, h: TorusSinogram, s: float,
                   w: WeightRule | None = None) -> complex:
    """The p = l = 2 weighted inner product; generates sinogram_norm."""
    g._check_compatible(h)
    if w is None:
        w = canonical_weight(g.subspaces, g.K)
    _check_weight_defined(g, w)
    _check_weight_defined(h, w)
    bs = bracket_sq(g.n, g.K)
    acc = 0j
    for A in g.subspaces:
        wa = np.nan_to_num(w.weight_array(A), nan=0.0)
        fa = _slice_field_with_mean(g, A).coeffs
        fb = _slice_field_with_mean(h, A).coeffs
        acc += complex(np.sum(bs ** float(s) * wa**2 * fa * np.conj(fb)))
    return acc


def enforce_moment_constraint(raw: Mapping[RationalSubspace, TorusField],
                              w: WeightRule | None = None,
                              d: int | None = None) -> TorusSinogram:
    """Project raw per-slice data onto the shared-average constraint.

    The shared mean is the w(0,.)^2-weighted average of the per-slice means,
    which is the norm-minimizing projection under the p = l = 2 norm."""
    store = {as_subspace(A): f for A, f in raw.items()}
    if not store:
        raise ValueError("no slices given")
    some = next(iter(store))
    n, K = some.n, next(iter(store.values())).K
    d = some.d if d is None else d
    zero = (0,) * n
    num = 0j
    den = 0.0
    for A in sorted(store):
        wA = 1.0 if w is None else w.weight(zero, A) ** 2
        num += wA * store[A].coeff(zero)
        den += wA
    mean = num / den
    center = (K,) * n
    stripped = {}
    for A, f in store.items():
        arr = f.coeffs.copy()
        arr[center] = 0
        stripped[A] = TorusField(n, K, arr)
    return TorusSinogram(n, d, K, mean, stripped)


def range_defect(g: TorusSinogram) -> float:
    """Largest coefficient magnitude violating the support rule (a slice
    coefficient at k not orthogonal to its subspace)."""
    worst = 0.0
    for A in g.subspaces:
        mask = orthogonality_mask(A, g.K)
        off = np.abs(g.slices[A].coeffs)[~mask]
        if off.size:
            worst = max(worst, float(off.max()))
    return worst


def plain_magnitude(g: TorusSinogram) -> float:
    """Unweighted coefficient magnitude sqrt(|mean|^2 + sum |coeff|^2);
    a weight-free scale for tolerances, valid for any (n, d)."""
    total = abs(g.mean) ** 2
    for A in g.subspaces:
        total += float(np.sum(np.abs(g.slices[A].coeffs) ** 2))
    return math.sqrt(total)


def is_in_range(g: TorusSinogram, tol: float = 1e-12) -> bool:
    scale = max(1.0, plain_magnitude(g))
    return range_defect(g) <= tol * scale
