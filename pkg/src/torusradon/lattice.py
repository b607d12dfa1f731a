"""Integer-lattice engine: primitive directions, rational subspaces in
Hermite normal form, orthogonality sets and direction covers.

All arithmetic here is exact (Python integers). Subspaces are canonical:
two values compare equal iff they are the same rational subspace.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import RankMismatch, ZeroVector

IntVec = tuple[int, ...]


def _as_intvec(v: Sequence[int]) -> IntVec:
    return tuple(int(x) for x in v)


def _canonical_sign(v: IntVec) -> IntVec:
    for x in v:
        if x != 0:
            return v if x > 0 else tuple(-y for y in v)
    return v


@dataclass(frozen=True, order=True)
class PrimitiveDirection:
    """Nonzero integer vector with coprime entries and positive first
    nonzero entry; the canonical representative of a rational line."""

    v: IntVec

    def __post_init__(self):
        if not any(self.v):
            raise ZeroVector("primitive direction must be nonzero")
        g = 0
        for x in self.v:
            g = gcd(g, x)
        if g != 1:
            raise ValueError(f"entries not coprime: {self.v}")
        if self.v != _canonical_sign(self.v):
            raise ValueError(f"sign not canonical: {self.v}")

    @property
    def n(self) -> int:
        return len(self.v)

    def dot(self, k: Sequence[int]) -> int:
        return sum(a * int(b) for a, b in zip(self.v, k))

    def serialize(self) -> str:
        return ",".join(str(x) for x in self.v)

    @staticmethod
    def parse(text: str) -> "PrimitiveDirection":
        return PrimitiveDirection(_as_intvec(int(t) for t in text.split(",")))


def primitive_reduce(v: Sequence[int]) -> PrimitiveDirection:
    """Divide out the gcd and canonicalize the sign; spans the same line."""
    vec = _as_intvec(v)
    if not any(vec):
        raise ZeroVector("cannot reduce the zero vector")
    g = 0
    for x in vec:
        g = gcd(g, x)
    return PrimitiveDirection(_canonical_sign(tuple(x // g for x in vec)))


def orthogonal_primitive(k: Sequence[int]) -> PrimitiveDirection:
    """The canonical direction orthogonal to a nonzero planar frequency."""
    kk = _as_intvec(k)
    if len(kk) != 2:
        raise ValueError("orthogonal_primitive is a planar (n=2) operation")
    if not any(kk):
        raise ZeroVector("frequency must be nonzero")
    return primitive_reduce((-kk[1], kk[0]))


def enumerate_directions(n: int, H: int) -> list[PrimitiveDirection]:
    """All canonical primitive vectors with sup-norm at most H, sorted
    lexicographically."""
    if H < 1:
        raise ValueError("H must be >= 1")
    out = []
    for v in itertools.product(range(-H, H + 1), repeat=n):
        if not any(v):
            continue
        for x in v:
            if x != 0:
                first = x
                break
        if first < 0:
            continue
        g = 0
        for x in v:
            g = gcd(g, x)
        if g == 1:
            out.append(PrimitiveDirection(v))
    out.sort()
    return out


# --- exact row operations -------------------------------------------------

def row_hnf(rows: Iterable[Sequence[int]], n: int) -> list[IntVec]:
    """Row-style Hermite normal form: echelon with positive pivots and
    above-pivot entries reduced into [0, pivot)."""
    work = [list(map(int, r)) for r in rows]
    work = [r for r in work if any(r)]
    pivots: list[tuple[int, list[int]]] = []
    col = 0
    while work and col < n:
        live = [r for r in work if r[col] != 0]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            for r in live[1:]:
                q = r[col] // piv[col]
                if q:
                    for j in range(col, n):
                        r[j] -= q * piv[j]
            live = [r for r in live if r[col] != 0]
        piv = live[0]
        work = [r for r in work if any(r) and r is not piv]
        if piv[col] < 0:
            piv = [-x for x in piv]
        pivots.append((col, piv))
        col += 1
    out = [r for _, r in pivots]
    cols = [c for c, _ in pivots]
    for i in range(len(out)):
        c, p = cols[i], out[i][cols[i]]
        for m in range(i):
            q = out[m][c] // p
            if q:
                out[m] = [a - q * b for a, b in zip(out[m], out[i])]
    return [tuple(r) for r in out]


def integer_kernel(rows: Sequence[Sequence[int]], n: int) -> list[IntVec]:
    """HNF basis of the saturated lattice {x in Z^n : rows @ x = 0}."""
    mats = [list(map(int, r)) for r in rows]
    m = len(mats)
    if m == 0:
        return row_hnf([[1 if j == i else 0 for j in range(n)] for i in range(n)], n)
    aug = []
    for i in range(n):
        aug.append([mats[r][i] for r in range(m)] + [1 if j == i else 0 for j in range(n)])
    h = row_hnf(aug, m + n)
    ker = [r[m:] for r in h if not any(r[:m])]
    return row_hnf(ker, n)


def saturate(rows: Sequence[Sequence[int]], n: int) -> list[IntVec]:
    """HNF basis of span_Q(rows) intersected with Z^n."""
    return integer_kernel(integer_kernel(rows, n), n)


def int_det(mat: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(map(int, r)) for r in mat]
    m = len(a)
    sign = 1
    prev = 1
    for i in range(m - 1):
        if a[i][i] == 0:
            for r in range(i + 1, m):
                if a[r][i] != 0:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, m):
            for c in range(i + 1, m):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[-1][-1]


def _is_saturated(basis: Sequence[IntVec], n: int) -> bool:
    d = len(basis)
    g = 0
    for cols in itertools.combinations(range(n), d):
        minor = [[row[c] for c in cols] for row in basis]
        g = gcd(g, abs(int_det(minor)))
        if g == 1:
            return True
    return g == 1


@dataclass(frozen=True, order=True)
class RationalSubspace:
    """A d-dimensional rational subspace of Q^n, stored as the HNF basis
    of its saturated integer lattice. Value equality is subspace equality."""

    n: int
    d: int
    basis: tuple[IntVec, ...]

    def __post_init__(self):
        if not (1 <= self.d <= self.n - 1):
            raise ValueError(f"need 1 <= d <= n-1, got d={self.d}, n={self.n}")
        if len(self.basis) != self.d or any(len(r) != self.n for r in self.basis):
            raise ValueError("basis shape does not match (d, n)")
        if tuple(row_hnf(self.basis, self.n)) != self.basis:
            raise ValueError("basis is not in Hermite normal form")
        if not _is_saturated(self.basis, self.n):
            raise ValueError("basis lattice is not saturated")

    @property
    def height(self) -> int:
        """Max absolute basis entry; the enumeration truncation measure."""
        return max(abs(x) for row in self.basis for x in row)

    def contains_frequency(self, k: Sequence[int]) -> bool:
        """Whether k is orthogonal to every basis row (exact)."""
        kk = _as_intvec(k)
        return all(sum(a * b for a, b in zip(row, kk)) == 0 for row in self.basis)

    def serialize(self) -> str:
        rows = "; ".join(" ".join(str(x) for x in r) for r in self.basis)
        return f"{self.d} {self.n}; {rows}"

    @staticmethod
    def parse(text: str) -> "RationalSubspace":
        head, *rows = [part.strip() for part in text.split(";")]
        d, n = (int(t) for t in head.split())
        basis = tuple(_as_intvec(int(t) for t in r.split()) for r in rows)
        return RationalSubspace(n=n, d=d, basis=basis)


def line(v: PrimitiveDirection | Sequence[int]) -> RationalSubspace:
    """The rational line spanned by a direction (its HNF basis is the
    canonical primitive vector itself)."""
    if not isinstance(v, PrimitiveDirection):
        v = primitive_reduce(v)
    return RationalSubspace(n=v.n, d=1, basis=(v.v,))


def direction_of(A: RationalSubspace) -> PrimitiveDirection:
    if A.d != 1:
        raise ValueError("direction_of needs a one-dimensional subspace")
    return PrimitiveDirection(A.basis[0])


def canonicalize_subspace(rows: Sequence[Sequence[int]], d: int) -> RationalSubspace:
    """Canonical representative of the Q-span of the given integer rows.

    Saturates the lattice and reduces to HNF, so the output depends only
    on the span. Raises RankMismatch if the span is not d-dimensional.
    """
    mats = [list(map(int, r)) for r in rows]
    if not mats:
        raise RankMismatch("no generators given")
    n = len(mats[0])
    sat = saturate(mats, n)
    if len(sat) != d:
        raise RankMismatch(f"rank {len(sat)} != requested d={d}")
    return RationalSubspace(n=n, d=d, basis=tuple(sat))


def orthogonal_complement(k: Sequence[int]) -> RationalSubspace:
    """The hyperplane of all vectors orthogonal to a nonzero frequency."""
    kk = _as_intvec(k)
    if not any(kk):
        raise ZeroVector("frequency must be nonzero")
    n = len(kk)
    ker = integer_kernel([kk], n)
    return RationalSubspace(n=n, d=n - 1, basis=tuple(ker))


def enumerate_grassmannian(d: int, n: int, H: int) -> list[RationalSubspace]:
    """All rational subspaces whose HNF basis has entries bounded by H.

    Generates every valid HNF matrix shape directly (pivot columns, positive
    pivots <= H, reduced above-pivot entries, free entries in [-H, H]) and
    keeps the saturated ones; HNF uniqueness makes deduplication unnecessary.
    """
    return list(_enumerate_grassmannian_cached(d, n, H))


@lru_cache(maxsize=64)
def _enumerate_grassmannian_cached(d: int, n: int, H: int) -> tuple[RationalSubspace, ...]:
    if H < 1:
        raise ValueError("H must be >= 1")
    if d == 1:
        return tuple(line(v) for v in enumerate_directions(n, H))
    out = []
    for pivcols in itertools.combinations(range(n), d):
        free_positions = []
        reduced_positions = []
        for i in range(d):
            for c in range(pivcols[i] + 1, n):
                if c in pivcols:
                    m = pivcols.index(c)
                    if m > i:
                        reduced_positions.append((i, c, m))
                else:
                    free_positions.append((i, c))
        for pivots in itertools.product(range(1, H + 1), repeat=d):
            red_ranges = [range(pivots[m]) for (_, _, m) in reduced_positions]
            for red in itertools.product(*red_ranges):
                base = [[0] * n for _ in range(d)]
                for i in range(d):
                    base[i][pivcols[i]] = pivots[i]
                for (i, c, _), val in zip(reduced_positions, red):
                    base[i][c] = val
                for free in itertools.product(range(-H, H + 1), repeat=len(free_positions)):
                    mat = [row[:] for row in base]
                    for (i, c), val in zip(free_positions, free):
                        mat[i][c] = val
                    basis = tuple(tuple(r) for r in mat)
                    if _is_saturated(basis, n):
                        out.append(RationalSubspace(n=n, d=d, basis=basis))
    out.sort()
    return tuple(out)


def omega_k(k: Sequence[int], d: int, n: int, H: int) -> list[RationalSubspace]:
    """Truncated orthogonality set: subspaces of height <= H with every
    basis row orthogonal to k. For k = 0 this is the whole truncated
    Grassmannian; for d = n-1 and k != 0 it is at most the one hyperplane."""
    kk = _as_intvec(k)
    if len(kk) != n:
        raise ValueError("frequency length does not match n")
    if not any(kk):
        return enumerate_grassmannian(d, n, H)
    if d == n - 1:
        A = orthogonal_complement(kk)
        return [A] if A.height <= H else []
    return [A for A in enumerate_grassmannian(d, n, H) if A.contains_frequency(kk)]


def frequency_band(n: int, K: int, punctured: bool = False) -> list[IntVec]:
    """Integer frequencies with sup-norm at most K, lexicographic order."""
    out = list(itertools.product(range(-K, K + 1), repeat=n))
    if punctured:
        out = [k for k in out if any(k)]
    return out


def direction_cover(R: int, n: int = 2) -> list[PrimitiveDirection]:
    """Greedy direction set covering every planar frequency 0 < |k|_inf <= R.

    Each candidate direction covers exactly the integer multiples of its
    orthogonal line, so residual coverage counts are disjoint per line; the
    greedy order is by that count, largest first, lexicographic tie-break.
    """
    if n != 2:
        raise ValueError("direction_cover is a planar (n=2) operation")
    if R < 0:
        raise ValueError("R must be >= 0")
    if R == 0:
        return [PrimitiveDirection((1, 0))]
    lines = enumerate_directions(2, R)
    scored = []
    for ell in lines:
        count = 2 * (R // max(abs(x) for x in ell.v))
        v = orthogonal_primitive(ell.v)
        scored.append((-count, v))
    scored.sort()
    return [v for _, v in scored]


def hyperplane_cover(K: int, n: int) -> list[RationalSubspace]:
    """All hyperplanes k-perp for 0 < |k|_inf <= K, deduplicated and sorted.
    The minimal family on which the full-band hyperplane sum inverts."""
    seen = {}
    for v in enumerate_directions(n, K):
        A = orthogonal_complement(v.v)
        seen[A] = None
    return sorted(seen)


def orthogonal_line(k: Sequence[int]) -> RationalSubspace:
    """Some canonical line orthogonal to a nonzero frequency: rotate the
    first two nonzero components, or take a free axis if only one exists."""
    kk = _as_intvec(k)
    if not any(kk):
        raise ZeroVector("frequency must be nonzero")
    n = len(kk)
    support = [i for i, x in enumerate(kk) if x != 0]
    w = [0] * n
    if len(support) == 1:
        w[(support[0] + 1) % n] = 1
    else:
        i, j = support[0], support[1]
        w[i], w[j] = -kk[j], kk[i]
    return line(w)


def line_cover(K: int, n: int) -> list[RationalSubspace]:
    """A line family with at least one member orthogonal to every band
    frequency 0 < |k|_inf <= K. For n = 2 this is the direction cover."""
    if n == 2:
        return [line(v) for v in direction_cover(K, 2)]
    out = {}
    for k in frequency_band(n, K, punctured=True):
        out[orthogonal_line(k)] = None
    return sorted(out)
