"""Bridge from Euclidean parallel-beam sinograms to torus transform data.

The object sits inside one fundamental domain (support radius rho < 1/2
around (1/2, 1/2)). The closed torus geodesic of primitive direction v
lifts to Euclidean lines spaced 1/|v| apart in perpendicular offset, so the
period-1 torus datum at offset tau is |v|^-1 times the sum of the Euclidean
arc-length data over the strand offsets tau + j/|v| that meet the support.

Offsets are stored on a uniform [0, 1) grid holding the 1-periodized
profile; since the support is narrower than one period nothing is lost,
and strand values are read off by trigonometric interpolation.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, GeometryViolation, MissingAngle
from .fields import TorusField, to_coefficients
from .lattice import PrimitiveDirection, line, primitive_reduce
from .sinogram import TorusSinogram, enforce_moment_constraint


@dataclass(frozen=True)
class EuclideanSinogram:
    """Parallel-beam data tagged by primitive directions.

    values[i, j] is the arc-length line integral for directions[i] at
    perpendicular offset j / n_offsets, 1-periodized; offsets are measured
    along the unit normal (-v2, v1) / |v| from the origin."""

    directions: tuple[PrimitiveDirection, ...]
    n_offsets: int
    values: np.ndarray
    support_radius: float
    center: tuple[float, float] = (0.5, 0.5)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (len(self.directions), self.n_offsets):
            raise ValueError("values shape does not match directions x offsets")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "directions", tuple(self.directions))
        if not (0.0 < self.support_radius):
            raise GeometryViolation("support radius must be positive")
        if self.support_radius >= 0.5:
            raise GeometryViolation("support radius must be < 1/2 to fit one fundamental domain")

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(self.n_offsets) / self.n_offsets

    def row(self, v: PrimitiveDirection) -> np.ndarray:
        for d, r in zip(self.directions, self.values):
            if d == v:
                return r
        raise MissingAngle(f"no Euclidean data for direction {v.v}")


def _unit_normal_offset(v: PrimitiveDirection, point) -> float:
    speed = math.sqrt(v.v[0] ** 2 + v.v[1] ** 2)
    return (-v.v[1] * point[0] + v.v[0] * point[1]) / speed


def disk_sinogram(directions, n_offsets: int, radius: float,
                  center=(0.5, 0.5)) -> EuclideanSinogram:
    """Analytic parallel-beam data of a unit-density disk: chord length
    2 sqrt(radius^2 - t^2) at signed distance t from the disk center."""
    dirs = tuple(v if isinstance(v, PrimitiveDirection) else primitive_reduce(v)
                 for v in directions)
    if not (0.0 < radius < 0.5):
        raise GeometryViolation("disk radius must lie in (0, 1/2)")
    s = np.arange(n_offsets) / n_offsets
    values = np.zeros((len(dirs), n_offsets))
    for i, v in enumerate(dirs):
        c = _unit_normal_offset(v, center)
        for shift in range(-2, 3):
            t = s + shift - c
            inside = np.abs(t) <= radius
            values[i, inside] += 2.0 * np.sqrt(radius**2 - t[inside] ** 2)
    return EuclideanSinogram(dirs, n_offsets, values, radius, tuple(center))


def _trig_interpolate(samples: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Evaluate the 1-periodic band-limited interpolant of uniform real
    samples at arbitrary points (half-spectrum form; the Nyquist mode, when
    present, is split symmetrically into a cosine)."""
    M = samples.shape[0]
    coeffs = np.fft.rfft(samples) / M
    weights = np.full(coeffs.shape[0], 2.0)
    weights[0] = 1.0
    if M % 2 == 0:
        weights[-1] = 1.0
    freqs = np.arange(coeffs.shape[0])
    phases = np.exp(2j * np.pi * np.outer(points, freqs))
    return (phases @ (weights * coeffs)).real


def bridge_ingest(sino: EuclideanSinogram, family, K: int) -> TorusSinogram:
    """Resample Euclidean parallel-beam data onto torus transform data.

    Per direction v: the one-variable torus profile along the integer
    normal (-v2, v1) is assembled by the strand sum with spacing 1/|v| and
    the |v|^-1 period-1 factor, then converted to slice coefficients. The
    per-direction means are reconciled into the shared average afterwards.
    """
    if sino.support_radius >= 0.5:
        raise GeometryViolation("support radius must be < 1/2")
    rho = sino.support_radius
    dirs = [v if isinstance(v, PrimitiveDirection) else primitive_reduce(v) for v in family]
    if not dirs:
        raise ValueError("family must be nonempty")
    raw = {}
    for v in dirs:
        if v.n != 2:
            raise DimensionMismatch("the bridge is a planar (n=2) operation")
        data = sino.row(v)
        speed = math.sqrt(v.v[0] ** 2 + v.v[1] ** 2)
        normal = (-v.v[1], v.v[0])
        c_v = _unit_normal_offset(v, sino.center)
        m_max = K // max(abs(x) for x in v.v)
        # profile grid no coarser than the stored offsets, so downsampling
        # adds no aliasing beyond the offset grid's own
        M_u = max(2 * m_max + 2, sino.n_offsets)
        u = np.arange(M_u) / M_u
        tau = u / speed
        j_lo = np.ceil((c_v - rho - tau) * speed).astype(int)
        j_hi = np.floor((c_v + rho - tau) * speed).astype(int)
        profile = np.zeros(M_u)
        width = int((j_hi - j_lo).max()) + 1 if M_u else 0
        if width > 0:
            js = j_lo[:, None] + np.arange(width)[None, :]
            valid = js <= j_hi[:, None]
            offs = (tau[:, None] + js / speed) % 1.0
            vals = _trig_interpolate(data, offs.ravel()).reshape(offs.shape)
            profile = (vals * valid).sum(axis=1) / speed
        prof_field = to_coefficients(profile, m_max)
        arr = np.zeros((2 * K + 1,) * 2, dtype=np.complex128)
        for m in range(-m_max, m_max + 1):
            k = (m * normal[0], m * normal[1])
            arr[k[0] + K, k[1] + K] = prof_field.coeff((m,))
        raw[line(v)] = TorusField(2, K, arr)
    return enforce_moment_constraint(raw, d=1)


# --- CSV exchange format -------------------------------------------------------

CSV_HEADER = "angle_vx,angle_vy,offset,value"


def sinogram_to_csv(sino: EuclideanSinogram) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    offs = sino.offsets
    for v, row in zip(sino.directions, sino.values):
        for o, val in zip(offs, row):
            buf.write(f"{v.v[0]},{v.v[1]},{o:.17g},{val:.17g}\n")
    return buf.getvalue()


def sinogram_from_csv(text: str, support_radius: float,
                      center=(0.5, 0.5)) -> EuclideanSinogram:
    lines_ = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines_ or lines_[0].strip() != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    grouped: dict[PrimitiveDirection, list[tuple[float, float]]] = {}
    order: list[PrimitiveDirection] = []
    for ln in lines_[1:]:
        sx, sy, so, sv = ln.split(",")
        v = PrimitiveDirection((int(sx), int(sy)))
        if v not in grouped:
            grouped[v] = []
            order.append(v)
        grouped[v].append((float(so), float(sv)))
    counts = {len(rows) for rows in grouped.values()}
    if len(counts) != 1:
        raise ValueError("directions carry different offset counts")
    M = counts.pop()
    values = np.zeros((len(order), M))
    for i, v in enumerate(order):
        rows = sorted(grouped[v])
        offs = np.array([o for o, _ in rows])
        if np.max(np.abs(offs - np.arange(M) / M)) > 1e-9:
            raise ValueError(f"offsets for {v.v} are not the uniform [0,1) grid")
        values[i] = [val for _, val in rows]
    return EuclideanSinogram(tuple(order), M, values, support_radius, tuple(center))
