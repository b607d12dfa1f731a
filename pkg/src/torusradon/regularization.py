"""Tikhonov regularization on the Fourier side: the smoothing multiplier,
the closed-form minimizer, parameter schedules and the convergence bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ParamViolation
from .fields import TorusField, bracket_sq, sobolev_norm
from .inversion import adjoint, effective_normal_array
from .sinogram import TorusSinogram, WeightRule, canonical_weight, sinogram_norm
from .transforms import forward_sinogram


@dataclass(frozen=True)
class RegParams:
    """Smoothness/penalty indices and the schedule inputs.

    r: data smoothness, s: penalty smoothness, t: noise-norm index,
    delta: extra smoothness of the truth, alpha > 0, eps >= 0."""

    r: float
    s: float
    t: float = 0.0
    delta: float = 0.0
    alpha: float = 1.0
    eps: float = 0.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ParamViolation("alpha must be positive")


def post_process(f: TorusField, s: float, alpha: float) -> TorusField:
    """The smoothing Fourier multiplier (1 + alpha <k>^(2s))^-1."""
    if alpha < 0:
        raise ParamViolation("alpha must be nonnegative")
    if alpha == 0:
        return f
    mult = 1.0 / (1.0 + alpha * bracket_sq(f.n, f.K) ** float(s))
    return f.scaled_by(mult)


def _check_minimizer_params(r: float, s: float, alpha: float) -> None:
    if s < r:
        raise ParamViolation(f"need s >= r, got s={s}, r={r}")
    if alpha <= 0:
        raise ParamViolation("alpha must be positive")


def tikhonov_reconstruct(g: TorusSinogram, r: float, s: float, alpha: float) -> TorusField:
    """Closed-form minimizer of the Tikhonov functional in the planar
    unweighted setting: smoothing of exponent s - r applied to the adjoint."""
    _check_minimizer_params(r, s, alpha)
    if g.n != 2 or g.d != 1:
        raise ParamViolation("the closed-form minimizer is the n=2, d=1 unweighted setting")
    w = canonical_weight(g.subspaces, g.K)
    return post_process(adjoint(g, w), s - r, alpha)


def tikhonov_reconstruct_weighted(g: TorusSinogram, w: WeightRule, r: float, s: float,
                                  alpha: float) -> TorusField:
    """Weighted d-plane analogue (experimental, beyond the planar theory):
    per-coefficient minimizer adjoint / (W + alpha <k>^(2(s-r)))."""
    _check_minimizer_params(r, s, alpha)
    W = effective_normal_array(g, w)
    back = adjoint(g, w)
    denom = W + alpha * bracket_sq(g.n, g.K) ** float(s - r)
    return TorusField(g.n, g.K, back.coeffs / denom)


def tikhonov_objective(f: TorusField, g: TorusSinogram, r: float, s: float,
                       alpha: float) -> float:
    """The Tikhonov functional: squared data misfit in the data norm of
    order r plus alpha times the squared H^s penalty."""
    _check_minimizer_params(r, s, alpha)
    if f.n != g.n:
        raise DimensionMismatch("field and data dimensions differ")
    w = canonical_weight(g.subspaces, g.K)
    misfit = sinogram_norm(forward_sinogram(f, g.subspaces) - g, r, w)
    return misfit**2 + alpha * sobolev_norm(f, s) ** 2


def alpha_schedule(eps: float, delta: float = 0.0, s: float = 1.0,
                   mode: str = "strategy") -> float:
    """Regularization parameter schedules: sqrt(eps) for the plain strategy,
    eps^lambda with lambda = (1 + delta/2s)^-1 for the optimal rate."""
    if eps <= 0:
        raise ParamViolation("eps must be positive")
    if mode == "strategy":
        return float(np.sqrt(eps))
    if mode == "optimal":
        if s <= 0 or delta < 0:
            raise ParamViolation("optimal schedule needs s > 0 and delta >= 0")
        lam = 1.0 / (1.0 + delta / (2.0 * s))
        return float(eps**lam)
    raise ParamViolation(f"unknown schedule mode {mode!r}")


def strategy_constant(x: float) -> float:
    """C(x) = x (x^-1 - 1)^(1-x) on (0, 1); C(1/2) = 1/2 exactly."""
    if not (0.0 < x < 1.0):
        raise ParamViolation("the constant is defined for 0 < x < 1")
    return float(x * (1.0 / x - 1.0) ** (1.0 - x))


def error_bound(alpha: float, eps: float, delta: float, s: float, M_f: float) -> float:
    """Right-hand side of the quantitative convergence estimate:
    alpha^(delta/2s) C(delta/2s) M_f + eps / alpha."""
    if not (0.0 < delta < 2.0 * s):
        raise ParamViolation(f"need 0 < delta < 2s, got delta={delta}, s={s}")
    if not (0.0 < alpha <= 2.0 * s / delta - 1.0):
        raise ParamViolation(f"need 0 < alpha <= 2s/delta - 1, got alpha={alpha}")
    if eps < 0:
        raise ParamViolation("eps must be nonnegative")
    x = delta / (2.0 * s)
    return float(alpha**x * strategy_constant(x) * M_f + eps / alpha)
