"""Two-photon creation kernel of the sudden-transition sphere.

The exact kernel F(x, y) is an angular-momentum sum over squared
pseudo-Wronskians weighted by the wall-matching amplitudes.  Its diagonal
D(x) = F(x, x) tends to 1/(2 pi^2) for large argument, recovering the
homogeneous-medium result, and the whole kernel is well approximated by
the factorized smeared-delta form used for production spectra.

Frequency dispersion is modeled as a sharp momentum cutoff: the gas
refractive index equals its bulk value below the cutoff and 1 above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matching import MediumConfig, coefficient_a_sq
from .special_functions import (
    AsymptoticRegimeError,
    BesselDomainError,
    ModeOrder,
    bessel_jn_half,
    diagonal_kernel_term,
    tail_term_scale,
)

__all__ = [
    "CutoffProfile",
    "KernelValue",
    "KernelConvergenceError",
    "refractive_in",
    "refractive_out",
    "f_exact",
    "d_exact",
    "d_approx",
    "f_factorized",
    "default_l_max",
]

# Hard ceiling on the angular-momentum sum; the adaptive truncation must
# certify its tail below this order or the evaluation is rejected.
_L_HARD_CAP = 200
# Relative tail budget for the adaptive truncation.
_TAIL_REL = 1e-8
# Below this separation (relative to scale) the ratio W~/(x^2 - y^2) is
# evaluated through its analytic diagonal limit; direct evaluation loses
# all digits to cancellation there.
_DIAG_EPS_REL = 1e-3

_HALF_ASYMPTOTE = 1.0 / (2.0 * math.pi * math.pi)
_D_FIT_SCALE = 250.0
# The factorized form carries (x+y)^6/(16000 + (x+y)^6); 16000 = 2^6 * 250
# so that the diagonal x = y reproduces the fitted D((x+y)/2).
_F_FIT_SCALE = 16000.0


class KernelConvergenceError(ArithmeticError):
    """Angular-momentum sum failed to certify its tail by the hard cap."""

    def __init__(self, message: str, partial: float, l_reached: int):
        super().__init__(message)
        self.partial = partial
        self.l_reached = l_reached


@dataclass(frozen=True)
class CutoffProfile:
    """Dimensionless momentum cutoffs of the dispersive step model."""

    x_star: float
    y_star: float

    def __post_init__(self) -> None:
        if self.x_star <= 0.0 or self.y_star <= 0.0:
            raise ValueError(f"cutoffs must be positive, got {self.x_star}, {self.y_star}")

    @classmethod
    def from_config(cls, cfg: MediumConfig) -> "CutoffProfile":
        """Cutoffs (n_gas_out/n_liquid) * radius * k_observed on both axes."""
        c = cfg.cutoff_product
        return cls(x_star=c, y_star=c)

    @classmethod
    def rounded(cls, cfg: MediumConfig) -> "CutoffProfile":
        """Cutoffs (n_gas_out/n_liquid) * 15, the rounded reference value.

        The default geometry gives radius * k_observed = 5 pi = 15.708; the
        reference results quote the rounded 15, so reproduction paths use
        this constructor while from_config keeps the exact product.
        """
        c = cfg.n_gas_out / cfg.n_liquid * 15.0
        return cls(x_star=c, y_star=c)


@dataclass(frozen=True)
class KernelValue:
    """F(x, y) together with the truncation actually applied."""

    value: float
    l_used: int
    truncation_error_estimate: float


def refractive_in(y: float, cfg: MediumConfig, cut: CutoffProfile) -> float:
    """Gas index before the transition: n_gas_in below the cutoff, 1 above.

    Left-continuous: the bulk value applies at y = y_star exactly.
    """
    return cfg.n_gas_in if y <= cut.y_star else 1.0


def refractive_out(x: float, cfg: MediumConfig, cut: CutoffProfile) -> float:
    """Gas index after the transition: n_gas_out below the cutoff, 1 above."""
    return cfg.n_gas_out if x <= cut.x_star else 1.0


def default_l_max(cfg: MediumConfig) -> int:
    """Angular-momentum truncation matched to the momentum cutoff."""
    return max(1, round(cfg.cutoff_product))


def _pw_ratio(order: ModeOrder, x: float, y: float) -> float:
    """W~_nu(x, y) / (x^2 - y^2), stable through the diagonal."""
    if abs(x - y) < _DIAG_EPS_REL * max(x, y, 1.0):
        m = 0.5 * (x + y)
        return diagonal_kernel_term(order, m) / (x + y)
    px = bessel_jn_half(order, x)
    py = bessel_jn_half(order, y)
    return (px.j * y * py.j_prev - py.j * x * px.j_prev) / (x * x - y * y)


def _a_product(order: ModeOrder, x: float, y: float, cfg: MediumConfig, cut: CutoffProfile) -> float:
    """|A^in(y)|^2 |A^out(x)|^2; identically 1 above the respective cutoffs."""
    a_in = 1.0 if y > cut.y_star else coefficient_a_sq(order, y, cfg.n_liquid / cfg.n_gas_in)
    a_out = 1.0 if x > cut.x_star else coefficient_a_sq(order, x, cfg.n_liquid / cfg.n_gas_out)
    return a_in * a_out


def _a_tail_majorant(l: int, x: float, y: float, cfg: MediumConfig | None, cut: CutoffProfile | None) -> float:
    """Upper estimate of the A-factor product for tail majorization."""
    if cfg is None:
        return 1.0
    nu = l + 0.5
    prod = 1.0
    if cut is None or y <= cut.y_star:
        prod *= max(1.0, (cfg.n_liquid / cfg.n_gas_in) ** (2.0 * nu))
    if cut is None or x <= cut.x_star:
        prod *= max(1.0, (cfg.n_liquid / cfg.n_gas_out) ** (2.0 * nu))
    return prod


def f_exact(
    x: float,
    y: float,
    cfg: MediumConfig | None = None,
    l_max: int = _L_HARD_CAP,
    *,
    with_a_factors: bool = False,
    cut: CutoffProfile | None = None,
) -> KernelValue:
    """Exact kernel F(x, y) = sum_{l>=1} (2l+1) |A^in|^2 |A^out|^2 W~^2/(x^2-y^2)^2.

    The sum stops at min(l_max, adaptive order) where the adaptive order is
    certified by the large-order tail bound falling below 1e-8 of the
    partial sum.  ``with_a_factors`` enables the wall amplitudes (requires
    cfg); the default A = 1 matches the diagonal study and the factorized
    approximation.
    """
    if x <= 0.0 or y <= 0.0:
        raise BesselDomainError(f"kernel arguments must be positive, got x={x}, y={y}")
    if l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")
    if with_a_factors and cfg is None:
        raise ValueError("with_a_factors requires a MediumConfig")
    cap = min(l_max, _L_HARD_CAP)
    acc = 0.0
    terms: list[float] = []
    l = 0
    tail_est = math.inf
    while l < cap:
        l += 1
        order = ModeOrder(l)
        r = _pw_ratio(order, x, y)
        t = (2 * l + 1) * r * r
        if with_a_factors:
            t *= _a_product(order, x, y, cfg, cut)
        terms.append(t)
        acc += t
        # Try to certify the remainder once the asymptotic regime is reached.
        try:
            s1 = tail_term_scale(ModeOrder(l + 1), x, y)
            s2 = tail_term_scale(ModeOrder(l + 2), x, y)
        except AsymptoticRegimeError:
            continue
        b1 = (2 * (l + 1) + 1) * s1 * s1 * _a_tail_majorant(l + 1, x, y, cfg if with_a_factors else None, cut)
        b2 = (2 * (l + 2) + 1) * s2 * s2 * _a_tail_majorant(l + 2, x, y, cfg if with_a_factors else None, cut)
        ratio = b2 / b1 if b1 > 0.0 else 0.0
        if ratio < 0.9:
            tail_est = b1 / (1.0 - ratio)
            if tail_est <= _TAIL_REL * max(acc, 1e-300):
                return KernelValue(value=math.fsum(terms), l_used=l, truncation_error_estimate=tail_est)
    value = math.fsum(terms)
    if l_max >= _L_HARD_CAP and (not math.isfinite(tail_est) or tail_est > _TAIL_REL * max(value, 1e-300)):
        raise KernelConvergenceError(
            f"kernel tail not certified by l={_L_HARD_CAP} at (x, y)=({x}, {y})", value, l
        )
    # Caller-imposed truncation: report the best tail knowledge we have.
    est = tail_est if math.isfinite(tail_est) else abs(terms[-1])
    return KernelValue(value=value, l_used=l, truncation_error_estimate=est)


def d_exact(x: float, l_max: int = _L_HARD_CAP) -> float:
    """Diagonal kernel D(x) = F(x, x) with unit wall amplitudes."""
    return f_exact(x, x, l_max=l_max).value


def d_approx(x):
    """Fitted diagonal (1/2pi^2) x^6/(250 + x^6); asymptote 1/(2 pi^2)."""
    x = np.asarray(x, dtype=float)
    x6 = x**6
    out = _HALF_ASYMPTOTE * x6 / (_D_FIT_SCALE + x6)
    return out if out.ndim else float(out)


def f_factorized(x, y):
    """Factorized kernel D((x+y)/2) * sinc^2(3(x-y)/4), array-friendly.

    The removable singularity at x = y is handled by sinc; on the diagonal
    the value reduces exactly to d_approx(x) because 16000 = 2^6 * 250.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = x + y
    s6 = s**6
    hump = _HALF_ASYMPTOTE * s6 / (_F_FIT_SCALE + s6)
    # np.sinc(t) = sin(pi t)/(pi t); we need sin(u)/u with u = 3(x-y)/4.
    sinc = np.sinc(0.75 * (x - y) / np.pi)
    out = hump * sinc * sinc
    return out if out.ndim else float(out)
