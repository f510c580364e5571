"""Numerically stable half-integer-order Bessel machinery.

Everything here reduces to spherical Bessel functions through
J_{l+1/2}(z) = sqrt(2z/pi) * j_l(z) (and likewise for the Neumann
functions).  The regular solution j is generated by downward (Miller)
recurrence normalized against closed-form low orders, the irregular
solution y by upward recurrence from its closed forms; each direction
is the numerically stable one for its solution.  Derivatives are never
finite-differenced: z J'_nu(z) = z J_{nu-1}(z) - nu J_nu(z).

All functions are pure; values are freely shareable across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ModeOrder",
    "BesselPair",
    "AsymptoticRegimeError",
    "BesselDomainError",
    "bessel_jn_half",
    "half_integer_j_array",
    "pseudo_wronskian",
    "diagonal_kernel_term",
    "large_order_bound",
]

# Downward recurrence start margin.  Contamination by the irregular
# solution is damped by at least a factor ~4 per step once the order
# exceeds the argument, so 40 extra steps give > 1e-24 suppression.
_MILLER_MARGIN = 40
# Power of two so that rescaling is exact in binary floating point.
_RESCALE_LIMIT = 2.0**830
_UNDERFLOW_FLOOR = 1e-300
_BOUND_SAFETY = 10.0


class BesselDomainError(ValueError):
    """Argument outside the supported domain (z <= 0)."""


class AsymptoticRegimeError(ValueError):
    """large_order_bound called below its validity region nu > e*max(x,y)/2."""


@dataclass(frozen=True)
class ModeOrder:
    """Angular momentum l with half-integer Bessel order nu = l + 1/2.

    Physical photon modes have l >= 1 (no monopole radiation); l = 0 is
    permitted for internal math use only.
    """

    l: int

    def __post_init__(self) -> None:
        if not isinstance(self.l, int) or self.l < 0:
            raise ValueError(f"angular momentum must be a non-negative integer, got {self.l!r}")

    @property
    def nu(self) -> float:
        return self.l + 0.5


@dataclass(frozen=True)
class BesselPair:
    """J and N of orders nu and nu-1 at a common argument z.

    ``saturated`` is set when J underflowed to exact zero or N overflowed
    to +-inf; values are clamped, never NaN.
    """

    j: float
    n: float
    j_prev: float
    n_prev: float
    z: float
    saturated: bool = False


def _sph_jn_seq(l_max: int, z: float) -> list[float]:
    """Spherical j_0..j_{l_max} at z > 0."""
    j0 = math.sin(z) / z
    if l_max == 0:
        return [j0]
    j1 = j0 / z - math.cos(z) / z
    out = [0.0] * (l_max + 1)
    if z >= l_max:
        # Oscillatory regime throughout: upward recurrence is stable.
        out[0], out[1] = j0, j1
        for l in range(1, l_max):
            out[l + 1] = (2 * l + 1) / z * out[l] - out[l - 1]
        return out

    start = l_max + _MILLER_MARGIN
    jp = 0.0  # ~ j_{start+1}
    jc = 1e-30  # ~ j_{start}, arbitrary seed scale
    for l in range(start, -1, -1):
        if l <= l_max:
            out[l] = jc
        jm = (2 * l + 1) / z * jc - jp
        jp, jc = jc, jm
        if abs(jc) > _RESCALE_LIMIT:
            inv = 1.0 / _RESCALE_LIMIT
            jp *= inv
            jc *= inv
            # out[l] was stored this iteration and carries the old scale.
            for k in range(min(l, l_max), l_max + 1):
                out[k] *= inv
    # jc now holds the unnormalized j_{-1}; normalize against whichever
    # closed form is farther from its zero.
    if abs(j0) >= abs(j1):
        scale = j0 / out[0] if out[0] != 0.0 else 0.0
    else:
        scale = j1 / out[1] if out[1] != 0.0 else 0.0
    return [v * scale for v in out]


def _sph_yn_seq(l_max: int, z: float) -> tuple[list[float], bool]:
    """Spherical y_0..y_{l_max} at z > 0; flag reports overflow saturation."""
    y0 = -math.cos(z) / z
    out = [y0]
    saturated = False
    if l_max == 0:
        return out, saturated
    y1 = y0 / z - math.sin(z) / z
    out.append(y1)
    for l in range(1, l_max):
        nxt = (2 * l + 1) / z * out[l] - out[l - 1]
        if math.isinf(nxt) or abs(nxt) > 1e307:
            # Once |y| saturates, the dominant term fixes the sign of all
            # following orders; clamp rather than propagate inf - inf.
            saturated = True
            sign = math.copysign(1.0, out[l])
            out.extend(sign * math.inf for _ in range(l_max - l))
            break
        out.append(nxt)
    return out, saturated


def _half_order_scale(z: float) -> float:
    return math.sqrt(2.0 * z / math.pi)


def half_integer_j_array(l_max: int, z: float) -> list[float]:
    """J_{l+1/2}(z) for l = 0..l_max, with the underflow clamp applied."""
    if z <= 0.0:
        raise BesselDomainError(f"argument must be positive, got {z}")
    s = _half_order_scale(z)
    vals = [s * v for v in _sph_jn_seq(l_max, z)]
    return [0.0 if 0.0 < abs(v) < _UNDERFLOW_FLOOR else v for v in vals]


def bessel_jn_half(order: ModeOrder, z: float) -> BesselPair:
    """J_nu, N_nu, J_{nu-1}, N_{nu-1} at z for nu = l + 1/2."""
    if z <= 0.0:
        raise BesselDomainError(f"argument must be positive, got {z}")
    l = order.l
    s = _half_order_scale(z)
    saturated = False
    if l == 0:
        # nu - 1 = -1/2: closed forms.
        j = s * math.sin(z) / z
        j_prev = s * math.cos(z) / z
        n = -s * math.cos(z) / z
        n_prev = s * math.sin(z) / z
    else:
        jseq = _sph_jn_seq(l, z)
        yseq, saturated = _sph_yn_seq(l, z)
        j, j_prev = s * jseq[l], s * jseq[l - 1]
        n, n_prev = s * yseq[l], s * yseq[l - 1]
    if 0.0 < abs(j) < _UNDERFLOW_FLOOR:
        j = 0.0
        saturated = True
    return BesselPair(j=j, n=n, j_prev=j_prev, n_prev=n_prev, z=z, saturated=saturated)


def _pw_oriented(order: ModeOrder, x: float, y: float) -> float:
    px = bessel_jn_half(order, x)
    py = bessel_jn_half(order, y)
    # det[[J(x), J(y)], [x J'(x), y J'(y)]] after eliminating derivatives
    # via z J'_nu = z J_{nu-1} - nu J_nu (the nu-terms cancel).
    return px.j * y * py.j_prev - py.j * x * px.j_prev


def pseudo_wronskian(order: ModeOrder, x: float, y: float) -> float:
    """det[[J_nu(x), J_nu(y)], [x J'_nu(x), y J'_nu(y)]].

    Exactly antisymmetric under x <-> y: one orientation is computed and
    the other is its negation.
    """
    if x <= 0.0 or y <= 0.0:
        raise BesselDomainError("pseudo-Wronskian arguments must be positive")
    if x > y:
        return -_pw_oriented(order, y, x)
    return _pw_oriented(order, x, y)


def diagonal_kernel_term(order: ModeOrder, x: float) -> float:
    """lim_{y->x} W~_nu(x, y)/(x - y) = x (J_nu^2 + J_{nu-1}^2) - 2 nu J_nu J_{nu-1}.

    The sign follows the determinant orientation used by pseudo_wronskian;
    only the square of this quantity enters the two-photon kernel.
    """
    if x <= 0.0:
        raise BesselDomainError(f"argument must be positive, got {x}")
    p = bessel_jn_half(order, x)
    nu = order.nu
    return x * (p.j * p.j + p.j_prev * p.j_prev) - 2.0 * nu * p.j * p.j_prev


def _asymptotic_pw_scale(nu: float, x: float, y: float) -> float:
    """Large-order magnitude of |W~_nu(x,y)| / |x^2 - y^2|, without safety factor."""
    if x <= 0.0 or y <= 0.0:
        return 0.0
    log_mag = (
        -math.log(2.0 * math.pi)
        - 0.5 * math.log(nu)
        - 1.5 * math.log(nu + 1.0)
        + nu * math.log(x * y / (nu * (nu + 1.0)))
        + (2.0 * nu + 1.0) * (1.0 - math.log(2.0))
    )
    if log_mag < -745.0:  # exp underflow
        return 0.0
    return math.exp(log_mag)


def tail_term_scale(order: ModeOrder, x: float, y: float) -> float:
    """Safety-factored upper bound on |W~_nu(x,y)/(x^2 - y^2)|.

    Valid for nu > e*max(x,y)/2; used by the kernel sums to majorize the
    angular-momentum tail without the vanishing (x^2-y^2) factor.
    """
    nu = order.nu
    if nu <= math.e * max(x, y) / 2.0:
        raise AsymptoticRegimeError(
            f"asymptotic regime not reached: nu={nu} <= e*max(x,y)/2={math.e * max(x, y) / 2.0:.3f}"
        )
    return _BOUND_SAFETY * _asymptotic_pw_scale(nu, x, y)


def large_order_bound(order: ModeOrder, x: float, y: float) -> float:
    """Upper-bound estimate of |W~_nu(x, y)| for truncating l-sums.

    Exceeds the actual magnitude by construction (safety factor 10 on the
    large-order asymptotic form) within the validity region nu > e*max(x,y)/2.
    """
    return abs(x * x - y * y) * tail_term_scale(order, x, y)
