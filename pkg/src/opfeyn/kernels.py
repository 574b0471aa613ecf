"""Closed-form kernel factors of the analytic operator-valued transform.

The transform with parameter lambda (nonzero, nonnegative real part)
factors into a Gaussian normalizer M, an oscillatory direction factor
V*L whose quadratic terms cancel, a drift-shifted Gaussian H in the
state variable, and a residual drift phase A per direction.  Everything
here works in log space so magnitude bounds can be compared without
overflow; vectorized helpers operate on arrays of directions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgOutOfRange, ZeroLambda, ZeroDirection
from .hilbert import CambElement, a_element, inner, pair_with_a
from .scale import ScalePair

TWO_PI = 2.0 * math.pi


def principal_sqrt(z: complex) -> complex:
    """Principal square root with positive real part on the closed right half plane.

    Rejects zero; for purely imaginary z the root has equal magnitude real
    and imaginary parts, with the sign of the imaginary part matching z.
    """
    z = complex(z)
    if z == 0:
        raise ZeroLambda("square root of zero parameter is excluded")
    r = cmath.sqrt(z)
    # cmath.sqrt already picks Re >= 0; the cut on the negative axis never
    # applies because parameters live in the closed right half plane
    return r


@dataclass(frozen=True)
class LambdaParam:
    """Kernel parameter with cached principal root and inverse root."""

    value: complex
    sqrt: complex
    inv_sqrt: complex

    @classmethod
    def from_value(cls, value: complex) -> "LambdaParam":
        value = complex(value)
        if value == 0:
            raise ZeroLambda("kernel parameter must be nonzero")
        if value.real < 0.0:
            raise ArgOutOfRange(
                f"kernel parameter must have nonnegative real part, got {value}")
        s = principal_sqrt(value)
        return cls(value=value, sqrt=s, inv_sqrt=1.0 / s)

    @classmethod
    def from_q(cls, q: float) -> "LambdaParam":
        """Boundary parameter -iq for real nonzero q."""
        if q == 0:
            raise ZeroLambda("boundary parameter needs q != 0")
        return cls.from_value(complex(0.0, -q))

    @property
    def is_interior(self) -> bool:
        return self.value.real > 0.0

    @property
    def boundary_q(self) -> float | None:
        """The q with value = -iq, when the parameter is purely imaginary."""
        if self.value.real == 0.0:
            return -self.value.imag
        return None

    def in_gamma(self, q0: float) -> bool:
        """Membership in the admissible region for threshold q0 > 0."""
        if q0 <= 0:
            raise ArgOutOfRange(f"threshold q0 must be positive, got {q0}")
        return abs(self.inv_sqrt.imag) < 1.0 / math.sqrt(2.0 * q0)


def in_gamma(lam: complex | LambdaParam, q0: float) -> bool:
    lam = lam if isinstance(lam, LambdaParam) else LambdaParam.from_value(lam)
    return lam.in_gamma(q0)


@dataclass(frozen=True)
class KernelContext:
    """Per-(scale pair, base direction) data shared by all kernel factors."""

    sp: ScalePair
    h: CambElement
    norm_h_sq: float
    pair_ha: float
    norm_a: float

    @classmethod
    def from_direction(cls, h: CambElement) -> "KernelContext":
        n2 = h.norm_sq
        if n2 <= 0.0:
            raise ZeroDirection("kernel base direction must have positive norm")
        return cls(sp=h.sp, h=h, norm_h_sq=n2, pair_ha=pair_with_a(h),
                   norm_a=a_element(h.sp).norm)


@dataclass(frozen=True)
class DirectionStats:
    """Scalars of a spectral direction w relative to the base direction h.

    ``a_resid`` is the drift pairing of the component of w orthogonal to
    h; it vanishes identically when w is parallel to h.
    """

    c_hw: float
    norm_sq: float
    norm: float
    pair_wa: float
    beta: float
    a_resid: float

    @classmethod
    def from_elements(cls, ctx: KernelContext, w: CambElement) -> "DirectionStats":
        c = inner(ctx.h, w)
        w2 = w.norm_sq
        pa = pair_with_a(w)
        proj = c / math.sqrt(ctx.norm_h_sq)
        beta_sq = w2 - proj * proj
        # the difference w2 - proj^2 carries cancellation noise of order
        # eps * w2, so parallelism must be decided on the squared scale
        if beta_sq < 1e-13 * max(w2, 1.0):
            return cls(c_hw=c, norm_sq=w2, norm=math.sqrt(max(w2, 0.0)),
                       pair_wa=pa, beta=0.0, a_resid=0.0)
        beta = math.sqrt(beta_sq)
        a_resid = pa - (c / ctx.norm_h_sq) * ctx.pair_ha
        return cls(c_hw=c, norm_sq=w2, norm=math.sqrt(max(w2, 0.0)),
                   pair_wa=pa, beta=beta, a_resid=a_resid)


# ---------------------------------------------------------------------------
# scalar kernel factors
# ---------------------------------------------------------------------------

def kernel_M(lam: LambdaParam, ctx: KernelContext) -> complex:
    """Gaussian normalizer sqrt(lambda / (2 pi ||h||^2))."""
    return principal_sqrt(lam.value / (TWO_PI * ctx.norm_h_sq))


def kernel_V(lam: LambdaParam, xi: float, v: float,
             stats: DirectionStats, ctx: KernelContext) -> complex:
    """Direction factor exp{[(i lam u + (h,w))^2 - ||h||^2 ||w||^2] / (2 lam ||h||^2)}."""
    u = v - xi
    n2 = ctx.norm_h_sq
    num = (1j * lam.value * u + stats.c_hw) ** 2 - n2 * stats.norm_sq
    return cmath.exp(num / (2.0 * lam.value * n2))


def kernel_L(lam: LambdaParam, xi: float, v: float, ctx: KernelContext) -> complex:
    """Counter-Gaussian exp{lam u^2 / (2 ||h||^2)} cancelling V's quadratic part."""
    u = v - xi
    return cmath.exp(lam.value * u * u / (2.0 * ctx.norm_h_sq))


def kernel_H(lam: LambdaParam, xi: float, v: float, ctx: KernelContext) -> complex:
    """Drift-shifted Gaussian exp{-(sqrt(lam) u - (h,a))^2 / (2 ||h||^2)}."""
    u = v - xi
    arg = lam.sqrt * u - ctx.pair_ha
    return cmath.exp(-(arg * arg) / (2.0 * ctx.norm_h_sq))


def kernel_H_expanded(lam: LambdaParam, xi: float, v: float,
                      ctx: KernelContext) -> complex:
    """H with the exponent split into explicit real and imaginary parts."""
    u = v - xi
    n2 = ctx.norm_h_sq
    p = ctx.pair_ha
    r, s = lam.sqrt.real, lam.sqrt.imag
    real_part = (-(r * r - s * s) * u * u + 2.0 * r * u * p - p * p) / (2.0 * n2)
    imag_part = -s * u * (r * u - p) / n2
    return cmath.exp(complex(real_part, imag_part))


def kernel_A(lam: LambdaParam, stats: DirectionStats) -> complex:
    """Residual drift phase exp{i lam^{-1/2} (w,a - projection onto h)}.

    Equals 1 exactly when the direction is parallel to the base direction.
    """
    if stats.beta == 0.0:
        return 1.0 + 0.0j
    return cmath.exp(1j * lam.inv_sqrt * stats.a_resid)


def kernel_S(lam: LambdaParam, ctx: KernelContext) -> float:
    """Interior magnitude bound exp{(sec(arg lam) + 1) (h,a)^2 / (4 ||h||^2)}."""
    if lam.value.real <= 0.0:
        raise ArgOutOfRange("interior bound needs a parameter with positive real part")
    sec = abs(lam.value) / lam.value.real
    p = ctx.pair_ha
    return math.exp((sec + 1.0) * p * p / (4.0 * ctx.norm_h_sq))


def kernel_k(q0: float, norm_w: float, norm_a: float) -> float:
    """Exponential moment weight exp{(2 q0)^{-1/2} ||w|| ||a||}."""
    if q0 <= 0:
        raise ArgOutOfRange(f"threshold q0 must be positive, got {q0}")
    return math.exp(norm_w * norm_a / math.sqrt(2.0 * q0))


# ---------------------------------------------------------------------------
# vectorized log-space helpers (arrays of directions / parameters)
# ---------------------------------------------------------------------------

def vl_abs_log(lam: np.ndarray, c: np.ndarray, n2, w2: np.ndarray) -> np.ndarray:
    """log |V*L|: independent of the state variable, always <= 0."""
    lam = np.asarray(lam, dtype=complex)
    num = np.asarray(c) ** 2 - np.asarray(n2) * np.asarray(w2)
    return num * lam.real / (2.0 * np.abs(lam) ** 2 * np.asarray(n2))


def h_abs_log(lam: np.ndarray, u: np.ndarray, p, n2) -> np.ndarray:
    """log |H| as a function of u = v - xi."""
    lam = np.asarray(lam, dtype=complex)
    root = np.sqrt(lam)
    u = np.asarray(u, dtype=float)
    return (-lam.real * u * u + 2.0 * root.real * u * np.asarray(p)
            - np.asarray(p) ** 2) / (2.0 * np.asarray(n2))


def h_abs_log_coeffs(lam: LambdaParam, xi: float, ctx: KernelContext):
    """Quadratic coefficients (q2, q1, q0) of log |H| in the state variable v."""
    n2 = ctx.norm_h_sq
    p = ctx.pair_ha
    re_l = lam.value.real
    re_rt = lam.sqrt.real
    q2 = -re_l / (2.0 * n2)
    q1 = (re_l * xi + re_rt * p) / n2
    q0 = (-re_l * xi * xi - 2.0 * re_rt * xi * p - p * p) / (2.0 * n2)
    return q2, q1, q0


def s_log(lam: np.ndarray, p, n2) -> np.ndarray:
    """log of the interior magnitude bound; needs Re(lam) > 0."""
    lam = np.asarray(lam, dtype=complex)
    sec = np.abs(lam) / lam.real
    return (sec + 1.0) * np.asarray(p) ** 2 / (4.0 * np.asarray(n2))


def a_abs_log(lam: np.ndarray, a_resid: np.ndarray) -> np.ndarray:
    """log |A| for the residual drift phase."""
    lam = np.asarray(lam, dtype=complex)
    inv_sqrt = 1.0 / np.sqrt(lam)
    return -inv_sqrt.imag * np.asarray(a_resid)


def k_log(q0: float, norm_w: np.ndarray, norm_a) -> np.ndarray:
    """log of the exponential moment weight."""
    return np.asarray(norm_w) * np.asarray(norm_a) / math.sqrt(2.0 * q0)


def vlh_exponent(lam: LambdaParam, xi: float, v: np.ndarray,
                 c: np.ndarray, w2: np.ndarray, ctx: KernelContext) -> np.ndarray:
    """Combined exponent of V*L*H, shape (n_directions, len(v)).

    The quadratic terms of V and L cancel analytically, leaving a linear
    phase in u per direction plus the direction-independent H exponent.
    """
    n2 = ctx.norm_h_sq
    u = np.asarray(v, dtype=float) - xi
    c = np.atleast_1d(np.asarray(c, dtype=float))
    w2 = np.atleast_1d(np.asarray(w2, dtype=float))
    const = (c * c - n2 * w2) / (2.0 * lam.value * n2)
    phase = 1j * np.outer(c / n2, u)
    arg = lam.sqrt * u - ctx.pair_ha
    h_part = -(arg * arg) / (2.0 * n2)
    return const[:, None] + phase + h_part[None, :]
