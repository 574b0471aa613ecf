"""State functions on the real line with explicit decay envelopes.

Every state function carries a certified envelope |psi(v)| <= env(v) of
gaussian, exponential, or compact-support shape.  The envelope drives
integration-domain truncation and decides integrability against the
gaussian-weighted norms used by the operator bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

GAUSSIAN = "gaussian"
EXPONENTIAL = "exponential"
COMPACT = "compact"


@dataclass(frozen=True)
class Envelope:
    """Pointwise bound C*exp(-rate*v^2), C*exp(-rate*|v|), or C on [-radius, radius]."""

    kind: str
    scale: float
    rate: float = 0.0
    radius: float = 0.0

    def __post_init__(self):
        if self.kind not in (GAUSSIAN, EXPONENTIAL, COMPACT):
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        if self.scale <= 0:
            raise ValueError("envelope scale must be positive")
        if self.kind in (GAUSSIAN, EXPONENTIAL) and self.rate <= 0:
            raise ValueError("decay envelopes need a positive rate")
        if self.kind == COMPACT and self.radius <= 0:
            raise ValueError("compact envelope needs a positive radius")

    def log_bound(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if self.kind == GAUSSIAN:
            return math.log(self.scale) - self.rate * v * v
        if self.kind == EXPONENTIAL:
            return math.log(self.scale) - self.rate * np.abs(v)
        out = np.where(np.abs(v) <= self.radius, math.log(self.scale), -np.inf)
        return out

    def bound(self, v) -> np.ndarray:
        return np.exp(self.log_bound(v))

    def tail_mass(self, r: float) -> float:
        """Upper bound for the integral of the envelope outside [-r, r]."""
        if r <= 0:
            raise ValueError("tail radius must be positive")
        if self.kind == GAUSSIAN:
            return self.scale * math.exp(-self.rate * r * r) / (self.rate * r)
        if self.kind == EXPONENTIAL:
            return 2.0 * self.scale * math.exp(-self.rate * r) / self.rate
        return 0.0 if r >= self.radius else self.scale * 2.0 * (self.radius - r)


@dataclass(frozen=True)
class PsiFn:
    """A state function together with its certified envelope."""

    fn: Callable
    envelope: Envelope
    label: str = ""

    def __call__(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        out = np.asarray(self.fn(v), dtype=complex)
        if out.ndim == 0:
            out = np.full(v.shape, complex(out))
        return out

    def delta_admissible(self, delta: float, var_a: float) -> bool:
        """Integrability of |psi| against the weight exp(delta*var_a*v^2)."""
        if delta < 0:
            raise ValueError("delta must be nonnegative")
        growth = delta * var_a
        if growth == 0.0:
            return True
        env = self.envelope
        if env.kind == COMPACT:
            return True
        if env.kind == GAUSSIAN:
            return growth < env.rate
        return False

    def sup_probe(self, lo: float = -50.0, hi: float = 50.0, n: int = 20001) -> float:
        """Grid estimate of the sup norm (exact enough for smooth presets)."""
        v = np.linspace(lo, hi, n)
        return float(np.max(np.abs(self(v))))


def envelope_margin(psi: PsiFn, lo: float = -50.0, hi: float = 50.0,
                    n: int = 10001) -> float:
    """Minimum of env(v) - |psi(v)| over a probe grid (>= 0 means dominated)."""
    v = np.linspace(lo, hi, n)
    return float(np.min(psi.envelope.bound(v) - np.abs(psi(v))))


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def gaussian_psi() -> PsiFn:
    """Standard gaussian density (2 pi)^{-1/2} exp(-v^2 / 2)."""
    c = 1.0 / math.sqrt(2.0 * math.pi)
    return PsiFn(
        fn=lambda v: c * np.exp(-0.5 * np.asarray(v, dtype=float) ** 2),
        envelope=Envelope(GAUSSIAN, scale=c, rate=0.5),
        label="gaussian",
    )


def shifted_gaussian_psi(amp: complex, mean: float, sigma: float,
                         label: str = "shifted_gaussian") -> PsiFn:
    """amp * exp(-(v-mean)^2 / (2 sigma^2)) with an exact gaussian envelope.

    The envelope rate 1/(4 sigma^2) and scale |amp| exp(mean^2/(2 sigma^2))
    dominate pointwise for every shift.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    amp = complex(amp)
    scale = abs(amp) * math.exp(mean * mean / (2.0 * sigma * sigma))
    return PsiFn(
        fn=lambda v: amp * np.exp(-(np.asarray(v, dtype=float) - mean) ** 2
                                  / (2.0 * sigma * sigma)),
        envelope=Envelope(GAUSSIAN, scale=scale, rate=1.0 / (4.0 * sigma * sigma)),
        label=label,
    )


def bump_psi(radius: float, amp: float = 1.0) -> PsiFn:
    """Smooth compactly supported bump of height amp on [-radius, radius]."""
    if radius <= 0:
        raise ValueError("radius must be positive")

    def fn(v):
        v = np.asarray(v, dtype=float)
        s = v / radius
        inside = np.abs(s) < 1.0
        out = np.zeros(v.shape)
        ss = np.where(inside, s * s, 0.0)
        with np.errstate(divide="ignore"):
            out[inside] = amp * np.exp(1.0 - 1.0 / (1.0 - ss[inside]))
        return out

    return PsiFn(fn=fn, envelope=Envelope(COMPACT, scale=amp, radius=radius),
                 label=f"bump(r={radius:g})")


def divergence_witness_psi(pair_ha: float) -> PsiFn:
    """Integrable, bounded state function whose transform diverges at -i.

    For p = (h,a) > 0 the product of this function with the boundary
    kernel factor H at the origin grows like v exp(sqrt(2) p v / 4), so
    the transform's defining integral is infinite even though the
    function itself is both integrable and bounded.
    """
    if pair_ha <= 0:
        raise ValueError("the witness needs a positive drift pairing (h,a)")
    p = pair_ha
    c_quarter = math.sqrt(2.0) * p / 4.0

    def fn(v):
        v = np.asarray(v, dtype=float)
        pos = v > 0.0
        out = np.zeros(v.shape, dtype=complex)
        vv = v[pos]
        exponent = (1j * 0.5 * vv * vv
                    - 1j * math.sqrt(2.0) * p * vv / 2.0
                    + p * p / 2.0
                    - c_quarter * vv)
        out[pos] = vv * np.exp(exponent)
        return out

    # |psi(v)| = v exp(p^2/2 - c v) on v >= 0; halving the decay rate
    # absorbs the linear factor: sup v exp(-c v / 2) = 2/(c e)
    rate = c_quarter / 2.0
    scale = math.exp(p * p / 2.0) * 2.0 / (c_quarter * math.e)
    return PsiFn(fn=fn,
                 envelope=Envelope(EXPONENTIAL, scale=scale, rate=rate),
                 label="divergence_witness")


def preset_psi(preset: str, *, radius: float | None = None,
               amp: float = 1.0, pair_ha: float | None = None) -> PsiFn:
    if preset == "gaussian":
        return gaussian_psi()
    if preset == "bump":
        if radius is None:
            raise ValueError("bump preset needs a radius")
        return bump_psi(radius, amp)
    if preset == "divergence_witness":
        if pair_ha is None:
            raise ValueError("divergence_witness preset needs pair_ha")
        return divergence_witness_psi(pair_ha)
    raise ValueError(f"unknown state-function preset {preset!r}")
