"""Reproducing-kernel directions w(t) = integral of z db and their geometry.

Elements are stored through their densities z = Dw; the inner product is
the L^2(db) pairing of densities, and the drift pairing integrates the
density against da.  Densities may be closures (preferred; primitives are
then accumulated with fourth-order panel Simpson) or node vectors on the
scale pair's grid (linear interpolation in between).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import MismatchedScalePair, ZeroDirection
from .scale import ScalePair

PARALLEL_TOL_SQ = 1e-13


@dataclass(frozen=True)
class CambElement:
    """A direction in the reproducing-kernel space over a scale pair.

    ``z_nodes``/``w_nodes`` hold the density and its running integral
    against db on the scale grid; ``z_fn``/``primitive`` are optional
    closures for exact off-grid evaluation.
    """

    sp: ScalePair
    z_nodes: np.ndarray
    w_nodes: np.ndarray
    norm_sq: float
    z_fn: Callable | None = None
    primitive: Callable | None = None
    label: str = ""

    # -- evaluation -----------------------------------------------------------

    def density(self, t) -> np.ndarray:
        """Evaluate z = Dw at the given times."""
        t = np.asarray(t, dtype=float)
        if self.z_fn is not None:
            out = np.asarray(self.z_fn(t), dtype=float)
            if out.ndim == 0:
                out = np.full(t.shape, float(out))
            return out
        return np.interp(t, self.sp.t_nodes, self.z_nodes)

    def value(self, t) -> np.ndarray:
        """Evaluate w(t), the running integral of the density against db."""
        t = np.asarray(t, dtype=float)
        if self.primitive is not None:
            out = np.asarray(self.primitive(t), dtype=float)
            if out.ndim == 0:
                out = np.full(t.shape, float(out))
            return out
        return np.interp(t, self.sp.t_nodes, self.w_nodes)

    @property
    def norm(self) -> float:
        return math.sqrt(max(self.norm_sq, 0.0))

    def scaled(self, c: float) -> "CambElement":
        z_fn = None if self.z_fn is None else (lambda t, _f=self.z_fn: c * np.asarray(_f(t)))
        prim = None if self.primitive is None else (lambda t, _f=self.primitive: c * np.asarray(_f(t)))
        return CambElement(
            sp=self.sp,
            z_nodes=c * self.z_nodes,
            w_nodes=c * self.w_nodes,
            norm_sq=c * c * self.norm_sq,
            z_fn=z_fn,
            primitive=prim,
            label=f"{c:g}*{self.label}" if self.label else "",
        )

    def unit(self) -> "CambElement":
        n = self.norm
        if n <= 0.0:
            raise ZeroDirection("cannot normalize a zero direction")
        out = self.scaled(1.0 / n)
        object.__setattr__(out, "norm_sq", 1.0)
        return out


def _require_same_sp(w1: CambElement, w2: CambElement) -> None:
    if w1.sp is not w2.sp:
        raise MismatchedScalePair("elements live over different scale pairs")


def _nodes_norm_sq(sp: ScalePair, z_nodes: np.ndarray) -> float:
    return float(np.dot(sp.weights, z_nodes * z_nodes * sp.bprime_nodes))


def _primitive_nodes(sp: ScalePair, z_fn: Callable | None,
                     z_nodes: np.ndarray) -> np.ndarray:
    t = sp.t_nodes
    h = t[1] - t[0]
    if z_fn is not None:
        mids = t[:-1] + 0.5 * h
        f_nodes = z_nodes * sp.bprime_nodes
        f_mid = np.asarray(z_fn(mids), dtype=float)
        if f_mid.ndim == 0:
            f_mid = np.full(mids.shape, float(f_mid))
        f_mid = f_mid * np.asarray(sp.b_prime(mids), dtype=float)
        panel = (h / 6.0) * (f_nodes[:-1] + 4.0 * f_mid + f_nodes[1:])
    else:
        f_nodes = z_nodes * sp.bprime_nodes
        panel = 0.5 * h * (f_nodes[:-1] + f_nodes[1:])
    w = np.empty(t.shape)
    w[0] = 0.0
    np.cumsum(panel, out=w[1:])
    return w


def from_density(sp: ScalePair, z, primitive: Callable | None = None,
                 label: str = "") -> CambElement:
    """Build an element from a density closure or a node vector."""
    if callable(z):
        z_nodes = np.asarray(z(sp.t_nodes), dtype=float)
        if z_nodes.ndim == 0:
            z_nodes = np.full(sp.t_nodes.shape, float(z_nodes))
        z_fn = z
    else:
        z_nodes = np.asarray(z, dtype=float)
        if z_nodes.shape != sp.t_nodes.shape:
            raise ValueError(
                f"node vector must have {sp.t_nodes.size} entries, got {z_nodes.size}")
        z_fn = None
    return CambElement(
        sp=sp,
        z_nodes=z_nodes,
        w_nodes=_primitive_nodes(sp, z_fn, z_nodes),
        norm_sq=_nodes_norm_sq(sp, z_nodes),
        z_fn=z_fn,
        primitive=primitive,
        label=label,
    )


def d_op(w: CambElement) -> Callable:
    """Return the density closure z = Dw of an element."""
    return w.density


def d_inv(sp: ScalePair, z, label: str = "") -> CambElement:
    """Inverse of the density map: integrate z against db into an element."""
    return from_density(sp, z, label=label)


def combine(w1: CambElement, w2: CambElement, c1: float = 1.0,
            c2: float = 1.0, label: str = "") -> CambElement:
    """Linear combination c1*w1 + c2*w2."""
    _require_same_sp(w1, w2)
    z_fn = None
    if w1.z_fn is not None and w2.z_fn is not None:
        z_fn = lambda t, f1=w1.z_fn, f2=w2.z_fn: c1 * np.asarray(f1(t)) + c2 * np.asarray(f2(t))
    prim = None
    if w1.primitive is not None and w2.primitive is not None:
        prim = lambda t, f1=w1.primitive, f2=w2.primitive: c1 * np.asarray(f1(t)) + c2 * np.asarray(f2(t))
    z_nodes = c1 * w1.z_nodes + c2 * w2.z_nodes
    return CambElement(
        sp=w1.sp,
        z_nodes=z_nodes,
        w_nodes=c1 * w1.w_nodes + c2 * w2.w_nodes,
        norm_sq=_nodes_norm_sq(w1.sp, z_nodes),
        z_fn=z_fn,
        primitive=prim,
        label=label,
    )


def inner(w1: CambElement, w2: CambElement) -> float:
    """Inner product of two elements: the L^2(db) pairing of densities."""
    _require_same_sp(w1, w2)
    sp = w1.sp
    return float(np.dot(sp.weights, w1.z_nodes * w2.z_nodes * sp.bprime_nodes))


def pair_with_a(w: CambElement) -> float:
    """Pairing of an element with the drift: integral of z against da."""
    sp = w.sp
    return float(np.dot(sp.weights, w.z_nodes * sp.aprime_nodes))


@dataclass(frozen=True)
class GramSchmidtPair:
    """Orthonormal frame spanned by a base direction h and a second one w.

    ``e1`` points along h; ``beta_w`` is the component of w orthogonal to
    h, with ``e2 = None`` exactly when w is parallel to h at tolerance.
    """

    e1: CambElement
    e2: CambElement | None
    proj: float
    beta_w: float


def gram_schmidt_pair(h: CambElement, w: CambElement) -> GramSchmidtPair:
    """Orthonormalize (h, w); h must have positive norm."""
    _require_same_sp(h, w)
    norm_h = h.norm
    if norm_h <= 0.0:
        raise ZeroDirection("base direction h has zero norm")
    e1 = h.unit()
    proj = inner(w, e1)
    beta_sq = w.norm_sq - proj * proj
    # beta_sq carries cancellation noise of order eps * ||w||^2, so the
    # parallel test must run on the squared scale
    if beta_sq < PARALLEL_TOL_SQ * max(w.norm_sq, 1.0):
        return GramSchmidtPair(e1=e1, e2=None, proj=proj, beta_w=0.0)
    beta = math.sqrt(beta_sq)
    e2 = combine(w, e1, 1.0, -proj, label="e2").scaled(1.0 / beta)
    object.__setattr__(e2, "norm_sq", 1.0)
    return GramSchmidtPair(e1=e1, e2=e2, proj=proj, beta_w=beta)


def s_star(w: CambElement) -> CambElement:
    """Adjoint-shift of an element: density t -> w(T) - w(t).

    Its pairing with a path x recovers the time integral of x against db.
    """
    w_T = float(w.value(np.array([w.sp.T]))[0])
    z_new = lambda t: w_T - w.value(t)
    return from_density(w.sp, z_new, label=f"sstar({w.label})" if w.label else "sstar")


# ---------------------------------------------------------------------------
# preset directions
# ---------------------------------------------------------------------------

def b_element(sp: ScalePair) -> CambElement:
    """The variance function itself as a direction (unit density)."""
    return from_density(sp, lambda t: np.ones_like(np.asarray(t, dtype=float)),
                        primitive=sp.b, label="b")


def a_element(sp: ScalePair) -> CambElement:
    """The drift as a direction (density a'/b'); requires the drift energy."""
    z = lambda t: np.asarray(sp.a_prime(t), dtype=float) / np.asarray(sp.b_prime(t), dtype=float)
    return from_density(sp, z, primitive=sp.a, label="a")


def a_unit_element(sp: ScalePair) -> CambElement:
    """The normalized drift direction a/||a||."""
    return a_element(sp).unit()


def monomial_element(sp: ScalePair, degree: int) -> CambElement:
    """Direction with density t^degree."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    return from_density(sp, lambda t: np.asarray(t, dtype=float) ** degree,
                        label=f"monomial{degree}")


def zero_element(sp: ScalePair) -> CambElement:
    """The zero direction."""
    return from_density(sp, lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                        primitive=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                        label="0")


def preset_direction(sp: ScalePair, preset: str, degree: int | None = None) -> CambElement:
    """Build a preset direction by name."""
    if preset == "b":
        return b_element(sp)
    if preset == "a_unit":
        return a_unit_element(sp)
    if preset == "sstar_b":
        return s_star(b_element(sp))
    if preset == "sstar_b_unit":
        return s_star(b_element(sp)).unit()
    if preset == "monomial":
        if degree is None:
            raise ValueError("monomial preset needs a degree")
        return monomial_element(sp, degree)
    if preset == "zero":
        return zero_element(sp)
    raise ValueError(f"unknown direction preset {preset!r}")
