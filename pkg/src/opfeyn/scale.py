"""Drift/variance scale pair and quadrature against dt, db(t), d|a|(t).

A scale pair consists of an absolutely continuous drift ``a`` with
``a(0) = 0`` and a strictly increasing variance function ``b`` with
``b(0) = 0``.  Both are supplied as closures together with their
derivatives.  Every one-dimensional time integral in the package is
computed here by composite Simpson quadrature on a uniform grid, so all
inner products downstream share a single, positive-weight discretization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NonPositiveVariance, NonzeroOrigin, OutOfDomain

ORIGIN_TOL = 1e-12

MEASURES = ("dt", "db", "da_abs")


def simpson_weights(n_panels: int, width: float) -> np.ndarray:
    """Composite Simpson weights on ``n_panels`` uniform panels.

    ``n_panels`` must be even and positive; the returned vector has
    ``n_panels + 1`` strictly positive entries summing to ``width``.
    """
    if n_panels < 2 or n_panels % 2:
        raise ValueError("composite Simpson needs an even, positive panel count")
    w = np.ones(n_panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (width / n_panels / 3.0)


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    value: float
    message: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[ConditionCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> ConditionCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> list[str]:
        return [
            f"{'PASS' if c.passed else 'FAIL'}  {c.name:<22} {c.value:.6g}  {c.message}"
            for c in self.checks
        ]


@dataclass(frozen=True)
class ScalePair:
    """Drift ``a`` and variance ``b`` on [0, T], with derivative closures.

    ``grid_n`` fixes the (even) panel count of the uniform quadrature grid
    used for every integral against this pair.
    """

    T: float
    a: Callable[[np.ndarray], np.ndarray]
    a_prime: Callable[[np.ndarray], np.ndarray]
    b: Callable[[np.ndarray], np.ndarray]
    b_prime: Callable[[np.ndarray], np.ndarray]
    grid_n: int = 1024
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.T <= 0:
            raise OutOfDomain(f"horizon T must be positive, got {self.T}")
        if self.grid_n < 2 or self.grid_n % 2:
            raise ValueError("grid_n must be even and at least 2")

    # -- cached node data ---------------------------------------------------

    @property
    def t_nodes(self) -> np.ndarray:
        if "t_nodes" not in self._cache:
            self._cache["t_nodes"] = np.linspace(0.0, self.T, self.grid_n + 1)
        return self._cache["t_nodes"]

    @property
    def weights(self) -> np.ndarray:
        """Simpson weights for integrals over the full interval [0, T]."""
        if "weights" not in self._cache:
            self._cache["weights"] = simpson_weights(self.grid_n, self.T)
        return self._cache["weights"]

    @property
    def bprime_nodes(self) -> np.ndarray:
        if "bprime" not in self._cache:
            self._cache["bprime"] = _eval_on(self.b_prime, self.t_nodes)
        return self._cache["bprime"]

    @property
    def aprime_nodes(self) -> np.ndarray:
        if "aprime" not in self._cache:
            self._cache["aprime"] = _eval_on(self.a_prime, self.t_nodes)
        return self._cache["aprime"]

    @property
    def var_a(self) -> float:
        """Total variation of the drift over [0, T]."""
        if "var_a" not in self._cache:
            self._cache["var_a"] = float(
                np.dot(self.weights, np.abs(self.aprime_nodes))
            )
        return self._cache["var_a"]

    # -- validation ----------------------------------------------------------

    def validation_report(self) -> ValidationReport:
        if "report" not in self._cache:
            self._cache["report"] = _build_report(self)
        return self._cache["report"]

    def require_valid(self) -> None:
        """Raise a typed error for the first failed validity condition."""
        rep = self.validation_report()
        if rep.passed:
            return
        for check in rep.checks:
            if check.passed:
                continue
            if check.name in ("origin_a", "origin_b"):
                raise NonzeroOrigin(check.message)
            if check.name == "variance_increasing":
                raise NonPositiveVariance(check.message)
            raise NonPositiveVariance(check.message)


def _eval_on(fn, t: np.ndarray) -> np.ndarray:
    out = np.asarray(fn(t), dtype=float)
    if out.ndim == 0:
        out = np.full(t.shape, float(out))
    return out


def _build_report(sp: ScalePair) -> ValidationReport:
    t = sp.t_nodes
    a0 = float(np.asarray(sp.a(np.array([0.0])))[0])
    b0 = float(np.asarray(sp.b(np.array([0.0])))[0])
    bp = sp.bprime_nodes
    bp_min = float(bp.min())
    # drift energy: integral of |a'|^2 against d|a|
    energy = float(np.dot(sp.weights, np.abs(sp.aprime_nodes) ** 3))
    checks = (
        ConditionCheck(
            "origin_a", abs(a0) <= ORIGIN_TOL, a0,
            f"|a(0)| = {abs(a0):.3g} (tol {ORIGIN_TOL:g})"),
        ConditionCheck(
            "origin_b", abs(b0) <= ORIGIN_TOL, b0,
            f"|b(0)| = {abs(b0):.3g} (tol {ORIGIN_TOL:g})"),
        ConditionCheck(
            "variance_increasing", bp_min > 0.0, bp_min,
            f"min b'(t) on grid = {bp_min:.3g}"),
        ConditionCheck(
            "drift_energy_finite", np.isfinite(energy), energy,
            "integral of |a'|^2 d|a| over [0, T]"),
        ConditionCheck(
            "drift_variation_finite", np.isfinite(sp.var_a), sp.var_a,
            "total variation of a over [0, T]"),
    )
    return ValidationReport(checks)


def validate(sp: ScalePair) -> ValidationReport:
    """Check the defining conditions of a scale pair, one line per condition."""
    return sp.validation_report()


def quad(sp: ScalePair, g, measure: str, t: float | None = None):
    """Integrate ``g`` over [0, t] against dt, db, or d|a|.

    ``g`` must accept a vector of times.  ``measure`` selects the weight:
    ``"dt"`` integrates plainly, ``"db"`` weights by b'(s), ``"da_abs"``
    weights by |a'(s)|.  The grid is a fresh uniform partition of [0, t]
    with ``sp.grid_n`` panels.
    """
    if measure not in MEASURES:
        raise ValueError(f"measure must be one of {MEASURES}, got {measure!r}")
    if t is None:
        t = sp.T
    if t < -ORIGIN_TOL or t > sp.T + ORIGIN_TOL:
        raise OutOfDomain(f"t = {t} outside [0, {sp.T}]")
    t = min(max(t, 0.0), sp.T)
    if t == 0.0:
        return 0.0
    s = np.linspace(0.0, t, sp.grid_n + 1)
    w = simpson_weights(sp.grid_n, t)
    raw = np.asarray(g(s))
    if raw.ndim == 0:
        raw = np.full(s.shape, raw[()])
    if measure == "db":
        w = w * _eval_on(sp.b_prime, s)
    elif measure == "da_abs":
        w = w * np.abs(_eval_on(sp.a_prime, s))
    val = np.dot(w, raw)
    return val.item()


def total_variation_a(sp: ScalePair, t: float | None = None) -> float:
    """Total variation of the drift over [0, t]."""
    return float(quad(sp, lambda s: np.ones_like(s), "da_abs", t))


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def wiener_pair(T: float = 1.0, grid_n: int = 1024) -> ScalePair:
    """Driftless unit-rate pair: a = 0, b(t) = t."""
    return ScalePair(
        T=T,
        a=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        a_prime=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        b=lambda t: np.asarray(t, dtype=float),
        b_prime=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        grid_n=grid_n,
        name=f"wiener(T={T:g})",
    )


def drifted_pair(alpha: float, beta: float, T: float = 1.0,
                 grid_n: int = 1024) -> ScalePair:
    """Linear drift with quadratic variance: a = alpha t, b = t + beta t^2."""
    return ScalePair(
        T=T,
        a=lambda t: alpha * np.asarray(t, dtype=float),
        a_prime=lambda t: np.full_like(np.asarray(t, dtype=float), alpha),
        b=lambda t: np.asarray(t, dtype=float) * (1.0 + beta * np.asarray(t, dtype=float)),
        b_prime=lambda t: 1.0 + 2.0 * beta * np.asarray(t, dtype=float),
        grid_n=grid_n,
        name=f"drifted(alpha={alpha:g}, beta={beta:g}, T={T:g})",
    )


def preset_scale(preset: str, *, alpha: float | None = None,
                 beta: float | None = None, T: float = 1.0,
                 grid_n: int = 1024) -> ScalePair:
    """Build a scale pair from a preset name."""
    if preset == "wiener":
        if alpha is not None or beta is not None:
            raise ValueError("wiener preset takes no alpha/beta")
        return wiener_pair(T=T, grid_n=grid_n)
    if preset == "drifted":
        if alpha is None or beta is None:
            raise ValueError("drifted preset needs alpha and beta")
        if beta < 0:
            raise NonPositiveVariance("drifted preset needs beta >= 0")
        return drifted_pair(alpha, beta, T=T, grid_n=grid_n)
    raise ValueError(f"unknown scale preset {preset!r}")
