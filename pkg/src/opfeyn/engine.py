"""Operator evaluation: Monte Carlo route, closed-form kernel route, bounds.

The analytic operator acts on a state function by averaging it along
scaled paths against a shift-invariant functional.  For real positive
parameters the average is estimated by Monte Carlo over sampled paths;
for complex parameters in the admissible region (and on its imaginary
boundary) the closed-form kernel is integrated by adaptive quadrature
with envelope-certified truncation.  The two routes agree where they
overlap, which is the package's central cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (BadConfig, KernelOverflow, MismatchedScalePair,
                     NonPositiveLambda, NotAdmissible, NotInFq0,
                     PsiNotIntegrable, QuadratureError, SequenceLeavesRegion)
from .fresnel import (AtomicMeasure, EtaAtoms, EtaDensity, EtaGaussian,
                      FresnelFunctional, LineMeasure, eval_from_projections,
                      kq0_integral, unit_functional)
from .hilbert import CambElement, a_unit_element, pair_with_a
from .kernels import (DirectionStats, KernelContext, LambdaParam,
                      h_abs_log_coeffs, kernel_M, kernel_S, vlh_exponent)
from .psi import COMPACT, EXPONENTIAL, GAUSSIAN, PsiFn, divergence_witness_psi
from .quadrature import (adaptive_simpson, phase_breakpoints, quadratic_cut,
                         quadratic_tail_bound)
from .sampler import RngStream, left_densities, sample_increments
from .scale import ScalePair

TRUNC_DROP = 40.0
TAIL_REL = 1e-10
EXP_CAP = 700.0


@dataclass(frozen=True)
class OperatorResult:
    """Operator values on an evaluation grid, with per-point standard errors
    when the route is stochastic."""

    xi_grid: np.ndarray
    values: np.ndarray
    stderr: np.ndarray | None
    route: str
    meta: dict


@dataclass(frozen=True)
class WeightedNorm:
    value: float
    finite: bool


@dataclass(frozen=True)
class GaussianIdentityResult:
    numeric: complex
    closed_form: complex

    @property
    def rel_err(self) -> float:
        scale = max(abs(self.closed_form), 1e-300)
        return abs(self.numeric - self.closed_form) / scale


@dataclass(frozen=True)
class DivergencePartial:
    """Partial transform value of the divergence witness up to radius R."""

    R: float
    value: float
    pair_ha: float
    psi_l1: float
    psi_sup: float


@dataclass(frozen=True)
class ConvergenceStudy:
    q: float
    lam_values: tuple[complex, ...]
    gaps: np.ndarray
    target: OperatorResult


# ---------------------------------------------------------------------------
# Monte Carlo route
# ---------------------------------------------------------------------------

def i_lambda_mc(F: FresnelFunctional, h: CambElement, psi: PsiFn,
                lam: float, xi_grid, n_paths: int, rng: RngStream, *,
                path_grid: int = 1024, batch_size: int = 10000) -> OperatorResult:
    """Monte Carlo estimate of the operator for real lam > 0.

    Paths are drawn in batches keyed by batch index within the stream, so
    the estimate is reproducible and independent of batch size splits are
    reduced in index order.  Standard errors combine the real and
    imaginary component variances.
    """
    lam = complex(lam)
    if lam.imag != 0.0 or lam.real <= 0.0:
        raise NonPositiveLambda(
            f"Monte Carlo route needs real lam > 0, got {lam}")
    lam_r = lam.real
    if F.sp is not h.sp:
        raise MismatchedScalePair("functional and base direction share no scale pair")
    sp = h.sp
    inv_rt = 1.0 / math.sqrt(lam_r)
    xi = np.asarray(xi_grid, dtype=float)
    dirs = F.directions() + [h]
    t_grid = np.linspace(0.0, sp.T, path_grid + 1)
    z_left = left_densities(dirs, t_grid)
    acc = np.zeros(xi.size, dtype=complex)
    acc_sq = np.zeros(xi.size)
    done = 0
    batch = 0
    while done < n_paths:
        nb = min(batch_size, n_paths - done)
        gen = rng.generator(batch=batch)
        _, dx = sample_increments(sp, path_grid, nb, gen)
        proj = dx @ z_left
        f_vals = eval_from_projections(F, inv_rt * proj[:, :-1])
        s = inv_rt * proj[:, -1]
        for i in range(xi.size):
            y = f_vals * psi(s + xi[i])
            acc[i] += y.sum()
            acc_sq[i] += float(np.sum(y.real ** 2 + y.imag ** 2))
        done += nb
        batch += 1
    mean = acc / n_paths
    var = (acc_sq - n_paths * np.abs(mean) ** 2) / max(n_paths - 1, 1)
    stderr = np.sqrt(np.maximum(var, 0.0) / n_paths)
    return OperatorResult(
        xi_grid=xi, values=mean, stderr=stderr, route="mc",
        meta={"lambda": lam_r, "n_paths": n_paths, "path_grid": path_grid,
              "seed": rng.seed, "stream_id": rng.stream_id,
              "batch_size": batch_size})


# ---------------------------------------------------------------------------
# truncation bookkeeping for the kernel route
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _LogBound:
    """Piecewise-quadratic upper bound for log|integrand|, split at v = 0."""

    left: tuple[float, float, float]
    right: tuple[float, float, float]

    def _side_peak(self, coeffs, side: int) -> float:
        q2, q1, q0 = coeffs
        if q2 > 0.0:
            return math.inf
        if q2 < 0.0:
            v = -q1 / (2.0 * q2)
            v = max(v, 0.0) if side > 0 else min(v, 0.0)
            return q2 * v * v + q1 * v + q0
        if q1 * side < 0.0:
            return q0
        return math.inf

    def peak(self) -> float:
        return max(self._side_peak(self.left, -1), self._side_peak(self.right, +1))

    def _side_cut(self, coeffs, side: int, target: float) -> float:
        q2, q1, q0 = coeffs
        if q2 < 0.0:
            disc = q1 * q1 - 4.0 * q2 * (q0 - target)
            if disc <= 0.0:
                return 0.0
            r = math.sqrt(disc)
            v = (-q1 - side * r) / (2.0 * q2)
            return max(v, 0.0) if side > 0 else min(v, 0.0)
        # linear decay on this side (slope pointing down)
        return (target - q0) / q1

    def cut(self, drop: float) -> tuple[float, float]:
        target = self.peak() - drop
        lo = self._side_cut(self.left, -1, target)
        hi = self._side_cut(self.right, +1, target)
        if hi <= lo:
            hi = lo + 1.0
        return lo, hi

    def tails(self, lo: float, hi: float) -> float:
        l2, l1, l0 = self.left
        r2, r1, r0 = self.right
        return (quadratic_tail_bound(l2, l1, l0, lo, -1)
                + quadratic_tail_bound(r2, r1, r0, hi, +1))


def _psi_log_bound(psi: PsiFn, extra: tuple[float, float, float],
                   growth: float = 0.0):
    """Combine the state-function envelope with an extra quadratic exponent.

    Returns either ("compact", lo, hi) or a _LogBound.  ``growth`` adds a
    +growth*v^2 term (the gaussian weight of the delta norms).
    """
    e2, e1, e0 = extra
    e2 = e2 + growth
    env = psi.envelope
    log_c = math.log(env.scale)
    if env.kind == COMPACT:
        return ("compact", -env.radius, env.radius)
    if env.kind == GAUSSIAN:
        coeffs = (e2 - env.rate, e1, e0 + log_c)
        return _LogBound(left=coeffs, right=coeffs)
    if env.kind == EXPONENTIAL:
        return _LogBound(left=(e2, e1 + env.rate, e0 + log_c),
                         right=(e2, e1 - env.rate, e0 + log_c))
    raise ValueError(env.kind)


def _truncated_interval(bound, drop: float):
    if isinstance(bound, tuple):
        _, lo, hi = bound
        return lo, hi, 0.0
    if not math.isfinite(bound.peak()):
        raise PsiNotIntegrable(
            "state-function envelope does not control the kernel tail")
    lo, hi = bound.cut(drop)
    return lo, hi, None


def _integrate_with_tail_check(f, bound, drop, *, rel_tol, abs_tol,
                               breaks_fn, amp: float):
    """Integrate with one truncation retry if the tail bound is too heavy."""
    for attempt in range(2):
        lo, hi, fixed_tail = _truncated_interval(bound, drop)
        res = adaptive_simpson(f, lo, hi, rel_tol=rel_tol, abs_tol=abs_tol,
                               breakpoints=breaks_fn(lo, hi))
        value = res.values[0]
        tail = fixed_tail if fixed_tail is not None else amp * bound.tails(lo, hi)
        tol = max(TAIL_REL * abs(value), abs_tol)
        if tail <= tol:
            if not res.converged and np.any(res.err > np.maximum(
                    abs_tol, rel_tol * np.abs(res.values))):
                raise QuadratureError("kernel quadrature missed its tolerance")
            return value, float(res.err[0] + tail), res.n_eval
        drop += math.log(1e6)
    raise QuadratureError("kernel tail could not be certified below tolerance")


# ---------------------------------------------------------------------------
# kernel route
# ---------------------------------------------------------------------------

def _require_kernel_admissible(lam: LambdaParam, sp: ScalePair, psi: PsiFn,
                               q0: float, delta: float | None) -> None:
    if lam.is_interior:
        if not lam.in_gamma(q0):
            raise NotAdmissible(
                f"lambda = {lam.value} lies outside the admissible region "
                f"for q0 = {q0}")
        return
    q = lam.boundary_q
    if q is None or abs(q) <= q0:
        raise NotAdmissible(
            f"boundary parameter needs |q| > q0 = {q0}, got lambda = {lam.value}")
    if sp.var_a > 0.0:
        if delta is None:
            raise PsiNotIntegrable(
                "boundary evaluation with drift needs a delta weight exponent")
        if not psi.delta_admissible(delta, sp.var_a):
            raise PsiNotIntegrable(
                "state function is not integrable against the delta weight")


def _measure_family(F: FresnelFunctional, ctx: KernelContext):
    """Flatten the spectral measure into per-node (coef, c_hw, w2, a_resid)."""
    m = F.measure
    if isinstance(m, AtomicMeasure):
        stats = [DirectionStats.from_elements(ctx, w) for _, w in m.atoms]
        coefs = np.array([c for c, _ in m.atoms], dtype=complex)
        c = np.array([s.c_hw for s in stats])
        w2 = np.array([s.norm_sq for s in stats])
        ar = np.array([s.a_resid for s in stats])
        return coefs, c, w2, ar
    s0 = DirectionStats.from_elements(ctx, m.w0)
    eta = m.eta
    if isinstance(eta, EtaAtoms):
        v = np.array([vv for vv, _ in eta.atoms])
        coefs = np.array([cc for _, cc in eta.atoms], dtype=complex)
    elif isinstance(eta, EtaGaussian):
        s_nodes, s_weights = np.polynomial.hermite.hermgauss(64)
        v = eta.mean + math.sqrt(2.0 * eta.var) * s_nodes
        coefs = eta.scale * s_weights / math.sqrt(math.pi)
    elif isinstance(eta, EtaDensity):
        nodes, wts, rho = eta._nodes()
        v = nodes
        coefs = wts * rho
    else:
        raise BadConfig(f"unsupported line measure {type(eta).__name__}")
    return coefs, v * s0.c_hw, v * v * s0.norm_sq, v * s0.a_resid


def k_lambda(F: FresnelFunctional, h: CambElement, psi: PsiFn,
             lam, xi_grid, *, q0: float = 0.5, delta: float | None = None,
             rel_tol: float = 1e-10, abs_tol: float = 1e-13) -> OperatorResult:
    """Closed-form kernel route of the operator.

    Admissible parameters are the interior of the admissible region for
    threshold q0, plus purely imaginary -iq with |q| > q0; on the
    boundary with a genuine drift the state function must be integrable
    against the gaussian delta-weight.
    """
    lam = lam if isinstance(lam, LambdaParam) else LambdaParam.from_value(lam)
    if F.sp is not h.sp:
        raise MismatchedScalePair("functional and base direction share no scale pair")
    sp = h.sp
    _require_kernel_admissible(lam, sp, psi, q0, delta)
    kq0 = kq0_integral(F, q0)
    if not kq0.member:
        raise NotInFq0("spectral measure fails the exponential-moment condition")
    ctx = KernelContext.from_direction(h)
    coefs, c_arr, w2_arr, ar_arr = _measure_family(F, ctx)
    node_weights = coefs * np.exp(1j * lam.inv_sqrt * ar_arr)
    amp = float(np.sum(np.abs(node_weights)))
    m_factor = kernel_M(lam, ctx)
    n2 = ctx.norm_h_sq
    phase_rate = abs(lam.value.imag) / (2.0 * n2)
    xi = np.asarray(xi_grid, dtype=float)
    values = np.empty(xi.size, dtype=complex)
    errs = np.empty(xi.size)
    n_eval = 0
    chunk = max(1, (1 << 21) // max(len(node_weights), 1))
    for i, x0 in enumerate(xi):
        hq = h_abs_log_coeffs(lam, float(x0), ctx)
        bound = _psi_log_bound(psi, hq)

        def f(v, _x0=float(x0)):
            v = np.asarray(v, dtype=float)
            out = np.empty(v.size, dtype=complex)
            for k in range(0, v.size, chunk):
                vv = v[k:k + chunk]
                e = vlh_exponent(lam, _x0, vv, c_arr, w2_arr, ctx)
                if e.size and float(np.max(e.real)) > EXP_CAP:
                    raise KernelOverflow("kernel exponent exceeds float range")
                out[k:k + chunk] = node_weights @ np.exp(e)
            return (out * psi(v))[None, :]

        breaks_fn = lambda lo, hi, _x0=float(x0): phase_breakpoints(
            lo, hi, phase_rate, _x0)
        val, err, ne = _integrate_with_tail_check(
            f, bound, TRUNC_DROP, rel_tol=rel_tol, abs_tol=abs_tol,
            breaks_fn=breaks_fn, amp=amp)
        values[i] = m_factor * val
        errs[i] = abs(m_factor) * err
        n_eval += ne
    return OperatorResult(
        xi_grid=xi, values=values, stderr=None, route="kernel",
        meta={"lambda": lam.value, "q0": q0, "delta": delta,
              "rel_tol": rel_tol, "abs_tol": abs_tol,
              "quad_err": errs, "n_eval": n_eval,
              "kq0_integral": kq0.value})


def j_q(F: FresnelFunctional, h: CambElement, psi: PsiFn, q: float,
        xi_grid, *, q0: float = 0.5, delta: float | None = None,
        rel_tol: float = 1e-10, abs_tol: float = 1e-13) -> OperatorResult:
    """Boundary (oscillatory-limit) evaluation at lam = -iq, |q| > q0."""
    lam = LambdaParam.from_q(q)
    res = k_lambda(F, h, psi, lam, xi_grid, q0=q0, delta=delta,
                   rel_tol=rel_tol, abs_tol=abs_tol)
    meta = dict(res.meta)
    meta["q"] = q
    return OperatorResult(xi_grid=res.xi_grid, values=res.values,
                          stderr=None, route="boundary", meta=meta)


def convergence_study(F: FresnelFunctional, h: CambElement, psi: PsiFn,
                      q: float, xi_grid, *, q0: float = 0.5,
                      delta: float | None = None, n_steps: int = 10,
                      lam_seq=None) -> ConvergenceStudy:
    """Gap between interior evaluations and the boundary target.

    The default approach sequence is -iq + 2^{-n}, n = 1..n_steps.  Every
    member must stay in the interior of the admissible region and the
    target itself must be admissible, else SequenceLeavesRegion.
    """
    if q == 0.0 or abs(q) <= q0:
        raise SequenceLeavesRegion(
            f"target q = {q} is not beyond the threshold q0 = {q0}")
    if lam_seq is None:
        lam_seq = [complex(2.0 ** -n, -q) for n in range(1, n_steps + 1)]
    lams = []
    for lv in lam_seq:
        lp = LambdaParam.from_value(lv)
        if not (lp.is_interior and lp.in_gamma(q0)):
            raise SequenceLeavesRegion(
                f"sequence member {lv} leaves the admissible interior")
        lams.append(lp)
    target = j_q(F, h, psi, q, xi_grid, q0=q0, delta=delta)
    gaps = np.empty(len(lams))
    for i, lp in enumerate(lams):
        res = k_lambda(F, h, psi, lp, xi_grid, q0=q0, delta=delta)
        gaps[i] = float(np.max(np.abs(res.values - target.values)))
    return ConvergenceStudy(q=q, lam_values=tuple(lp.value for lp in lams),
                            gaps=gaps, target=target)


# ---------------------------------------------------------------------------
# bounds, norms, witnesses
# ---------------------------------------------------------------------------

def op_norm_bound(F: FresnelFunctional, h: CambElement, lam, *,
                  q0: float = 0.5) -> float:
    """A priori operator norm bound from the kernel magnitude estimates.

    Interior parameters use the drift magnitude factor S; boundary
    parameters -iq use the normalizer at |q| alone.  In both cases the
    exponential-moment integral of the measure multiplies the bound.
    """
    lam = lam if isinstance(lam, LambdaParam) else LambdaParam.from_value(lam)
    ctx = KernelContext.from_direction(h)
    kq0 = kq0_integral(F, q0)
    if not kq0.member:
        raise NotInFq0("spectral measure fails the exponential-moment condition")
    mod = abs(lam.value)
    m_mod = math.sqrt(mod / (2.0 * math.pi * ctx.norm_h_sq))
    if lam.is_interior:
        if not lam.in_gamma(q0):
            raise NotAdmissible(
                f"lambda = {lam.value} is outside the admissible region")
        return kernel_S(lam, ctx) * m_mod * kq0.value
    q = lam.boundary_q
    if q is None or abs(q) <= q0:
        raise NotAdmissible(f"boundary parameter needs |q| > q0 = {q0}")
    return m_mod * kq0.value


def nu_delta_norm(psi: PsiFn, delta: float, sp: ScalePair) -> WeightedNorm:
    """Norm of |psi| against the gaussian weight exp(delta * Var(a) * v^2).

    Divergence (per the envelope) is reported as (inf, False), never
    raised; delta = 0 recovers the plain L1 norm.
    """
    growth = delta * sp.var_a
    if not psi.delta_admissible(delta, sp.var_a):
        return WeightedNorm(value=math.inf, finite=False)
    bound = _psi_log_bound(psi, (0.0, 0.0, 0.0), growth=growth)

    def f(v):
        v = np.asarray(v, dtype=float)
        return (np.abs(psi(v)) * np.exp(growth * v * v))[None, :]

    val, _, _ = _integrate_with_tail_check(
        f, bound, TRUNC_DROP, rel_tol=1e-11, abs_tol=1e-14,
        breaks_fn=lambda lo, hi: None, amp=1.0)
    return WeightedNorm(value=float(abs(val)), finite=True)


def divergence_witness_partial(sp: ScalePair, R: float, *,
                               h: CambElement | None = None) -> DivergencePartial:
    """Partial kernel transform of the divergence witness at lam = i.

    With the base direction parallel to the drift (unit norm, positive
    drift pairing) and evaluation at the origin, the defining integral
    restricted to [0, R] grows without bound as R increases even though
    the witness is integrable and bounded.  The partial value is
    computed with the kernel machinery; divergence shows up as growth in
    R, never as an exception.
    """
    if R <= 0:
        raise BadConfig("partial-integral radius R must be positive")
    if h is None:
        if sp.var_a <= 0.0:
            raise BadConfig("the witness needs a scale pair with genuine drift")
        h = a_unit_element(sp)
    p = pair_with_a(h)
    if p <= 0.0:
        raise BadConfig("the witness needs a positive drift pairing (h,a)")
    if abs(h.norm_sq - 1.0) > 1e-8:
        raise BadConfig("the witness base direction must be normalized")
    psi = divergence_witness_psi(p)
    lam = LambdaParam.from_q(-1.0)
    ctx = KernelContext.from_direction(h)
    m_factor = kernel_M(lam, ctx)
    phase_rate = abs(lam.value.imag) / (2.0 * ctx.norm_h_sq)

    def f(v):
        v = np.asarray(v, dtype=float)
        e = vlh_exponent(lam, 0.0, v, np.array([0.0]), np.array([0.0]), ctx)
        return np.exp(e[0])[None, :] * psi(v)[None, :]

    res = adaptive_simpson(f, 0.0, R, rel_tol=1e-11, abs_tol=1e-14,
                           breakpoints=phase_breakpoints(0.0, R, phase_rate, 0.0))
    value = float(abs(m_factor * res.values[0]))
    l1 = nu_delta_norm(psi, 0.0, sp)
    return DivergencePartial(R=R, value=value, pair_ha=p,
                             psi_l1=l1.value, psi_sup=psi.sup_probe())


@dataclass(frozen=True)
class BoundSweepResult:
    """Violation counts and worst slacks from a random magnitude-bound sweep."""

    n_tuples: int
    violations: dict
    worst_slack: dict

    @property
    def clean(self) -> bool:
        return all(v == 0 for v in self.violations.values())


def sample_interior_lambda(n: int, q0: float,
                           gen: np.random.Generator) -> np.ndarray:
    """Rejection-sample parameters from the interior of the admissible region."""
    out = np.empty(n, dtype=complex)
    filled = 0
    thresh = 1.0 / math.sqrt(2.0 * q0)
    while filled < n:
        cand = gen.uniform(1e-3, 3.0, 2 * n) + 1j * gen.uniform(-3.0, 3.0, 2 * n)
        inv_rt = 1.0 / np.sqrt(cand)
        keep = cand[np.abs(inv_rt.imag) < thresh]
        take = min(keep.size, n - filled)
        out[filled:filled + take] = keep[:take]
        filled += take
    return out


def bound_chain_sweep(sp: ScalePair, n_tuples: int = 10000, *,
                      q0: float = 0.5, seed: int = 0,
                      slack: float = 1e-12) -> BoundSweepResult:
    """Check every kernel magnitude bound on random direction/parameter tuples.

    Random polynomial densities give the base and spectral directions;
    parameters are drawn from the interior of the admissible region.  All
    comparisons run in log space.  Violations are inequality failures
    beyond the stated relative slack; a clean sweep returns zero for all.
    """
    from .kernels import a_abs_log, h_abs_log, k_log, s_log, vl_abs_log
    gen = np.random.Generator(np.random.Philox(
        np.random.SeedSequence(entropy=seed, spawn_key=(977,))))
    t = sp.t_nodes
    basis = np.vstack([np.ones_like(t), t, t * t, t ** 3])
    sw = sp.weights
    bp = sp.bprime_nodes
    ap = sp.aprime_nodes
    norm_a = math.sqrt(float(np.dot(sw, ap * ap / bp)))

    def draw_dirs(n):
        z = gen.standard_normal((n, 4)) @ basis
        n2 = (z * z * bp) @ sw
        pa = (z * ap) @ sw
        return z, n2, pa

    zh, n2h, pah = draw_dirs(n_tuples)
    zw, n2w, paw = draw_dirs(n_tuples)
    # avoid degenerate base directions
    small = n2h < 1e-6
    if small.any():
        zh[small, 0] += 1.0
        n2h = (zh * zh * bp) @ sw
        pah = (zh * ap) @ sw
    c = (zh * zw * bp) @ sw
    lam = sample_interior_lambda(n_tuples, q0, gen)
    u = gen.uniform(-5.0, 5.0, n_tuples)
    proj = c / np.sqrt(n2h)
    beta_sq = n2w - proj * proj
    a_resid = paw - (c / n2h) * pah

    checks = {}
    # Cauchy-Schwarz of the shared discretization (positive weights)
    checks["cauchy_schwarz"] = c * c - n2h * n2w * (1.0 + slack)
    checks["orthogonal_component"] = -beta_sq - slack * np.maximum(n2w, 1.0)
    vl = vl_abs_log(lam, c, n2h, n2w)
    checks["vl_magnitude"] = vl - slack
    hlog = h_abs_log(lam, u, pah, n2h)
    slog = s_log(lam, pah, n2h)
    checks["h_vs_s"] = hlog - slog - slack * (1.0 + np.abs(slog))
    alog = a_abs_log(lam, a_resid)
    klog = k_log(q0, np.sqrt(np.maximum(n2w, 0.0)), norm_a)
    checks["a_vs_k"] = alog - klog - slack * (1.0 + np.abs(klog))
    inv_rt = 1.0 / np.sqrt(lam)
    checks["region_membership"] = np.abs(inv_rt.imag) - 1.0 / math.sqrt(2.0 * q0)

    violations = {k: int(np.sum(v > 0.0)) for k, v in checks.items()}
    worst = {k: float(np.max(v)) for k, v in checks.items()}
    return BoundSweepResult(n_tuples=n_tuples, violations=violations,
                            worst_slack=worst)


def gaussian_identity_check(alpha: complex, beta: complex) -> GaussianIdentityResult:
    """Self-test of the quadrature engine on the analytic gaussian integral.

    The integral of exp(-alpha v^2 + beta v) over the line equals
    sqrt(pi/alpha) exp(beta^2 / (4 alpha)) for Re(alpha) > 0, with the
    principal branch of the root.
    """
    alpha = complex(alpha)
    beta = complex(beta)
    if alpha.real <= 0.0:
        raise BadConfig("gaussian identity needs Re(alpha) > 0")
    from .kernels import principal_sqrt
    closed = principal_sqrt(math.pi / alpha) * np.exp(beta * beta / (4.0 * alpha))
    # |integrand| = exp(-Re(alpha) v^2 + Re(beta) v)
    lo, hi = quadratic_cut(-alpha.real, beta.real, 0.0, TRUNC_DROP)

    def f(v):
        v = np.asarray(v, dtype=float)
        return np.exp(-alpha * v * v + beta * v)[None, :]

    # breakpoints follow the phase -Im(alpha) v^2 + Im(beta) v, whose
    # stationary point is Im(beta) / (2 Im(alpha)), not the magnitude peak
    if alpha.imag != 0.0:
        phase_center = beta.imag / (2.0 * alpha.imag)
    else:
        phase_center = 0.0
    res = adaptive_simpson(
        f, lo, hi, rel_tol=1e-11, abs_tol=1e-15,
        breakpoints=phase_breakpoints(lo, hi, abs(alpha.imag), phase_center))
    return GaussianIdentityResult(numeric=complex(res.values[0]),
                                  closed_form=complex(closed))


def unit_spot_check(sp: ScalePair, lam: float = 1.0) -> tuple[complex, float]:
    """Kernel value at the origin for F = 1, h = b, standard gaussian psi.

    Returns (value, reference); the reference applies the gaussian
    identity by hand to the same configuration, so the two must agree to
    quadrature accuracy.  For the driftless unit pair at lam = 1 both
    equal 1/(2 sqrt(pi)).
    """
    from .hilbert import b_element
    from .psi import gaussian_psi
    if lam <= 0:
        raise BadConfig("spot check needs real lam > 0")
    h = b_element(sp)
    res = k_lambda(unit_functional(sp), h, gaussian_psi(), complex(lam),
                   np.array([0.0]))
    n2 = h.norm_sq
    p = pair_with_a(h)
    alpha = 0.5 * (1.0 + lam / n2)
    beta = math.sqrt(lam) * p / n2
    ref = (math.sqrt(lam / (2.0 * math.pi * n2)) / math.sqrt(2.0 * math.pi)
           * math.sqrt(math.pi / alpha)
           * math.exp(beta * beta / (4.0 * alpha) - p * p / (2.0 * n2)))
    return complex(res.values[0]), ref
