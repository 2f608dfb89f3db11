"""First-order moving-average model machinery.

The model is Z_t = A_t - theta * A_{t-1} with independent N(0, sigma_a^2)
innovations and |theta| <= 1.  This module provides

* the exact closed-form analysis for series of length two, where the
  statistic W = -Z1 Z2 / (Z1^2 + Z2^2) is sufficient: concentrated
  likelihood, piecewise MLE, the density of W, and exact risk/closeness
  integrals over that density;
* the exact concentrated log-likelihood for general length via Newbold's
  recursive formulation, evaluated in O(n) per parameter value;
* the three point estimators (maximum likelihood, mean likelihood, and
  Jeffreys-prior Bayes) for a single series and for large batches;
* stationary series simulation from reproducible Gaussian streams.

The maximum likelihood estimate can land exactly on the boundary +-1 with
positive probability; the mean likelihood and Bayes estimates never do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from . import mele_core
from .exceptions import DegenerateDataError, DomainError
from .mele_core import LikelihoodCurve, PriorSpec, jeffreys_ma1_prior, uniform_prior
from .numerics import QuadratureRule, RngStream, maximize_scalar, simpson_rule

__all__ = [
    "DEFAULT_RULE",
    "BOUNDARY_TOL",
    "Ma1Series",
    "WStat",
    "Ma1Estimates",
    "w_statistic",
    "conc_lik_n2",
    "mle_n2",
    "density_w",
    "mele_n2",
    "bayes_n2",
    "mele_n2_interp",
    "bayes_n2_interp",
    "risk_n2",
    "pmc_n2",
    "newbold_loglik",
    "estimate_ma1",
    "estimate_ma1_batch",
    "simulate_ma1",
]

DEFAULT_RULE = simpson_rule(100, -1.0, 1.0)

# |mle| >= 1 - BOUNDARY_TOL counts as a boundary (pile-up) estimate; the
# optimizer refines to 1e-8, so true boundary maxima are unambiguous.
BOUNDARY_TOL = 1e-6

_TIE_TOL = 1e-12


@dataclass(frozen=True)
class Ma1Series:
    """An observed or simulated series with its generator metadata."""

    z: np.ndarray
    theta_true: float | None = None
    sigma_a: float = 1.0

    def __post_init__(self) -> None:
        z = np.asarray(self.z, dtype=float)
        object.__setattr__(self, "z", z)
        if z.ndim != 1 or z.size < 1:
            raise DomainError("series must be a one-dimensional vector of length >= 1")
        if not np.all(np.isfinite(z)):
            raise DomainError("series contains non-finite entries")


@dataclass(frozen=True)
class WStat:
    """The length-two sufficient statistic W = -Z1 Z2 / (Z1^2 + Z2^2)."""

    w: float

    def __post_init__(self) -> None:
        if not abs(self.w) <= 0.5 + 1e-12:
            raise DomainError(f"|w| <= 1/2 by construction, got {self.w}")

    def __float__(self) -> float:
        return self.w


@dataclass(frozen=True)
class Ma1Estimates:
    """The three point estimates for one series."""

    mle: float
    mle_on_boundary: bool
    mele: float
    bayes: float


def _as_w(w: "WStat | float") -> float:
    return w.w if isinstance(w, WStat) else float(w)


def w_statistic(z1: float, z2: float) -> WStat:
    """Sufficient reduction of a length-two series."""
    den = z1 * z1 + z2 * z2
    if den == 0.0:
        raise DegenerateDataError("w statistic undefined for the all-zero series")
    w = -z1 * z2 / den
    return WStat(min(max(w, -0.5), 0.5))


def conc_lik_n2(theta, w) -> float | np.ndarray:
    """Concentrated likelihood sqrt(1+t^2+t^4) / (1+t^2-2tw) for n = 2.

    The denominator stays positive for |t| <= 1 and |w| <= 1/2.  Accepts
    scalars or arrays in ``theta``.
    """
    w = _as_w(w)
    t = np.asarray(theta, dtype=float)
    out = np.sqrt(1.0 + t * t + t ** 4) / (1.0 + t * t - 2.0 * t * w)
    return float(out) if np.isscalar(theta) else out


def mle_n2(w) -> float | np.ndarray:
    """Closed-form maximum likelihood estimate for n = 2 as a function of w.

    Piecewise: -1 on [-1/2, -1/4], (1 - sqrt(1-16w^2))/(4w) on the middle
    band, 0 at w = 0, +1 on [1/4, 1/2]; continuous in w.
    """
    scalar = np.isscalar(w) or isinstance(w, WStat)
    ws = np.atleast_1d(np.asarray(_as_w(w) if scalar else w, dtype=float))
    out = np.where(ws <= -0.25, -1.0, np.where(ws >= 0.25, 1.0, 0.0))
    mid = (np.abs(ws) < 0.25) & (ws != 0.0)
    safe = np.where(mid, ws, 0.1)
    out = np.where(mid, (1.0 - np.sqrt(1.0 - 16.0 * safe * safe)) / (4.0 * safe), out)
    return float(out[0]) if scalar else out


def density_w(x, theta: float) -> float | np.ndarray:
    """Density of W at generator value theta, supported on |x| < 1/2.

    2 sqrt(1+theta^2+theta^4) / (pi sqrt(1-4x^2) (1+theta^2-2 theta x));
    integrates to one with integrable endpoint singularities.
    """
    if not abs(theta) <= 1.0:
        raise DomainError(f"|theta| <= 1 required, got {theta}")
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) >= 0.5):
        raise DomainError("density_w is supported on |x| < 1/2")
    d = 1.0 + theta * theta + theta ** 4
    out = 2.0 * math.sqrt(d) / (np.pi * np.sqrt(1.0 - 4.0 * xs * xs) * (1.0 + theta * theta - 2.0 * theta * xs))
    return float(out) if np.isscalar(x) else out


def _n2_curve(w: float) -> LikelihoodCurve:
    return LikelihoodCurve(lambda t: math.log(conc_lik_n2(t, w)), (-1.0, 1.0))


def mele_n2(w, rule: QuadratureRule | None = None) -> float:
    """Mean likelihood estimate for a length-two series, by quadrature."""
    rule = DEFAULT_RULE if rule is None else rule
    return mele_core.mele(_n2_curve(_as_w(w)), rule)


def bayes_n2(w, rule: QuadratureRule | None = None) -> float:
    """Jeffreys-prior Bayes estimate for a length-two series."""
    rule = DEFAULT_RULE if rule is None else rule
    return mele_core.posterior_mean(_n2_curve(_as_w(w)), jeffreys_ma1_prior(), rule)


_INTERP_POINTS = 401


@lru_cache(maxsize=4)
def _n2_spline(kind: str) -> CubicSpline:
    """Piecewise-cubic table of the n=2 estimate over a 401-point w grid."""
    wgrid = np.linspace(-0.5, 0.5, _INTERP_POINTS)
    if kind == "mele":
        vals = np.array([mele_n2(w) for w in wgrid])
    else:
        vals = np.array([bayes_n2(w) for w in wgrid])
    return CubicSpline(wgrid, vals)


def mele_n2_interp(w) -> float | np.ndarray:
    """Interpolated :func:`mele_n2`; within 1e-6 of direct quadrature."""
    out = _n2_spline("mele")(_as_w(w) if isinstance(w, WStat) else w)
    return float(out) if out.ndim == 0 else out


def bayes_n2_interp(w) -> float | np.ndarray:
    """Interpolated :func:`bayes_n2`; within 1e-6 of direct quadrature."""
    out = _n2_spline("bayes")(_as_w(w) if isinstance(w, WStat) else w)
    return float(out) if out.ndim == 0 else out


def _w_mass(theta: float, u_lo: float, u_hi: float, panels: int = 80) -> float:
    """Probability mass of W on the u-segment [u_lo, u_hi], x = sin(u)/2.

    The substitution removes the arcsine endpoint singularity exactly:
    f_W(x) dx = sqrt(D) / (pi (1+theta^2 - theta sin u)) du.
    """
    rule = simpson_rule(panels, u_lo, u_hi)
    d = 1.0 + theta * theta + theta ** 4
    g = math.sqrt(d) / (np.pi * (1.0 + theta * theta - theta * np.sin(rule.nodes)))
    return (u_hi - u_lo) / (6.0 * panels) * float(rule.weights @ g)


def risk_n2(
    estimator: Callable[[np.ndarray], np.ndarray],
    theta: float,
    metric: str = "mse",
    breakpoints: Sequence[float] = (),
    panels: int = 300,
) -> float:
    """Exact risk of an estimator of theta from W, by quadrature over f_W.

    ``estimator`` must accept an ndarray of w values.  ``breakpoints`` lists
    w values where the estimator has kinks (e.g. +-1/4 and 0 for the MLE);
    the integral is split there so each Simpson piece sees a smooth
    integrand.  ``metric`` selects squared ("mse") or absolute ("abs") error.
    """
    if not abs(theta) <= 1.0:
        raise DomainError(f"|theta| <= 1 required, got {theta}")
    if metric not in ("mse", "abs"):
        raise DomainError(f"metric must be 'mse' or 'abs', got {metric!r}")
    cuts = sorted({-math.pi / 2, math.pi / 2}
                  | {math.asin(2.0 * b) for b in breakpoints if abs(b) < 0.5})
    d = 1.0 + theta * theta + theta ** 4
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        rule = simpson_rule(panels, lo, hi)
        x = 0.5 * np.sin(rule.nodes)
        err = np.abs(np.asarray(estimator(x), dtype=float) - theta)
        if metric == "mse":
            err = err * err
        g = err * math.sqrt(d) / (np.pi * (1.0 + theta * theta - theta * np.sin(rule.nodes)))
        total += (hi - lo) / (6.0 * panels) * float(rule.weights @ g)
    return total


def pmc_n2(
    est_a: Callable[[np.ndarray], np.ndarray],
    est_b: Callable[[np.ndarray], np.ndarray],
    theta: float,
    tie_tol: float = _TIE_TOL,
) -> float:
    """Exact modified Pitman closeness of ``est_a`` versus ``est_b``.

    Integrates f_W over the region where ``est_a`` is strictly closer to
    theta, plus half the mass of any exact-tie region.  The indicator's jump
    points are the zeros of g(w) = |a(w)-theta| - |b(w)-theta|: sign changes
    are located on a dense grid and sharpened by bisection, the integral is
    split there, and each piece is classified by interior samples (a piece
    with conflicting samples is split and re-examined, so grazing zeros
    cannot corrupt the classification).
    """
    if not abs(theta) <= 1.0:
        raise DomainError(f"|theta| <= 1 required, got {theta}")

    def g(u: np.ndarray) -> np.ndarray:
        x = 0.5 * np.sin(np.atleast_1d(u))
        a = np.asarray(est_a(x), dtype=float)
        b = np.asarray(est_b(x), dtype=float)
        return np.abs(a - theta) - np.abs(b - theta)

    grid = np.linspace(-math.pi / 2, math.pi / 2, 8193)
    gv = g(grid)
    sign = np.where(np.abs(gv) <= tie_tol, 0, np.sign(gv)).astype(int)
    nz = np.nonzero(sign)[0]
    cuts = [grid[0]]
    for i, j in zip(nz[:-1], nz[1:]):
        if sign[i] * sign[j] < 0:
            lo, hi, s_lo = grid[i], grid[j], sign[i]
            for _ in range(64):
                mid = 0.5 * (lo + hi)
                gm = float(g(np.array([mid]))[0])
                if gm == 0.0:
                    lo = hi = mid
                    break
                if int(np.sign(gm)) == s_lo:
                    lo = mid
                else:
                    hi = mid
            cuts.append(0.5 * (lo + hi))
    cuts.append(grid[-1])

    num = 0.0
    den = 0.0
    pieces = list(zip(cuts[:-1], cuts[1:]))
    while pieces:
        lo, hi = pieces.pop()
        if hi - lo <= 1e-13:
            continue
        samples = g(lo + (hi - lo) * np.arange(1, 10) / 10.0)
        has_neg = bool(np.any(samples < -tie_tol))
        has_pos = bool(np.any(samples > tie_tol))
        if has_neg and has_pos:
            pieces.append((lo, 0.5 * (lo + hi)))
            pieces.append((0.5 * (lo + hi), hi))
            continue
        mass = _w_mass(theta, lo, hi)
        if has_neg:
            cls = 1.0
        elif has_pos:
            cls = 0.0
        else:
            cls = 0.5
        num += cls * mass
        den += mass
    return num / den


def newbold_loglik(theta: float, z) -> float:
    """Exact concentrated log-likelihood of an MA(1) series at ``theta``.

    Uses the O(n) recursive form of Newbold's exact ARMA likelihood:
    alpha_0 = 0, alpha_j = theta alpha_{j-1} + z_j;
    D = 1 + theta^2 + ... + theta^(2n); u = -(sum_j theta^j alpha_j)/D by
    Horner's rule; S = sum_j (alpha_j + theta^j u)^2, accumulated as
    S = alpha.alpha - (h.alpha)^2/D.  Returns -(n/2) log(S/n) - log(D)/2,
    identical to the dense-matrix projection form.
    """
    z = np.asarray(z, dtype=float)
    n = z.size
    if n < 1:
        raise DomainError("need at least one observation")
    if not abs(theta) <= 1.0:
        raise DomainError(f"|theta| <= 1 required, got {theta}")
    if not np.any(z):
        raise DegenerateDataError("log-likelihood undefined for the all-zero series")
    t = float(theta)
    alpha = 0.0
    ss = 0.0
    ha = 0.0
    pw = 1.0
    det = 1.0
    for j in range(n):
        alpha = t * alpha + z[j]
        pw *= t
        det += pw * pw
        ss += alpha * alpha
        ha += pw * alpha
    s = ss - ha * ha / det
    return -(n / 2.0) * math.log(s / n) - 0.5 * math.log(det)


def _loglik_at_nodes(z: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Concentrated log-likelihood for a batch of series at fixed nodes.

    ``z`` is (B, n), ``thetas`` is (M,); returns (B, M).  Same recursion as
    :func:`newbold_loglik`, vectorized across both axes.
    """
    b, n = z.shape
    t = thetas[None, :]
    alpha = np.zeros((b, thetas.size))
    ss = np.zeros((b, thetas.size))
    ha = np.zeros((b, thetas.size))
    pw = np.ones(thetas.size)
    det = np.ones(thetas.size)
    for j in range(n):
        alpha *= t
        alpha += z[:, j][:, None]
        pw = pw * thetas
        det = det + pw * pw
        ss += alpha * alpha
        ha += pw[None, :] * alpha
    s = ss - ha * ha / det[None, :]
    return -(n / 2.0) * np.log(s / n) - 0.5 * np.log(det)[None, :]


def _loglik_per_series(z: np.ndarray, theta_per: np.ndarray) -> np.ndarray:
    """Concentrated log-likelihood of each series at its own theta."""
    b, n = z.shape
    alpha = np.zeros(b)
    ss = np.zeros(b)
    ha = np.zeros(b)
    pw = np.ones(b)
    det = np.ones(b)
    for j in range(n):
        alpha = theta_per * alpha + z[:, j]
        pw = pw * theta_per
        det = det + pw * pw
        ss += alpha * alpha
        ha += pw * alpha
    s = ss - ha * ha / det
    return -(n / 2.0) * np.log(s / n) - 0.5 * np.log(det)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_SCAN = np.linspace(-1.0, 1.0, 41)
_GOLDEN_ITERS = 38  # shrinks the 0.1-wide scan bracket below 1e-9


def estimate_ma1_batch(
    z: np.ndarray,
    rule: QuadratureRule | None = None,
    prior: PriorSpec | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized estimator for a (B, n) batch of series.

    Returns ``(mle, on_boundary, mele, bayes)`` arrays.  The maximization
    mirrors :func:`meanlik.numerics.maximize_scalar` (41-point scan plus
    golden-section refinement), run in lockstep across the batch; the
    quadratures match :func:`estimate_ma1` node for node.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim != 2 or z.shape[1] < 2:
        raise DomainError("need a (B, n) batch with n >= 2")
    rule = DEFAULT_RULE if rule is None else rule
    prior = jeffreys_ma1_prior() if prior is None else prior

    if prior.kind == "uniform":
        bayes_nodes = rule.nodes
        bayes_w = rule.weights
    elif prior.kind == "jeffreys_ma1":
        phi = simpson_rule(rule.k, -math.pi / 2, math.pi / 2)
        bayes_nodes = np.sin(phi.nodes)
        bayes_w = phi.weights
    else:
        raise DomainError(f"unsupported prior for MA(1): {prior.kind!r}")

    n_scan = _SCAN.size
    n_mele = rule.nodes.size
    all_nodes = np.concatenate([_SCAN, rule.nodes, bayes_nodes])
    ll = _loglik_at_nodes(z, all_nodes)
    ll_scan = ll[:, :n_scan]
    ll_mele = ll[:, n_scan:n_scan + n_mele]
    ll_bayes = ll[:, n_scan + n_mele:]

    m = ll_mele.max(axis=1, keepdims=True)
    mass = np.exp(ll_mele - m)
    mele = (mass @ (rule.weights * rule.nodes)) / (mass @ rule.weights)

    mb = ll_bayes.max(axis=1, keepdims=True)
    mass_b = np.exp(ll_bayes - mb)
    bayes = (mass_b @ (bayes_w * bayes_nodes)) / (mass_b @ bayes_w)

    i = np.argmax(ll_scan, axis=1)
    f_best = ll_scan[np.arange(z.shape[0]), i]
    x_best = _SCAN[i]
    lo = _SCAN[np.maximum(i - 1, 0)]
    hi = _SCAN[np.minimum(i + 1, n_scan - 1)]
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = _loglik_per_series(z, x1)
    f2 = _loglik_per_series(z, x2)
    for _ in range(_GOLDEN_ITERS):
        shrink_hi = f1 >= f2
        new_hi = np.where(shrink_hi, x2, hi)
        new_lo = np.where(shrink_hi, lo, x1)
        new_x1 = np.where(shrink_hi, new_hi - _GOLDEN * (new_hi - new_lo), x2)
        new_x2 = np.where(shrink_hi, x1, new_lo + _GOLDEN * (new_hi - new_lo))
        x_eval = np.where(shrink_hi, new_x1, new_x2)
        f_eval = _loglik_per_series(z, x_eval)
        f1, f2 = np.where(shrink_hi, f_eval, f2), np.where(shrink_hi, f1, f_eval)
        lo, hi, x1, x2 = new_lo, new_hi, new_x1, new_x2
    xm = np.clip(0.5 * (lo + hi), -1.0, 1.0)
    fm = _loglik_per_series(z, xm)
    mle = np.where(fm > f_best, xm, x_best)
    on_boundary = np.abs(mle) >= 1.0 - BOUNDARY_TOL
    return mle, on_boundary, mele, bayes


def estimate_ma1(
    z,
    rule: QuadratureRule | None = None,
    prior: PriorSpec | None = None,
) -> Ma1Estimates:
    """All three point estimates for one series of length >= 2.

    The MLE comes from a global scan-and-refine maximization of the exact
    concentrated log-likelihood over [-1, 1], with the boundary flag set
    when it lands within 1e-6 of +-1; the mean likelihood and Bayes
    estimates come from the quadrature ``rule`` (201 nodes by default) and
    are strictly interior.
    """
    series = np.asarray(z.z if isinstance(z, Ma1Series) else z, dtype=float)
    if series.ndim != 1 or series.size < 2:
        raise DomainError("need a series of length >= 2")
    if not np.any(series):
        raise DegenerateDataError("estimates undefined for the all-zero series")
    rule = DEFAULT_RULE if rule is None else rule
    prior = jeffreys_ma1_prior() if prior is None else prior

    loglik = lambda t: newbold_loglik(t, series)
    mle, _ = maximize_scalar(loglik, -1.0, 1.0, tol=1e-8)
    curve = LikelihoodCurve(loglik, (-1.0, 1.0))
    mele = mele_core.mele(curve, rule)
    if prior.kind == "uniform":
        bayes = mele
    else:
        bayes = mele_core.posterior_mean(curve, prior, rule)
    return Ma1Estimates(
        mle=mle,
        mle_on_boundary=abs(mle) >= 1.0 - BOUNDARY_TOL,
        mele=mele,
        bayes=bayes,
    )


def simulate_ma1(
    theta: float,
    n: int,
    sigma_a: float,
    stream: RngStream,
    estimate_mean: bool = False,
) -> Ma1Series:
    """Simulate a stationary series of length n from ``stream``.

    Draws the n+1 innovations A_0..A_n (A_0 included, so the series follows
    the exact stationary law the likelihood assumes) and sets
    Z_t = sigma_a * (A_t - theta A_{t-1}).  With ``estimate_mean`` the
    sample average is subtracted, mimicking an estimated mean.
    """
    if not abs(theta) <= 1.0:
        raise DomainError(f"|theta| <= 1 required, got {theta}")
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if sigma_a <= 0:
        raise DomainError(f"need sigma_a > 0, got {sigma_a}")
    a = stream.generator().standard_normal(n + 1)
    z = sigma_a * (a[1:] - theta * a[:-1])
    if estimate_mean:
        z = z - z.mean()
    return Ma1Series(z=z, theta_true=theta, sigma_a=sigma_a)
