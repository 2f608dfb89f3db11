"""Shared numerical kernels.

Composite Simpson quadrature, bounded scalar maximization, the regularized
lower incomplete gamma function, and reproducible Gaussian streams.  These
are the only numeric primitives the estimator modules build on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .exceptions import DomainError, EvaluationError

__all__ = [
    "QuadratureRule",
    "RngStream",
    "simpson_rule",
    "integrate",
    "maximize_scalar",
    "reg_incomplete_gamma_p",
    "gaussian_stream",
    "gaussian_draws",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Simpson rule with 2k+1 equally spaced nodes on [a, b].

    ``weights`` holds the unscaled 1,4,2,4,...,2,4,1 pattern.  The scale
    factor (b-a)/(6k) is applied only inside :func:`integrate`, so weighted
    ratios (like a mean-likelihood estimate) never need it.
    """

    nodes: np.ndarray
    weights: np.ndarray
    a: float
    b: float
    k: int

    def __post_init__(self) -> None:
        self.nodes.flags.writeable = False
        self.weights.flags.writeable = False


def simpson_rule(k: int, a: float, b: float) -> QuadratureRule:
    """Build the composite Simpson rule with k panels on [a, b].

    Raises:
        DomainError: if ``k < 1`` or ``a >= b``.
    """
    if k < 1:
        raise DomainError(f"simpson_rule needs k >= 1 panels, got {k}")
    a = float(a)
    b = float(b)
    if not a < b:
        raise DomainError(f"simpson_rule needs a < b, got [{a}, {b}]")
    nodes = a + (b - a) * np.arange(2 * k + 1) / (2 * k)
    nodes[0] = a
    nodes[-1] = b
    weights = np.ones(2 * k + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return QuadratureRule(nodes=nodes, weights=weights, a=a, b=b, k=k)


def integrate(rule: QuadratureRule, f: Callable[[float], float]) -> float:
    """Approximate the integral of ``f`` over [rule.a, rule.b].

    Exact for polynomials of degree <= 3 on each panel pair.

    Raises:
        EvaluationError: if ``f`` is non-finite at some node; the message
            names the node.
    """
    vals = np.empty(rule.nodes.size)
    for i, x in enumerate(rule.nodes):
        v = float(f(x))
        if not math.isfinite(v):
            raise EvaluationError(f"integrand returned {v!r} at node x={x!r}")
        vals[i] = v
    scale = (rule.b - rule.a) / (6.0 * rule.k)
    return scale * float(rule.weights @ vals)


def maximize_scalar(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-8,
    grid_points: int = 41,
) -> tuple[float, float]:
    """Globally maximize a continuous function on [a, b].

    A coarse scan over ``grid_points`` equally spaced points (at least 41,
    enough to separate the two modes a bounded likelihood can have) picks the
    basin; golden-section refinement then localizes the maximizer to ``tol``.
    Returns ``(argmax, value)`` with ``argmax`` clamped to [a, b]; the value
    is never below ``f`` at any scan point, and a maximum attained at an
    interval endpoint is returned exactly.
    """
    if not a < b:
        raise DomainError(f"maximize_scalar needs a < b, got [{a}, {b}]")
    if tol <= 0:
        raise DomainError(f"maximize_scalar needs tol > 0, got {tol}")
    xs = np.linspace(a, b, max(int(grid_points), 41))
    fs = np.array([f(x) for x in xs])
    i = int(np.argmax(fs))
    x_best, f_best = float(xs[i]), float(fs[i])

    lo = float(xs[max(i - 1, 0)])
    hi = float(xs[min(i + 1, xs.size - 1)])
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f(x2)
    xm = min(max(0.5 * (lo + hi), a), b)
    fm = f(xm)
    if fm > f_best:
        return float(xm), float(fm)
    return x_best, f_best


def reg_incomplete_gamma_p(n: float, x: float) -> float:
    """Regularized lower incomplete gamma P(n, x) to absolute error <= 1e-10.

    Series expansion for x < n + 1, Lentz continued fraction otherwise.

    Raises:
        DomainError: if ``n <= 0`` or ``x < 0``.
    """
    if n <= 0:
        raise DomainError(f"shape must be positive, got {n}")
    if x < 0:
        raise DomainError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    log_front = -x + n * math.log(x) - math.lgamma(n)
    if x < n + 1.0:
        ap = n
        term = 1.0 / n
        total = term
        for _ in range(10_000):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * 1e-16:
                break
        return min(total * math.exp(log_front), 1.0)
    # continued fraction for Q(n, x) via modified Lentz
    tiny = 1e-300
    bb = x + 1.0 - n
    cc = 1.0 / tiny
    dd = 1.0 / bb
    h = dd
    for i in range(1, 10_000):
        an = -i * (i - n)
        bb += 2.0
        dd = an * dd + bb
        if abs(dd) < tiny:
            dd = tiny
        cc = bb + an / cc
        if abs(cc) < tiny:
            cc = tiny
        dd = 1.0 / dd
        delta = dd * cc
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    q = math.exp(log_front) * h
    return min(max(1.0 - q, 0.0), 1.0)


@dataclass(frozen=True)
class RngStream:
    """Addressable, reproducible Gaussian stream.

    Streams are keyed by ``(master_seed, stream_index)`` through numpy's
    ``SeedSequence(master_seed, spawn_key=(stream_index,))`` feeding a Philox
    counter-based generator; normal deviates come from numpy's ziggurat
    transform.  The same key always replays the same sequence and distinct
    indices are statistically independent, so simulations partitioned by
    stream index are schedule-independent.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        if self.stream_index < 0:
            raise DomainError(f"stream_index must be >= 0, got {self.stream_index}")

    def generator(self) -> np.random.Generator:
        """Fresh numpy Generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(
            entropy=self.master_seed & _SEED_MASK,
            spawn_key=(self.stream_index,),
        )
        return np.random.Generator(np.random.Philox(ss))


def gaussian_stream(stream: RngStream) -> Iterator[float]:
    """Infinite iterator of standard normal deviates from ``stream``.

    Buffered drawing does not change the sequence: the first m values always
    equal ``gaussian_draws(stream, m)``.
    """
    gen = stream.generator()
    while True:
        for v in gen.standard_normal(512):
            yield float(v)


def gaussian_draws(stream: RngStream, count: int) -> np.ndarray:
    """First ``count`` standard normal deviates of ``stream`` as an array."""
    if count < 0:
        raise DomainError(f"count must be >= 0, got {count}")
    return stream.generator().standard_normal(count)
