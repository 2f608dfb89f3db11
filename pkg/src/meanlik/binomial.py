"""Closed-form estimators and exact enumeration-based comparisons for
Bernoulli trials.

All risk and closeness quantities are computed by exact enumeration over the
n+1 outcomes; nothing here is simulated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import DomainError

__all__ = [
    "BinomialData",
    "mle_p",
    "mele_p",
    "bayes_p",
    "mse_exact",
    "efficiency_interval_mele",
    "efficiency_interval_bayes",
    "pmc_exact",
]

TIE_TOL = 1e-12

BinomialEstimator = Callable[["BinomialData"], float]


@dataclass(frozen=True)
class BinomialData:
    """x successes observed in n Bernoulli trials."""

    x: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"need n >= 1 trials, got {self.n}")
        if not 0 <= self.x <= self.n:
            raise DomainError(f"need 0 <= x <= n, got x={self.x}, n={self.n}")


def mle_p(d: BinomialData) -> float:
    """Maximum likelihood estimate x/n."""
    return d.x / d.n


def mele_p(d: BinomialData) -> float:
    """Mean likelihood estimate (x+1)/(n+2); strictly inside (0, 1)."""
    return (d.x + 1) / (d.n + 2)


def bayes_p(d: BinomialData) -> float:
    """Noninformative-prior Bayes estimate (1+4x)/(2+4n); strictly interior."""
    return (1 + 4 * d.x) / (2 + 4 * d.n)


def _outcome_probs(n: int, p: float) -> np.ndarray:
    """Binomial pmf over x = 0..n, computed in the log domain."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"need p in [0, 1], got {p}")
    if p == 0.0:
        out = np.zeros(n + 1)
        out[0] = 1.0
        return out
    if p == 1.0:
        out = np.zeros(n + 1)
        out[n] = 1.0
        return out
    x = np.arange(n + 1)
    logc = (
        math.lgamma(n + 1)
        - np.array([math.lgamma(k + 1) + math.lgamma(n - k + 1) for k in x])
    )
    return np.exp(logc + x * math.log(p) + (n - x) * math.log1p(-p))


def _estimates(estimator: BinomialEstimator, n: int) -> np.ndarray:
    return np.array([estimator(BinomialData(x, n)) for x in range(n + 1)])


def mse_exact(estimator: BinomialEstimator, n: int, p: float) -> float:
    """Exact mean-square error of an estimator by outcome enumeration."""
    probs = _outcome_probs(n, p)
    est = _estimates(estimator, n)
    return float(probs @ (est - p) ** 2)


def efficiency_interval_mele(n: int) -> tuple[float, float]:
    """Open p-interval on which the mean likelihood estimate beats x/n in MSE.

    Endpoints are (2n+1 -+ sqrt(2n^2+3n+1)) / (2(2n+1)); they sum to 1.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    root = math.sqrt(2.0 * n * n + 3.0 * n + 1.0)
    den = 2.0 * (2.0 * n + 1.0)
    return (2.0 * n + 1.0 - root) / den, (2.0 * n + 1.0 + root) / den


def efficiency_interval_bayes(n: int) -> tuple[float, float]:
    """Open p-interval on which the Bayes estimate beats x/n in MSE.

    Endpoints are (1+5n -+ sqrt(1+9n+20n^2)) / (2(1+5n)).
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    root = math.sqrt(1.0 + 9.0 * n + 20.0 * n * n)
    den = 2.0 * (1.0 + 5.0 * n)
    return (1.0 + 5.0 * n - root) / den, (1.0 + 5.0 * n + root) / den


def pmc_exact(
    est_a: BinomialEstimator,
    est_b: BinomialEstimator,
    n: int,
    p: float,
) -> float:
    """Exact modified Pitman closeness of ``est_a`` versus ``est_b``.

    Probability that ``est_a`` lands strictly closer to p than ``est_b``,
    plus half the probability of a tie (|difference| <= 1e-12, guarding only
    float rounding since the estimates are exact rationals).  Reflexive
    (value 1/2 against itself) and complementary in its two arguments.
    """
    probs = _outcome_probs(n, p)
    err_a = np.abs(_estimates(est_a, n) - p)
    err_b = np.abs(_estimates(est_b, n) - p)
    tie = np.abs(err_a - err_b) <= TIE_TOL
    win = (err_a < err_b) & ~tie
    return float(probs @ (win + 0.5 * tie))
