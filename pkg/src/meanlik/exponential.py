"""Closed-form estimators and exact risk comparisons for exponential
lifetimes.

With T the total lifetime of n observations, all three point estimates are
multiples T/c, T has a gamma(n) distribution, and every comparison reduces
to gamma moments or a single regularized incomplete gamma evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exceptions import DomainError
from .numerics import reg_incomplete_gamma_p

__all__ = [
    "ExponentialData",
    "mle_mu",
    "mele_mu",
    "bayes_mu",
    "mse_scaled_gamma",
    "rel_eff_mele",
    "rel_eff_bayes",
    "pmc_vs_mle",
]


@dataclass(frozen=True)
class ExponentialData:
    """Sum t of n exponential observations."""

    t: float
    n: int

    def __post_init__(self) -> None:
        if self.t <= 0:
            raise DomainError(f"need total t > 0, got {self.t}")
        if self.n < 1:
            raise DomainError(f"need n >= 1, got {self.n}")


def mle_mu(d: ExponentialData) -> float:
    """Maximum likelihood estimate T/n of the mean."""
    return d.t / d.n


def mele_mu(d: ExponentialData) -> float:
    """Mean likelihood estimate T/(n-2); the defining integral diverges
    for n <= 2."""
    if d.n < 3:
        raise DomainError(f"mean likelihood estimate needs n >= 3, got n={d.n}")
    return d.t / (d.n - 2)


def bayes_mu(d: ExponentialData) -> float:
    """Bayes estimate T/(n-1) under the scale-invariant prior 1/mu."""
    if d.n < 2:
        raise DomainError(f"Bayes estimate needs n >= 2, got n={d.n}")
    return d.t / (d.n - 1)


def mse_scaled_gamma(c: float, n: int, mu: float) -> float:
    """Exact MSE of T/c when T ~ gamma(shape n, scale mu).

    From E T = n mu and E T^2 = n(n+1) mu^2:
    mu^2 (n(n+1)/c^2 - 2n/c + 1).
    """
    if c <= 0:
        raise DomainError(f"need divisor c > 0, got {c}")
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    return mu * mu * (n * (n + 1) / (c * c) - 2.0 * n / c + 1.0)


def rel_eff_mele(n: int) -> float:
    """Relative efficiency (n-2)^2 / (n(n+4)) of T/(n-2) versus T/n.

    Below 1 for every n: the MLE wins everywhere for this model.
    """
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    return (n - 2) ** 2 / (n * (n + 4))


def rel_eff_bayes(n: int) -> float:
    """Relative efficiency (n-1)^2 / (n(n+1)) of T/(n-1) versus T/n."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    return (n - 1) ** 2 / (n * (n + 1))


def pmc_vs_mle(which: str, n: int) -> float:
    """Pitman closeness of T/(n-2) or T/(n-1) versus the MLE T/n.

    The alternative is closer exactly when T falls below b*mu with
    b = n(n-2)/(n-1) for the mean likelihood estimate and
    b = 2n(n-1)/(2n-1) for the Bayes estimate (the midpoint construction on
    the same-side/straddling cases), so the closeness is P(n, b), free of mu.
    """
    if which == "mele":
        if n < 3:
            raise DomainError(f"mele comparison needs n >= 3, got {n}")
        b = n * (n - 2) / (n - 1)
    elif which == "bayes":
        if n < 2:
            raise DomainError(f"bayes comparison needs n >= 2, got {n}")
        b = 2 * n * (n - 1) / (2 * n - 1)
    else:
        raise DomainError(f"which must be 'mele' or 'bayes', got {which!r}")
    return reg_incomplete_gamma_p(n, b)
