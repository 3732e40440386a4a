"""Closed-form and quadrature-based predictions.

The coskewness bound for symmetric marginals is

    s_max = integral_0^1 G1^{-1}(u) G2^{-1}(u) G3^{-1}(u) du,   s_min = -s_max

where G_i is the distribution of the absolute standardized value.  The
quadrature path substitutes u = 1 - exp(-t) whenever any G^{-1} is
unbounded near u = 1, and evaluates the quantiles from the tail
probability q = exp(-t) directly so precision survives arbitrarily far
into the tail.

The Gaussian-copula identities are the arcsine laws

    rho_S = (6/pi) arcsin(rho/2)
    E[F_i(X_i) F_j(X_j)] = (1/2pi) arcsin(rho/2) + 1/4
    P(Y1<=0, Y2<=0, Y3<=0) = (1/4pi) sum arcsin(r_ij) + 1/8

which combine to make the standardized rank coskewness of any Gaussian
copula identically zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import (
    DomainError,
    InvalidCorrelationError,
    QuadratureError,
    UnsupportedMarginalError,
)
from .marginals import Marginal

__all__ = [
    "BoundsResult",
    "coskew_bound",
    "mixture_prediction",
    "spearman_from_pearson_gaussian",
    "pearson_from_spearman_gaussian",
    "uniform_product_moment_gaussian",
    "trivariate_orthant_prob",
    "rank_coskew_gaussian",
]

QUAD_TOL = 1e-8


@dataclass(frozen=True)
class BoundsResult:
    """Extremal coskewness bounds; s_min is exactly -s_max."""

    s_max: float
    quadrature_error: float

    @property
    def s_min(self) -> float:
        return -self.s_max


def coskew_bound(m1: Marginal, m2: Marginal, m3: Marginal) -> BoundsResult:
    """Coskewness bounds for three symmetric marginals by adaptive quadrature."""
    margins = (m1, m2, m3)
    for m in margins:
        if not m.symmetric:
            raise UnsupportedMarginalError(
                f"coskewness bounds need symmetric marginals; {m.token} is not"
            )

    if any(m.unbounded for m in margins):
        # u = 1 - exp(-t); du = exp(-t) dt; quantiles evaluated from q = exp(-t)
        def integrand(t: float) -> float:
            q = math.exp(-t)
            if q == 0.0:
                return 0.0
            prod = q
            for m in margins:
                prod *= m.abs_std_tail_quantile(q)
            return prod

        value, abserr = integrate.quad(
            integrand, 0.0, np.inf, epsabs=1e-10, epsrel=1e-12, limit=200
        )
    else:

        def integrand(u: float) -> float:
            prod = 1.0
            for m in margins:
                prod *= m.abs_std_quantile(u)
            return prod

        value, abserr = integrate.quad(
            integrand, 0.0, 1.0, epsabs=1e-10, epsrel=1e-12, limit=200
        )

    if not math.isfinite(value) or abserr > QUAD_TOL:
        raise QuadratureError(
            f"bound quadrature did not converge (value={value}, abserr={abserr})"
        )
    return BoundsResult(s_max=float(value), quadrature_error=float(abserr))


def mixture_prediction(lam: float, bounds: BoundsResult) -> float:
    """Coskewness of the mixture structure: lambda*s_max + (1-lambda)*s_min."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    return lam * bounds.s_max + (1.0 - lam) * bounds.s_min


def _check_unit(rho: float, name: str = "rho") -> float:
    rho = float(rho)
    if not -1.0 <= rho <= 1.0:
        raise DomainError(f"{name} must lie in [-1, 1], got {rho}")
    return rho


def spearman_from_pearson_gaussian(rho: float) -> float:
    """Spearman correlation implied by a Gaussian copula: (6/pi) arcsin(rho/2)."""
    rho = _check_unit(rho)
    return 6.0 / math.pi * math.asin(rho / 2.0)


def pearson_from_spearman_gaussian(rho_s: float) -> float:
    """Inverse map: 2 sin(pi rho_S / 6)."""
    rho_s = _check_unit(rho_s, "rho_s")
    return 2.0 * math.sin(math.pi * rho_s / 6.0)


def uniform_product_moment_gaussian(rho: float) -> float:
    """E[F_i(X_i) F_j(X_j)] under a Gaussian copula with correlation rho."""
    rho = _check_unit(rho)
    return math.asin(rho / 2.0) / (2.0 * math.pi) + 0.25


def _check_corr_triple(r12: float, r13: float, r23: float) -> tuple[float, float, float]:
    rs = tuple(_check_unit(r, f"r{k}") for r, k in ((r12, 12), (r13, 13), (r23, 23)))
    det = 1.0 - rs[0] ** 2 - rs[1] ** 2 - rs[2] ** 2 + 2.0 * rs[0] * rs[1] * rs[2]
    if det < -1e-12:
        raise InvalidCorrelationError(
            f"({rs[0]}, {rs[1]}, {rs[2]}) is not a valid correlation matrix"
        )
    return rs


def trivariate_orthant_prob(r12: float, r13: float, r23: float) -> float:
    """P(Y1 <= 0, Y2 <= 0, Y3 <= 0) for a centered trivariate normal."""
    r12, r13, r23 = _check_corr_triple(r12, r13, r23)
    return (
        math.asin(r12) + math.asin(r13) + math.asin(r23)
    ) / (4.0 * math.pi) + 0.125


def rank_coskew_gaussian(rho12: float, rho13: float, rho23: float) -> float:
    """Standardized rank coskewness of a Gaussian copula.

    Assembles 32*[P(orthant at rho/2) - (1/4pi) sum arcsin(rho/2) - 1/8];
    the arcsine orthant formula makes this identically zero for every valid
    correlation triple.
    """
    rho12, rho13, rho23 = _check_corr_triple(rho12, rho13, rho23)
    orthant = trivariate_orthant_prob(rho12 / 2.0, rho13 / 2.0, rho23 / 2.0)
    arcs = (
        math.asin(rho12 / 2.0) + math.asin(rho13 / 2.0) + math.asin(rho23 / 2.0)
    ) / (4.0 * math.pi)
    return 32.0 * (orthant - arcs - 0.125)
