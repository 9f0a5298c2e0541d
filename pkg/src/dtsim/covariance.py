"""Closed-form covariances for Markov processes on geometric grids.

The central object is ``dtsim_cov(chain, n, tau) = Cov(X(alpha^(n+tau)), X(alpha^n))``
for a scale-invariant Markov process pinned down by a one-period seed.  For
``tau = kT + v`` (``k >= 0``, ``0 <= v < T``) the value is

    R_n(kT + v) = htilde_period**k * htilde(v + n - 1) / htilde(n - 1) * R_n(0)

with the base index reduced one period at a time through the variance
extension ``R_(n+T)(tau) = alpha**(2 T H) * R_n(tau)``.  Negative lags go
through the reflection

    R_n(-kT + v) = alpha**(-2 k T H) * R_(n+v)(kT - v)

which is exactly covariance symmetry in disguise; it is the only negative-lag
rule compatible with Cov(X(t), X(s)) = Cov(X(s), X(t)).

The independent oracle for all of this is the piecewise-rescaled Brownian
motion ("simple BM"): Brownian motion whose amplitude is multiplied by
``lam**(H - 1/2)`` each time ``t`` crosses a power of ``lam``.  Its covariance
has the elementary closed form ``lam**((n + m) (H - 1/2)) * min(t, s)`` with
``n``, ``m`` the crossing counts of ``t`` and ``s``; no ratio-chain algebra is
involved, so agreement between the two routes is a genuine two-sided check.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .core import CovarianceSeed, DsiParams, HChain, h_tilde
from .errors import DomainError

__all__ = [
    "annulus_index",
    "simple_bm_seed",
    "simple_bm_cov",
    "dtsim_cov",
    "kernel_cov",
    "pc_counterpart_cov",
    "markov_triangle_residual",
    "dsi_cov_check",
]

#: Relative tolerance used to snap a log-scale coordinate onto an integer
#: annulus boundary; matches the grid-membership tolerance used elsewhere.
_GRID_RTOL = 1e-9


def annulus_index(t: float, lam: float, rtol: float = _GRID_RTOL) -> int:
    """Index ``n`` with ``lam**(n-1) <= t < lam**n`` (half-open on the right).

    Grid points are snapped to exact powers within ``rtol`` on the log scale,
    so ``annulus_index(lam**k, lam) == k + 1`` even when ``lam**k`` carries
    floating-point rounding.
    """
    if not (t > 0 and math.isfinite(t)):
        raise DomainError(f"annulus index needs t > 0, got {t}")
    if not (lam > 1 and math.isfinite(lam)):
        raise DomainError(f"annulus scale must be > 1, got {lam}")
    u = math.log(t) / math.log(lam)
    r = round(u)
    if abs(u - r) <= rtol * max(1.0, abs(u)):
        u = r
    return math.floor(u) + 1


def simple_bm_seed(params: DsiParams) -> CovarianceSeed:
    """One-period seed of the piecewise-rescaled Brownian motion.

    With ``Hp = H - 1/2``: ``r0[j] = alpha**(2 T Hp + j)``; the one-step ratio
    is 1 inside a period and ``alpha**(T Hp)`` across the period seam.
    """
    T = params.T
    hp = params.H - 0.5
    r0 = params.alpha ** (2 * T * hp + np.arange(T, dtype=float))
    r1 = r0.copy()
    r1[T - 1] = params.alpha ** (T * hp) * r0[T - 1]
    return CovarianceSeed(r0=r0, r1=r1)


def simple_bm_cov(t: float, s: float, H: float, lam: float) -> float:
    """Oracle covariance ``lam**((n+m)(H-1/2)) * min(t, s)`` of simple BM.

    ``n`` and ``m`` are the annulus indices of ``t`` and ``s`` with respect to
    ``lam``.  Defined on the grid's reach ``t, s >= 1`` (the process is built
    from a Brownian motion started at time 1's annulus).

    Raises
    ------
    DomainError
        If ``t`` or ``s`` is below 1, or ``lam <= 1``.
    """
    if t < 1 or s < 1:
        raise DomainError(f"simple_bm_cov needs t, s >= 1, got t={t}, s={s}")
    n = annulus_index(t, lam)
    m = annulus_index(s, lam)
    return lam ** ((n + m) * (H - 0.5)) * min(t, s)


def _base_cov(chain: HChain, n0: int, tau: int) -> float:
    """R_n0(tau) for 0 <= n0 < T and tau >= 0, log-space when possible."""
    p = chain.params
    k, v = divmod(tau, p.T)
    num = h_tilde(chain, v + n0 - 1)
    den = h_tilde(chain, n0 - 1)
    if den == 0.0:
        raise DomainError(
            f"h-chain vanishes before index {n0}; covariance at this base index "
            "is not determined by the factorization (a zero one-step covariance "
            "splits the chain)"
        )
    if chain.all_positive:
        log_p = float(chain._log_base[-1])
        return math.exp(
            k * log_p + math.log(num) - math.log(den) + math.log(chain.seed.r0[n0])
        )
    return chain.htilde_period ** k * num / den * float(chain.seed.r0[n0])


def dtsim_cov(chain: HChain, n: int, tau: int) -> float:
    """Covariance ``Cov(X(alpha^(n+tau)), X(alpha^n))`` of the chain's process.

    Symmetric by construction: ``dtsim_cov(chain, n, tau) ==
    dtsim_cov(chain, n + tau, -tau)`` up to rounding.  The base index may sit
    anywhere on the two-sided integer grid; indices one or more periods up or
    down pick up powers of the variance extension ``alpha**(2 T H)``.
    """
    p = chain.params
    if tau < 0:
        # tau = -kT + v with k >= 1, 0 <= v < T; reflect onto a nonnegative lag.
        k = -(tau // p.T)
        v = tau % p.T
        return p.alpha ** (-2 * k * p.T * p.H) * dtsim_cov(chain, n + v, k * p.T - v)
    q, n0 = divmod(n, p.T)
    scale = p.alpha ** (2 * p.T * p.H * q)
    return scale * _base_cov(chain, n0, tau)


def kernel_cov(chain: HChain, n: int, tau: int) -> float:
    """One-sided factorization kernel ``htilde(n+tau-1)/htilde(n-1) * R_n(0)``.

    For ``tau >= 0`` this equals :func:`dtsim_cov`.  For ``tau < 0`` it
    continues the same ratio recursion instead of reflecting, which is the
    convention the embedding matrix identities use; it is *not* the symmetric
    covariance there.  Requires ``n + tau >= 0`` so the ratio stays defined.
    """
    p = chain.params
    if n + tau < 0:
        raise DomainError(f"kernel_cov needs n + tau >= 0, got n={n}, tau={tau}")
    q, n0 = divmod(n, p.T)
    num = h_tilde(chain, n0 + tau - 1)
    den = h_tilde(chain, n0 - 1)
    if den == 0.0:
        raise DomainError(f"h-chain vanishes before index {n0}")
    return p.alpha ** (2 * p.T * p.H * q) * num / den * float(chain.seed.r0[n0])


def pc_counterpart_cov(chain: HChain, n: int, tau: int) -> float:
    """Covariance of the stationarized (periodically correlated) counterpart.

    ``alpha**(-(2n + tau) H) * dtsim_cov(chain, n, tau)``; periodic in ``n``
    with period T.  The base index is reduced mod T before evaluation, which
    makes the periodicity hold exactly, not merely up to rounding.
    """
    p = chain.params
    n0 = n % p.T
    return p.alpha ** (-(2 * n0 + tau) * p.H) * dtsim_cov(chain, n0, tau)


def markov_triangle_residual(
    cov: Callable[[float, float], float], t1: float, t2: float, t3: float
) -> float:
    """Residual ``cov(t1,t3) cov(t2,t2) - cov(t1,t2) cov(t2,t3)`` for t1 <= t2 <= t3.

    Zero exactly when the covariance factors as G(min) K(max), the defining
    property of wide-sense Markov processes.
    """
    if not (t1 <= t2 <= t3):
        raise DomainError(f"need t1 <= t2 <= t3, got {t1}, {t2}, {t3}")
    return cov(t1, t3) * cov(t2, t2) - cov(t1, t2) * cov(t2, t3)


def dsi_cov_check(
    cov: Callable[[float, float], float], params: DsiParams, t: float, s: float
) -> float:
    """Residual ``cov(l t, l s) - l**(2H) cov(t, s)`` with ``l = alpha**T``.

    Zero for covariances that are scale-invariant with exponent ``H`` at scale
    ``l``; a smoke detector for mismatched H or a non-invariant kernel.
    """
    l = params.l
    return cov(l * t, l * s) - l ** (2 * params.H) * cov(t, s)
