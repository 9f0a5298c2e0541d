"""T-dimensional self-similar embedding of a geometric-grid process.

Reading the grid indices ``nT + k`` as step ``n`` of component ``k`` turns the
scalar sequence ``X(alpha**j)`` into a T-vector process ``W`` on the grid
``l**n`` (``l = alpha**T``) that is self-similar with exponent H.  Its matrix
covariance has the rank-one structure

    Q(n, tau) = alpha**(2 n H T) * htilde_period**tau * C * diag(r0)

where ``C[j, k] = htilde(j-1) / htilde(k-1)``.  Entrywise this is the
one-sided factorization kernel of module covariance evaluated at lag
``tau*T + j - k``; negative matrix lags follow the reflection
``Q(-s) = l**(-2 s H) * Q(s)^T``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DsiParams, HChain
from .errors import DomainError

__all__ = ["Embedding", "QCov", "build_embedding", "build_qcov", "q_cov", "gamma_k"]


@dataclass(frozen=True)
class Embedding:
    """Component series W^k(l**n) = X(alpha**(nT + k)), k = 0..T-1."""

    params: DsiParams
    components: tuple
    n_max: int

    @property
    def T(self) -> int:
        return self.params.T


def build_embedding(values: np.ndarray, params: DsiParams) -> Embedding:
    """Re-index grid samples into T component series.

    ``values`` holds samples at alpha**j along its last axis (a single path,
    or an ensemble's path matrix).  Pure re-indexing: component ``k`` at step
    ``n`` is ``values[..., n*T + k]``.  Raises IndexError when fewer than T
    samples are available (no complete step exists).
    """
    values = np.asarray(values, dtype=float)
    count = values.shape[-1]
    if count < params.T:
        raise IndexError(
            f"need at least T = {params.T} grid samples to embed, got {count}"
        )
    n_steps = count // params.T
    comps = tuple(
        np.ascontiguousarray(values[..., k : n_steps * params.T : params.T])
        for k in range(params.T)
    )
    return Embedding(params=params, components=comps, n_max=n_steps - 1)


@dataclass(frozen=True)
class QCov:
    """Structured form of the embedding covariance: C, diag(r0), period factor."""

    params: DsiParams
    C: np.ndarray
    r0: np.ndarray
    scale_base: float

    def matrix(self, n: int, tau: int) -> np.ndarray:
        p = self.params
        if tau >= 0:
            base = self.scale_base ** tau * self.C * self.r0[np.newaxis, :]
        else:
            s = -tau
            pos = self.scale_base ** s * self.C * self.r0[np.newaxis, :]
            base = p.l ** (-2 * s * p.H) * pos.T
        return p.alpha ** (2 * n * p.H * p.T) * base


def build_qcov(chain: HChain) -> QCov:
    """Assemble the rank-one covariance structure of the embedded process.

    ``C`` is a ratio matrix, so it is rank one with unit diagonal and
    satisfies the cocycle relation C[j,k] C[k,m] = C[j,m].
    """
    u = np.concatenate(([1.0], chain.htilde_base[:-1]))  # htilde(j-1), j = 0..T-1
    if np.any(u == 0.0):
        raise DomainError("h-chain vanishes inside the period; ratio matrix undefined")
    C = u[:, np.newaxis] / u[np.newaxis, :]
    return QCov(
        params=chain.params,
        C=C,
        r0=np.array(chain.seed.r0),
        scale_base=chain.htilde_period,
    )


def q_cov(chain: HChain, n: int, tau: int) -> np.ndarray:
    """Embedding covariance matrix Cov(W(l**(n+tau)), W(l**n)), shape (T, T)."""
    return build_qcov(chain).matrix(n, tau)


def gamma_k(chain: HChain, k: int, n: int, tau: int) -> float:
    """Diagonal entry: Cov(W^k(l**(n+tau)), W^k(l**n)) for tau >= 0.

    Equals ``alpha**(2 n H T) * htilde_period**tau * r0[k]``; as a function on
    the l-grid it is again a scale-invariant Markov covariance.
    """
    if tau < 0:
        raise DomainError(f"gamma_k is defined for tau >= 0, got {tau}")
    if not 0 <= k < chain.T:
        raise IndexError(f"component index {k} outside 0..{chain.T - 1}")
    p = chain.params
    return (
        p.alpha ** (2 * n * p.H * p.T)
        * chain.htilde_period ** tau
        * float(chain.seed.r0[k])
    )
