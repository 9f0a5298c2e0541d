"""Shared fixtures: the parameter lattice and seed builders used across the suite."""

import math

import numpy as np
import pytest

from dtsim import CovarianceSeed, DsiParams, make_chain, make_params, simple_bm_seed

ALPHAS = (1.5, 2.0, 3.0)
PERIODS = (1, 2, 4)
HURSTS = (0.3, 0.5, 0.75, 1.0)

LATTICE = tuple(
    make_params(H, alpha, T) for alpha in ALPHAS for T in PERIODS for H in HURSTS
)


def lattice_ids(p: DsiParams) -> str:
    return f"a{p.alpha}-T{p.T}-H{p.H}"


@pytest.fixture(params=LATTICE, ids=lattice_ids)
def lattice_params(request) -> DsiParams:
    return request.param


def correlated_seed(params: DsiParams, corrs) -> CovarianceSeed:
    """Seed with r0 from the simple-BM chain but r1 scaled by the given correlations.

    Each corr must lie in (-1, 1); the result always satisfies the
    Cauchy-Schwarz admissibility bound by construction.
    """
    base = simple_bm_seed(params)
    r0 = np.asarray(base.r0)
    r1 = np.empty_like(r0)
    for j in range(params.T):
        ext = params.alpha ** (2 * params.T * params.H) if j == params.T - 1 else 1.0
        bound = math.sqrt(r0[j] * r0[(j + 1) % params.T] * ext)
        r1[j] = corrs[j % len(corrs)] * bound
    return CovarianceSeed(r0=r0, r1=r1)


def chain_variants(params: DsiParams):
    """A simple-BM chain plus two generic admissible chains (one with a negative h)."""
    yield make_chain(params, simple_bm_seed(params))
    yield make_chain(params, correlated_seed(params, (0.6, 0.35, 0.8, 0.5)))
    yield make_chain(params, correlated_seed(params, (-0.4, 0.7, -0.25, 0.55)))
