"""Self-check suites: each invariant measured against its declared tolerance.

Used by the command-line ``verify`` subcommand and handy in notebooks.  Every
suite returns the worst observed residual so a report can show the margin, not
just a boolean.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from .core import CovarianceSeed, DsiParams, HChain, make_chain
from .covariance import dtsim_cov, markov_triangle_residual, simple_bm_cov
from .lamperti import SampledFunction, lamperti_forward, lamperti_inverse, verify_commutation
from .spectral import (
    FrequencyGrid,
    bk_from_pc_cov,
    build_bk_table,
    dsi_cov_from_spectra,
    f_matrix_grid,
    pc_counterpart_cov,
    spectral_closed_grid,
    spectral_matrix_grid,
    spectral_sum_grid,
)

__all__ = ["CheckResult", "perturb_seed", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    observed: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.observed <= self.tolerance


def perturb_seed(seed: CovarianceSeed, eps: float, rng_seed: int = 0) -> CovarianceSeed:
    """Multiply each one-step covariance by ``1 + eps * u`` with seeded u ~ U(-1, 1)."""
    rng = np.random.default_rng(rng_seed)
    noise = 1.0 + eps * rng.uniform(-1.0, 1.0, size=seed.T)
    return CovarianceSeed(r0=np.array(seed.r0), r1=np.array(seed.r1) * noise)


def _check_commutation(params: DsiParams) -> CheckResult:
    rng = np.random.default_rng(7)
    y = SampledFunction(domain=np.arange(9.0), values=rng.standard_normal(9))
    worst = 0.0
    for k in (params.alpha, params.alpha ** 2, params.alpha ** -1):
        worst = max(worst, verify_commutation(y, params.H, params.alpha, k))
    return CheckResult("commutation", worst, 1e-12)


def _check_roundtrip(params: DsiParams) -> CheckResult:
    rng = np.random.default_rng(11)
    y = SampledFunction(domain=np.arange(-3.0, 6.0), values=rng.standard_normal(9))
    fwd = lamperti_forward(y, params.H, params.alpha)
    back = lamperti_inverse(fwd, params.H, params.alpha)
    scale = np.maximum(1.0, np.abs(y.values))
    worst = float(np.max(np.abs(back.values - y.values) / scale))
    worst = max(worst, float(np.max(np.abs(back.domain - y.domain))))
    again = lamperti_forward(back, params.H, params.alpha)
    scale = np.maximum(1.0, np.abs(fwd.values))
    worst = max(worst, float(np.max(np.abs(again.values - fwd.values) / scale)))
    return CheckResult("lamperti_roundtrip", worst, 1e-12)


def _check_oracle(chain: HChain) -> CheckResult:
    p = chain.params
    worst = 0.0
    for n in range(2 * p.T):
        for tau in range(-2 * p.T, 2 * p.T + 1):
            if n + tau < 0:
                continue
            closed = dtsim_cov(chain, n, tau)
            oracle = simple_bm_cov(p.alpha ** (n + tau), p.alpha ** n, p.H, p.l)
            worst = max(worst, abs(closed - oracle) / max(abs(closed), abs(oracle)))
    return CheckResult("oracle_equivalence", worst, 1e-12)


def _check_triangle(chain: HChain) -> CheckResult:
    p = chain.params
    idx = range(4 * p.T + 1)
    table = {
        (a, b): dtsim_cov(chain, a, b - a) for a in idx for b in idx if a <= b
    }
    cov = lambda t, s: table[(min(t, s), max(t, s))]
    worst = 0.0
    for a, b, c in combinations_with_replacement(idx, 3):
        res = markov_triangle_residual(cov, a, b, c)
        scale = max(abs(cov(a, c) * cov(b, b)), abs(cov(a, b) * cov(b, c)), 1e-300)
        worst = max(worst, abs(res) / scale)
    return CheckResult("markov_triangle", worst, 1e-12)


def _hermitian_residual(entries: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(entries))))
    return float(np.max(np.abs(entries - np.conj(np.swapaxes(entries, 1, 2)))) / scale)


def _check_hermitian(chain: HChain) -> CheckResult:
    grid = FrequencyGrid(16)
    table = build_bk_table(chain)
    worst = _hermitian_residual(f_matrix_grid(table, grid).entries)
    worst = max(worst, _hermitian_residual(spectral_matrix_grid(chain, grid).entries))
    return CheckResult("hermitian_spectral", worst, 1e-12)


def _check_series_vs_closed(chain: HChain) -> CheckResult:
    omegas = FrequencyGrid(64).omegas
    diff = spectral_sum_grid(chain, omegas) - spectral_closed_grid(chain, omegas)
    return CheckResult("series_vs_closed", float(np.max(np.abs(diff))), 1e-9)


def _check_phase_roundtrip(chain: HChain) -> CheckResult:
    p = chain.params
    table = build_bk_table(chain, tau_window=2 * p.T)
    worst = 0.0
    for tau in range(-2 * p.T, 2 * p.T + 1):
        pc = [pc_counterpart_cov(chain, n, tau) for n in range(p.T)]
        bks = [bk_from_pc_cov(pc, k) for k in range(p.T)]
        for n in range(p.T):
            recon = float(
                sum(bks[k] * np.exp(2j * np.pi * k * n / p.T) for k in range(p.T)).real
            )
            worst = max(worst, abs(recon - pc[n]) / max(1.0, abs(pc[n])))
    for n in range(2 * p.T):
        for tau in range(-p.T, p.T + 1):
            recon = dsi_cov_from_spectra(chain, n, tau, table)
            want = dtsim_cov(chain, n, tau)
            worst = max(worst, abs(recon - want) / max(1.0, abs(want)))
    return CheckResult("phase_expansion_roundtrip", worst, 1e-10)


def run_checks(params: DsiParams, seed: CovarianceSeed) -> list[CheckResult]:
    """Run every suite against ``seed`` under ``params``.

    The oracle-equivalence suite always compares against the exact simple-BM
    covariance for ``params``; feeding a perturbed or foreign seed makes that
    suite fail while the structural suites (triangle, Hermitian, series
    against closed form) still hold, which is the intended fault-injection
    signature.
    """
    chain = make_chain(params, seed)
    return [
        _check_commutation(params),
        _check_roundtrip(params),
        _check_oracle(chain),
        _check_triangle(chain),
        _check_hermitian(chain),
        _check_series_vs_closed(chain),
        _check_phase_roundtrip(chain),
    ]
