"""Spectral densities: periodically correlated pipeline and embedding closed forms.

Two complementary routes live here.

* The stationarized route: the covariance of the periodically correlated
  counterpart is expanded in its periodic components ``B_k(tau)`` (a discrete
  Fourier transform over the phase index), each component is transformed to a
  frequency function ``f_k``, and the T x T density matrix entries follow as
  ``f_jk(omega) = f_(k-j)((omega - 2 pi j) / T) / T``.  These matrices are
  Hermitian term by term.

* The embedding route: the T-dimensional self-similar embedding has a
  two-term closed-form density obtained by summing the geometric matrix
  covariance series

      d_jr(omega) = sum_s l**(-H s) exp(-i omega s T) Q_jr(l**s) / (2 pi),

  which converges exactly when the per-period ratio
  ``rho = alpha**(-H T) * htilde_period`` satisfies ``|rho| < 1``.

The closed form inherits the one-sided factorization kernel of the matrix
covariance, whose lag-0 value below the diagonal is not the symmetric
covariance; consequently the raw two-term form is Hermitian only on and above
the diagonal's side (j >= r paired against conjugation picks up a constant
offset otherwise).  ``spectral_matrix`` therefore evaluates the closed form on
the half where it agrees with the symmetric covariance series and completes
the other half by conjugation, which is the density of the actual process.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import DsiParams, HChain, convergence_ratio, h_tilde
from .covariance import pc_counterpart_cov
from .errors import ConvergenceError, DomainError, PoleError
from .multidim import build_qcov

__all__ = [
    "FrequencyGrid",
    "BkTable",
    "SpectralMatrix",
    "FkValue",
    "SeriesValue",
    "auto_truncation",
    "bk_from_pc_cov",
    "build_bk_table",
    "fk_from_bk",
    "fjk",
    "f_matrix",
    "f_matrix_grid",
    "dsi_cov_from_spectra",
    "spectral_sum",
    "spectral_sum_grid",
    "spectral_closed",
    "spectral_closed_grid",
    "second_term_forms",
    "spectral_diag",
    "simple_bm_spectral",
    "spectral_matrix",
    "spectral_matrix_grid",
]

#: Guard distance from a denominator zero in closed forms.
_POLE_TOL = 1e-14


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform frequencies ``2 pi m / n_omega`` for ``m = 0..n_omega-1`` on [0, 2 pi)."""

    n_omega: int

    def __post_init__(self) -> None:
        if self.n_omega < 1:
            raise DomainError(f"n_omega must be >= 1, got {self.n_omega}")

    @property
    def omegas(self) -> np.ndarray:
        return 2 * math.pi * np.arange(self.n_omega) / self.n_omega


class FkValue(NamedTuple):
    """Truncated frequency component with its geometric tail bound."""

    value: complex
    tail_bound: float


class SeriesValue(NamedTuple):
    """Truncated spectral series value with its geometric tail bound."""

    value: complex
    tail_bound: float


def auto_truncation(rho: float, tol: float = 1e-12) -> int:
    """Smallest S with ``|rho|**S < tol`` (at least 1).

    Raises
    ------
    ConvergenceError
        If ``|rho| >= 1``: no truncation makes a divergent series small.
    """
    a = abs(rho)
    if a >= 1:
        raise ConvergenceError(
            f"series ratio |rho| = {a} >= 1; the spectral series diverges"
        )
    if a == 0.0:
        return 1
    return max(1, math.ceil(math.log(tol) / math.log(a)))


def bk_from_pc_cov(pc_values: Sequence[float], k: int) -> complex:
    """Periodic component ``B_k(tau) = (1/T) sum_n R_n(tau) exp(-2 pi i k n / T)``.

    ``pc_values`` holds the periodically correlated covariance at one lag for
    phases n = 0..T-1.  Discrete orthogonality makes this the exact inverse of
    the phase expansion ``R_n(tau) = sum_k B_k(tau) exp(2 pi i k n / T)``.
    """
    vals = np.asarray(pc_values, dtype=float)
    T = len(vals)
    if T == 0:
        raise DomainError("need at least one phase value")
    n = np.arange(T)
    return complex(np.sum(vals * np.exp(-2j * math.pi * (k % T) * n / T)) / T)


@dataclass(frozen=True)
class BkTable:
    """Periodic components ``B_k(tau)`` for k = 0..T-1 and |tau| <= tau_window."""

    values: np.ndarray  # (T, 2*tau_window + 1), column tau_window is lag 0
    tau_window: int
    rho: float

    @property
    def T(self) -> int:
        return self.values.shape[0]

    def value(self, k: int, tau: int) -> complex:
        """B_k(tau); the component index is periodic mod T."""
        if abs(tau) > self.tau_window:
            raise IndexError(f"lag {tau} outside table window {self.tau_window}")
        return complex(self.values[k % self.T, tau + self.tau_window])


def build_bk_table(chain: HChain, tau_window: int | None = None) -> BkTable:
    """Tabulate B_k(tau) from the chain's closed-form covariance.

    The default window is one period beyond the truncation needed for a 1e-12
    geometric tail, so frequency sums can bound their own error.
    """
    rho = convergence_ratio(chain)
    if tau_window is None:
        tau_window = auto_truncation(rho) + chain.T
    if tau_window < 0:
        raise DomainError(f"tau_window must be >= 0, got {tau_window}")
    T = chain.T
    taus = np.arange(-tau_window, tau_window + 1)
    pc = np.empty((T, len(taus)))
    for n in range(T):
        pc[n] = [pc_counterpart_cov(chain, n, int(t)) for t in taus]
    phases = np.exp(-2j * math.pi * np.outer(np.arange(T), np.arange(T)) / T)
    values = phases @ pc / T  # values[k, i] = (1/T) sum_n pc[n, i] e^{-2pi i k n / T}
    return BkTable(values=values, tau_window=tau_window, rho=rho)


def _effective_truncation(table: BkTable, s_trunc: int | None) -> int:
    limit = table.tau_window - table.T
    if limit < 0:
        raise IndexError(
            f"table window {table.tau_window} too small for a tail estimate "
            f"(need at least T = {table.T})"
        )
    if s_trunc is None:
        return limit
    if s_trunc > limit:
        raise IndexError(
            f"truncation {s_trunc} needs window {s_trunc + table.T}, "
            f"table has {table.tau_window}"
        )
    return s_trunc


def fk_from_bk(table: BkTable, k: int, omega: float, s_trunc: int | None = None) -> FkValue:
    """Frequency component ``f_k(omega) ~ (1/2 pi) sum_{|tau|<=S} B_k(tau) e^{-i tau omega}``.

    The tail bound exploits that |B_k| decays by |rho| per period: the first
    untabulated period is summed and the geometric remainder closed.

    Raises
    ------
    ConvergenceError
        If ``|rho| >= 1``.
    """
    if abs(table.rho) >= 1:
        raise ConvergenceError(
            f"series ratio |rho| = {abs(table.rho)} >= 1; f_k does not exist"
        )
    S = _effective_truncation(table, s_trunc)
    taus = np.arange(-S, S + 1)
    row = table.values[k % table.T, table.tau_window - S : table.tau_window + S + 1]
    value = complex(np.sum(row * np.exp(-1j * omega * taus)) / (2 * math.pi))
    edge = sum(
        abs(table.value(k, t)) for t in range(S + 1, S + table.T + 1)
    )
    tail = edge / ((1 - abs(table.rho)) * math.pi)  # both lag signs, |B_k(-t)| = |B_k(t)|
    return FkValue(value=value, tail_bound=float(tail))


def fjk(table: BkTable, j: int, k: int, omega: float, s_trunc: int | None = None) -> complex:
    """Density matrix entry ``f_jk(omega) = (1/T) f_(k-j)((omega - 2 pi j) / T)``.

    Component indices reduce mod T and the frequency argument mod 2 pi; both
    reductions are exact symmetries of the underlying sums.
    """
    T = table.T
    arg = ((omega - 2 * math.pi * j) / T) % (2 * math.pi)
    return fk_from_bk(table, (k - j) % T, arg, s_trunc).value / T


def f_matrix(table: BkTable, omega: float, s_trunc: int | None = None) -> np.ndarray:
    """Full T x T density matrix of the stationarized counterpart at ``omega``."""
    T = table.T
    out = np.empty((T, T), dtype=complex)
    for j in range(T):
        for k in range(T):
            out[j, k] = fjk(table, j, k, omega, s_trunc)
    return out


def dsi_cov_from_spectra(chain: HChain, n: int, tau: int, table: BkTable) -> float:
    """Reassemble ``dtsim_cov`` from the periodic components.

    ``alpha**((2n + tau) H) * sum_k B_k(tau) exp(2 pi i k n / T)``; the
    imaginary part of the phase sum vanishes and is dropped.
    """
    p = chain.params
    ks = np.arange(chain.T)
    phase_sum = np.sum(
        table.values[:, tau + table.tau_window] * np.exp(2j * math.pi * ks * n / chain.T)
    )
    return float(p.alpha ** ((2 * n + tau) * p.H) * phase_sum.real)


def _series_prefactors(chain: HChain, j: int, r: int) -> tuple[float, float]:
    qc = build_qcov(chain)
    a = qc.C[j, r] * qc.r0[r]  # coefficient on the s >= 0 side
    b = qc.C[r, j] * qc.r0[j]  # coefficient on the s <= -1 side
    return float(a), float(b)


def spectral_sum(
    chain: HChain, j: int, r: int, omega: float, s_trunc: int | None = None
) -> SeriesValue:
    """Embedding density entry by direct series truncation at ``|s| <= S``.

    Terms are taken from the matrix covariance of module multidim (negative
    matrix lags through its reflection), so this is an independent check on
    the closed form.

    Raises
    ------
    ConvergenceError
        If ``|rho| >= 1``.
    """
    p = chain.params
    rho = convergence_ratio(chain)
    if abs(rho) >= 1:
        raise ConvergenceError(
            f"series ratio |rho| = {abs(rho)} >= 1; the spectral series diverges"
        )
    S = auto_truncation(rho) if s_trunc is None else s_trunc
    if S < 0:
        raise DomainError(f"truncation must be >= 0, got {S}")
    qc = build_qcov(chain)
    total = 0j
    for s in range(-S, S + 1):
        q = qc.matrix(0, s)[j, r]
        total += p.l ** (-p.H * s) * cmath.exp(-1j * omega * s * p.T) * q
    a, b = _series_prefactors(chain, j, r)
    tail = abs(rho) ** (S + 1) * (abs(a) + abs(b)) / ((1 - abs(rho)) * 2 * math.pi)
    return SeriesValue(value=total / (2 * math.pi), tail_bound=float(tail))


def spectral_sum_grid(
    chain: HChain, omegas: np.ndarray, s_trunc: int | None = None
) -> np.ndarray:
    """Vectorized :func:`spectral_sum` values, shape (len(omegas), T, T)."""
    p = chain.params
    rho = convergence_ratio(chain)
    if abs(rho) >= 1:
        raise ConvergenceError(
            f"series ratio |rho| = {abs(rho)} >= 1; the spectral series diverges"
        )
    S = auto_truncation(rho) if s_trunc is None else s_trunc
    qc = build_qcov(chain)
    omegas = np.asarray(omegas, dtype=float)
    out = np.zeros((len(omegas), chain.T, chain.T), dtype=complex)
    for s in range(-S, S + 1):
        q = qc.matrix(0, s)
        phase = p.l ** (-p.H * s) * np.exp(-1j * omegas * s * p.T)
        out += phase[:, np.newaxis, np.newaxis] * q[np.newaxis, :, :]
    return out / (2 * math.pi)


def second_term_forms(chain: HChain, j: int, r: int, omega: float) -> tuple[complex, complex]:
    """The closed form's second term, two algebraically identical ways.

    Direct: ``-b / (1 - e^{-i omega T} alpha**(H T) / htilde_period)``.
    Geometric: ``b * e^{i omega T} rho / (1 - e^{i omega T} rho)``, the summed
    negative-lag geometric series.  Both are divided by 2 pi.  The direct form
    has a removable breakdown when the ratio chain vanishes; use the geometric
    form there.
    """
    p = chain.params
    rho = convergence_ratio(chain)
    _, b = _series_prefactors(chain, j, r)
    zbar = cmath.exp(1j * omega * p.T)
    geometric = b * zbar * rho / (1 - zbar * rho) / (2 * math.pi)
    if chain.htilde_period == 0.0:
        raise PoleError("ratio chain vanishes over a period; direct form undefined")
    z = cmath.exp(-1j * omega * p.T)
    denom = 1 - z * p.alpha ** (p.H * p.T) / chain.htilde_period
    if abs(denom) < _POLE_TOL:
        raise PoleError(f"denominator {abs(denom)} within {_POLE_TOL} of a pole")
    direct = -b / denom / (2 * math.pi)
    return direct, geometric


def spectral_closed(chain: HChain, j: int, r: int, omega: float) -> complex:
    """Two-term closed form of the embedding density entry (j, r).

    ``(1/2 pi) [ a / (1 - e^{-i omega T} rho) + second term ]`` with
    ``a = htilde(j-1) r0[r] / htilde(r-1)`` and ``rho`` the convergence ratio.

    Raises
    ------
    ConvergenceError
        If ``|rho| >= 1`` (the defining series diverges).
    PoleError
        If a denominator comes within 1e-14 of zero.
    """
    p = chain.params
    rho = convergence_ratio(chain)
    if abs(rho) >= 1:
        raise ConvergenceError(
            f"series ratio |rho| = {abs(rho)} >= 1; no spectral density exists"
        )
    a, b = _series_prefactors(chain, j, r)
    z = cmath.exp(-1j * omega * p.T)
    denom1 = 1 - z * rho
    if abs(denom1) < _POLE_TOL:
        raise PoleError(f"denominator {abs(denom1)} within {_POLE_TOL} of a pole")
    term1 = a / denom1 / (2 * math.pi)
    if chain.htilde_period == 0.0:
        # negative-lag side vanishes with the chain; its sum is exactly zero
        return complex(term1)
    term2, _ = second_term_forms(chain, j, r, omega)
    return complex(term1 + term2)


def spectral_closed_grid(chain: HChain, omegas: np.ndarray) -> np.ndarray:
    """Closed-form values on a frequency grid, shape (len(omegas), T, T)."""
    p = chain.params
    rho = convergence_ratio(chain)
    if abs(rho) >= 1:
        raise ConvergenceError(
            f"series ratio |rho| = {abs(rho)} >= 1; no spectral density exists"
        )
    qc = build_qcov(chain)
    omegas = np.asarray(omegas, dtype=float)
    z = np.exp(-1j * omegas * p.T)
    A = qc.C * qc.r0[np.newaxis, :]
    B = (qc.C * qc.r0[np.newaxis, :]).T
    t1 = A[np.newaxis, :, :] / (1 - z * rho)[:, np.newaxis, np.newaxis]
    if chain.htilde_period == 0.0:
        return t1 / (2 * math.pi)
    zbar = np.exp(1j * omegas * p.T)
    t2 = B[np.newaxis, :, :] * (zbar * rho / (1 - zbar * rho))[:, np.newaxis, np.newaxis]
    return (t1 + t2) / (2 * math.pi)


def spectral_diag(chain: HChain, k: int, omega: float) -> float:
    """Diagonal density ``r0[k] (1 - rho^2) / (2 pi (1 - 2 cos(omega T) rho + rho^2))``.

    Strictly positive for every valid chain with ``|rho| < 1``; equals the real
    part of the (k, k) closed form.
    """
    p = chain.params
    rho = convergence_ratio(chain)
    if abs(rho) >= 1:
        raise ConvergenceError(
            f"series ratio |rho| = {abs(rho)} >= 1; no spectral density exists"
        )
    denom = 1 - 2 * math.cos(omega * p.T) * rho + rho * rho
    if abs(denom) < _POLE_TOL:
        raise PoleError(f"denominator {abs(denom)} within {_POLE_TOL} of a pole")
    return float(chain.seed.r0[k % chain.T]) * (1 - rho * rho) / (2 * math.pi * denom)


def simple_bm_spectral(params: DsiParams, j: int, r: int, omega: float) -> complex:
    """Embedding density of simple BM in its fully explicit form.

    ``(alpha**(2 T (H - 1/2)) / 2 pi) * [alpha**r / (1 - e^{-i omega T} alpha**(-T/2))
    - alpha**j / (1 - e^{-i omega T} alpha**(T/2))]``.
    """
    T = params.T
    if not (0 <= j < T and 0 <= r < T):
        raise IndexError(f"component indices must lie in 0..{T - 1}, got ({j}, {r})")
    z = cmath.exp(-1j * omega * T)
    lead = params.alpha ** (2 * T * (params.H - 0.5)) / (2 * math.pi)
    return lead * (
        params.alpha ** r / (1 - z * params.alpha ** (-T / 2))
        - params.alpha ** j / (1 - z * params.alpha ** (T / 2))
    )


def spectral_matrix(chain: HChain, omega: float) -> np.ndarray:
    """Hermitian embedding density matrix at ``omega``.

    Entries with j >= r come from the closed form (where it agrees with the
    symmetric covariance series); entries above the diagonal are their
    conjugates.  The diagonal is real up to rounding.
    """
    T = chain.T
    out = np.empty((T, T), dtype=complex)
    for j in range(T):
        for r in range(j + 1):
            v = spectral_closed(chain, j, r, omega)
            out[j, r] = v
            if j != r:
                out[r, j] = v.conjugate()
    return out


@dataclass(frozen=True)
class SpectralMatrix:
    """Density matrices on a frequency grid; Hermitian with real diagonal."""

    grid: FrequencyGrid
    entries: np.ndarray  # (n_omega, T, T) complex

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim != 3 or e.shape[0] != self.grid.n_omega or e.shape[1] != e.shape[2]:
            raise DomainError(f"entries shape {e.shape} is not (n_omega, T, T)")
        scale = float(np.max(np.abs(e))) if e.size else 0.0
        tol = 1e-12 * max(1.0, scale)
        if np.max(np.abs(e - np.conj(np.swapaxes(e, 1, 2)))) > tol:
            raise DomainError("spectral matrix is not Hermitian within 1e-12")
        diags = np.diagonal(e, axis1=1, axis2=2)
        if np.max(np.abs(diags.imag)) > tol:
            raise DomainError("spectral matrix diagonal is not real within 1e-12")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)


def spectral_matrix_grid(chain: HChain, grid: FrequencyGrid) -> SpectralMatrix:
    """Hermitian embedding density matrices over a frequency grid."""
    entries = np.stack([spectral_matrix(chain, w) for w in grid.omegas])
    return SpectralMatrix(grid=grid, entries=entries)


def f_matrix_grid(
    table: BkTable, grid: FrequencyGrid, s_trunc: int | None = None
) -> SpectralMatrix:
    """Stationarized-counterpart density matrices over a frequency grid."""
    entries = np.stack([f_matrix(table, w, s_trunc) for w in grid.omegas])
    return SpectralMatrix(grid=grid, entries=entries)
