"""Exact q-series of minimal-model characters and their high-precision
evaluation on the imaginary axis.

The level-k multiplicity of L0 - h in the irreducible (r, s) module is the
coefficient of q^k in

    (1/phi(q)) * sum_{j in Z} ( q^{m(m+1)j^2 + (r(m+1)-sm) j}
                              - q^{m(m+1)j^2 + (r(m+1)+sm) j + rs} ),

an alternating sum of quadratic-exponent terms against the Euler product
phi(q) = prod (1-q^n).  Coefficients are exact big integers; a brute-force
Verma oracle in the test suite anchors them at low level.

Evaluation of Tr e^{-2 pi t (L0 - c/24)} truncates the series at the stored
cutoff and reports a certified tail bound alongside the value, using
p(k) <= exp(pi sqrt(2k/3)).  For small t the direct sum converges too
slowly, so the S-matrix turns chi(it) into sum_nu S_{rho nu} chi_nu(i/t),
which converges fast; the residual of that identity over a t grid is the
certification that the S matrix of :mod:`cftinv.modular_data` is the one
acting on characters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf, exp, pi, sqrt

from .errors import InsufficientCutoffError
from .modular_data import MinimalModel, ModularData, Sector, mpq


def partition_numbers(n: int) -> list:
    """p(0..n) by Euler's pentagonal-number recurrence, exact integers."""
    p = [0] * (n + 1)
    p[0] = 1
    for k in range(1, n + 1):
        total = 0
        j = 1
        while True:
            g1 = j * (3 * j - 1) // 2
            if g1 > k:
                break
            sgn = -1 if j % 2 == 0 else 1
            total += sgn * p[k - g1]
            g2 = j * (3 * j + 1) // 2
            if g2 <= k:
                total += sgn * p[k - g2]
            j += 1
        p[k] = total
    return p


@dataclass(frozen=True)
class CharacterSeries:
    """a_k = dim of the L0-eigenspace h+k in one irreducible sector."""

    sector: Sector
    c: Fraction
    coeffs: tuple

    @property
    def cutoff(self) -> int:
        return len(self.coeffs) - 1


def _theta_terms(m: int, r: int, s: int, n: int):
    """(exponent, sign) pairs of the alternating numerator up to level n."""
    lam = r * (m + 1) - s * m
    mu = r * (m + 1) + s * m
    terms = []
    kmax = int((n / (m * (m + 1))) ** 0.5) + 2
    for k in range(-kmax, kmax + 1):
        e = m * (m + 1) * k * k + lam * k
        if 0 <= e <= n:
            terms.append((e, 1))
        e = m * (m + 1) * k * k + mu * k + r * s
        if 0 <= e <= n:
            terms.append((e, -1))
    return terms


def character_coeffs(model: MinimalModel, sector: Sector, cutoff: int,
                     partitions=None) -> CharacterSeries:
    """Exact coefficients a_0..a_cutoff of one sector character."""
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    p = partitions if partitions is not None else partition_numbers(cutoff)
    a = [0] * (cutoff + 1)
    for e, sgn in _theta_terms(model.m, sector.r, sector.s, cutoff):
        if sgn > 0:
            for n in range(e, cutoff + 1):
                a[n] += p[n - e]
        else:
            for n in range(e, cutoff + 1):
                a[n] -= p[n - e]
    assert a[0] == 1, "lowest-weight space must be one dimensional"
    return CharacterSeries(sector=sector, c=model.c, coeffs=tuple(a))


def all_character_series(model: MinimalModel, cutoff: int) -> tuple:
    p = partition_numbers(cutoff)
    return tuple(character_coeffs(model, sec, cutoff, p) for sec in model.sectors)


# ---------------------------------------------------------------- evaluation

def _tail_bound(cutoff: int, t, h, c, shifted: bool):
    """Rigorous bound on sum_{k > cutoff} a_k e^{-2 pi t (h + k [- c/24])}.

    Uses p(k) <= e^{pi sqrt(2k/3)} and sqrt(k) <= k/sqrt(N+1) for k >= N+1,
    so the tail is dominated by a geometric series with ratio
    r = exp(pi sqrt(2/3)/sqrt(N+1) - 2 pi t).  Returns an mpf bound, or None
    when the ratio is not < 1 (cutoff too small to certify anything).
    """
    n1 = cutoff + 1
    rate = pi * sqrt(mpf(2) / 3) / sqrt(n1) - 2 * pi * t
    if rate >= 0:
        return None
    r = exp(rate)
    front = exp(-2 * pi * t * (h - (c if shifted else 0)))
    return front * (r ** n1) / (1 - r)


def required_cutoff(t, tol, h=0, c=0, shifted=True) -> int:
    """Smallest power-of-two-ish cutoff whose certified tail is below tol."""
    n = 16
    while n < 10 ** 9:
        b = _tail_bound(n, mpf(t), mpf(h), mpf(c), shifted)
        if b is not None and b < tol:
            return n
        n *= 2
    raise InsufficientCutoffError(f"no practical cutoff certifies tol={tol} at t={t}")


@dataclass(frozen=True)
class TraceValue:
    """An evaluated trace together with its certified absolute error."""

    value: object
    error: object


def evaluate(series: CharacterSeries, t, shifted: bool = True,
             tol=None) -> TraceValue:
    """chi(it) = sum_k a_k e^{-2 pi t (h + k - c/24)} for t > 0.

    ``shifted=False`` drops the c/24 shift and returns Tr e^{-2 pi t L0}.
    Raises :class:`InsufficientCutoffError` when the certified tail bound at
    the stored cutoff exceeds ``tol`` (default: 10^(6-dps) of the value scale).
    """
    t = mpf(t)
    if t <= 0:
        raise ValueError("t must be positive")
    h = mpq(series.sector.h)
    c24 = mpq(series.c) / 24
    tail = _tail_bound(series.cutoff, t, h, c24, shifted)
    q = exp(-2 * pi * t)
    acc = mpf(0)
    qp = mpf(1)
    for a in series.coeffs:
        if a:
            acc += a * qp
        qp *= q
    front = exp(-2 * pi * t * (h - (c24 if shifted else 0)))
    value = front * acc
    if tol is None:
        tol = abs(value) * mpf(10) ** (6 - mp.dps) + mpf(10) ** (-2 * mp.dps)
    if tail is None or tail > tol:
        raise InsufficientCutoffError(
            f"cutoff {series.cutoff} cannot certify tolerance {tol} at t={t}",
            required_cutoff=required_cutoff(t, tol, h, c24, shifted))
    rounding = abs(value) * mpf(2) ** (4 - mp.prec) * (series.cutoff + 2)
    return TraceValue(value=value, error=tail + rounding)


def evaluate_small_t(md: ModularData, all_series, rho, t,
                     shifted: bool = True) -> TraceValue:
    """chi_rho(it) for 0 < t <= 1 through the S transform:
    chi_rho(it) = sum_nu S_{rho nu} chi_nu(i/t), whose right side converges
    rapidly because 1/t is large.  ``shifted=False`` multiplies by
    e^{-2 pi t c/24} to give Tr e^{-2 pi t L0,rho}."""
    t = mpf(t)
    if not 0 < t <= 1:
        raise ValueError("the transform route needs 0 < t <= 1")
    idx = md.model.sector_index(rho) if not isinstance(rho, int) else rho
    acc = mpf(0)
    err = mpf(0)
    for nu, series in enumerate(all_series):
        tv = evaluate(series, 1 / t, shifted=True)
        acc += md.S[idx, nu] * tv.value
        err += abs(md.S[idx, nu]) * tv.error
    if not shifted:
        f = exp(-2 * pi * t * mpq(md.model.c) / 24)
        return TraceValue(value=f * acc, error=f * err)
    return TraceValue(value=acc, error=err)


def s_transform_residual(md: ModularData, all_series, t_grid):
    """max over sectors and grid of |chi_rho(i/t) - sum_nu S_{rho nu} chi_nu(it)|.

    This is the numerical certification that the S matrix built from the
    Kac-table formula is the one acting on the character span.
    """
    if not t_grid:
        raise ValueError("grid must be nonempty")
    worst = mpf(0)
    n = len(all_series)
    for t in t_grid:
        t = mpf(t)
        at_inv = [evaluate(s, 1 / t, shifted=True).value for s in all_series]
        at_t = [evaluate(s, t, shifted=True).value for s in all_series]
        for i in range(n):
            rhs = sum(md.S[i, j] * at_t[j] for j in range(n))
            worst = max(worst, abs(at_inv[i] - rhs))
    return worst


def count_states(series: CharacterSeries, lam) -> int:
    """N(lam) = number of L0 eigenvalues (with multiplicity) <= lam."""
    h = series.sector.h
    lam = Fraction(lam) if not isinstance(lam, float) else lam
    if lam > h + series.cutoff:
        raise InsufficientCutoffError(
            f"counting up to {lam} needs cutoff > {lam - h}",
            required_cutoff=int(lam - h) + 1)
    total = 0
    for k, a in enumerate(series.coeffs):
        if h + k > lam:
            break
        total += a
    return total


def values_csv_rows(series_list, md, t_grid, shifted=False):
    """(sector, t, value, certified_error) rows for CSV emission."""
    rows = []
    for i, series in enumerate(series_list):
        for t in t_grid:
            t = mpf(t)
            if t < 1:
                tv = evaluate_small_t(md, series_list, i, t, shifted=shifted)
            else:
                tv = evaluate(series, t, shifted=shifted)
            rows.append((series.sector.name, t, tv.value, tv.error))
    return rows


def coeff_dump(series: CharacterSeries) -> str:
    """Newline-delimited decimal strings of the exact coefficients."""
    return "\n".join(str(a) for a in series.coeffs) + "\n"
