"""Second-quantization trace identities over explicit one-particle spectra.

For a diagonal contraction a with eigenvalues 0 <= lambda_i < 1 the Bose and
Fermi second quantizations satisfy

    Tr Gamma_+(a) = det(1 - a)^{-1} = prod (1 - lambda_i)^{-1},
    Tr Gamma_-(a) = det(1 + a)      = prod (1 + lambda_i),

equivalently log Tr Gamma_{+-}(a) = -+ Tr log(1 -+ a).  (The log form is
stated here in the orientation that reproduces the determinant identity; a
common alternative writes the Bose sign flipped, which does not.)  The brute
force route sums occupation-number multi-indices directly, which is what the
direct-sum definition 1 (+) a (+) (a (x) a) (+) ... means on the symmetric /
antisymmetric subspaces, and reports a rigorous union-bound tail for the
truncated Bose sum.

All operators here are spectra: every formula in scope is spectral, so the
diagonal representation loses nothing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from mpmath import mp, mpf, exp, log, pi

from .errors import IdentityViolationError, KindMismatchError


@dataclass(frozen=True)
class OneParticleOperator:
    """A self-adjoint operator given by its eigenvalue list.

    kind "contraction": each eigenvalue in [0, 1), as the determinant
    formulas require.  kind "positive": each eigenvalue > 0, for one-particle
    Hamiltonians h entering e^{-th}.
    """

    eigenvalues: tuple
    kind: str

    def __post_init__(self):
        vals = tuple(mpf(v) for v in self.eigenvalues)
        object.__setattr__(self, "eigenvalues", vals)
        if self.kind == "contraction":
            if any(v < 0 or v >= 1 for v in vals):
                raise KindMismatchError("contraction eigenvalues must lie in [0, 1)")
        elif self.kind == "positive":
            if any(v <= 0 for v in vals):
                raise KindMismatchError("positive-operator eigenvalues must be > 0")
        else:
            raise KindMismatchError(f"unknown kind {self.kind!r}")


def contraction(*eigenvalues) -> OneParticleOperator:
    return OneParticleOperator(tuple(eigenvalues), "contraction")


def positive(*eigenvalues) -> OneParticleOperator:
    return OneParticleOperator(tuple(eigenvalues), "positive")


def gamma_trace(a: OneParticleOperator, statistics: str):
    """Closed-form Fock trace: prod (1-l)^{-1} (bose) or prod (1+l) (fermi)."""
    if a.kind != "contraction":
        raise KindMismatchError("gamma_trace needs a contraction")
    acc = mpf(1)
    if statistics == "bose":
        for lam in a.eigenvalues:
            acc /= (1 - lam)
    elif statistics == "fermi":
        for lam in a.eigenvalues:
            acc *= (1 + lam)
    else:
        raise ValueError(f"statistics must be 'bose' or 'fermi', got {statistics!r}")
    return acc


def log_gamma_trace(a: OneParticleOperator, statistics: str):
    """Spectral log form: -sum log(1-l) (bose), +sum log(1+l) (fermi)."""
    if a.kind != "contraction":
        raise KindMismatchError("log_gamma_trace needs a contraction")
    if statistics == "bose":
        return -sum(log(1 - lam) for lam in a.eigenvalues)
    if statistics == "fermi":
        return sum(log(1 + lam) for lam in a.eigenvalues)
    raise ValueError(f"statistics must be 'bose' or 'fermi', got {statistics!r}")


@dataclass(frozen=True)
class BruteForceTrace:
    value: object
    tail_bound: object    # rigorous bound on the truncation (0 for fermi)
    terms: int


def gamma_trace_bruteforce(a: OneParticleOperator, statistics: str,
                           occupancy_cutoff: int = 40) -> BruteForceTrace:
    """Direct sum over occupation-number multi-indices.

    Bose: all n_i <= occupancy_cutoff, with the union-bound tail

        sum_{exists i with n_i > N} prod l^{n} <=
        sum_i l_i^{N+1}/(1-l_i) * prod_{j != i} (1-l_j)^{-1},

    which is rigorous without assuming the product identity being tested.
    Fermi: n_i in {0, 1}, an exact finite sum (Pauli truncation).
    """
    if a.kind != "contraction":
        raise KindMismatchError("gamma_trace_bruteforce needs a contraction")
    lams = a.eigenvalues
    d = len(lams)
    if d == 0:
        return BruteForceTrace(value=mpf(1), tail_bound=mpf(0), terms=1)
    if statistics == "fermi":
        total = mpf(0)
        count = 0
        for occ in itertools.product((0, 1), repeat=d):
            term = mpf(1)
            for lam, n in zip(lams, occ):
                if n:
                    term *= lam
            total += term
            count += 1
        return BruteForceTrace(value=total, tail_bound=mpf(0), terms=count)
    if statistics != "bose":
        raise ValueError(f"statistics must be 'bose' or 'fermi', got {statistics!r}")
    cut = occupancy_cutoff
    # depth-first over occupation vectors, carrying the partial product so
    # each leaf costs one multiply; powers per mode are precomputed
    powers = [[lam ** n for n in range(cut + 1)] for lam in lams]
    count = 0

    def walk(mode, partial):
        nonlocal count
        if mode == d:
            count += 1
            return partial
        acc = mpf(0)
        for p in powers[mode]:
            acc += walk(mode + 1, partial * p)
        return acc

    total = walk(0, mpf(1))
    tail = mpf(0)
    for i, lam in enumerate(lams):
        if lam == 0:
            continue
        piece = lam ** (cut + 1) / (1 - lam)
        for j, other in enumerate(lams):
            if j != i:
                piece /= (1 - other)
        tail += piece
    return BruteForceTrace(value=total, tail_bound=tail, terms=count)


@dataclass(frozen=True)
class RatioRow:
    t: object
    numerator: object      # sum log(1 + e^{-t l})
    denominator: object    # sum e^{-t l}
    ratio: object


def fermi_ratio_scan(h: OneParticleOperator, t_grid, slack=mpf("1e-9")):
    """log Tr e^{-t Gamma_-(h)} / Tr e^{-t h} over a t grid.

    The numerator is sum_i log(1 + e^{-t l_i}), the Fermi second-quantized
    log trace; the pointwise bounds log 2 <= ratio <= 1 follow from
    log(2) u <= log(1 + u) <= u on (0, 1], and any violation beyond ``slack``
    raises :class:`IdentityViolationError`.
    """
    if h.kind != "positive":
        raise KindMismatchError("fermi_ratio_scan needs a positive operator")
    rows = []
    lo, hi = log(mpf(2)) - slack, 1 + slack
    for t in t_grid:
        t = mpf(t)
        if t <= 0:
            raise ValueError("t must be positive")
        num = sum(log(1 + exp(-t * lam)) for lam in h.eigenvalues)
        den = sum(exp(-t * lam) for lam in h.eigenvalues)
        ratio = num / den
        if not lo <= ratio <= hi:
            raise IdentityViolationError(
                f"ratio {mp.nstr(ratio, 12)} leaves [log 2, 1] at t={mp.nstr(t, 8)}",
                deviation=ratio)
        rows.append(RatioRow(t=t, numerator=num, denominator=den, ratio=ratio))
    return rows


def linear_spectrum_ratio_limit():
    """pi^2/12, the small-t ratio for the linear spectrum h = (1, 2, 3, ...):
    integral of log(1+e^{-x}) over [0, inf) against integral of e^{-x}."""
    return pi * pi / 12
