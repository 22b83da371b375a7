import random

import pytest
from mpmath import mp, mpf, fabs, log, exp, pi

import cftinv as ci
from cftinv.errors import IdentityViolationError, KindMismatchError
from cftinv.fock import RatioRow


def test_gamma_trace_closed_forms():
    assert fabs(ci.gamma_trace(ci.contraction("0.5"), "bose") - 2) < mpf("1e-45")
    v = ci.gamma_trace(ci.contraction("0.5", "0.25"), "bose")
    assert fabs(v - mpf(8) / 3) < mpf("1e-45")
    v = ci.gamma_trace(ci.contraction("0.5", mpf(1) / 3), "fermi")
    assert fabs(v - 2) < mpf("1e-45")


def test_kind_validation():
    with pytest.raises(KindMismatchError):
        ci.contraction(1.0)               # 1 is excluded
    with pytest.raises(KindMismatchError):
        ci.contraction(-0.1)
    with pytest.raises(KindMismatchError):
        ci.positive(0)
    with pytest.raises(KindMismatchError):
        ci.gamma_trace(ci.positive(1, 2), "bose")
    with pytest.raises(ValueError):
        ci.gamma_trace(ci.contraction("0.5"), "maxwell")


def test_bruteforce_fermi_exact():
    bf = ci.gamma_trace_bruteforce(ci.contraction("0.5", mpf(1) / 3), "fermi")
    assert bf.terms == 4                  # 1 + 1/2 + 1/3 + 1/6
    assert fabs(bf.value - 2) < mpf("1e-45")
    assert bf.tail_bound == 0


def test_bruteforce_bose_single_mode():
    bf = ci.gamma_trace_bruteforce(ci.contraction("0.5"), "bose", 60)
    assert fabs(bf.value - 2) < mpf("1e-17")
    assert bf.tail_bound < mpf("1e-17")


def test_bruteforce_empty_spectrum():
    for stats in ("bose", "fermi"):
        bf = ci.gamma_trace_bruteforce(ci.contraction(), stats)
        assert bf.value == 1 and bf.tail_bound == 0


def test_log_form_identity():
    rng = random.Random(11)
    for _ in range(25):
        d = rng.randint(1, 6)
        a = ci.contraction(*[rng.uniform(0, 0.9) for _ in range(d)])
        for stats in ("bose", "fermi"):
            assert fabs(log(ci.gamma_trace(a, stats))
                        - ci.log_gamma_trace(a, stats)) < mpf("1e-42")


def test_det_identity_battery():
    """Closed form vs occupation-number enumeration; the full 100-spectrum
    battery runs in the acceptance suite, a third of it here."""
    rng = random.Random(202)
    cutoffs = {1: 200, 2: 80, 3: 30, 4: 16, 5: 11, 6: 8}
    with mp.workdps(30):
        for _ in range(30):
            d = rng.randint(1, 6)
            a = ci.contraction(*[rng.uniform(0.05, 0.8) for _ in range(d)])
            for stats in ("bose", "fermi"):
                closed = ci.gamma_trace(a, stats)
                bf = ci.gamma_trace_bruteforce(a, stats, cutoffs[d])
                assert fabs(closed - bf.value) <= bf.tail_bound + mpf("1e-25")


def test_monotonicity_in_each_eigenvalue():
    rng = random.Random(7)
    for _ in range(10):
        lams = [rng.uniform(0.1, 0.7) for _ in range(4)]
        base_b = ci.gamma_trace(ci.contraction(*lams), "bose")
        base_f = ci.gamma_trace(ci.contraction(*lams), "fermi")
        for i in range(4):
            bigger = list(lams)
            bigger[i] += 0.05
            assert ci.gamma_trace(ci.contraction(*bigger), "bose") > base_b
            assert ci.gamma_trace(ci.contraction(*bigger), "fermi") > base_f


def test_ratio_scan_linear_spectrum():
    h = ci.positive(*range(1, 5001))
    rows = ci.fermi_ratio_scan(h, ["1", "0.5", "0.1", "0.01"])
    target = ci.linear_spectrum_ratio_limit()
    assert fabs(target - pi * pi / 12) < mpf("1e-45")
    assert fabs(rows[-1].ratio - target) < mpf("0.01")
    for r in rows:
        assert log(mpf(2)) - mpf("1e-9") <= r.ratio <= 1 + mpf("1e-9")


def test_ratio_bounds_random_spectra():
    rng = random.Random(99)
    for _ in range(20):
        d = rng.randint(1, 40)
        h = ci.positive(*[rng.uniform(0.01, 50) for _ in range(d)])
        ci.fermi_ratio_scan(h, ["2", "1", "0.3", "0.05"])  # raises on violation


def test_ratio_single_mode_large_t():
    h = ci.positive(1)
    rows = ci.fermi_ratio_scan(h, ["40"])
    assert fabs(rows[0].ratio - 1) < mpf("1e-9")


def test_ratio_violation_detection():
    # shrink the allowed band until the true ratio falls outside: the scan
    # must flag it rather than return silently
    h = ci.positive(1, 2, 3)
    with pytest.raises(IdentityViolationError):
        ci.fermi_ratio_scan(h, ["40"], slack=mpf("-1e-3"))


def test_ratio_rows_shape():
    h = ci.positive(1, 2)
    rows = ci.fermi_ratio_scan(h, ["1"])
    assert isinstance(rows[0], RatioRow)
    assert fabs(rows[0].numerator
                - (log(1 + exp(mpf(-1))) + log(1 + exp(mpf(-2))))) < mpf("1e-45")
    assert fabs(rows[0].denominator - (exp(mpf(-1)) + exp(mpf(-2)))) < mpf("1e-45")
