import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from abcensus.asymptotics import (
    GAMMA,
    ZETA2_PRIME,
    c_n,
    constants,
    totient_square_sum_main,
    figure_series,
    s_n,
    series_gamma,
    series_zeta2_prime,
    totient_partial_sums,
)
from abcensus.inverse_count import totient_sieve

TOT = totient_sieve(5000)


def test_literals_against_mpmath():
    with mpmath.workdps(30):
        assert GAMMA == pytest.approx(float(mpmath.euler), rel=1e-16, abs=0)
        assert ZETA2_PRIME == pytest.approx(float(mpmath.zeta(2, derivative=1)), rel=1e-16, abs=0)


def test_literals_against_series():
    assert series_gamma() == pytest.approx(GAMMA, abs=1e-14)
    assert series_zeta2_prime() == pytest.approx(ZETA2_PRIME, abs=1e-14)


def test_constants():
    k = constants()
    assert k.c1 == pytest.approx(6 / math.pi**2)
    assert k.c2 == pytest.approx(-0.214491, abs=5e-7)
    assert k.c2_stated == pytest.approx(k.c2 - math.log(2) / k.zeta2)
    assert k.perturbed(0.5).c2 == k.c2 + 0.5


def exact_s(n):
    return sum(Fraction(int(TOT[a]) * (n - 2 * a) ** 2, 2 * a * a) for a in range(1, (n + 1) // 2))


@pytest.mark.parametrize("n, want", [(3, 0.5), (4, 2.0), (5, 4.625)])
def test_s_n_small(n, want):
    assert s_n(n, TOT) == want
    assert exact_s(n) == Fraction(want)


@pytest.mark.parametrize(
    "n, want",
    [(1, -0.3179369142), (3, 0.1440106034), (4, 1.6551366789), (5, 4.2818387164)],
)
def test_c_n_values(n, want):
    assert c_n(n) == pytest.approx(want, abs=1e-9)


def test_c_n_sign_change():
    root = mpmath.findroot(lambda x: c_n(float(x)), 2.8)
    assert float(root) == pytest.approx(2.846159, abs=1e-6)


def test_totient_partial_sums():
    s0, s1, s2 = totient_partial_sums(5, TOT)
    assert s0 == 1 + 1 + 2 + 2
    assert s1 == pytest.approx(1 + 0.5 + 2 / 3 + 0.5)
    assert s2 == pytest.approx(1 + 0.25 + 2 / 9 + 2 / 16)


def test_figure_series_against_direct_sums():
    fs = figure_series(400, TOT)
    assert fs.n[0] == 3 and fs.n[-1] == 400
    for i, n in enumerate(fs.n):
        n = int(n)
        assert fs.s_n[i] == pytest.approx(s_n(n, TOT), rel=1e-12, abs=1e-12)
        assert fs.c_n[i] == pytest.approx(c_n(n), rel=1e-12)
    exact = sum(Fraction(int(TOT[a]) * (3 - 2 * a), a) for a in (1,))
    assert fs.fig2[0] == pytest.approx(float(exact) - 9 / (4 * constants().zeta2), abs=1e-12)
    assert fs.fig2[0] == pytest.approx(-0.36783597917, abs=1e-10)
    assert np.allclose(fs.s_minus_c, fs.s_n - fs.c_n)


def test_figure_series_needs_range():
    with pytest.raises(ValueError):
        figure_series(2)


@pytest.mark.parametrize("n", [100, 1000, 5000])
def test_totient_sum_main_term(n):
    _, _, s2 = totient_partial_sums(n, TOT)
    assert abs(s2 - totient_square_sum_main(n)) <= 10 * math.log(n) / n
