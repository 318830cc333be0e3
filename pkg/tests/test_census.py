import numpy as np
import pytest

from abcensus import _kernels
from abcensus.census import (
    census,
    iter_words,
    psi_brute,
    psi_ev_formula,
    psi_ev_formula_upto,
    psi_odd_floorsum,
    psi_odd_floorsum_upto,
    psi_odd_formula,
    psi_odd_formula_upto,
    residual_ratio,
    trace_histograms,
)
from abcensus.monoid import matrix_to_word


def test_spot_values():
    r = psi_brute(4).report
    assert r.row(3)["psi"] == 2
    assert r.row(4) == {"N": 4, "psi_ev": 3, "psi_odd": 1, "psi": 8, "phi": 6}


def test_python_walk_matches_compiled_walk():
    n = 40
    counts = np.zeros((4, n + 1), np.int64)
    for word, m in iter_words(n):
        first, last = word[0] == "A", word[0] == word[-1]
        counts[2 * first + last, m.trace] += 1
    assert (counts == _kernels.brute_histograms(n)).all()


def test_every_word_decodes():
    for word, m in iter_words(30):
        if word[0] == "B":
            digits = matrix_to_word(m)
            assert sum(digits) == len(word)


def test_class_symmetry():
    by = psi_brute(300).by_class
    assert (by[0] == by[2]).all()
    assert (by[1] == by[3]).all()


@pytest.mark.parametrize("n", [3, 4, 5, 17, 64, 101, 250])
def test_single_n_formulas_match_brute(n):
    r = psi_brute(n).report
    assert psi_ev_formula(n) == r.row(n)["psi_ev"]
    assert psi_odd_formula(n) == r.row(n)["psi_odd"]
    assert psi_odd_floorsum(n) == r.row(n)["psi_odd"]


def test_python_and_kernel_routes_agree():
    # the Python region loop serves n <= 4000, the kernel above
    for n in (4001, 4500):
        assert psi_ev_formula(n) == int(_kernels.psi_ev_formula(n))
        assert psi_odd_formula(n) == int(_kernels.psi_odd_formula(n))
    assert psi_ev_formula(1500) == int(_kernels.psi_ev_formula(1500))


def test_batched_formulas_match_brute():
    n = 400
    r = psi_brute(n).report
    assert (psi_ev_formula_upto(n)[3:] == r.psi_ev).all()
    assert (psi_odd_formula_upto(n)[3:] == r.psi_odd).all()
    assert (psi_odd_floorsum_upto(n)[3:] == r.psi_odd).all()


def test_thread_count_does_not_change_histograms():
    one = trace_histograms(3000, threads=1)
    three = trace_histograms(3000, threads=3)
    assert all((x == y).all() for x, y in zip(one, three))


def test_frozen_values(histograms_20k):
    ev, od = histograms_20k
    assert 2 * ev[2000] + 2 * od[2000] == 17637660
    assert 2 * ev[20000] + 2 * od[20000] == 2322605546
    assert ev[10000] == 21072528


def test_census_report_columns():
    rep = census(50)
    assert len(rep) == 48
    assert (rep.psi == 2 * rep.psi_ev + 2 * rep.psi_odd).all()
    assert rep.phi.sum() == rep.psi[-1]
    row = rep.row(50)
    assert row["residual"] == pytest.approx(row["psi"] - row["main_term"])
    assert residual_ratio(rep, 50) == pytest.approx(abs(row["residual_over_N175"]))


@pytest.mark.parametrize("bad", [2, 0, -5])
def test_rejects_small_n(bad):
    with pytest.raises(ValueError):
        census(bad)
    with pytest.raises(ValueError):
        psi_ev_formula(bad)


def test_rejects_huge_n():
    with pytest.raises(OverflowError):
        psi_odd_formula(1 << 21)
