"""Trace census of the monoid generated by A and B.

Three independent ways to get the counts:

* :func:`psi_brute` walks every word in A and B (the oracle);
* :func:`psi_ev_formula`, :func:`psi_odd_formula`, :func:`psi_odd_floorsum`
  sum inverse-pair counts over one region per modulus, for a single N;
* :func:`census` enumerates the even and odd matrix families once and
  bins them by trace, which yields every N up to ``n_max`` in one pass.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .asymptotics import Constants, constants
from .inverse_count import (
    TotientTable,
    TrapezoidEv,
    TriangleEv,
    TriangleOdd,
    count_inverse_pairs,
    inverse_table,
)

# Above this N the int64 histogram kernels are still exact, but the run time
# (quadratic in N) stops being desk-scale.
N_LIMIT = 1 << 20


def _check_n(n: int, lo: int = 3) -> int:
    n = int(n)
    if n < lo:
        raise ValueError(f"n must be >= {lo}, got {n}")
    if n > N_LIMIT:
        raise OverflowError(f"n={n} exceeds supported limit {N_LIMIT}")
    return n


@dataclass
class CensusReport:
    """Columns indexed by N = 3..n_max (row i is N = i + 3)."""

    n: np.ndarray
    psi_ev: np.ndarray
    psi_odd: np.ndarray
    psi: np.ndarray
    phi: np.ndarray
    main_term: np.ndarray | None = None
    residual: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.n)

    def row(self, n: int) -> dict:
        i = int(n) - 3
        if not 0 <= i < len(self.n):
            raise KeyError(n)
        out = {
            "N": int(self.n[i]),
            "psi_ev": int(self.psi_ev[i]),
            "psi_odd": int(self.psi_odd[i]),
            "psi": int(self.psi[i]),
            "phi": int(self.phi[i]),
        }
        if self.main_term is not None:
            out["main_term"] = float(self.main_term[i])
            out["residual"] = float(self.residual[i])
            out["residual_over_N175"] = float(self.residual[i]) / float(self.n[i]) ** 1.75
        return out

    def rows(self):
        for n in self.n:
            yield self.row(int(n))


def _report(psi_ev_cum: np.ndarray, psi_odd_cum: np.ndarray, n_max: int) -> CensusReport:
    ns = np.arange(3, n_max + 1, dtype=np.int64)
    ev = psi_ev_cum[3 : n_max + 1].copy()
    od = psi_odd_cum[3 : n_max + 1].copy()
    psi = 2 * ev + 2 * od
    phi = np.diff(np.concatenate(([0], psi)))  # psi(2) = 0
    return CensusReport(ns, ev, od, psi, phi)


@dataclass
class BruteCensus:
    """Counts from exhaustive enumeration, split by word class.

    ``by_class`` rows: B...A (even), B...B (odd), A...B (even), A...A (odd);
    each row is cumulative in N, indexed directly by N.
    """

    report: CensusReport
    by_class: np.ndarray


def psi_brute(n_max: int) -> BruteCensus:
    n_max = _check_n(n_max)
    if n_max > 20000:
        raise ValueError("brute force is meant for n_max <= 20000")
    counts = _kernels.brute_histograms(n_max)
    cum = np.cumsum(counts, axis=1)
    by_class = cum[[0, 1, 2, 3]]
    report = _report(cum[0], cum[1], n_max)
    report.psi = cum.sum(axis=0)[3 : n_max + 1]
    report.phi = counts.sum(axis=0)[3 : n_max + 1]
    return BruteCensus(report, by_class)


def iter_words(n_max: int):
    """Yield ``(letters, matrix)`` for every word with trace in ``3..n_max``.

    Plain Python; slow but transparent.  Used to cross-check the compiled walk.
    """
    from .monoid import A, B, letters_to_matrix, mat_mul

    n_max = _check_n(n_max)
    stack = []
    for k in range(1, n_max - 1):
        stack.append(("B" * k + "A", letters_to_matrix("B" * k + "A")))
        stack.append(("A" * k + "B", letters_to_matrix("A" * k + "B")))
    while stack:
        word, m = stack.pop()
        if m.trace > n_max:
            continue
        yield word, m
        stack.append((word + "A", mat_mul(m, A)))
        stack.append((word + "B", mat_mul(m, B)))


def psi_ev_formula(n: int, tot: TotientTable | None = None) -> int:
    """Number of even words B^a1 A^a2 ... A^a2m with trace <= n.

    Sum over q < n of inverse pairs mod q on the trapezoid (q <= n/2) or the
    triangle (q > n/2).  ``tot`` is accepted for signature symmetry with the
    main-term helpers; the count itself is exact and does not need it.
    """
    n = _check_n(n)
    if n > 4000:
        return int(_kernels.psi_ev_formula(n))
    total = 0
    for q in range(1, n - 1):
        region = TrapezoidEv(n, q) if 2 * q <= n else TriangleEv(n, q)
        total += count_inverse_pairs(q, region, inverse_table(q))
    return total


def psi_odd_formula(n: int, tot: TotientTable | None = None) -> int:
    """Number of odd words B^a1 A^a2 ... B^a(2m+1), m >= 1, with trace <= n."""
    n = _check_n(n)
    if n > 4000:
        return int(_kernels.psi_odd_formula(n))
    total = 0
    a = 1
    while 2 * a < n:
        total += count_inverse_pairs(a, TriangleOdd(n, a), inverse_table(a))
        a += 1
    return total


def psi_odd_floorsum(n: int) -> int:
    return int(_kernels.psi_odd_floorsum(_check_n(n)))


def psi_ev_formula_upto(n_max: int) -> np.ndarray:
    """``out[N] = psi_ev_formula(N)`` for all N <= n_max (entries below 3 are 0)."""
    return _kernels.psi_ev_formula_upto(_check_n(n_max))


def psi_odd_formula_upto(n_max: int) -> np.ndarray:
    return _kernels.psi_odd_formula_upto(_check_n(n_max))


def psi_odd_floorsum_upto(n_max: int) -> np.ndarray:
    return _kernels.psi_odd_floorsum_upto(_check_n(n_max))


def trace_histograms(n_max: int, threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Per-trace counts of the even and odd matrix families, traces 0..n_max.

    Moduli are dealt round-robin to ``threads`` chunks with private
    histograms; chunks are summed in index order, so the output does not
    depend on the thread count.
    """
    n_max = _check_n(n_max)
    threads = max(1, int(threads))
    ev = np.zeros((threads, n_max + 1), np.int64)
    od = np.zeros((threads, n_max + 1), np.int64)

    def work(c):
        _kernels.ev_trace_chunk(n_max, c, threads, ev[c])
        _kernels.odd_trace_chunk(n_max, c, threads, od[c])

    if threads == 1:
        work(0)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, range(threads)))
    return ev.sum(axis=0), od.sum(axis=0)


def main_term(n, k: Constants | None = None):
    """``c1 N^2 log N + c2 N^2``; accepts scalars or arrays."""
    k = k or constants()
    n = np.asarray(n, dtype=np.float64)
    return k.c1 * n * n * np.log(n) + k.c2 * n * n


def census(n_max: int, threads: int = 1, k: Constants | None = None) -> CensusReport:
    """Full table for N = 3..n_max, with main term and residual columns."""
    n_max = _check_n(n_max)
    ev, od = trace_histograms(n_max, threads)
    report = _report(np.cumsum(ev), np.cumsum(od), n_max)
    mt = main_term(report.n, k)
    report.main_term = mt
    report.residual = report.psi.astype(np.float64) - mt
    return report


def residual_ratio(report: CensusReport, n: int) -> float:
    """``|Psi_0(N)| / N^1.75`` for one row of a report."""
    row = report.row(n)
    return abs(row["residual"]) / math.pow(n, 1.75)
