"""Counting pairs (x, y) with x*y = 1 (mod q) inside planar regions.

Every region is a stack of rows: for each integer y in ``(y_lo, y_hi]`` the
admissible x form the interval ``(x_lo, min(cap, s - y)]``.  Counting a row
costs one table lookup, because the admissible x are a single residue class.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels

_NO_SUM_CAP = 1 << 62


@dataclass(frozen=True)
class Rect:
    """``(x_lo, x_hi] x (y_lo, y_hi]``."""

    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int

    def __post_init__(self):
        if self.x_hi < self.x_lo or self.y_hi < self.y_lo:
            raise ValueError(f"empty or reversed interval in {self}")

    def rows(self):
        return self.x_lo, self.x_hi, _NO_SUM_CAP, self.y_lo, self.y_hi

    def area(self) -> Fraction:
        return Fraction((self.x_hi - self.x_lo) * (self.y_hi - self.y_lo))

    def contains(self, x: int, y: int) -> bool:
        return self.x_lo < x <= self.x_hi and self.y_lo < y <= self.y_hi


@dataclass(frozen=True)
class TrapezoidEv:
    """``{0 < x <= q < y <= n - x}``, defined for ``q <= n/2``."""

    n: int
    q: int

    def __post_init__(self):
        if not 1 <= self.q or 2 * self.q > self.n:
            raise ValueError(f"trapezoid needs 1 <= q <= n/2, got n={self.n}, q={self.q}")

    def rows(self):
        return 0, self.q, self.n, self.q, self.n - 1

    def area(self) -> Fraction:
        return Fraction(self.q * (2 * self.n - 3 * self.q), 2)

    def contains(self, x: int, y: int) -> bool:
        return 0 < x <= self.q < y <= self.n - x


@dataclass(frozen=True)
class TriangleEv:
    """``{0 < x < n - q, q < y <= n - x}``, defined for ``n/2 < q < n``."""

    n: int
    q: int

    def __post_init__(self):
        if not (self.n < 2 * self.q and self.q < self.n):
            raise ValueError(f"triangle needs n/2 < q < n, got n={self.n}, q={self.q}")

    def rows(self):
        return 0, self.n - self.q - 1, self.n, self.q, self.n - 1

    def area(self) -> Fraction:
        return Fraction((self.n - self.q) ** 2, 2)

    def contains(self, x: int, y: int) -> bool:
        return 0 < x < self.n - self.q and self.q < y <= self.n - x


@dataclass(frozen=True)
class TriangleOdd:
    """``{0 < x <= n - 2a, 0 < y <= n - 2a - x}``, defined for ``1 <= a < n/2``."""

    n: int
    a: int

    def __post_init__(self):
        if not (1 <= self.a and 2 * self.a < self.n):
            raise ValueError(f"odd triangle needs 1 <= a < n/2, got n={self.n}, a={self.a}")

    def rows(self):
        side = self.n - 2 * self.a
        return 0, side, side, 0, side - 1

    def area(self) -> Fraction:
        return Fraction((self.n - 2 * self.a) ** 2, 2)

    def contains(self, x: int, y: int) -> bool:
        side = self.n - 2 * self.a
        return 0 < x <= side and 0 < y <= side - x


Region = Rect | TrapezoidEv | TriangleEv | TriangleOdd


class TotientTable:
    """Euler's phi on ``1..n_max``; ``tab[k]`` is phi(k), ``tab[0]`` is 0."""

    def __init__(self, values: np.ndarray):
        self.values = values

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)


def totient_sieve(n_max: int) -> TotientTable:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    phi = np.arange(n_max + 1, dtype=np.int64)
    is_prime = np.ones(n_max + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, n_max + 1):
        if is_prime[p]:
            is_prime[2 * p :: p] = False
            phi[p::p] -= phi[p::p] // p
    return TotientTable(phi)


def inverse_table(q: int) -> np.ndarray:
    """Array of length q with the inverse of each residue, -1 for non-units."""
    if q < 1:
        raise ValueError("modulus must be >= 1")
    out = np.empty(q, dtype=np.int64)
    _kernels.fill_inverses(q, out)
    return out


def count_inverse_pairs(q: int, region: Region, inv: np.ndarray | None = None) -> int:
    """Number of lattice points (x, y) in ``region`` with x*y = 1 (mod q).

    For q = 1 the congruence is vacuous and every lattice point counts.
    """
    if q < 1:
        raise ValueError("modulus must be >= 1")
    if inv is None:
        inv = inverse_table(q)
    x_lo, cap, s, y_lo, y_hi = region.rows()
    return int(_kernels.count_rows(q, x_lo, cap, s, y_lo, y_hi, inv))


def main_term(q: int, region: Region, tot: TotientTable) -> float:
    """``phi(q)/q**2 * Area(region)`` with the continuous area."""
    return float(Fraction(int(tot[q]), q * q) * region.area())
