"""Constants and main-term series of the trace census.

Euler's gamma and zeta'(2) are stored literals; :func:`series_gamma` and
:func:`series_zeta2_prime` recompute them from Euler-Maclaurin expansions so
the literals can be checked without any special-function library.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels

GAMMA = 0.57721566490153286
ZETA2_PRIME = -0.93754825431584376
ZETA2 = math.pi**2 / 6
LOG2 = math.log(2.0)


@dataclass(frozen=True)
class Constants:
    gamma: float
    zeta2: float
    zeta2_prime: float
    log2: float
    c1: float
    c2: float
    # variant of c2 with an extra -log 2 in the bracket; used as a negative control
    c2_stated: float

    def perturbed(self, delta_c2: float) -> "Constants":
        return replace(self, c2=self.c2 + delta_c2)


def constants() -> Constants:
    """c1 = 1/zeta(2) and c2 = (gamma - 3/2 - zeta'(2)/zeta(2)) / zeta(2).

    c2 is what 2*Psi_ev + 2*Psi_odd gives when Psi_ev ~ N^2 log2 / (2 zeta(2))
    and Psi_odd ~ C_N are added: the log 2 terms cancel.  ``c2_stated`` keeps
    the variant with an extra -log 2 inside the bracket for comparison.
    """
    ratio = ZETA2_PRIME / ZETA2
    return Constants(
        gamma=GAMMA,
        zeta2=ZETA2,
        zeta2_prime=ZETA2_PRIME,
        log2=LOG2,
        c1=1.0 / ZETA2,
        c2=(GAMMA - 1.5 - ratio) / ZETA2,
        c2_stated=(GAMMA - 1.5 - LOG2 - ratio) / ZETA2,
    )


def series_gamma(m: int = 1000) -> float:
    """H_m - log m - 1/(2m) + 1/(12m^2) - 1/(120m^4) + 1/(252m^6)."""
    h = math.fsum(1.0 / k for k in range(1, m + 1))
    return h - math.log(m) - 1 / (2 * m) + 1 / (12 * m**2) - 1 / (120 * m**4) + 1 / (252 * m**6)


def series_zeta2_prime(m: int = 200) -> float:
    """-sum log(n)/n^2 with the tail from n = m replaced by Euler-Maclaurin terms."""
    head = math.fsum(math.log(n) / n**2 for n in range(2, m))
    L = math.log(m)
    f = L / m**2
    integral = (L + 1) / m
    d1 = (1 - 2 * L) / m**3                 # f'
    d3 = (26 - 24 * L) / m**5              # f'''
    d5 = (1044 - 720 * L) / m**7           # f^(5)
    tail = integral + f / 2 - d1 / 12 + d3 / 720 - d5 / 30240
    return -(head + tail)


def s_n(n: int, tot) -> float:
    """``sum_{a < n/2} phi(a) (n - 2a)^2 / (2 a^2)``, correctly rounded via fsum."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return math.fsum(int(tot[a]) * (n - 2 * a) ** 2 / (2 * a * a) for a in range(1, (n + 1) // 2))


def c_n(n: float, k: Constants | None = None) -> float:
    k = k or constants()
    return n * n / (2 * k.zeta2) * (
        math.log(n) + k.gamma - k.log2 - 1.5 - k.zeta2_prime / k.zeta2
    )


def totient_partial_sums(n: int, tot) -> tuple[int, float, float]:
    """``(sum phi(a), sum phi(a)/a, sum phi(a)/a^2)`` over ``1 <= a < n``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    phi = [int(tot[a]) for a in range(1, n)]
    return (
        sum(phi),
        math.fsum(p / a for a, p in enumerate(phi, 1)),
        math.fsum(p / (a * a) for a, p in enumerate(phi, 1)),
    )


def totient_square_sum_main(n: float, k: Constants | None = None) -> float:
    """Main term of ``sum_{a<N} phi(a)/a^2``: (log N + gamma - zeta'(2)/zeta(2)) / zeta(2)."""
    k = k or constants()
    return (math.log(n) + k.gamma - k.zeta2_prime / k.zeta2) / k.zeta2


@dataclass
class FigureSeries:
    n: np.ndarray
    s_n: np.ndarray
    c_n: np.ndarray
    fig2: np.ndarray

    @property
    def s_minus_c(self) -> np.ndarray:
        return self.s_n - self.c_n


def figure_series(n_max: int, tot=None, k: Constants | None = None) -> FigureSeries:
    """S_N, C_N and ``sum_{a<N/2} phi(a)(N-2a)/a - N^2/(4 zeta(2))`` for N = 3..n_max.

    Uses compensated prefix sums P0 = sum phi, P1 = sum phi/a, P2 = sum phi/a^2
    over a <= (N-1)//2, so that S_N = N^2 P2/2 - 2N P1 + 2 P0.
    """
    from .inverse_count import totient_sieve

    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    k = k or constants()
    if tot is None or tot.n_max < n_max:
        tot = totient_sieve(n_max)
    a = np.arange(1, n_max // 2 + 1, dtype=np.float64)
    phi = np.asarray(tot.values[1 : n_max // 2 + 1], dtype=np.float64)
    p0 = np.concatenate(([0.0], np.cumsum(phi)))          # exact below 2**53
    p1 = np.concatenate(([0.0], _kernels.kahan_prefix(phi / a)))
    p2 = np.concatenate(([0.0], _kernels.kahan_prefix(phi / (a * a))))
    ns = np.arange(3, n_max + 1, dtype=np.int64)
    m = (ns - 1) // 2                                       # largest a with a < N/2
    nf = ns.astype(np.float64)
    s = nf * nf * p2[m] / 2 - 2 * nf * p1[m] + 2 * p0[m]
    c = nf * nf / (2 * k.zeta2) * (np.log(nf) + k.gamma - k.log2 - 1.5 - k.zeta2_prime / k.zeta2)
    fig2 = nf * p1[m] - 2 * p0[m] - nf * nf / (4 * k.zeta2)
    return FigureSeries(ns, s, c, fig2)
