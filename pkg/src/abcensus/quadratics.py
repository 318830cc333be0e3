"""Reduced quadratic irrationals, their totally positive units and lengths.

A reduced quadratic irrational is ``omega = [a1, ..., an, a1, ..., an, ...]``
in (0, 1), stored by its primitive period.  With ``M = M(a1)...M(an)`` and
``M~ = M`` (n even) or ``M^2`` (n odd), the unit ``eps0 = (u0 + v0 sqrt(D))/2``
has ``u0 = Tr M~`` and the length of omega is ``rho = 2 log eps0``.

Orientation: ``M~ = [[q_l, q_{l-1}], [p_l, p_{l-1}]]`` maps
``z -> (q_l z + q_{l-1}) / (p_l z + p_{l-1})``, which fixes ``1/omega``.  The
matrix fixing omega itself is ``J M~ J = [[p_{l-1}, p_l], [q_{l-1}, q_l]]``;
that is the one the unit map ``[[a, b], [c, d]] -> c*omega + d`` inverts to.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath
import numpy as np

from . import _kernels
from .monoid import Mat2, flip, m_product, mat_mul


class NonPrimitivePeriodError(ValueError):
    """Period is an exact power of a shorter digit string."""


class InvariantError(ArithmeticError):
    """An identity that must hold exactly for a reduced irrational failed."""


class BoundaryAmbiguityError(ValueError):
    """A real cut-off is too close to an integer trace to classify safely."""


def is_primitive(period: Sequence[int]) -> bool:
    s = "".join(f",{a}" for a in period)
    return (s + s).find(s, 1) == len(s)


@dataclass(frozen=True, slots=True)
class QuadIrr:
    period: tuple[int, ...]
    m: Mat2
    mtilde: Mat2
    poly: tuple[int, int, int]  # (A, B, C) with A*w^2 + B*w + C = 0
    delta: int
    u0: int
    v0: int

    @property
    def per(self) -> int:
        return len(self.period)

    @property
    def eper(self) -> int:
        return self.per if self.per % 2 == 0 else 2 * self.per

    @property
    def omega(self) -> float:
        a, b, _ = self.poly
        return _surd_value(-b, self.delta, 2 * a)

    @property
    def conjugate(self) -> float:
        a, b, _ = self.poly
        return (-b - math.sqrt(self.delta)) / (2 * a)

    @property
    def eps0(self) -> float:
        return (self.u0 + self.v0 * math.sqrt(self.delta)) / 2

    @property
    def rho(self) -> float:
        # 2 log((u + sqrt(u^2 - 4))/2) without cancellation
        return 2 * math.acosh(self.u0 / 2)

    @property
    def trace(self) -> int:
        return self.mtilde.trace


def _surd_value(p: int, d: int, q: int) -> float:
    """(p + sqrt(d)) / q, rewritten as (d - p^2) / (q (sqrt(d) - p)) when p < 0."""
    root = math.sqrt(d)
    if p >= 0:
        return (p + root) / q
    return (d - p * p) / (q * (root - p))


def build_quad_irr(period: Sequence[int]) -> QuadIrr:
    period = tuple(int(a) for a in period)
    if not is_primitive(period):
        raise NonPrimitivePeriodError(f"{period} repeats a shorter block")
    m = m_product(period)
    mt = m if len(period) % 2 == 0 else mat_mul(m, m)
    # omega = (p_n + w p_{n-1}) / (q_n + w q_{n-1})
    a, b, c = m.b, m.a - m.d, -m.c
    g = math.gcd(a, math.gcd(b, c))
    a, b, c = a // g, b // g, c // g
    delta = b * b - 4 * a * c
    if delta <= 0 or math.isqrt(delta) ** 2 == delta:
        raise InvariantError(f"discriminant {delta} of {period} is not a positive non-square")
    v0, rem = divmod(mt.b, a)
    if rem:
        raise InvariantError(f"unit coefficient {mt.b}/{a} is not integral for {period}")
    u0 = mt.trace
    if u0 * u0 - delta * v0 * v0 != 4:
        raise InvariantError(f"u0^2 - D v0^2 != 4 for {period}")
    return QuadIrr(period, m, mt, (a, b, c), delta, u0, v0)


def gauss_orbit(q: QuadIrr) -> list[float]:
    """``omega, T(omega), ..., T^{eper-1}(omega)`` with T(x) = 1/x - floor(1/x).

    Iterates exactly on surds (P + sqrt(D))/Q, so every digit is checked
    against the period and the orbit must close after eper steps.
    """
    a, b, _ = q.poly
    d = q.delta
    root = math.isqrt(d)
    P, Q = -b, 2 * a
    values = []
    for i in range(q.eper):
        values.append(_surd_value(P, d, Q))
        Q1, rem = divmod(d - P * P, Q)
        if rem or Q1 <= 0:
            raise InvariantError(f"surd normalization failed at step {i} for {q.period}")
        digit = (root - P) // Q1
        if digit != q.period[i % q.per]:
            raise InvariantError(
                f"orbit digit {digit} at step {i} differs from period digit for {q.period}"
            )
        P, Q = -P - digit * Q1, Q1
    if (P, Q) != (-b, 2 * a):
        raise InvariantError(f"orbit of {q.period} does not close after eper steps")
    return values


def gauss_orbit_check(q: QuadIrr, tol: float = 1e-9) -> bool:
    """``omega T(omega) ... T^{eper-1}(omega) == 1/eps0`` to relative ``tol``.

    Every factor lies in (0, 1), so the orbit product is the reciprocal of
    the unit, not the unit itself.
    """
    prod = math.prod(gauss_orbit(q))
    target = 2 / (q.u0 + q.v0 * math.sqrt(q.delta))
    return abs(prod - target) <= tol * target


def lambda_matrix(q: QuadIrr) -> Mat2:
    """Matrix ``[[(u - Bv)/2, -Cv], [Av, (u + Bv)/2]]`` attached to the unit (u0, v0)."""
    a, b, c = q.poly
    u, v = q.u0, q.v0
    if (u - b * v) % 2:
        raise InvariantError(f"u0 - B v0 is odd for {q.period}")
    return Mat2((u - b * v) // 2, -c * v, a * v, (u + b * v) // 2)


def lambda_consistency(q: QuadIrr) -> bool:
    lam = lambda_matrix(q)
    return lam == flip(q.mtilde) and lam.trace == q.u0 and lam.det == 1


def spectral_radius(m: Mat2) -> float:
    t = m.trace
    disc = t * t - 4 * m.det
    return (t + math.sqrt(disc)) / 2


def iter_periods(trace_bound: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield ``(period, Tr M~)`` for every primitive period with Tr M~ <= trace_bound.

    Depth-first over digit strings.  q_n grows strictly along a branch and
    bounds Tr M~ from below, so a branch is cut once q_n > trace_bound.
    """
    # frames: (digits, p_{n-1}, p_n, q_{n-1}, q_n)
    stack = [((), 1, 0, 0, 1)]
    while stack:
        digits, p0, p1, q0, q1 = stack.pop()
        a = 1
        while a * q1 + q0 <= trace_bound:
            p2, q2 = a * p1 + p0, a * q1 + q0
            word = digits + (a,)
            t = q2 + p1
            if len(word) % 2:
                t = t * t + 2
            if t <= trace_bound and is_primitive(word):
                yield word, t
            stack.append((word, p1, p2, q1, q2))
            a += 1


def enumerate_reduced(trace_bound: int) -> list[QuadIrr]:
    """All reduced omega with Tr M~ <= trace_bound, sorted by (trace, period)."""
    found = sorted((t, w) for w, t in iter_periods(trace_bound))
    return [build_quad_irr(w) for _, w in found]


def unit_traces(trace_bound: int) -> np.ndarray:
    """Sorted array of u0 = Tr M~ over all reduced omega with u0 <= trace_bound."""
    if trace_bound < 3:
        return np.empty(0, np.int64)
    return np.sort(_kernels.reduced_unit_traces(int(trace_bound)))


def power_traces(u0: int, limit: int) -> list[int]:
    """``Tr(M~^k)`` for k = 1, 2, ... while <= limit: t_k = u0 t_{k-1} - t_{k-2}."""
    out = []
    t_prev, t = 2, u0
    while t <= limit:
        out.append(t)
        t_prev, t = t, u0 * t - t_prev
    return out


def trace_cut(z: Fraction | int) -> int:
    """Largest integer t with ``t < z + 1/z``; for z > 1 this is eps < z <=> Tr < ...

    A unit eps > 1 with eps + 1/eps = t satisfies eps < z exactly when t < z + 1/z.
    """
    z = Fraction(z)
    if z <= 1:
        return 0
    s = z + 1 / z
    return math.ceil(s) - 1


def r_count(z: Fraction | int, k: int = 1, traces: np.ndarray | None = None) -> int:
    """#{omega : eps0(omega)^k < z}, exact for rational z."""
    cut = trace_cut(z)
    if cut < 3:
        return 0
    if k == 1:
        traces = unit_traces(cut) if traces is None else traces
        return int(np.searchsorted(traces, cut, side="right"))
    # eps^k < z needs u0 <= t_k <= cut
    traces = unit_traces(cut) if traces is None else traces
    return sum(1 for u in traces[: np.searchsorted(traces, cut, side="right")]
               if len(power_traces(int(u), cut)) >= k)


def pi0_cut(x_bound, dps: int = 60) -> int:
    """Largest trace t with 2 log eps < X, i.e. t < 2 cosh(X/2)."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x_bound) if not isinstance(x_bound, Fraction) else (
            mpmath.mpf(x_bound.numerator) / x_bound.denominator)
        if x <= 0:
            raise ValueError("x_bound must be positive")
        s = 2 * mpmath.cosh(x / 2)
        nearest = mpmath.nint(s)
        if abs(s - nearest) < mpmath.mpf(10) ** (-(dps - 10)):
            raise BoundaryAmbiguityError(f"2 cosh(X/2) = {s} is within rounding of {nearest}")
        return int(mpmath.ceil(s)) - 1


def pi0(x_bound, traces: np.ndarray | None = None) -> int:
    """Number of reduced omega with rho(omega) < x_bound."""
    cut = pi0_cut(x_bound)
    if cut < 3:
        return 0
    traces = unit_traces(cut) if traces is None else traces
    return int(np.searchsorted(traces, cut, side="right"))


def r_of_n(n: int, traces: np.ndarray | None = None) -> int:
    """r(N) = #{omega : eps0 < N}; for integer N >= 2 this is #{u0 <= N}."""
    return r_count(int(n), 1, traces)


def power_trace_histogram(limit: int, traces: np.ndarray | None = None) -> np.ndarray:
    """``h[k, t]`` = #{omega : Tr(M~^k) = t}, for t <= limit; row 0 unused."""
    traces = unit_traces(limit) if traces is None else traces
    rows: dict[int, list[int]] = {}
    for u0 in traces:
        for k, t in enumerate(power_traces(int(u0), limit), 1):
            rows.setdefault(k, []).append(t)
    depth = max(rows, default=0)
    h = np.zeros((depth + 1, limit + 1), np.int64)
    for k, ts in rows.items():
        np.add.at(h[k], np.asarray(ts, dtype=np.int64), 1)
    return h


def bridge_counts(n_max: int, traces: np.ndarray | None = None) -> np.ndarray:
    """``out[N] = sum_k #{omega : Tr(M~^k) <= N}`` for N <= n_max."""
    h = power_trace_histogram(n_max, traces)
    return np.cumsum(h.sum(axis=0))


@dataclass
class SandwichReport:
    n: int
    lower: int          # sum_k r((N - 1/2)^(1/k))
    psi_ev: int
    upper: int          # sum_k r(N^(1/k))
    r_n: int
    psi_ev_next: int

    @property
    def lower_strict(self) -> bool:
        return self.lower < self.psi_ev

    @property
    def upper_strict(self) -> bool:
        return self.psi_ev < self.upper

    @property
    def upper_equal(self) -> bool:
        return self.psi_ev == self.upper

    @property
    def r_strict(self) -> bool:
        return self.r_n < self.psi_ev_next

    @property
    def holds(self) -> bool:
        """All three inequalities, strictly, as printed."""
        return self.lower_strict and self.upper_strict and self.r_strict


def _sum_r(z: Fraction, k_max: int, h_cum: np.ndarray) -> int:
    # eps^k < z  <=>  Tr(M~^k) <= trace_cut(z)
    cut = trace_cut(z)
    total = 0
    for k in range(1, min(k_max, h_cum.shape[0] - 1) + 1):
        total += int(h_cum[k, min(cut, h_cum.shape[1] - 1)]) if cut >= 0 else 0
    return total


def sandwich_table(n_lo: int, n_hi: int, psi_ev_cum: np.ndarray,
                   traces: np.ndarray | None = None) -> list[SandwichReport]:
    """Sandwich reports for every N in [n_lo, n_hi].

    ``psi_ev_cum[N]`` must be Psi_ev(N) for N <= n_hi + 1.
    """
    if n_lo < 3:
        raise ValueError("n must be >= 3")
    if len(psi_ev_cum) < n_hi + 2:
        raise ValueError("psi_ev_cum must reach n_hi + 1")
    traces = unit_traces(n_hi + 1) if traces is None else traces
    h = power_trace_histogram(n_hi + 1, traces)
    h_cum = np.cumsum(h, axis=1)
    out = []
    for n in range(n_lo, n_hi + 1):
        k_max = math.floor(2 * math.log(n))
        lower = _sum_r(Fraction(2 * n - 1, 2), k_max, h_cum)
        upper = _sum_r(Fraction(n), k_max, h_cum)
        r_n = _sum_r(Fraction(n), 1, h_cum)
        out.append(SandwichReport(n, lower, int(psi_ev_cum[n]), upper, r_n, int(psi_ev_cum[n + 1])))
    return out


def sandwich_check(n: int, psi_ev_cum: np.ndarray | None = None) -> SandwichReport:
    """Evaluate both sandwich inequalities and ``r(N) < Psi_ev(N+1)`` at one N."""
    if psi_ev_cum is None:
        from .census import psi_ev_formula

        psi_ev_cum = np.zeros(n + 2, np.int64)
        psi_ev_cum[n] = psi_ev_formula(n)
        psi_ev_cum[n + 1] = psi_ev_formula(n + 1)
    return sandwich_table(n, n, psi_ev_cum)[0]
