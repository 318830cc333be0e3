"""Exact 2x2 arithmetic for the monoid generated by A=[[1,0],[1,1]], B=[[1,1],[0,1]].

A word is stored by its run lengths.  ``(a1, a2, ..., ak)`` stands for
``B^a1 A^a2 B^a3 ...`` (letters alternate, starting with B).  The same digit
string is also a continued fraction ``[a1, ..., ak] = 1/(a1 + 1/(a2 + ...))``.
The two readings meet through ``M(a) = [[a, 1], [1, 0]]``:

    B^k A^l = M(k) M(l),        B^k = M(k) J,        J = [[0, 1], [1, 0]]

so an even-length word equals ``M(a1)...M(ak)`` while an odd-length word
equals ``M(a1)...M(ak) J``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

U64_MAX = 2**64 - 1


class DecodeError(ValueError):
    """Matrix is not the image of any digit string."""


@dataclass(frozen=True, slots=True)
class Mat2:
    """Matrix ``[[a, b], [c, d]]`` with entries in ``[0, 2**64)``.

    For an even word the layout is ``[[q_k, q_{k-1}], [p_k, p_{k-1}]]``.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if v < 0:
                raise ValueError(f"Mat2 entry {name}={v} is negative")
            if v > U64_MAX:
                raise OverflowError(f"Mat2 entry {name}={v} exceeds 64 bits")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return mat_mul(self, other)

    def __repr__(self) -> str:
        return f"Mat2([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


IDENTITY = Mat2(1, 0, 0, 1)
A = Mat2(1, 0, 1, 1)
B = Mat2(1, 1, 0, 1)
J = Mat2(0, 1, 1, 0)


def _checked(op: str, *values: int) -> tuple[int, ...]:
    for v in values:
        if v > U64_MAX:
            raise OverflowError(f"{op}: entry {v} exceeds 64 bits")
    return values


def mat_mul(lhs: Mat2, rhs: Mat2) -> Mat2:
    return Mat2(
        *_checked(
            "mat_mul",
            lhs.a * rhs.a + lhs.b * rhs.c,
            lhs.a * rhs.b + lhs.b * rhs.d,
            lhs.c * rhs.a + lhs.d * rhs.c,
            lhs.c * rhs.b + lhs.d * rhs.d,
        )
    )


def trace(m: Mat2) -> int:
    return m.trace


def flip(m: Mat2) -> Mat2:
    """``J m J``: swaps the roles of A and B."""
    return Mat2(m.d, m.c, m.b, m.a)


def m_of(a: int) -> Mat2:
    if a < 1:
        raise ValueError(f"digit must be >= 1, got {a}")
    return Mat2(a, 1, 1, 0)


def _check_digits(digits: Sequence[int]) -> tuple[int, ...]:
    digits = tuple(int(x) for x in digits)
    if not digits:
        raise ValueError("digit string must be nonempty")
    for x in digits:
        if x < 1:
            raise ValueError(f"digits must be >= 1, got {digits}")
    return digits


@dataclass(frozen=True, slots=True)
class ConvergentTable:
    """``p[n]/q[n] = [a1, ..., an]`` for n = 0..k, seeded p0=0, p1=1, q0=1, q1=a1."""

    p: tuple[int, ...]
    q: tuple[int, ...]


def convergents(digits: Sequence[int]) -> ConvergentTable:
    digits = _check_digits(digits)
    p = [0, 1]
    q = [1, digits[0]]
    for a in digits[1:]:
        pn, qn = a * p[-1] + p[-2], a * q[-1] + q[-2]
        _checked("convergents", pn, qn)
        p.append(pn)
        q.append(qn)
    _checked("convergents", q[-1])
    return ConvergentTable(tuple(p), tuple(q))


def m_product(digits: Sequence[int]) -> Mat2:
    """``M(a1) ... M(ak) = [[q_k, q_{k-1}], [p_k, p_{k-1}]]``, determinant ``(-1)**k``."""
    t = convergents(digits)
    return Mat2(t.q[-1], t.q[-2], t.p[-1], t.p[-2])


def word_to_matrix(digits: Sequence[int], start: str = "B") -> Mat2:
    """Monoid element with run lengths ``digits``, first run of letter ``start``."""
    if start not in ("A", "B"):
        raise ValueError(f"start must be 'A' or 'B', got {start!r}")
    digits = _check_digits(digits)
    m = m_product(digits)
    if len(digits) % 2:
        m = Mat2(m.b, m.a, m.d, m.c)  # right multiplication by J
    return flip(m) if start == "A" else m


def letters_to_matrix(word: str) -> Mat2:
    m = IDENTITY
    for ch in word:
        if ch == "A":
            m = mat_mul(m, A)
        elif ch == "B":
            m = mat_mul(m, B)
        else:
            raise ValueError(f"unknown letter {ch!r}")
    return m


def digits_to_letters(digits: Sequence[int], start: str = "B") -> str:
    other = "A" if start == "B" else "B"
    return "".join((start if i % 2 == 0 else other) * a for i, a in enumerate(_check_digits(digits)))


def _peel(a: int, b: int, c: int, d: int) -> list[int]:
    # (a b; c d) = M(x1)...M(xk); strip digits from the right.
    out: list[int] = []
    while b >= 2:
        k, r = divmod(a, b)
        if r == 0:
            raise DecodeError("quotient step hit an exact multiple before the last digit")
        out.append(k)
        a, b, c, d = b, r, d, c - k * d
        if c < 0 or d < 0:
            raise DecodeError("negative entry while decoding")
    if b != 1:
        raise DecodeError("top-right entry reached 0")
    # Remaining factor is M(a) (d=0) or M(1) M(a-1) (d=1).
    if d == 0 and c == 1 and a >= 1:
        out.append(a)
    elif d == 1 and c == a - 1 and a >= 2:
        out.extend((a - 1, 1))
    else:
        raise DecodeError("terminal state is not a single M(a) or M(1) M(a)")
    out.reverse()
    return out


def matrix_to_word(m: Mat2) -> tuple[int, ...]:
    """Inverse of :func:`word_to_matrix` (B-leading) and of :func:`m_product`.

    Determinant +1 with ``a > b`` is an even word, determinant +1 with
    ``a <= b`` an odd word, determinant -1 an odd-length ``M`` product.
    """
    det = m.det
    if det == 1 and m.a > m.b:
        digits, want_odd = _peel(m.a, m.b, m.c, m.d), False
    elif det == 1:
        digits, want_odd = _peel(m.b, m.a, m.d, m.c), True
    elif det == -1:
        digits, want_odd = _peel(m.a, m.b, m.c, m.d), True
    else:
        raise DecodeError(f"determinant {det} is not +-1")
    if (len(digits) % 2 == 1) != want_odd:
        raise DecodeError(f"column order of {m!r} disagrees with decoded parity")
    rebuilt = m_product(digits) if det == -1 else word_to_matrix(digits)
    if rebuilt != m:
        raise DecodeError(f"{m!r} is not a product of M(a) factors")
    return tuple(digits)


def cf_value(digits: Iterable[int]) -> Fraction:
    """Exact ``[a1, ..., ak]`` evaluated from the tail."""
    x = Fraction(0)
    for a in reversed(list(digits)):
        x = 1 / (a + x)
    return x
