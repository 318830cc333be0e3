# Compiled inner loops.  All arithmetic is int64; callers keep N below 2**20
# so every product x*y and every histogram count stays far from overflow.
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def inverse_mod(r, q):
    """Inverse of r modulo q in [0, q), or -1 when gcd(r, q) > 1.  q=1 gives 0."""
    if q == 1:
        return 0
    a, b = r % q, q
    x0, x1 = 1, 0
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
    if a != 1:
        return -1
    return x0 % q


@njit(cache=True, nogil=True)
def fill_inverses(q, out):
    """out[r] = inverse of r mod q for r < q, -1 for non-units.  O(q) batch inversion."""
    if q == 1:
        out[0] = 0
        return
    out[0] = -1
    for r in range(1, q):
        out[r] = 0
    m = q
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            for r in range(p, q, p):
                out[r] = -1
        p += 1
    if m > 1:
        for r in range(m, q, m):
            out[r] = -1
    # out[r] <- product of the units below r; then peel one inverse backwards
    prod = 1
    for r in range(1, q):
        if out[r] == 0:
            out[r] = prod
            prod = prod * r % q
    inv = inverse_mod(prod, q)
    for r in range(q - 1, 0, -1):
        if out[r] != -1:
            before = out[r]
            out[r] = inv * before % q
            inv = inv * r % q


@njit(cache=True, nogil=True)
def count_rows(q, x_lo, cap, s, y_lo, y_hi, inv):
    """#{(x, y): y_lo < y <= y_hi, x_lo < x <= min(cap, s - y), x*y = 1 mod q}.

    ``inv`` must hold the inverse table of q (see :func:`fill_inverses`).
    """
    total = 0
    r = (y_lo + 1) % q
    for y in range(y_lo + 1, y_hi + 1):
        hi = cap
        if s - y < hi:
            hi = s - y
        x0 = inv[r]
        r += 1
        if r == q:
            r = 0
        if hi <= x_lo or x0 < 0:
            continue
        total += (hi - x0) // q - (x_lo - x0) // q
    return total


@njit(cache=True, nogil=True)
def psi_ev_formula(n):
    """Sum over q < n of the inverse-pair count on the trapezoid (2q <= n) or triangle."""
    inv = np.empty(n + 1, np.int64)
    total = 0
    for q in range(1, n - 1):
        fill_inverses(q, inv)
        if 2 * q <= n:
            total += count_rows(q, 0, q, n, q, n - 1, inv)
        else:
            total += count_rows(q, 0, n - q - 1, n, q, n - 1, inv)
    return total


@njit(cache=True, nogil=True)
def psi_odd_formula(n):
    """Sum over a < n/2 of the inverse-pair count on the translated triangle."""
    inv = np.empty(n + 1, np.int64)
    total = 0
    a = 1
    while 2 * a < n:
        side = n - 2 * a
        fill_inverses(a, inv)
        total += count_rows(a, 0, side, side, 0, side - 1, inv)
        a += 1
    return total


@njit(cache=True, nogil=True)
def psi_odd_floorsum(n):
    """Sum of floor((n - y - x)/a) over a < n/2, a < y <= n - a, x = 1/y mod a in [1, a]."""
    total = 0
    a = 1
    while 2 * a < n:
        for y in range(a + 1, n - a + 1):
            x = inverse_mod(y, a)
            if x < 0:
                continue
            if x == 0:
                x = a
            total += (n - y - x) // a
        a += 1
    return total


# Batched forms: one inverse table per modulus serves every N up to n_max.

@njit(cache=True, nogil=True)
def psi_ev_formula_upto(n_max):
    out = np.zeros(n_max + 1, np.int64)
    inv = np.empty(n_max + 1, np.int64)
    for q in range(1, n_max - 1):
        fill_inverses(q, inv)
        for n in range(q + 2, n_max + 1):
            if 2 * q <= n:
                out[n] += count_rows(q, 0, q, n, q, n - 1, inv)
            else:
                out[n] += count_rows(q, 0, n - q - 1, n, q, n - 1, inv)
    return out


@njit(cache=True, nogil=True)
def psi_odd_formula_upto(n_max):
    out = np.zeros(n_max + 1, np.int64)
    inv = np.empty(n_max + 1, np.int64)
    a = 1
    while 2 * a < n_max:
        fill_inverses(a, inv)
        for n in range(2 * a + 1, n_max + 1):
            side = n - 2 * a
            out[n] += count_rows(a, 0, side, side, 0, side - 1, inv)
        a += 1
    return out


@njit(cache=True, nogil=True)
def psi_odd_floorsum_upto(n_max):
    out = np.zeros(n_max + 1, np.int64)
    inv = np.empty(n_max + 1, np.int64)
    s = np.empty(n_max + 1, np.int64)
    a = 1
    while 2 * a < n_max:
        fill_inverses(a, inv)
        for y in range(a + 1, n_max - a + 1):
            x = inv[y % a]
            if x == 0:
                x = a
            s[y] = y + x if x > 0 else -1
        for n in range(2 * a + 1, n_max + 1):
            acc = 0
            for y in range(a + 1, n - a + 1):
                if s[y] > 0:
                    acc += (n - s[y]) // a
            out[n] += acc
        a += 1
    return out


@njit(cache=True, nogil=True)
def ev_trace_chunk(n, c, n_chunks, out):
    """Add to out[t] the number of even-class matrices of trace t <= n, moduli q = c+1 (mod n_chunks)."""
    inv = np.empty(n + 1, np.int64)
    for q in range(1 + c, n - 1, n_chunks):
        fill_inverses(q, inv)
        r = (q + 1) % q
        for y in range(q + 1, n):
            x = inv[r]
            r += 1
            if r == q:
                r = 0
            if x < 0:
                continue
            if x == 0:
                x = q
            t = x + y
            if t <= n:
                out[t] += 1


@njit(cache=True, nogil=True)
def odd_trace_chunk(n, c, n_chunks, out):
    """Odd-class analogue of :func:`ev_trace_chunk`; traces are x + y + a*t, t >= 1."""
    inv = np.empty(n + 1, np.int64)
    start = np.zeros(n + 1, np.int64)
    run = np.zeros(n + 1, np.int64)
    for a in range(1 + c, (n + 1) // 2, n_chunks):
        fill_inverses(a, inv)
        lo = n
        r = (a + 1) % a
        for y in range(a + 1, n - a + 1):
            x = inv[r]
            r += 1
            if r == a:
                r = 0
            if x < 0:
                continue
            if x == 0:
                x = a
            s = x + y
            start[s] += 1
            if s < lo:
                lo = s
        # cumulative sums along stride a
        for t in range(lo, n + 1):
            if t - a >= lo:
                run[t] = start[t - a] + run[t - a]
                out[t] += run[t]
        for t in range(lo, n + 1):
            start[t] = 0
            run[t] = 0


@njit(cache=True, nogil=True)
def brute_histograms(n):
    """Exhaustive depth-first walk over all words in A and B with trace <= n.

    Returns counts[cls, t], cls = 2*(first letter is A) + (first letter == last letter).
    Pure powers (trace 2) only seed the roots; every other word is visited once.
    """
    counts = np.zeros((4, n + 1), np.int64)
    cap = 4 * n + 16
    st = np.empty((cap, 5), np.int64)
    for first in range(2):  # 0: B-leading, 1: A-leading
        for k in range(1, n - 1):
            # root: a pure power followed by one letter of the other kind
            if first == 0:
                st[0, 0], st[0, 1], st[0, 2], st[0, 3] = k + 1, k, 1, 1  # B^k A
            else:
                st[0, 0], st[0, 1], st[0, 2], st[0, 3] = 1, 1, k, k + 1  # A^k B
            st[0, 4] = 1 - first  # last letter, same coding
            sp = 1
            while sp > 0:
                sp -= 1
                a = st[sp, 0]
                b = st[sp, 1]
                c = st[sp, 2]
                d = st[sp, 3]
                last = st[sp, 4]
                counts[2 * first + (1 if last == first else 0), a + d] += 1
                if sp + 2 > cap:
                    raise RuntimeError("brute force stack overflow")
                # M*A = [[a+b, b], [c+d, d]] and M*B = [[a, a+b], [c, c+d]]
                if a + b + d <= n:
                    st[sp, 0] = a + b
                    st[sp, 1] = b
                    st[sp, 2] = c + d
                    st[sp, 3] = d
                    st[sp, 4] = 1
                    sp += 1
                if a + c + d <= n:
                    st[sp, 0] = a
                    st[sp, 1] = a + b
                    st[sp, 2] = c
                    st[sp, 3] = c + d
                    st[sp, 4] = 0
                    sp += 1
    return counts


@njit(cache=True)
def kahan_prefix(values):
    out = np.empty(values.shape[0], np.float64)
    s = 0.0
    comp = 0.0
    for i in range(values.shape[0]):
        y = values[i] - comp
        t = s + y
        comp = (t - s) - y
        s = t
        out[i] = s
    return out


@njit(cache=True, nogil=True)
def _is_primitive(d, n):
    # d[1..n] holds the digits
    for per in range(1, n):
        if n % per:
            continue
        same = True
        for i in range(per + 1, n + 1):
            if d[i] != d[i - per]:
                same = False
                break
        if same:
            return False
    return True


@njit(cache=True, nogil=True)
def reduced_unit_traces(bound):
    """Trace of M~ for every primitive period whose M~ has trace <= bound.

    Depth-first over digit strings; the continuant q_n only grows with the
    string, so a branch dies once q_n > bound.
    """
    out = np.empty(1024, np.int64)
    size = 0
    depth = 64
    d = np.zeros(depth + 2, np.int64)
    # index shift by one: Q[i] = q_{i-1}, P[i] = p_{i-1}
    Q = np.zeros(depth + 2, np.int64)
    P = np.zeros(depth + 2, np.int64)
    Q[0], Q[1] = 0, 1
    P[0], P[1] = 1, 0
    n = 1
    d[1] = 1
    while n > 0:
        q = d[n] * Q[n] + Q[n - 1]
        if q > bound:
            n -= 1
            if n > 0:
                d[n] += 1
            continue
        Q[n + 1] = q
        P[n + 1] = d[n] * P[n] + P[n - 1]
        t = q + P[n]  # q_n + p_{n-1}
        if n % 2:
            t = t * t + 2
        if t <= bound and _is_primitive(d, n):
            if size == out.shape[0]:
                grown = np.empty(2 * size, np.int64)
                grown[:size] = out
                out = grown
            out[size] = t
            size += 1
        if n + 1 > depth:
            raise RuntimeError("digit string deeper than 64")
        n += 1
        d[n] = 1
    return out[:size].copy()
