"""Exact elementary number theory used throughout the engine.

Everything here is integer-exact: factorization, Euler's phi, multiplicative
orders, self-conjugacy, p-adic valuations, representations by the diagonal
form a^2 + p*b^2, and Schmidt's field-descent modulus F(M, N).  No floating
point appears in any code path that feeds a verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

_TRIAL_DIVISION_LIMIT = 10**6

# Deterministic Miller-Rabin witness set, valid for every n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for the integer sizes this engine handles."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Return a nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs, primes ascending."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        primes = [p for p, _ in self.pairs]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be strictly increasing")
        if any(e < 1 for _, e in self.pairs):
            raise ValueError("exponents must be >= 1")

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    @property
    def n(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def exponent_of(self, p: int) -> int:
        for q, e in self.pairs:
            if q == p:
                return e
        return 0


@lru_cache(maxsize=None)
def factorize(n: int) -> Factorization:
    """Exact prime factorization of n >= 1; factorize(1) is the empty product."""
    if n < 1:
        raise ValueError(f"cannot factor {n}: need n >= 1")
    pairs = []
    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            pairs.append((p, e))
    d = 5
    while d * d <= m and d <= _TRIAL_DIVISION_LIMIT:
        for step in (d, d + 2):
            if m % step == 0:
                e = 0
                while m % step == 0:
                    m //= step
                    e += 1
                pairs.append((step, e))
        d += 6
    # Cofactor beyond the trial-division bound: peel with Pollard rho.
    leftovers: dict[int, int] = {}
    stack = [m] if m > 1 else []
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        if is_prime(c):
            leftovers[c] = leftovers.get(c, 0) + 1
            continue
        d = _pollard_rho(c)
        stack.append(d)
        stack.append(c // d)
    pairs.extend(sorted(leftovers.items()))
    pairs.sort()
    merged: dict[int, int] = {}
    for p, e in pairs:
        merged[p] = merged.get(p, 0) + e
    return Factorization(tuple(sorted(merged.items())))


def euler_phi(n: int) -> int:
    """Euler's totient via the factorization formula."""
    if n < 1:
        raise ValueError(f"euler_phi needs n >= 1, got {n}")
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def radical(n: int) -> int:
    """Product of the distinct primes dividing n (rad(1) = 1)."""
    out = 1
    for p, _ in factorize(n):
        out *= p
    return out


def mult_ord(t: int, s: int) -> int:
    """Least e >= 1 with t^e = 1 (mod s).  Requires gcd(t, s) = 1 and s >= 2.

    Starts from phi(s), a multiple of the order, and descends through its
    prime divisors, so no exponentiation beyond phi(s) is ever performed.
    """
    if s < 2:
        raise ValueError(f"modulus must be >= 2, got {s}")
    if math.gcd(t, s) != 1:
        raise ValueError(f"mult_ord needs gcd(t, s) = 1, got t={t}, s={s}")
    o = euler_phi(s)
    t %= s
    for p, _ in factorize(o):
        while o % p == 0 and pow(t, o // p, s) == 1:
            o //= p
    return o


def valuation(n: int, p: int) -> int:
    """Largest a with p^a | n, for prime p and n >= 1."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError(f"valuation needs n >= 1, got {n}")
    a = 0
    while n % p == 0:
        n //= p
        a += 1
    return a


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    if n < 1:
        raise ValueError(f"divisors needs n >= 1, got {n}")
    out = [1]
    for p, e in factorize(n):
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def is_square_free(n: int) -> bool:
    """True iff no prime square divides n."""
    if n < 1:
        raise ValueError(f"is_square_free needs n >= 1, got {n}")
    return all(e == 1 for _, e in factorize(n))


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def ceil_sqrt(n: int) -> int:
    """Smallest integer c with c^2 >= n (n >= 0)."""
    if n <= 0:
        return 0
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def is_self_conjugate(n: int, w: int) -> bool:
    """Whether n is self-conjugate modulo w.

    Each prime p | n must satisfy p^r = -1 (mod u) for some r >= 0, where u is
    the p-free part of w.  Rather than searching r, we use that -1 lies in the
    cyclic group generated by p mod u iff the order of p is even and
    p^(ord/2) = -1, with u <= 2 trivially true.
    """
    if n < 1 or w < 1:
        raise ValueError("is_self_conjugate needs n, w >= 1")
    for p, _ in factorize(n):
        u = w
        while u % p == 0:
            u //= p
        if u <= 2:
            continue
        o = mult_ord(p, u)
        if o % 2 != 0 or pow(p, o // 2, u) != u - 1:
            return False
    return True


def is_primitive_root(q: int, n: int) -> bool:
    """True iff q generates the full unit group modulo n."""
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    if math.gcd(q, n) != 1:
        raise ValueError(f"is_primitive_root needs gcd(q, n) = 1, got q={q}, n={n}")
    return mult_ord(q, n) == euler_phi(n)


def solve_diagonal_form(p: int, n: int) -> list[tuple[int, int]]:
    """All integer solutions of a^2 + p*b^2 = n with b >= 0.

    Both signs of a are listed when a != 0.  An empty list certifies that n
    has no such representation.  p must be an odd prime.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} must be an odd prime")
    if n < 0:
        raise ValueError(f"target must be >= 0, got {n}")
    out = []
    for b in range(math.isqrt(n // p) + 1):
        rest = n - p * b * b
        a = math.isqrt(rest)
        if a * a == rest:
            if a == 0:
                out.append((0, b))
            else:
                out.append((a, b))
                out.append((-a, b))
    return out


def compute_F(M: int, N: int) -> int:
    """Schmidt's field-descent modulus F(M, N).

    Writing M = prod p_i^{c_i}, F(M, N) = prod p_i^{b_i} where each b_i is the
    least value in [1, c_i] such that for every prime q | N one of the
    following holds:

      1. q = p_i and (p_i, b_i) != (2, 1);
      2. b_i = c_i;
      3. q != p_i and q^{ord_{m_q}(q)} != 1 (mod p_i^{b_i+1}),

    with m_q the product of the p_j != q (times 4 instead of the factor 2 when
    M is even and q odd).  Condition 3 is decided through the p_i-adic
    valuation of q^{ord} - 1 computed at modulus p_i^{c_i+1}; the true power
    q^{ord} is never materialized.

    For N = 1 the empty condition set gives rad(M), following the definition's
    "minimum multiple of prod p_i" clause.
    """
    if M < 2:
        raise ValueError(f"compute_F needs M >= 2, got {M}")
    if N < 1:
        raise ValueError(f"compute_F needs N >= 1, got {N}")
    m_fact = list(factorize(M))
    m_primes = [p for p, _ in m_fact]
    m_odd = M % 2 != 0
    n_primes = factorize(N).primes

    out = 1
    for p, c in m_fact:
        b = 1
        for q in n_primes:
            if q == p:
                need = 2 if p == 2 else 1
            else:
                if m_odd or q == 2:
                    m_q = 1
                    for r in m_primes:
                        if r != q:
                            m_q *= r
                else:
                    m_q = 4
                    for r in m_primes:
                        if r not in (2, q):
                            m_q *= r
                mod = p ** (c + 1)
                res = pow(q, mult_ord(q, m_q), mod) if m_q >= 2 else 1 % mod
                # p_i-adic valuation of q^ord - 1, capped at c+1 by the modulus
                e = 0
                val = (res - 1) % mod
                if val == 0:
                    e = c + 1
                else:
                    while val % p == 0:
                        val //= p
                        e += 1
                need = max(1, e)
            b = max(b, min(need, c))
        out *= p**b
    return out
