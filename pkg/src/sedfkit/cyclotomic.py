"""Exact arithmetic in Z[zeta_n].

An element is a redundant integer vector of length n representing
sum_{i<n} c_i * zeta_n^i.  The representation is non-canonical on purpose:
character sums land in it directly.  Canonicalization (reduction modulo the
n-th cyclotomic polynomial) happens only inside `is_zero` and
`as_rational_integer`.  Coefficients are ordinary Python integers, so there is
no overflow to guard against.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .numtheory import factorize, is_prime


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Quotient and remainder of integer polynomials; den must be monic."""
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(num)
    dd = len(den) - 1
    quo = [0] * max(len(rem) - dd, 0)
    for i in range(len(rem) - dd - 1, -1, -1):
        c = rem[i + dd]
        if c:
            quo[i] = c
            for j, d in enumerate(den):
                rem[i + j] -= c * d
    while rem and rem[-1] == 0:
        rem.pop()
    return quo, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, ascending degree, computed by dividing x^n - 1
    by the Phi_d of the proper divisors d of n."""
    if n < 1:
        raise ValueError("cyclotomic polynomial index must be >= 1")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(poly)


def _convolve_nonneg(a: list[int], b: list[int]) -> list[int]:
    # Kronecker substitution: pack into one big integer per operand, multiply,
    # unpack.  Exact for nonnegative coefficients when the base exceeds every
    # convolution coefficient.
    if not a or not b:
        return []
    bound = min(len(a), len(b)) * max(a) * max(b) + 1
    bits = max(bound.bit_length(), 1)
    mask = (1 << bits) - 1
    xa = 0
    for c in reversed(a):
        xa = (xa << bits) | c
    xb = 0
    for c in reversed(b):
        xb = (xb << bits) | c
    prod = xa * xb
    out = []
    for _ in range(len(a) + len(b) - 1):
        out.append(prod & mask)
        prod >>= bits
    return out


def _convolve(a: tuple[int, ...], b: tuple[int, ...]) -> list[int]:
    """Exact integer convolution, splitting signs around the nonneg kernel."""
    ap = [c if c > 0 else 0 for c in a]
    an = [-c if c < 0 else 0 for c in a]
    bp = [c if c > 0 else 0 for c in b]
    bn = [-c if c < 0 else 0 for c in b]
    size = len(a) + len(b) - 1
    out = [0] * size
    for xs, ys, sign in ((ap, bp, 1), (an, bn, 1), (ap, bn, -1), (an, bp, -1)):
        if any(xs) and any(ys):
            for i, c in enumerate(_convolve_nonneg(xs, ys)):
                out[i] += sign * c
    return out


@dataclass(frozen=True)
class CycInt:
    """An element of Z[zeta_n] as the coefficient vector of length n."""

    order: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if len(self.coeffs) != self.order:
            raise ValueError(
                f"coefficient vector has length {len(self.coeffs)}, expected {self.order}"
            )

    # Semantic equality: the difference must vanish in Z[zeta_n].  This is
    # incompatible with hashing by coefficients.
    __hash__ = None  # type: ignore[assignment]

    def __eq__(self, other):
        if not isinstance(other, CycInt):
            return NotImplemented
        if self.order != other.order:
            return False
        return is_zero(sub(self, other))

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __neg__(self):
        return negate(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.order, tuple(c * other for c in self.coeffs))
        return mul(self, other)

    __rmul__ = __mul__


def zero(n: int) -> CycInt:
    return CycInt(n, (0,) * n)


def integer(n: int, c: int) -> CycInt:
    """The rational integer c viewed in Z[zeta_n]."""
    return CycInt(n, (c,) + (0,) * (n - 1))


def one(n: int) -> CycInt:
    return integer(n, 1)


def root(n: int, k: int = 1) -> CycInt:
    """zeta_n^k."""
    coeffs = [0] * n
    coeffs[k % n] = 1
    return CycInt(n, tuple(coeffs))


def _check_orders(x: CycInt, y: CycInt):
    if x.order != y.order:
        raise ValueError(f"order mismatch: {x.order} != {y.order}")


def add(x: CycInt, y: CycInt) -> CycInt:
    _check_orders(x, y)
    return CycInt(x.order, tuple(a + b for a, b in zip(x.coeffs, y.coeffs)))


def sub(x: CycInt, y: CycInt) -> CycInt:
    _check_orders(x, y)
    return CycInt(x.order, tuple(a - b for a, b in zip(x.coeffs, y.coeffs)))


def negate(x: CycInt) -> CycInt:
    return CycInt(x.order, tuple(-a for a in x.coeffs))


def mul(x: CycInt, y: CycInt) -> CycInt:
    """Cyclic convolution of the coefficient vectors (indices mod n)."""
    _check_orders(x, y)
    n = x.order
    raw = _convolve(x.coeffs, y.coeffs)
    out = [0] * n
    for i, c in enumerate(raw):
        out[i % n] += c
    return CycInt(n, tuple(out))


def conjugate(x: CycInt) -> CycInt:
    """Complex conjugation: the coefficient at i moves to -i mod n."""
    n = x.order
    out = [0] * n
    for i, c in enumerate(x.coeffs):
        out[-i % n] += c
    return CycInt(n, tuple(out))


def norm_squared(x: CycInt) -> CycInt:
    """x * conj(x), a self-conjugate element."""
    return mul(x, conjugate(x))


def is_zero(x: CycInt) -> bool:
    """True iff x represents 0 in Z[zeta_n].

    For prime-power order p^b this is the coefficient-class criterion
    (c_i = c_j whenever i = j mod p^{b-1}); otherwise the coefficient
    polynomial is reduced modulo Phi_n and the remainder tested.
    """
    if all(c == 0 for c in x.coeffs):
        return True
    n = x.order
    if n == 1:
        return x.coeffs[0] == 0
    fact = factorize(n)
    if len(fact) == 1:
        (p, b), = fact
        block = p ** (b - 1)
        for r in range(block):
            first = x.coeffs[r]
            if any(x.coeffs[i] != first for i in range(r + block, n, block)):
                return False
        return True
    _, rem = _poly_divmod(list(x.coeffs), list(cyclotomic_polynomial(n)))
    return not rem


def as_rational_integer(x: CycInt):
    """Some(c) iff x equals the rational integer c; None otherwise."""
    if x.order == 1:
        return x.coeffs[0]
    _, rem = _poly_divmod(list(x.coeffs), list(cyclotomic_polynomial(x.order)))
    if not rem:
        return 0
    if len(rem) == 1:
        return rem[0]
    return None


def quadratic_gauss_sum(p: int) -> CycInt:
    """sum_{i=1}^{p-1} legendre(i, p) * zeta_p^i for an odd prime p."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} must be an odd prime")
    coeffs = [0] * p
    for i in range(1, p):
        coeffs[i] = 1 if pow(i, (p - 1) // 2, p) == 1 else -1
    return CycInt(p, tuple(coeffs))
