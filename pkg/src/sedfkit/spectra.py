"""Character-theoretic spectrum of an SEDF.

For a nontrivial family with m >= 3, every nonprincipal character chi with
chi(D) != 0 forces sqrt(1 + 4*lambda/|chi(D)|^2) to be a rational b/a in
lowest terms, and (a, b) must survive a system of divisibility conditions.
This module enumerates those admissible pairs, evaluates the associated norm
values, and classifies the characters of concrete families against them.
All rationals are exact `fractions.Fraction` values; no verdict path touches
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import (
    CycInt,
    add,
    as_rational_integer,
    conjugate,
    integer,
    is_zero,
    mul,
    norm_squared,
    sub,
)
from .groups import Character, GroupSpec, char_exponent, char_order, char_sum, characters
from .sedf import SetFamily


class NonRationalRadical(ArithmeticError):
    """The discriminant 1 + 4*lambda/|chi(D)|^2 is not a rational square."""


class InconsistentSpectrum(RuntimeError):
    """A verified SEDF produced a character matching no spectrum class;
    this contradicts the classification and indicates an engine bug."""


@dataclass(frozen=True, order=True)
class AdmissiblePair:
    """Coprime (a, b) with b > a > 0 surviving the divisibility system."""

    a: int
    b: int

    def __post_init__(self):
        if not (self.b > self.a > 0):
            raise ValueError(f"need b > a > 0, got {(self.a, self.b)}")
        if math.gcd(self.a, self.b) != 1:
            raise ValueError(f"need gcd(a, b) = 1, got {(self.a, self.b)}")


def _pair_conditions(a: int, b: int, m: int, lam: int) -> bool:
    if (b * m - a * (m - 2)) % (2 * b) != 0:
        return False
    if (m - 2) % b != 0:
        return False
    if ((b + a) * lam) % (b - a) != 0:
        return False
    if ((b - a) * lam) % (b + a) != 0:
        return False
    if (4 * lam) % (b * b - a * a) != 0:
        return False
    if (b + a) % 2 == 1 and lam % (b * b - a * a) != 0:
        return False
    return True


def admissible_pairs(m: int, lam: int) -> list[AdmissiblePair]:
    """All (a, b) compatible with a nontrivial family on (m, lambda), m >= 3.

    The divisibility b | (m-2) bounds the enumeration at b <= m-2.
    """
    if m < 3:
        raise ValueError(f"admissible pairs need m >= 3, got m = {m}")
    if lam < 1:
        raise ValueError(f"lambda must be positive, got {lam}")
    from .numtheory import divisors

    out = []
    for b in divisors(m - 2):
        if b < 2:
            continue
        for a in range(1, b):
            if math.gcd(a, b) == 1 and _pair_conditions(a, b, m, lam):
                out.append(AdmissiblePair(a, b))
    return sorted(out)


@dataclass(frozen=True)
class Table1Norms:
    """The three norm values attached to a pair: |chi(D_1)|^2 on the plus and
    minus branches, and |chi(D)|^2 itself."""

    nplus: Fraction
    nminus: Fraction
    d_norm: Fraction


def table1_norms(pair: AdmissiblePair, lam: int) -> Table1Norms:
    a, b = pair.a, pair.b
    return Table1Norms(
        nplus=Fraction((b + a) * lam, b - a),
        nminus=Fraction((b - a) * lam, b + a),
        d_norm=Fraction(4 * a * a * lam, b * b - a * a),
    )


def _fraction_sqrt(q: Fraction):
    if q < 0:
        return None
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def alpha_beta_xy(m: int, lam: int, abs_d2) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Exact (alpha, beta, x, y) for a character with |chi(D)|^2 = abs_d2 > 0.

    alpha, beta are the two roots of t^2 - t - lambda/abs_d2, and x of the m
    set indices take alpha with y = m - x.  Raises NonRationalRadical when the
    discriminant is not a rational square (possible only for m = 2).
    """
    if m < 3:
        raise ValueError(f"need m >= 3, got m = {m}")
    abs_d2 = Fraction(abs_d2)
    if abs_d2 <= 0:
        raise ValueError("abs_d2 must be positive")
    radicand = 1 + Fraction(4 * lam) / abs_d2
    r = _fraction_sqrt(radicand)
    if r is None:
        raise NonRationalRadical(f"1 + 4*lambda/|chi(D)|^2 = {radicand} is not a rational square")
    alpha = (1 + r) / 2
    beta = (1 - r) / 2
    x = Fraction(m, 2) - Fraction(m - 2, 2) / r
    y = m - x
    return alpha, beta, x, y


@dataclass(frozen=True)
class SpectrumClass:
    """Spectrum membership of one character.

    kind is one of "principal", "zero", "plus", "minus" (m >= 3), or
    "nonzero" for the m = 2 case where no plus/minus split exists.
    """

    kind: str
    pair: AdmissiblePair | None = None


def _family_lambda(F: SetFamily) -> int:
    v = F.group.order
    if v < 2:
        raise ValueError("family group must have order >= 2")
    num = (F.m - 1) * F.k**2
    if num % (v - 1) != 0:
        raise ValueError("family violates the counting identity")
    return num // (v - 1)


def _norm_int(x: CycInt) -> int:
    n = as_rational_integer(norm_squared(x))
    if n is None:
        raise InconsistentSpectrum("a character norm failed rational-integer reduction")
    return n


def classify_characters(F: SetFamily) -> dict[Character, SpectrumClass]:
    """Assign every character its spectrum class, verifying the norm table.

    Requires the family to be an SEDF (precondition, not rechecked here).
    For m = 2 only the principal/zero/nonzero split is meaningful.
    """
    G = F.group
    m = F.m
    k = F.k
    lam = _family_lambda(F)
    union = sorted(F.union())
    set_lists = [sorted(s) for s in F.sets]
    pairs = admissible_pairs(m, lam) if m >= 3 else []
    norms = {p: table1_norms(p, lam) for p in pairs}

    out: dict[Character, SpectrumClass] = {}
    for chi in characters(G):
        xd = char_sum(G, chi, union)
        xjs = [char_sum(G, chi, s) for s in set_lists]
        if chi.is_principal():
            nd = _norm_int(xd)
            njs = [_norm_int(xj) for xj in xjs]
            if nd != k * k * m * m or any(nj != k * k for nj in njs):
                raise InconsistentSpectrum("principal character norms do not match")
            out[chi] = SpectrumClass("principal")
            continue
        if is_zero(xd):
            # chi(D) = 0 forces |chi(D_j)|^2 = lambda for any m >= 2.
            if any(as_rational_integer(norm_squared(xj)) != lam for xj in xjs):
                raise InconsistentSpectrum(
                    f"zero-class character has |chi(D_j)|^2 != lambda = {lam}"
                )
            out[chi] = SpectrumClass("zero")
            continue
        if m == 2:
            # The set norms need not be rational at m = 2 (no integrality
            # lemma); only the defining identity can be checked.
            lam_elt = integer(G.exponent, lam)
            for xj in xjs:
                lhs = add(mul(xj, conjugate(sub(xd, xj))), lam_elt)
                if not is_zero(lhs):
                    raise InconsistentSpectrum("m = 2 character fails the defining identity")
            out[chi] = SpectrumClass("nonzero")
            continue
        nd = _norm_int(xd)
        njs = [_norm_int(xj) for xj in xjs]
        matched = None
        for p in pairs:
            a, b = p.a, p.b
            if nd * (b * b - a * a) == 4 * a * a * lam:
                matched = p
                break
        if matched is None:
            raise InconsistentSpectrum(
                f"no admissible pair matches |chi(D)|^2 = {nd} for (m, lambda) = {(m, lam)}"
            )
        npl, nmi = norms[matched].nplus, norms[matched].nminus
        for j, nj in enumerate(njs):
            if nj != npl and nj != nmi:
                raise InconsistentSpectrum(
                    f"|chi(D_{j})|^2 = {nj} matches neither branch of pair {matched}"
                )
        out[chi] = SpectrumClass("plus" if njs[0] == npl else "minus", matched)
    return out


def char_grading(G: GroupSpec, chi: Character, S) -> list[int]:
    """Counts a_j = #{ g in S : chi(g) = zeta_p^j } for a character of prime
    order p.  The grading satisfies sum a_j = |S| and chi(S) = sum a_j zeta_p^j."""
    from .numtheory import is_prime

    p = char_order(G, chi)
    if not is_prime(p):
        raise ValueError(f"character order {p} is not prime")
    e = G.exponent
    step = e // p
    out = [0] * p
    for g in S:
        j = char_exponent(G, chi, g)
        if j % step != 0:
            raise RuntimeError("character value outside its cyclic image; engine bug")
        out[j // step] += 1
    return out


def verify_character_identity(F: SetFamily) -> bool:
    """Check chi(D_j) * conj(chi(D) - chi(D_j)) + lambda = 0 exactly for every
    nonprincipal character and every set index."""
    G = F.group
    lam = _family_lambda(F)
    union = sorted(F.union())
    lam_elt = integer(G.exponent, lam)
    for chi in characters(G):
        if chi.is_principal():
            continue
        xd = char_sum(G, chi, union)
        for s in F.sets:
            xj = char_sum(G, chi, sorted(s))
            lhs = add(mul(xj, conjugate(sub(xd, xj))), lam_elt)
            if not is_zero(lhs):
                return False
    return True
