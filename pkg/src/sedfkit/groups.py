"""Finite abelian groups in invariant-factor form, with exact characters.

A group is the chain Z_{d1} x ... x Z_{dr} with d1 | d2 | ... | dr; elements
are residue tuples.  Characters are labelled by group elements through the
self-duality of finite abelian groups, and evaluate to exact roots of unity
in Z[zeta_e] where e = exp(G).  Nothing here is approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from .cyclotomic import CycInt, add as cyc_add, root, zero
from .numtheory import factorize, valuation

GroupElement = tuple[int, ...]


@dataclass(frozen=True)
class GroupSpec:
    """Invariant factors d1 | d2 | ... | dr; the empty tuple is the trivial group."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        ds = self.invariant_factors
        for d in ds:
            if d < 2:
                raise ValueError(f"invariant factor {d} must be >= 2")
        for a, b in zip(ds, ds[1:]):
            if b % a != 0:
                raise ValueError(
                    f"invariant factors must form a divisibility chain, {a} does not divide {b}"
                )

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def identity(self) -> GroupElement:
        return (0,) * self.rank

    def elements(self):
        """All elements in lexicographic order."""
        return product(*(range(d) for d in self.invariant_factors))

    def contains(self, g: GroupElement) -> bool:
        return len(g) == self.rank and all(
            0 <= x < d for x, d in zip(g, self.invariant_factors)
        )

    def op(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return tuple((x + y) % d for x, y, d in zip(g, h, self.invariant_factors))

    def inverse(self, g: GroupElement) -> GroupElement:
        return tuple((-x) % d for x, d in zip(g, self.invariant_factors))

    def difference(self, g: GroupElement, h: GroupElement) -> GroupElement:
        """g * h^{-1} in additive notation: componentwise g - h."""
        return tuple((x - y) % d for x, y, d in zip(g, h, self.invariant_factors))

    def element_order(self, g: GroupElement) -> int:
        out = 1
        for x, d in zip(g, self.invariant_factors):
            out = math.lcm(out, d // math.gcd(x, d))
        return out

    def __str__(self):
        if not self.invariant_factors:
            return "1"
        return " x ".join(f"Z{d}" for d in self.invariant_factors)


def parse_group_literal(text: str) -> GroupSpec:
    """Parse a comma-separated invariant-factor literal such as "2,4,8"."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError(f"empty group literal {text!r}")
    try:
        factors = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"group literal {text!r} must be comma-separated integers")
    return GroupSpec(factors)


def _partitions(n: int):
    """Integer partitions of n as non-increasing tuples."""
    if n == 0:
        yield ()
        return

    def rec(remaining, largest):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    yield from rec(n, n)


def enumerate_abelian_groups(v: int) -> list[GroupSpec]:
    """One GroupSpec per isomorphism class of abelian groups of order v.

    Built from partitions of each prime's exponent; the per-prime cyclic
    factors are aligned largest-first and multiplied together, which yields
    the invariant-factor chain directly.
    """
    if v < 1:
        raise ValueError(f"order must be >= 1, got {v}")
    per_prime = []
    for p, e in factorize(v):
        per_prime.append([(p, part) for part in _partitions(e)])
    out = []
    for combo in product(*per_prime):
        depth = max((len(part) for _, part in combo), default=0)
        factors = []
        for i in range(depth):
            d = 1
            for p, part in combo:
                if i < len(part):
                    d *= p ** part[i]
            factors.append(d)
        out.append(GroupSpec(tuple(reversed(factors))))
    return sorted(out, key=lambda g: g.invariant_factors)


@dataclass(frozen=True)
class Character:
    """The character labelled by h under the isomorphism G^ = G:
    chi_h(g) = zeta_e^{sum_i (e/d_i) h_i g_i} with e = exp(G)."""

    label: GroupElement

    def is_principal(self) -> bool:
        return all(x == 0 for x in self.label)


def characters(G: GroupSpec):
    """All |G| characters, labels in lexicographic order."""
    return (Character(h) for h in G.elements())


def char_exponent(G: GroupSpec, chi: Character, g: GroupElement) -> int:
    """The exponent j with chi(g) = zeta_e^j, reduced mod e = exp(G)."""
    e = G.exponent
    total = 0
    for h_i, g_i, d_i in zip(chi.label, g, G.invariant_factors):
        total += (e // d_i) * h_i * g_i
    return total % e


def char_value(G: GroupSpec, chi: Character, g: GroupElement) -> CycInt:
    """chi(g) as an exact root of unity of order exp(G)."""
    if len(g) != G.rank or len(chi.label) != G.rank:
        raise ValueError("element or character does not belong to this group")
    return root(G.exponent, char_exponent(G, chi, g))


def char_sum(G: GroupSpec, chi: Character, S) -> CycInt:
    """chi extended to the group ring: sum of chi over a multiset of elements."""
    e = G.exponent
    coeffs = [0] * e
    for g in S:
        coeffs[char_exponent(G, chi, g)] += 1
    return CycInt(e, tuple(coeffs))


def char_order(G: GroupSpec, chi: Character) -> int:
    """Order of chi_h in the character group, which is the order of h."""
    return G.element_order(chi.label)


def characters_of_order(G: GroupSpec, d: int) -> list[Character]:
    """All characters of exactly order d; rejects d not dividing exp(G)."""
    if d < 1 or G.exponent % d != 0:
        raise ValueError(f"{d} does not divide exp(G) = {G.exponent}")
    return [chi for chi in characters(G) if char_order(G, chi) == d]


def sylow_exponent(G: GroupSpec, p: int) -> int:
    """Exponent of the Sylow p-subgroup: p^max over the p-valuations of the d_i."""
    best = 0
    for d in G.invariant_factors:
        best = max(best, valuation(d, p))
    return p**best


def fourier_coefficient(G: GroupSpec, S, g: GroupElement) -> CycInt:
    """(1/|G|) sum_chi chi(S g^{-1}) before dividing: the inversion numerator.

    The caller divides by |G|; the sum itself is returned exactly so tests can
    assert it equals |G| times the multiplicity of g in S.
    """
    total = zero(G.exponent)
    shifted = [G.difference(s, g) for s in S]
    for chi in characters(G):
        total = cyc_add(total, char_sum(G, chi, shifted))
    return total
