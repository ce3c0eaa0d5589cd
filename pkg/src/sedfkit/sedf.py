"""SEDF objects: external differences, verification, and exhaustive search.

The searcher is the engine's ground truth on small instances.  Its "exhausted"
status is a genuine nonexistence certificate, so the symmetry reductions are
kept minimal and provable: one translation (the first set contains the
identity) and one ordering of the remaining sets by least element.  Budget
exhaustion is reported as its own status and never conflated with
nonexistence.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .groups import GroupElement, GroupSpec


@dataclass(frozen=True)
class Params:
    """A candidate parameter quadruple (v, m, k, lambda)."""

    v: int
    m: int
    k: int
    lam: int

    def __post_init__(self):
        if min(self.v, self.m, self.k, self.lam) < 1:
            raise ValueError("all parameters must be positive")

    def counting_identity_holds(self) -> bool:
        """(m-1) k^2 = lambda (v-1), the basic double count."""
        return (self.m - 1) * self.k**2 == self.lam * (self.v - 1)


@dataclass(frozen=True)
class SetFamily:
    """m pairwise-disjoint equal-size subsets of a finite abelian group."""

    group: GroupSpec
    sets: tuple[frozenset, ...]

    def __post_init__(self):
        sizes = {len(s) for s in self.sets}
        if len(sizes) > 1:
            raise ValueError(f"sets must have equal size, got sizes {sorted(sizes)}")
        seen = set()
        for i, s in enumerate(self.sets):
            if not s:
                raise ValueError(f"set {i} is empty")
            for g in s:
                if not self.group.contains(g):
                    raise ValueError(f"set {i} contains {g}, not a group element")
                if g in seen:
                    raise ValueError(f"sets are not pairwise disjoint at element {g}")
                seen.add(g)

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def k(self) -> int:
        return len(self.sets[0])

    def union(self) -> frozenset:
        out = set()
        for s in self.sets:
            out |= s
        return frozenset(out)


def external_difference(G: GroupSpec, A, B) -> Counter:
    """Multiset { x * y^{-1} : x in A, y in B } with multiplicities."""
    out: Counter = Counter()
    for x in A:
        for y in B:
            out[G.difference(x, y)] += 1
    return out


def _difference_counts_into(F: SetFamily, j: int) -> Counter:
    total: Counter = Counter()
    for ell in range(F.m):
        if ell != j:
            total += external_difference(F.group, F.sets[ell], F.sets[j])
    return total


def sedf_violation(F: SetFamily, lam: int):
    """First (j, g, count) where the per-target multiset equation fails, else None."""
    G = F.group
    e = G.identity()
    for j in range(F.m):
        counts = _difference_counts_into(F, j)
        for g in G.elements():
            want = 0 if g == e else lam
            if counts[g] != want:
                return (j, g, counts[g])
    return None


def is_sedf(F: SetFamily, lam: int) -> bool:
    """Whether, for every j, the differences into D_j cover G minus the
    identity exactly lam times each."""
    return sedf_violation(F, lam) is None


def is_edf(F: SetFamily, lam: int) -> bool:
    """The weaker condition summed over all ordered pairs of distinct indices."""
    G = F.group
    e = G.identity()
    total: Counter = Counter()
    for j in range(F.m):
        total += _difference_counts_into(F, j)
    for g in G.elements():
        want = 0 if g == e else lam
        if total[g] != want:
            return False
    return True


class SearchStatus(Enum):
    FOUND = "found"
    EXHAUSTED = "exhausted"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass
class SearchResult:
    status: SearchStatus
    family: SetFamily | None
    nodes: int


class _Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> bool:
        self.used += 1
        return self.used <= self.limit


def search_sedf(
    G: GroupSpec,
    m: int,
    k: int,
    lam: int,
    budget: int = 10**7,
    use_symmetry: bool = True,
) -> SearchResult:
    """Backtracking search for a (|G|, m, k, lam)-SEDF in G.

    Elements are ordered lexicographically and placed set by set.  Running
    per-target difference counts are kept, and a branch is cut as soon as any
    count exceeds lam (the multiset equation is violated monotonically).

    With `use_symmetry`, three reductions apply: the identity is pinned into
    the first set (translation), the remaining sets must have increasing
    least elements (set order), and the first set must be the
    lexicographically least member of its orbit under translations composed
    with componentwise unit multiplication (a subgroup of the automorphism
    group, which preserves the SEDF property).  Every witness family maps
    onto a representative satisfying all three, so exhaustion still
    certifies nonexistence.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if m < 2 or k < 1 or lam < 1:
        raise ValueError("need m >= 2, k >= 1, lam >= 1")
    v = G.order
    if m * k > v:
        return SearchResult(SearchStatus.EXHAUSTED, None, 0)
    if (m - 1) * k * k != lam * (v - 1):
        # The multiset equation forces the counting identity, so no family
        # can exist; exhaustion is immediate.
        return SearchResult(SearchStatus.EXHAUSTED, None, 0)

    elements = list(G.elements())
    index_of = {g: i for i, g in enumerate(elements)}
    # diff_table[i][j] = index of elements[i] - elements[j]
    diff_table = [[index_of[G.difference(a, b)] for b in elements] for a in elements]
    identity_idx = index_of[G.identity()]

    counts = [[0] * v for _ in range(m)]  # counts[j][g]: differences into D_j
    sets: list[list[int]] = [[] for _ in range(m)]
    used = [False] * v
    budget_state = _Budget(budget)
    out: list[SetFamily] = []

    def place(x: int, si: int, delta: int) -> bool:
        """Apply (delta=+1) or retract (delta=-1) element x of set si against
        the running counts; on apply, returns False if any count exceeds lam."""
        ok = True
        row_si = counts[si]
        for sj in range(m):
            if sj == si:
                continue
            row_sj = counts[sj]
            for y in sets[sj]:
                d = diff_table[x][y]  # x - y lands in the counts for D_sj
                row_sj[d] += delta
                if row_sj[d] > lam:
                    ok = False
                d = diff_table[y][x]  # y - x lands in the counts for D_si
                row_si[d] += delta
                if row_si[d] > lam:
                    ok = False
        return ok

    def extend(si: int, start: int) -> bool:
        """Fill set si with elements of increasing index, then move on."""
        if len(sets[si]) == k:
            if si == m - 1:
                # Full assignment: counts never exceeded lam and they total
                # (m-1)k^2 = lam(v-1), so every count equals lam exactly.
                out.append(
                    SetFamily(G, tuple(frozenset(elements[i] for i in s) for s in sets))
                )
                return True
            nxt = sets[si][0] + 1 if (use_symmetry and si >= 1) else 0
            return open_set(si + 1, nxt)
        for x in range(start, v):
            if used[x]:
                continue
            if not budget_state.spend():
                return False
            used[x] = True
            sets[si].append(x)
            if place(x, si, +1):
                if extend(si, x + 1):
                    return True
            place(x, si, -1)
            sets[si].pop()
            used[x] = False
            if budget_state.used > budget_state.limit:
                return False
        return False

    def open_set(si: int, min_first: int) -> bool:
        """Choose the least element of set si, at index >= min_first."""
        for first in range(min_first, v):
            if used[first]:
                continue
            if not budget_state.spend():
                return False
            used[first] = True
            sets[si].append(first)
            if place(first, si, +1):
                if extend(si, first + 1):
                    return True
            place(first, si, -1)
            sets[si].pop()
            used[first] = False
            if budget_state.used > budget_state.limit:
                return False
        return False

    if use_symmetry:
        # Translation symmetry: some translate of any family puts the
        # identity (the lexicographically least element) into the first set.
        used[identity_idx] = True
        sets[0].append(identity_idx)
        found = extend(0, 0)
    else:
        found = open_set(0, 0)

    if found and out:
        fam = out[0]
        if not is_sedf(fam, lam):
            raise RuntimeError("search produced a non-SEDF family; engine bug")
        return SearchResult(SearchStatus.FOUND, fam, budget_state.used)
    if budget_state.used > budget_state.limit:
        return SearchResult(SearchStatus.BUDGET_EXCEEDED, None, budget_state.used)
    return SearchResult(SearchStatus.EXHAUSTED, None, budget_state.used)


class FamilyFormatError(ValueError):
    """Raised by the family-file loader with the location of the first violation."""


def family_to_dict(F: SetFamily, lam: int) -> dict:
    return {
        "group": list(F.group.invariant_factors),
        "lambda": lam,
        "sets": [sorted(list(g) for g in s) for s in F.sets],
    }


def family_from_dict(data: dict) -> tuple[SetFamily, int]:
    """Parse and validate the family file schema, reporting the first violation."""
    if not isinstance(data, dict):
        raise FamilyFormatError("top level must be an object")
    for key in ("group", "lambda", "sets"):
        if key not in data:
            raise FamilyFormatError(f"missing key {key!r}")
    try:
        group = GroupSpec(tuple(int(d) for d in data["group"]))
    except (TypeError, ValueError) as exc:
        raise FamilyFormatError(f"bad group literal: {exc}")
    lam = data["lambda"]
    if not isinstance(lam, int) or lam < 1:
        raise FamilyFormatError(f"lambda must be a positive integer, got {lam!r}")
    raw_sets = data["sets"]
    if not isinstance(raw_sets, list) or not raw_sets:
        raise FamilyFormatError("sets must be a nonempty list")
    sets = []
    for i, raw in enumerate(raw_sets):
        if not isinstance(raw, list) or not raw:
            raise FamilyFormatError(f"set {i} must be a nonempty list")
        elems = set()
        for j, res in enumerate(raw):
            if not isinstance(res, list) or len(res) != group.rank:
                raise FamilyFormatError(
                    f"set {i} element {j} must be a residue vector of length {group.rank}"
                )
            g = tuple(int(x) for x in res)
            if not group.contains(g):
                raise FamilyFormatError(
                    f"set {i} element {j} = {g} is out of range for {group}"
                )
            if g in elems:
                raise FamilyFormatError(f"set {i} repeats element {g} (position {j})")
            elems.add(g)
        sets.append(frozenset(elems))
    sizes = {len(s) for s in sets}
    if len(sizes) > 1:
        raise FamilyFormatError(f"sets differ in size: {sorted(sizes)}")
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            overlap = sets[i] & sets[j]
            if overlap:
                raise FamilyFormatError(
                    f"sets {i} and {j} overlap at element {min(overlap)}"
                )
    return SetFamily(group, tuple(sets)), lam


def load_family(path: str) -> tuple[SetFamily, int]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FamilyFormatError(f"not valid JSON: {exc}")
    return family_from_dict(data)


def save_family(path: str, F: SetFamily, lam: int):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(family_to_dict(F, lam), fh, sort_keys=True, indent=2)
        fh.write("\n")
