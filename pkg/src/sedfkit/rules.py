"""The nonexistence battery.

Each rule maps a parameter quadruple (and, where relevant, a group) to a
verdict carrying a machine-checkable witness: every RuledOut records the
exact divisor interval, prime, bound, or failed branch list from which the
contradiction can be re-derived with integer arithmetic alone.

Rule identifiers are stable: basic, literature_lambda, admissible_pairs,
exponent_ideal, primitive_root, field_descent, prime_spectrum, schmidt.
The first three plus field_descent and prime_spectrum depend only on the
parameters; the rest read exp(G) or a Sylow exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .groups import GroupSpec, enumerate_abelian_groups, sylow_exponent
from .numtheory import (
    ceil_sqrt,
    compute_F,
    divisors,
    euler_phi,
    factorize,
    is_perfect_square,
    is_prime,
    is_primitive_root,
    is_self_conjugate,
    is_square_free,
    mult_ord,
    solve_diagonal_form,
    valuation,
)
from .sedf import Params
from .spectra import admissible_pairs, table1_norms


class Outcome(Enum):
    RULED_OUT = "RuledOut"
    INCONCLUSIVE = "Inconclusive"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class Verdict:
    rule_id: str
    outcome: Outcome
    witness: dict

    def to_dict(self) -> dict:
        return {"rule": self.rule_id, "outcome": self.outcome.value, "witness": self.witness}


@dataclass(frozen=True)
class RuleCaps:
    """Enumeration guards.  Exceeding a cap downgrades the affected rule to
    Inconclusive (noted in the witness), never to RuledOut."""

    max_exp_divisors: int = 4096
    max_lambda_divisors: int = 4096
    max_pair_candidates: int = 200_000


GROUP_FREE_RULES = ("basic", "literature_lambda", "admissible_pairs", "field_descent", "prime_spectrum")
GROUP_RULES = ("exponent_ideal", "primitive_root", "schmidt")
ALL_RULES = (
    "basic",
    "literature_lambda",
    "admissible_pairs",
    "exponent_ideal",
    "primitive_root",
    "field_descent",
    "prime_spectrum",
    "schmidt",
)


def rule_basic(params: Params) -> Verdict:
    """Counting identity, size bound, and the cited elementary filters."""
    v, m, k, lam = params.v, params.m, params.k, params.lam
    failures = []

    if not params.counting_identity_holds():
        failures.append(
            {
                "check": "counting_identity",
                "lhs": (m - 1) * k * k,
                "rhs": lam * (v - 1),
            }
        )
    if m * k > v:
        failures.append({"check": "size", "mk": m * k, "v": v})
    if m < 2:
        failures.append({"check": "m_at_least_two", "m": m})
    if k > 1 and m in (3, 4):
        failures.append({"check": "m_three_four", "m": m})
    if k > 1 and lam == 1 and not (m == 2 and v == k * k + 1):
        failures.append({"check": "lambda_one", "m": m, "v": v, "k": k})
    if k > 1 and m > 2 and is_prime(v):
        failures.append({"check": "prime_order", "v": v})
    if m >= 3 and k > lam >= 2:
        lhs = lam * (k - 1) * (m - 2)
        rhs = (lam - 1) * k * (m - 1)
        if lhs > rhs:
            failures.append({"check": "ratio_bound", "lhs": lhs, "rhs": rhs})
    if k > 1 and v >= 2 and is_square_free(v - 1):
        failures.append({"check": "v_minus_one_square_free", "v_minus_one": v - 1})
    if k > 1 and m > 4 and v % k == 0:
        failures.append({"check": "k_divides_v", "v": v, "k": k})
    if k > 1 and m > 4:
        # Nonexistence when every prime p | v coprime to mk has m != 2 mod p.
        mk = m * k
        hit = None
        for p in factorize(v).primes:
            if math.gcd(mk, p) == 1 and m % p == 2 % p:
                hit = p
                break
        if hit is None:
            failures.append({"check": "residue_m_mod_p", "primes": list(factorize(v).primes)})

    if failures:
        return Verdict("basic", Outcome.RULED_OUT, {"failed": failures})
    return Verdict("basic", Outcome.INCONCLUSIVE, {"failed": []})


def rule_literature_lambda(params: Params) -> Verdict:
    """Cited lambda-shape exclusions for m > 2 (external results, flagged)."""
    m, lam = params.m, params.lam
    if m <= 2:
        return Verdict("literature_lambda", Outcome.NOT_APPLICABLE, {"reason": "m <= 2"})
    fact = factorize(lam)
    shape = None
    if len(fact) == 1 and fact.pairs[0][1] == 2:
        shape = {"form": "p^2", "p": fact.pairs[0][0]}
    elif lam % 2 == 0 and lam > 2 and is_prime(lam // 2):
        shape = {"form": "2p", "p": lam // 2}
    elif len(fact) == 2 and all(e == 1 for _, e in fact):
        q, p = fact.primes
        if (q < 200 and 2 * p < q**3) or q in (3, 5, 7, 13, 19, 31):
            shape = {"form": "pq", "p": p, "q": q}
    witness = {"lambda": lam, "externally_sourced": True}
    if shape is not None:
        witness["shape"] = shape
        return Verdict("literature_lambda", Outcome.RULED_OUT, witness)
    return Verdict("literature_lambda", Outcome.INCONCLUSIVE, witness)


def rule_admissible_pairs(params: Params) -> Verdict:
    """Some character is nonzero on D, and every such character induces an
    admissible pair; an empty pair set is a contradiction."""
    m, lam, k = params.m, params.lam, params.k
    if m < 3 or k <= 1:
        return Verdict("admissible_pairs", Outcome.NOT_APPLICABLE, {"reason": "m < 3 or k = 1"})
    pairs = admissible_pairs(m, lam)
    witness = {"m": m, "lambda": lam, "pairs": [[p.a, p.b] for p in pairs]}
    if not pairs:
        return Verdict("admissible_pairs", Outcome.RULED_OUT, witness)
    return Verdict("admissible_pairs", Outcome.INCONCLUSIVE, witness)


def rule_exponent_ideal(params: Params, G: GroupSpec, caps: RuleCaps = RuleCaps()) -> Verdict:
    """Self-conjugacy exponent bound: for d | exp(G), d > 2, and lambda' | lambda
    self-conjugate mod d with gcd(lambda', d) = 1, some divisor c of lambda'
    must satisfy sqrt(lambda') <= c <= 2^{t-1} v/d."""
    v, m, lam = params.v, params.m, params.lam
    if m < 3:
        return Verdict("exponent_ideal", Outcome.NOT_APPLICABLE, {"reason": "m < 3"})
    exp_divs = [d for d in divisors(G.exponent) if d > 2]
    lam_divs = sorted(divisors(lam), reverse=True)
    if len(exp_divs) > caps.max_exp_divisors or len(lam_divs) > caps.max_lambda_divisors:
        return Verdict(
            "exponent_ideal",
            Outcome.INCONCLUSIVE,
            {"cap_exceeded": True, "exp_divisors": len(exp_divs), "lambda_divisors": len(lam_divs)},
        )
    for d in exp_divs:
        t = len(factorize(d))
        for lam_p in lam_divs:
            if math.gcd(lam_p, d) != 1:
                continue
            if not is_self_conjugate(lam_p, d):
                continue
            lower = ceil_sqrt(lam_p)
            # c <= 2^{t-1} v / d, compared exactly as c*d <= 2^{t-1} v
            cap = 2 ** (t - 1) * v
            cs = divisors(lam_p)
            if not any(lower <= c and c * d <= cap for c in cs):
                return Verdict(
                    "exponent_ideal",
                    Outcome.RULED_OUT,
                    {
                        "d": d,
                        "t": t,
                        "lambda_prime": lam_p,
                        "lower": lower,
                        "upper_floor": cap // d,
                        "divisors": cs,
                    },
                )
    return Verdict("exponent_ideal", Outcome.INCONCLUSIVE, {"exponent": G.exponent})


def rule_primitive_root(params: Params, G: GroupSpec) -> Verdict:
    """Sylow exponent bound when some prime q | lambda is a primitive root
    modulo p^e || v:  exp(G_p) <= v / q^{ceil(f/2)} with q^f || lambda."""
    v, m, lam = params.v, params.m, params.lam
    if m < 3:
        return Verdict("primitive_root", Outcome.NOT_APPLICABLE, {"reason": "m < 3"})
    checked = []
    for p, e in factorize(v):
        pe = p**e
        for q, f in factorize(lam):
            if math.gcd(q, pe) != 1:
                continue
            if not is_primitive_root(q, pe):
                continue
            sylow = sylow_exponent(G, p)
            qc = q ** ((f + 1) // 2)
            checked.append({"p": p, "e": e, "q": q, "f": f, "sylow_exponent": sylow})
            if sylow * qc > v:
                return Verdict(
                    "primitive_root",
                    Outcome.RULED_OUT,
                    {
                        "p": p,
                        "e": e,
                        "q": q,
                        "f": f,
                        "sylow_exponent": sylow,
                        "bound_floor": v // qc,
                    },
                )
    if not checked:
        return Verdict("primitive_root", Outcome.NOT_APPLICABLE, {"reason": "no primitive-root pair"})
    return Verdict("primitive_root", Outcome.INCONCLUSIVE, {"checked": checked})


def rule_field_descent(params: Params, G: GroupSpec | None = None) -> Verdict:
    """For every odd prime p with p^a || v: either p | k(m-2), or p^a | mk
    with even valuation of lambda at every prime self-conjugate mod p.

    Group-independent: only p^a || v enters.  The argument G is accepted for
    signature uniformity and ignored.
    """
    v, m, k, lam = params.v, params.m, params.k, params.lam
    if m < 3:
        return Verdict("field_descent", Outcome.NOT_APPLICABLE, {"reason": "m < 3"})
    km2 = k * (m - 2)
    mk = m * k
    checked = []
    for p, a in factorize(v):
        if p == 2:
            continue
        entry = {"p": p, "a": a, "km2": km2, "mk": mk}
        if km2 % p == 0:
            entry["p_divides_km2"] = True
            checked.append(entry)
            continue
        entry["p_divides_km2"] = False
        pa = p**a
        entry["pa_divides_mk"] = mk % pa == 0
        parity = []
        for q, u in factorize(lam):
            if u % 2 == 1 and is_self_conjugate(q, p):
                parity.append({"q": q, "valuation": u})
        entry["odd_self_conjugate"] = parity
        checked.append(entry)
        if not entry["pa_divides_mk"] or parity:
            return Verdict("field_descent", Outcome.RULED_OUT, entry)
    return Verdict("field_descent", Outcome.INCONCLUSIVE, {"checked": checked})


def _gcd_of_orders(n: int, p: int) -> int:
    """gcd of ord_p(q) over the primes q | n; 0 when n = 1 (empty gcd)."""
    f = 0
    for q, _ in factorize(n):
        f = math.gcd(f, mult_ord(q, p))
    return f


def gauss_sum_realizable(N: int, p: int, k: int) -> dict:
    """Decide whether a nonnegative grading of size k on a cyclic group of odd
    prime order p can have character norm N, via the Gauss-sum constraints.

    The constraints only bite when gcd(N, p) = 1 and (p-1)/2 divides
    f = gcd of ord_p over N's prime divisors; otherwise the check is vacuous
    and the witness reports `applicable: False` with `realizable: True`.
    The theorem is a disjunction, so the value is realizable when ANY branch
    admits a solution; all branches must fail to eliminate it.
    """
    out: dict = {"n": N, "p": p, "k": k}
    if math.gcd(N, p) != 1:
        out["applicable"] = False
        out["realizable"] = True
        return out
    f = _gcd_of_orders(N, p)
    out["f"] = f
    half = (p - 1) // 2
    # N = 1 has no prime divisors; the empty gcd is 0, divisible by half.
    if f % half != 0:
        out["applicable"] = False
        out["realizable"] = True
        return out
    out["applicable"] = True

    # Branch 1: N = t^2 with k = t (mod p) and k >= t(1-p).
    branch1: dict = {"square": is_perfect_square(N)}
    sat1 = False
    if branch1["square"]:
        t0 = math.isqrt(N)
        tried = []
        for t in sorted({t0, -t0}, reverse=True):
            entry = {"t": t, "congruent": (k - t) % p == 0, "k_floor": t * (1 - p)}
            entry["satisfied"] = entry["congruent"] and k >= entry["k_floor"]
            tried.append(entry)
            sat1 = sat1 or entry["satisfied"]
        branch1["candidates"] = tried
    branch1["satisfied"] = sat1
    out["branch_square"] = branch1

    # Branch 2: the quadratic-field split on p mod 4.
    branch2: dict = {"p_mod_4": p % 4}
    sat2 = False
    if p % 4 == 3:
        sols = solve_diagonal_form(p, N)
        entries = []
        for a, b in sols:
            entry = {
                "a": a,
                "b": b,
                "congruent": (k - a) % p == 0,
                "k_floor": max(a + p * b, a - p * b, a * (1 - p)),
            }
            entry["satisfied"] = entry["congruent"] and k >= entry["k_floor"]
            entries.append(entry)
            sat2 = sat2 or entry["satisfied"]
        branch2["solutions"] = [[a, b] for a, b in sols]
        branch2["candidates"] = entries
    else:
        # p = 1 (mod 4): N = a^2 with k = a (mod p), or N = a^2 p with p | k.
        entries = []
        if is_perfect_square(N):
            a0 = math.isqrt(N)
            for a in sorted({a0, -a0}, reverse=True):
                entry = {
                    "form": "a^2",
                    "a": a,
                    "congruent": (k - a) % p == 0,
                    "k_floor": max(a, a * (1 - p)),
                }
                entry["satisfied"] = entry["congruent"] and k >= entry["k_floor"]
                entries.append(entry)
                sat2 = sat2 or entry["satisfied"]
        if N % p == 0 and is_perfect_square(N // p):
            a0 = math.isqrt(N // p)
            for a in sorted({a0, -a0}, reverse=True):
                entry = {
                    "form": "a^2 p",
                    "a": a,
                    "congruent": k % p == 0,
                    "k_floor": abs(a) * p,
                }
                entry["satisfied"] = entry["congruent"] and k >= entry["k_floor"]
                entries.append(entry)
                sat2 = sat2 or entry["satisfied"]
        branch2["candidates"] = entries
    branch2["satisfied"] = sat2
    out["branch_quadratic"] = branch2

    out["realizable"] = sat1 or sat2
    return out


def rule_prime_spectrum(params: Params, caps: RuleCaps = RuleCaps()) -> Verdict:
    """Two-scenario analysis over characters of odd prime order p | v, p not
    dividing lambda.

    Scenario Z (some order-p character annihilates D): each |chi(D_i)|^2 = lam;
    eliminated by the self-conjugacy prime bound p <= N0^2 + N0 + 1 with
    N0 = lam / q^{2 floor((b+1)/2)}, or by unsatisfiability of every Gauss-sum
    branch for norm lam at size k.

    Scenario N (every order-p character is nonzero on D): requires
    p | (m-2)k, and each admissible pair must have BOTH Table-I norms
    Gauss-sum-realizable at size k (both occur since x, y >= 1); eliminated
    when the divisibility fails or no pair survives.

    Ruled out when both scenarios are eliminated.  Group-independent: order-p
    characters exist in every abelian group of order divisible by p.
    """
    v, m, k, lam = params.v, params.m, params.k, params.lam
    if m < 3 or k <= 1:
        return Verdict("prime_spectrum", Outcome.NOT_APPLICABLE, {"reason": "m < 3 or k = 1"})
    pairs = admissible_pairs(m, lam)
    lam_fact = factorize(lam)
    lam_square = is_perfect_square(lam)
    checked = []
    for p, _a in factorize(v):
        if p == 2 or lam % p == 0:
            continue
        checked.append(p)

        # --- scenario Z ---
        z_witness: dict = {"lambda": lam, "lambda_nonsquare": not lam_square}
        z_elim = False
        bound_hits = []
        if not lam_square:
            for q, b in lam_fact:
                if b % 2 != 0:
                    continue  # the bound needs the exact even power q^b | lam
                if not is_self_conjugate(q, p):
                    continue
                reduced = lam // q**b
                bound = reduced * reduced + reduced + 1
                hit = {"q": q, "valuation": b, "reduced_norm": reduced, "bound": bound}
                hit["exceeds"] = p > bound
                bound_hits.append(hit)
                if hit["exceeds"]:
                    z_elim = True
        z_witness["self_conjugate_bounds"] = bound_hits
        gs_lambda = gauss_sum_realizable(lam, p, k)
        z_witness["gauss_sum"] = gs_lambda
        if gs_lambda["applicable"] and not gs_lambda["realizable"]:
            z_elim = True
        z_witness["eliminated"] = z_elim

        # --- scenario N ---
        m2k = (m - 2) * k
        n_witness: dict = {"m2k": m2k, "divides": m2k % p == 0}
        pair_entries = []
        survivor = False
        for pr in pairs:
            norms = table1_norms(pr, lam)
            entry: dict = {"a": pr.a, "b": pr.b}
            ok = True
            for name, val in (("nplus", norms.nplus), ("nminus", norms.nminus)):
                entry[name] = [val.numerator, val.denominator]
                if val.denominator != 1:
                    ok = False
                    entry[name + "_check"] = {"integer": False, "realizable": False}
                    continue
                check = gauss_sum_realizable(val.numerator, p, k)
                entry[name + "_check"] = check
                if check["applicable"] and not check["realizable"]:
                    ok = False
            entry["survives"] = ok
            survivor = survivor or ok
            pair_entries.append(entry)
        n_witness["pairs"] = pair_entries
        n_elim = (not n_witness["divides"]) or (not survivor)
        n_witness["eliminated"] = n_elim

        if z_elim and n_elim:
            return Verdict(
                "prime_spectrum",
                Outcome.RULED_OUT,
                {"p": p, "scenario_zero": z_witness, "scenario_nonzero": n_witness},
            )
    if not checked:
        return Verdict(
            "prime_spectrum", Outcome.NOT_APPLICABLE, {"reason": "no odd prime p | v with p coprime to lambda"}
        )
    return Verdict("prime_spectrum", Outcome.INCONCLUSIVE, {"primes_checked": checked})


def rule_schmidt(params: Params, G: GroupSpec, caps: RuleCaps = RuleCaps()) -> Verdict:
    """Schmidt exponent bound: for every divisor d > 2 of exp(G),
    lambda <= (2^{t-1} v)^2 F(d, lambda)^2 / (4 d^2 phi(F(d, lambda)))."""
    v, m, lam = params.v, params.m, params.lam
    if m < 3:
        return Verdict("schmidt", Outcome.NOT_APPLICABLE, {"reason": "m < 3"})
    exp_divs = [d for d in divisors(G.exponent) if d > 2]
    if len(exp_divs) > caps.max_exp_divisors:
        return Verdict("schmidt", Outcome.INCONCLUSIVE, {"cap_exceeded": True})
    for d in exp_divs:
        t = len(factorize(d))
        F = compute_F(d, lam)
        phi_F = euler_phi(F)
        num = (2 ** (t - 1) * v) ** 2 * F * F
        den = 4 * d * d * phi_F
        if lam * den > num:
            witness = {
                "d": d,
                "t": t,
                "f_value": F,
                "phi_f": phi_F,
                "lambda": lam,
                "bound_num": num,
                "bound_den": den,
            }
            if lam == 1:
                witness["n_equals_one_convention"] = True
            return Verdict("schmidt", Outcome.RULED_OUT, witness)
    return Verdict("schmidt", Outcome.INCONCLUSIVE, {"exponent": G.exponent})


def _run_group_free(rule_id: str, params: Params, caps: RuleCaps) -> Verdict:
    if rule_id == "basic":
        return rule_basic(params)
    if rule_id == "literature_lambda":
        return rule_literature_lambda(params)
    if rule_id == "admissible_pairs":
        return rule_admissible_pairs(params)
    if rule_id == "field_descent":
        return rule_field_descent(params)
    if rule_id == "prime_spectrum":
        return rule_prime_spectrum(params, caps)
    raise ValueError(f"unknown group-free rule {rule_id!r}")


def _run_group_rule(rule_id: str, params: Params, G: GroupSpec, caps: RuleCaps) -> Verdict:
    if rule_id == "exponent_ideal":
        return rule_exponent_ideal(params, G, caps)
    if rule_id == "primitive_root":
        return rule_primitive_root(params, G)
    if rule_id == "schmidt":
        return rule_schmidt(params, G, caps)
    raise ValueError(f"unknown group rule {rule_id!r}")


@dataclass(frozen=True)
class AllAbelianOfOrder:
    """Scope marker: every isomorphism class of abelian groups of this order."""

    order: int


@dataclass
class ClassReport:
    group: GroupSpec
    verdicts: list[Verdict]
    overall: Outcome

    def to_dict(self) -> dict:
        return {
            "group": list(self.group.invariant_factors),
            "verdicts": [v.to_dict() for v in self.verdicts],
            "overall": self.overall.value,
        }


@dataclass
class RuleReport:
    params: Params
    scope: GroupSpec | AllAbelianOfOrder
    verdicts: list[Verdict]
    classes: list[ClassReport] = field(default_factory=list)
    overall: Outcome = Outcome.INCONCLUSIVE

    def firing_rules(self) -> list[str]:
        out = [v.rule_id for v in self.verdicts if v.outcome is Outcome.RULED_OUT]
        seen = set(out)
        for cls in self.classes:
            for v in cls.verdicts:
                if v.outcome is Outcome.RULED_OUT and v.rule_id not in seen:
                    seen.add(v.rule_id)
                    out.append(v.rule_id)
        return out

    def verdict_for(self, rule_id: str) -> Verdict | None:
        for v in self.verdicts:
            if v.rule_id == rule_id:
                return v
        for cls in self.classes:
            for v in cls.verdicts:
                if v.rule_id == rule_id:
                    return v
        return None

    def to_dict(self) -> dict:
        if isinstance(self.scope, AllAbelianOfOrder):
            scope: dict = {"type": "all_abelian", "order": self.scope.order}
        else:
            scope = {"type": "group", "group": list(self.scope.invariant_factors)}
        out = {
            "params": {"v": self.params.v, "m": self.params.m, "k": self.params.k, "lambda": self.params.lam},
            "scope": scope,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "overall": self.overall.value,
        }
        if isinstance(self.scope, AllAbelianOfOrder):
            out["classes"] = [c.to_dict() for c in self.classes]
        return out


def run_battery(
    params: Params,
    scope: GroupSpec | AllAbelianOfOrder,
    rules: tuple[str, ...] = ALL_RULES,
    caps: RuleCaps = RuleCaps(),
) -> RuleReport:
    """Evaluate the enabled rules against one group or all abelian groups.

    In all-abelian scope the parameter set is RuledOut overall iff every
    isomorphism class receives at least one RuledOut verdict; group-free
    rules count for every class.
    """
    for r in rules:
        if r not in ALL_RULES:
            raise ValueError(f"unknown rule {r!r}")
    free = [r for r in ALL_RULES if r in rules and r in GROUP_FREE_RULES]
    bound = [r for r in ALL_RULES if r in rules and r in GROUP_RULES]

    common = [_run_group_free(r, params, caps) for r in free]
    common_fired = any(v.outcome is Outcome.RULED_OUT for v in common)

    if isinstance(scope, GroupSpec):
        if scope.order != params.v:
            raise ValueError(f"group order {scope.order} does not match v = {params.v}")
        verdicts = list(common) + [_run_group_rule(r, params, scope, caps) for r in bound]
        overall = (
            Outcome.RULED_OUT
            if any(v.outcome is Outcome.RULED_OUT for v in verdicts)
            else Outcome.INCONCLUSIVE
        )
        return RuleReport(params, scope, verdicts, [], overall)

    if scope.order != params.v:
        raise ValueError(f"scope order {scope.order} does not match v = {params.v}")
    classes = []
    all_ruled_out = True
    for G in enumerate_abelian_groups(scope.order):
        cls_verdicts = [_run_group_rule(r, params, G, caps) for r in bound]
        fired = common_fired or any(v.outcome is Outcome.RULED_OUT for v in cls_verdicts)
        classes.append(
            ClassReport(G, cls_verdicts, Outcome.RULED_OUT if fired else Outcome.INCONCLUSIVE)
        )
        all_ruled_out = all_ruled_out and fired
    overall = Outcome.RULED_OUT if (classes and all_ruled_out) else Outcome.INCONCLUSIVE
    return RuleReport(params, scope, list(common), classes, overall)
