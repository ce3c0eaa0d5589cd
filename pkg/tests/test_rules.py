"""Rule battery tests.

Each rule is exercised on the worked examples it encodes, and every RuledOut
witness is replayed: the contradiction is re-derived from the raw parameters
with independent arithmetic before the verdict is trusted.
"""

import math
import random

import pytest

from sedfkit.groups import GroupSpec
from sedfkit.numtheory import (
    ceil_sqrt,
    divisors,
    euler_phi,
    factorize,
    is_self_conjugate,
    valuation,
)
from sedfkit.rules import (
    ALL_RULES,
    AllAbelianOfOrder,
    Outcome,
    RuleCaps,
    gauss_sum_realizable,
    rule_admissible_pairs,
    rule_basic,
    rule_exponent_ideal,
    rule_field_descent,
    rule_literature_lambda,
    rule_prime_spectrum,
    rule_primitive_root,
    rule_schmidt,
    run_battery,
)
from sedfkit.sedf import Params

PAPER_TABLE = (
    (1540, 77, 18, 16),
    (1701, 35, 30, 18),
    (2376, 11, 190, 152),
    (2500, 35, 42, 24),
    (2784, 116, 22, 20),
    (3381, 23, 130, 110),
    (4564, 163, 26, 24),
    (4625, 37, 68, 36),
    (5888, 92, 58, 52),
    (6400, 80, 54, 36),
    (6976, 218, 30, 28),
    (8625, 23, 140, 50),
    (8625, 23, 280, 200),
    (8960, 7, 1054, 744),
    (9801, 101, 70, 50),
)


class TestRuleBasic:
    def test_counting_identity_failure(self):
        v = rule_basic(Params(7, 3, 2, 2))
        assert v.outcome is Outcome.RULED_OUT
        assert any(f["check"] == "counting_identity" for f in v.witness["failed"])

    def test_known_family_inconclusive(self):
        assert rule_basic(Params(17, 2, 4, 1)).outcome is Outcome.INCONCLUSIVE

    def test_square_free_filter(self):
        v = rule_basic(Params(31, 5, 2, 1))
        assert v.outcome is Outcome.RULED_OUT
        assert any(f["check"] == "v_minus_one_square_free" for f in v.witness["failed"])

    def test_trivial_family_passes(self):
        for n in (2, 9, 30, 49):
            assert rule_basic(Params(n, n, 1, 1)).outcome is Outcome.INCONCLUSIVE

    def test_size_bound(self):
        v = rule_basic(Params(5, 3, 2, 2))
        assert any(f["check"] == "size" for f in v.witness["failed"])

    def test_lambda_one_characterization(self):
        assert rule_basic(Params(10, 2, 3, 1)).outcome is Outcome.INCONCLUSIVE
        v = rule_basic(Params(13, 2, 2, 1))  # v != k^2 + 1 but identity holds? no
        assert v.outcome is Outcome.RULED_OUT


class TestRuleLiteratureLambda:
    def test_prime_square(self):
        v = rule_literature_lambda(Params(50, 5, 14, 49))
        assert v.outcome is Outcome.RULED_OUT
        assert v.witness["shape"]["form"] == "p^2"
        assert v.witness["externally_sourced"] is True

    def test_twice_prime(self):
        v = rule_literature_lambda(Params(50, 5, 14, 6))
        assert v.outcome is Outcome.RULED_OUT
        assert v.witness["shape"]["form"] == "2p"

    def test_36_not_matched(self):
        assert rule_literature_lambda(Params(50, 5, 14, 36)).outcome is Outcome.INCONCLUSIVE

    def test_pq_shapes(self):
        # q = 3 < p: always excluded
        v = rule_literature_lambda(Params(10, 5, 2, 3 * 211))
        assert v.outcome is Outcome.RULED_OUT
        # q = 11 < p < 11^3/2
        v = rule_literature_lambda(Params(10, 5, 2, 11 * 239))
        assert v.outcome is Outcome.RULED_OUT
        # q = 11, p too large, q not in the special list
        v = rule_literature_lambda(Params(10, 5, 2, 11 * 673))
        assert v.outcome is Outcome.INCONCLUSIVE

    def test_m2_not_applicable(self):
        assert rule_literature_lambda(Params(5, 2, 2, 4)).outcome is Outcome.NOT_APPLICABLE


class TestRuleAdmissiblePairs:
    def test_lambda_one_m5(self):
        v = rule_admissible_pairs(Params(100, 5, 3, 1))
        assert v.outcome is Outcome.RULED_OUT
        assert v.witness["pairs"] == []

    def test_pairs_exist(self):
        v = rule_admissible_pairs(Params(1540, 77, 18, 16))
        assert v.outcome is Outcome.INCONCLUSIVE
        assert v.witness["pairs"] == [[1, 3], [3, 5]]

    def test_m2_not_applicable(self):
        assert rule_admissible_pairs(Params(5, 2, 2, 1)).outcome is Outcome.NOT_APPLICABLE


class TestRuleExponentIdeal:
    def test_3381_witness(self):
        v = rule_exponent_ideal(Params(3381, 23, 130, 110), GroupSpec((3381,)))
        assert v.outcome is Outcome.RULED_OUT
        w = v.witness
        assert (w["d"], w["lambda_prime"], w["lower"], w["upper_floor"]) == (3381, 5, 3, 4)

    def test_4375_witness(self):
        v = rule_exponent_ideal(Params(4375, 7, 486, 324), GroupSpec((4375,)))
        assert v.outcome is Outcome.RULED_OUT
        w = v.witness
        assert (w["d"], w["lambda_prime"], w["lower"], w["upper_floor"]) == (625, 324, 18, 7)

    def test_lambda_prime_one_never_fires(self):
        for n in (9, 27, 45):
            v = rule_exponent_ideal(Params(n, n, 1, 1), GroupSpec((n,)))
            assert v.outcome is Outcome.INCONCLUSIVE

    def test_interval_emptiness_monotone_in_upper_bound(self):
        # the invariant behind the rule: shrinking the upper bound preserves
        # emptiness of [ceil(sqrt(lam')), U] among divisors of lam'
        rng = random.Random(41)
        for _ in range(300):
            lam_p = rng.randrange(2, 400)
            u = rng.randrange(1, 40)
            u2 = rng.randrange(1, u + 1)
            lower = ceil_sqrt(lam_p)
            empty_u = not any(lower <= c <= u for c in divisors(lam_p))
            empty_u2 = not any(lower <= c <= u2 for c in divisors(lam_p))
            if empty_u:
                assert empty_u2


class TestRulePrimitiveRoot:
    def test_4375_sylow_bound(self):
        v = rule_primitive_root(Params(4375, 7, 486, 324), GroupSpec((4375,)))
        assert v.outcome is Outcome.RULED_OUT
        w = v.witness
        assert (w["p"], w["e"], w["q"], w["f"]) == (5, 4, 3, 4)
        assert w["sylow_exponent"] == 625
        assert w["bound_floor"] == 486

    def test_elementary_sylow_survives(self):
        # same parameters, Sylow-5 exponent 5: bound holds
        G = GroupSpec((5, 5, 5, 35))
        assert G.order == 4375
        v = rule_primitive_root(Params(4375, 7, 486, 324), G)
        assert v.outcome is Outcome.INCONCLUSIVE

    def test_no_primitive_root_pair(self):
        # v = 2^a only, lambda odd prime power with no applicable pair
        v = rule_primitive_root(Params(16, 4, 2, 1), GroupSpec((16,)))
        assert v.outcome is Outcome.NOT_APPLICABLE


class TestRuleFieldDescent:
    def test_2500(self):
        v = rule_field_descent(Params(2500, 35, 42, 24))
        assert v.outcome is Outcome.RULED_OUT
        w = v.witness
        assert (w["p"], w["a"]) == (5, 4)
        assert w["km2"] == 42 * 33 and not w["p_divides_km2"]
        assert w["mk"] == 35 * 42 and not w["pa_divides_mk"]

    def test_6400(self):
        v = rule_field_descent(Params(6400, 80, 54, 36))
        assert v.outcome is Outcome.RULED_OUT
        w = v.witness
        assert (w["p"], w["a"]) == (5, 2)
        assert not w["pa_divides_mk"]

    def test_1701_inconclusive(self):
        v = rule_field_descent(Params(1701, 35, 30, 18))
        assert v.outcome is Outcome.INCONCLUSIVE

    def test_parity_branch(self):
        # 3381: p = 23 divides mk exactly, but q = 5 | 110 is self-conjugate
        # mod 23 with odd valuation
        v = rule_field_descent(Params(3381, 23, 130, 110))
        assert v.outcome is Outcome.RULED_OUT
        w = v.witness
        assert w["p"] == 23 and w["pa_divides_mk"]
        assert {e["q"] for e in w["odd_self_conjugate"]} >= {5}


class TestGaussSumRealizable:
    def test_square_branch(self):
        # N = 16, p = 11, k = 18: t = -4 is congruent but needs k >= 40
        out = gauss_sum_realizable(16, 11, 18)
        assert out["applicable"] and not out["realizable"]
        cand = {c["t"]: c for c in out["branch_square"]["candidates"]}
        assert cand[-4]["congruent"] and cand[-4]["k_floor"] == 40

    def test_unrepresentable(self):
        for n in (152, 76, 19):
            out = gauss_sum_realizable(n, 11, 190)
            assert out["applicable"]
            assert out["branch_quadratic"]["solutions"] == []
            assert not out["realizable"]

    def test_vacuous_when_f_small(self):
        # N = 14 at p = 109: f | 36 < 54, constraint does not apply
        out = gauss_sum_realizable(14, 109, 30)
        assert not out["applicable"] and out["realizable"]

    def test_realizable_square(self):
        out = gauss_sum_realizable(4, 3, 22)  # t = -2 = 1 mod 3, k = 22 = 1 mod 3
        assert out["realizable"]


class TestRulePrimeSpectrum:
    def test_6976(self):
        v = rule_prime_spectrum(Params(6976, 218, 30, 28))
        assert v.outcome is Outcome.RULED_OUT
        w = v.witness
        assert w["p"] == 109
        hit = w["scenario_zero"]["self_conjugate_bounds"][0]
        assert (hit["q"], hit["reduced_norm"], hit["bound"]) == (2, 7, 57)
        assert hit["exceeds"]
        assert not w["scenario_nonzero"]["divides"]

    def test_1540(self):
        v = rule_prime_spectrum(Params(1540, 77, 18, 16))
        assert v.outcome is Outcome.RULED_OUT
        w = v.witness
        assert w["p"] == 11
        cands = w["scenario_zero"]["gauss_sum"]["branch_square"]["candidates"]
        minus4 = [c for c in cands if c["t"] == -4][0]
        assert minus4["congruent"] and minus4["k_floor"] == 40
        pair_minus = {(e["a"], e["b"]): e["nminus"] for e in w["scenario_nonzero"]["pairs"]}
        assert pair_minus == {(1, 3): [8, 1], (3, 5): [4, 1]}
        assert all(not e["survives"] for e in w["scenario_nonzero"]["pairs"])

    def test_1701(self):
        v = rule_prime_spectrum(Params(1701, 35, 30, 18))
        assert v.outcome is Outcome.RULED_OUT
        w = v.witness
        assert w["p"] == 7
        assert w["scenario_zero"]["gauss_sum"]["branch_quadratic"]["solutions"] == []
        assert w["scenario_nonzero"]["m2k"] == 33 * 30
        assert not w["scenario_nonzero"]["divides"]

    def test_2376(self):
        v = rule_prime_spectrum(Params(2376, 11, 190, 152))
        assert v.outcome is Outcome.RULED_OUT
        w = v.witness
        assert w["p"] == 11
        assert w["scenario_zero"]["gauss_sum"]["branch_quadratic"]["solutions"] == []
        by_pair = {(e["a"], e["b"]): e for e in w["scenario_nonzero"]["pairs"]}
        assert by_pair[(1, 3)]["nminus"] == [76, 1]
        assert by_pair[(7, 9)]["nminus"] == [19, 1]
        for e in by_pair.values():
            assert e["nminus_check"]["branch_quadratic"]["solutions"] == []
            assert not e["survives"]

    def test_known_families_survive(self):
        assert rule_prime_spectrum(Params(243, 11, 22, 20)).outcome is Outcome.INCONCLUSIVE


class TestRuleSchmidt:
    def test_2401(self):
        v = rule_schmidt(Params(2401, 9, 180, 108), GroupSpec((2401,)))
        assert v.outcome is Outcome.RULED_OUT
        w = v.witness
        assert (w["d"], w["f_value"]) == (343, 7)
        # bound = 49 * 49 / 24 as an exact ratio
        assert w["bound_num"] * 24 == w["bound_den"] * 49 * 49

    def test_4096(self):
        v = rule_schmidt(Params(4096, 14, 210, 140), GroupSpec((4096,)))
        assert v.outcome is Outcome.RULED_OUT
        w = v.witness
        assert (w["d"], w["f_value"]) == (1024, 16)
        assert w["bound_num"] == 128 * w["bound_den"]

    def test_unreduced_f_inconclusive(self):
        # small d with F(d, lambda) = d gives a weak bound
        v = rule_schmidt(Params(243, 11, 22, 20), GroupSpec((3, 3, 3, 3, 3)))
        assert v.outcome is Outcome.INCONCLUSIVE


class TestBattery:
    def test_paper_table_rules_out_everything(self):
        rules = ("basic", "admissible_pairs", "field_descent", "prime_spectrum")
        for v, m, k, lam in PAPER_TABLE:
            rep = run_battery(Params(v, m, k, lam), AllAbelianOfOrder(v), rules)
            assert rep.overall is Outcome.RULED_OUT, (v, m, k, lam)

    def test_known_families_not_ruled_out(self):
        for k in range(2, 11):
            rep = run_battery(Params(k * k + 1, 2, k, 1), AllAbelianOfOrder(k * k + 1))
            assert rep.overall is Outcome.INCONCLUSIVE
        rep = run_battery(Params(243, 11, 22, 20), AllAbelianOfOrder(243))
        assert rep.overall is Outcome.INCONCLUSIVE
        elementary = [c for c in rep.classes if c.group.invariant_factors == (3,) * 5]
        assert elementary[0].overall is Outcome.INCONCLUSIVE

    def test_trivial_families_not_ruled_out(self):
        for n in range(2, 51):
            rep = run_battery(Params(n, n, 1, 1), AllAbelianOfOrder(n))
            assert rep.overall is Outcome.INCONCLUSIVE, n

    def test_single_group_scope(self):
        rep = run_battery(Params(3381, 23, 130, 110), GroupSpec((3381,)))
        assert rep.overall is Outcome.RULED_OUT
        assert "exponent_ideal" in rep.firing_rules()

    def test_group_order_mismatch_rejected(self):
        with pytest.raises(ValueError):
            run_battery(Params(10, 2, 3, 1), GroupSpec((5,)))

    def test_unknown_rule_rejected(self):
        with pytest.raises(ValueError):
            run_battery(Params(10, 2, 3, 1), AllAbelianOfOrder(10), ("no_such_rule",))

    def test_report_json_shape(self):
        rep = run_battery(Params(2500, 35, 42, 24), AllAbelianOfOrder(2500))
        d = rep.to_dict()
        assert d["scope"] == {"type": "all_abelian", "order": 2500}
        assert d["overall"] == "RuledOut"
        assert {v["rule"] for v in d["verdicts"]} == set(
            r for r in ALL_RULES if r not in ("exponent_ideal", "primitive_root", "schmidt")
        )
        assert all("group" in c for c in d["classes"])


def replay_witness(params: Params, rule_id: str, w: dict, group: GroupSpec | None):
    """Independently re-derive each RuledOut contradiction from raw numbers."""
    v, m, k, lam = params.v, params.m, params.k, params.lam
    if rule_id == "basic":
        for f in w["failed"]:
            if f["check"] == "counting_identity":
                assert (m - 1) * k * k != lam * (v - 1)
            elif f["check"] == "size":
                assert m * k > v
            elif f["check"] == "m_three_four":
                assert k > 1 and m in (3, 4)
            elif f["check"] == "lambda_one":
                assert k > 1 and lam == 1 and not (m == 2 and v == k * k + 1)
            elif f["check"] == "prime_order":
                assert k > 1 and m > 2 and len(factorize(v)) == 1 and factorize(v).pairs[0][1] == 1
            elif f["check"] == "ratio_bound":
                assert lam * (k - 1) * (m - 2) > (lam - 1) * k * (m - 1)
            elif f["check"] == "v_minus_one_square_free":
                assert all(e == 1 for _, e in factorize(v - 1))
            elif f["check"] == "k_divides_v":
                assert m > 4 and v % k == 0
            elif f["check"] == "residue_m_mod_p":
                assert m > 4
                for p in factorize(v).primes:
                    assert math.gcd(m * k, p) > 1 or m % p != 2 % p
        assert w["failed"]
    elif rule_id == "field_descent":
        p = w["p"]
        assert k * (m - 2) % p != 0
        pa = p ** valuation(v, p)
        ok = (m * k) % pa != 0 or any(
            valuation(lam, e["q"]) % 2 == 1 and is_self_conjugate(e["q"], p)
            for e in w["odd_self_conjugate"]
        )
        assert ok
    elif rule_id == "exponent_ideal":
        d, lam_p, t = w["d"], w["lambda_prime"], w["t"]
        assert group is not None and group.exponent % d == 0 and d > 2
        assert lam % lam_p == 0 and math.gcd(lam_p, d) == 1
        assert is_self_conjugate(lam_p, d)
        assert t == len(factorize(d))
        for c in divisors(lam_p):
            assert c * c < lam_p or c * d > 2 ** (t - 1) * v
    elif rule_id == "primitive_root":
        p, q, f = w["p"], w["q"], w["f"]
        from sedfkit.groups import sylow_exponent
        from sedfkit.numtheory import is_primitive_root

        assert valuation(v, p) == w["e"] and valuation(lam, q) == f
        assert is_primitive_root(q, p ** w["e"])
        assert group is not None
        assert sylow_exponent(group, p) * q ** ((f + 1) // 2) > v
    elif rule_id == "prime_spectrum":
        p = w["p"]
        assert v % p == 0 and lam % p != 0 and p % 2 == 1
        z, n = w["scenario_zero"], w["scenario_nonzero"]
        assert z["eliminated"] and n["eliminated"]
        bound_ok = any(h["exceeds"] and p > h["bound"] for h in z["self_conjugate_bounds"])
        gauss_ok = z["gauss_sum"]["applicable"] and not z["gauss_sum"]["realizable"]
        assert bound_ok or gauss_ok
        assert (n["m2k"] % p != 0) or all(not e["survives"] for e in n["pairs"])
    elif rule_id == "schmidt":
        d, F = w["d"], w["f_value"]
        from sedfkit.numtheory import compute_F

        assert group is not None and group.exponent % d == 0 and d > 2
        assert compute_F(d, lam) == F
        t = len(factorize(d))
        assert lam * 4 * d * d * euler_phi(F) > (2 ** (t - 1) * v) ** 2 * F * F
    elif rule_id == "literature_lambda":
        shape = w["shape"]
        if shape["form"] == "p^2":
            assert lam == shape["p"] ** 2
        elif shape["form"] == "2p":
            assert lam == 2 * shape["p"]
        else:
            assert lam == shape["p"] * shape["q"]
    elif rule_id == "admissible_pairs":
        assert w["pairs"] == []
    else:
        raise AssertionError(f"unknown rule {rule_id}")


class TestWitnessReplay:
    def test_paper_table_witnesses_replay(self):
        for v, m, k, lam in PAPER_TABLE:
            params = Params(v, m, k, lam)
            rep = run_battery(params, AllAbelianOfOrder(v))
            assert rep.overall is Outcome.RULED_OUT
            for verdict in rep.verdicts:
                if verdict.outcome is Outcome.RULED_OUT:
                    replay_witness(params, verdict.rule_id, verdict.witness, None)
            for cls in rep.classes:
                for verdict in cls.verdicts:
                    if verdict.outcome is Outcome.RULED_OUT:
                        replay_witness(params, verdict.rule_id, verdict.witness, cls.group)

    def test_group_scope_witnesses_replay(self):
        cases = [
            (Params(3381, 23, 130, 110), GroupSpec((3381,))),
            (Params(4375, 7, 486, 324), GroupSpec((4375,))),
            (Params(2401, 9, 180, 108), GroupSpec((2401,))),
            (Params(4096, 14, 210, 140), GroupSpec((4096,))),
        ]
        for params, G in cases:
            rep = run_battery(params, G)
            assert rep.overall is Outcome.RULED_OUT
            for verdict in rep.verdicts:
                if verdict.outcome is Outcome.RULED_OUT:
                    replay_witness(params, verdict.rule_id, verdict.witness, G)
