"""Command-line front end.

Subcommands: `check` one parameter set, `scan` a range, `paper-table` for the
fifteen excluded parameter sets, `verify` a family file, `search` for a family
by exhaustive backtracking.  All JSON output is key-sorted and carries no
timestamps, so identical inputs produce byte-identical bytes.

Exit codes: check returns 0 for Inconclusive, 2 for RuledOut, 1 for input
errors; verify returns 0/2/1 for valid/invalid/bad-file; search returns 0
when a family is found, 2 on exhaustion, 3 on budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields

from .groups import GroupSpec, parse_group_literal
from .rules import (
    ALL_RULES,
    AllAbelianOfOrder,
    Outcome,
    RuleCaps,
    RuleReport,
    run_battery,
)
from .sedf import (
    FamilyFormatError,
    Params,
    SearchStatus,
    family_to_dict,
    is_sedf,
    load_family,
    search_sedf,
    sedf_violation,
)
from .spectra import verify_character_identity

# The fifteen parameter sets excluded in all abelian groups.
PAPER_EXCLUSIONS = (
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

# Group-free rules that suffice for the exclusion table.
PAPER_TABLE_RULES = ("basic", "admissible_pairs", "field_descent", "prime_spectrum")

CSV_HEADER = "v,m,k,lambda,scope,overall,firing_rules,witness_summary"


class InputError(Exception):
    pass


def _parse_rules(text: str | None) -> tuple[str, ...]:
    if text is None:
        return ALL_RULES
    names = tuple(t.strip() for t in text.split(",") if t.strip())
    for n in names:
        if n not in ALL_RULES:
            raise InputError(f"unknown rule {n!r}; known: {', '.join(ALL_RULES)}")
    if not names:
        raise InputError("empty rule list")
    return names


def _parse_caps(text: str | None) -> RuleCaps:
    if text is None:
        return RuleCaps()
    known = {f.name for f in fields(RuleCaps)}
    overrides = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise InputError(f"bad cap {part!r}, expected KEY=VALUE")
        key, val = part.split("=", 1)
        key = key.strip()
        if key not in known:
            raise InputError(f"unknown cap {key!r}; known: {', '.join(sorted(known))}")
        try:
            overrides[key] = int(val)
        except ValueError:
            raise InputError(f"cap {key!r} needs an integer, got {val!r}")
        if overrides[key] < 1:
            raise InputError(f"cap {key!r} must be positive")
    return RuleCaps(**overrides)


def _parse_range(text: str, name: str) -> tuple[int, int]:
    try:
        if ":" in text:
            lo_s, hi_s = text.split(":", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(text)
    except ValueError:
        raise InputError(f"bad {name} range {text!r}, expected N or LO:HI")
    if lo > hi or lo < 1:
        raise InputError(f"empty or invalid {name} range {text!r}")
    return lo, hi


def _scope_from_args(args, v: int):
    if getattr(args, "group", None):
        try:
            G = parse_group_literal(args.group)
        except ValueError as exc:
            raise InputError(str(exc))
        if G.order != v:
            raise InputError(f"group {args.group!r} has order {G.order}, but v = {v}")
        return G
    return AllAbelianOfOrder(v)


def _emit(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        try:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
                if not text.endswith("\n"):
                    fh.write("\n")
        except OSError as exc:
            raise InputError(f"cannot write {out_path!r}: {exc}")


def _report_json(report: RuleReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2)


def _witness_summary(report: RuleReport) -> str:
    for v in report.verdicts + [w for c in report.classes for w in c.verdicts]:
        if v.outcome is not Outcome.RULED_OUT:
            continue
        w = v.witness
        if v.rule_id == "basic":
            checks = "+".join(f["check"] for f in w["failed"])
            return f"basic:{checks}"
        if v.rule_id == "literature_lambda":
            return f"literature_lambda:{w['shape']['form']}"
        if v.rule_id == "admissible_pairs":
            return "admissible_pairs:empty"
        if v.rule_id == "field_descent":
            return f"field_descent:p={w['p']}"
        if v.rule_id == "prime_spectrum":
            return f"prime_spectrum:p={w['p']}"
        if v.rule_id == "exponent_ideal":
            return f"exponent_ideal:d={w['d']},l'={w['lambda_prime']}"
        if v.rule_id == "primitive_root":
            return f"primitive_root:p={w['p']},q={w['q']}"
        if v.rule_id == "schmidt":
            return f"schmidt:d={w['d']},F={w['f_value']}"
    return ""


def cmd_check(args) -> int:
    try:
        params = Params(args.v, args.m, args.k, args.lam)
    except ValueError as exc:
        raise InputError(str(exc))
    scope = _scope_from_args(args, args.v)
    rules = _parse_rules(args.rules)
    caps = _parse_caps(args.caps)
    report = run_battery(params, scope, rules, caps)
    _emit(_report_json(report), args.out)
    return 2 if report.overall is Outcome.RULED_OUT else 0


def _candidates(config) -> list[tuple[int, int, int, int]]:
    v_lo, v_hi = config["v"]
    m_lo, m_hi = config["m"]
    k_range = config["k"]
    lam_range = config["lam"]
    out = []
    for v in range(max(v_lo, 2), v_hi + 1):
        for m in range(m_lo, m_hi + 1):
            k_hi_default = v // m if m else 0
            k_lo = k_range[0] if k_range else 1
            k_hi = min(k_range[1], k_hi_default) if k_range else k_hi_default
            for k in range(k_lo, k_hi + 1):
                num = (m - 1) * k * k
                if num % (v - 1) != 0:
                    continue
                lam = num // (v - 1)
                if lam < 1:
                    continue
                if lam_range and not (lam_range[0] <= lam <= lam_range[1]):
                    continue
                out.append((v, m, k, lam))
    return out


def _scan_row(job) -> dict:
    v, m, k, lam, group_literal, rules, caps_kwargs = job
    params = Params(v, m, k, lam)
    caps = RuleCaps(**caps_kwargs)
    if group_literal is None:
        scope = AllAbelianOfOrder(v)
        scope_str = "all-abelian"
    else:
        scope = parse_group_literal(group_literal)
        scope_str = group_literal
    report = run_battery(params, scope, rules, caps)
    return {
        "v": v,
        "m": m,
        "k": k,
        "lambda": lam,
        "scope": scope_str,
        "overall": report.overall.value,
        "firing_rules": report.firing_rules(),
        "witness_summary": _witness_summary(report),
    }


def cmd_scan(args) -> int:
    config = {
        "v": _parse_range(args.v, "v"),
        "m": _parse_range(args.m, "m"),
        "k": _parse_range(args.k, "k") if args.k else None,
        "lam": _parse_range(args.lam, "lambda") if args.lam else None,
    }
    rules = _parse_rules(args.rules)
    caps = _parse_caps(args.caps)
    group_literal = args.group
    if group_literal:
        order = parse_group_literal(group_literal).order
    cands = _candidates(config)
    if group_literal:
        cands = [c for c in cands if c[0] == order]
    caps_kwargs = {f.name: getattr(caps, f.name) for f in fields(RuleCaps)}
    jobs = [(v, m, k, lam, group_literal, rules, caps_kwargs) for v, m, k, lam in cands]

    n_workers = args.jobs
    if n_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            rows = list(pool.map(_scan_row, jobs, chunksize=8))
    else:
        rows = [_scan_row(j) for j in jobs]

    if args.format == "csv":
        lines = [CSV_HEADER]
        for r in rows:
            lines.append(
                f"{r['v']},{r['m']},{r['k']},{r['lambda']},"
                f"{r['scope'].replace(',', ' ')},{r['overall']},"
                f"{';'.join(r['firing_rules'])},{r['witness_summary'].replace(',', ';')}"
            )
        _emit("\n".join(lines), args.out)
    else:
        lines = [json.dumps(r, sort_keys=True) for r in rows]
        _emit("\n".join(lines), args.out)
    return 0


def cmd_paper_table(args) -> int:
    rules = _parse_rules(args.rules) if args.rules else PAPER_TABLE_RULES
    caps = _parse_caps(args.caps)
    reports = []
    for v, m, k, lam in PAPER_EXCLUSIONS:
        params = Params(v, m, k, lam)
        reports.append(run_battery(params, AllAbelianOfOrder(v), rules, caps))
    if args.format == "json":
        payload = [r.to_dict() for r in reports]
        _emit(json.dumps(payload, sort_keys=True, indent=2), args.out)
    else:
        lines = [f"{'v':>5} {'m':>4} {'k':>5} {'lambda':>7}  {'overall':<12} firing rules"]
        for (v, m, k, lam), rep in zip(PAPER_EXCLUSIONS, reports):
            firing = ", ".join(rep.firing_rules()) or "-"
            lines.append(f"{v:>5} {m:>4} {k:>5} {lam:>7}  {rep.overall.value:<12} {firing}")
        _emit("\n".join(lines), args.out)
    return 0


def cmd_verify(args) -> int:
    try:
        family, lam = load_family(args.file)
    except FamilyFormatError as exc:
        print(f"invalid family file: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot read {args.file!r}: {exc}", file=sys.stderr)
        return 1
    violation = sedf_violation(family, lam)
    result = {
        "group": list(family.group.invariant_factors),
        "m": family.m,
        "k": family.k,
        "lambda": lam,
        "is_sedf": violation is None,
    }
    if violation is None:
        result["character_identity"] = verify_character_identity(family)
    else:
        j, g, count = violation
        result["violation"] = {"set_index": j, "element": list(g), "count": count}
    _emit(json.dumps(result, sort_keys=True, indent=2), args.out)
    return 0 if violation is None and result.get("character_identity", False) else 2


def cmd_search(args) -> int:
    try:
        G = parse_group_literal(args.group)
    except ValueError as exc:
        raise InputError(str(exc))
    if args.m < 2 or args.k < 1 or args.lam < 1 or args.budget < 1:
        raise InputError("need m >= 2, k >= 1, lambda >= 1, budget >= 1")
    result = search_sedf(G, args.m, args.k, args.lam, budget=args.budget)
    payload = {"status": result.status.value, "nodes": result.nodes}
    if result.family is not None:
        payload["family"] = family_to_dict(result.family, args.lam)
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.out)
    if result.status is SearchStatus.FOUND:
        return 0
    if result.status is SearchStatus.EXHAUSTED:
        return 2
    return 3


def _add_common(parser):
    parser.add_argument("--out", default=None, help="write output to PATH instead of stdout")
    parser.add_argument("--rules", default=None, help="comma-separated rule subset")
    parser.add_argument("--caps", default=None, help="enumeration caps, KEY=VALUE[,KEY=VALUE...]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sedfkit",
        description="Exact feasibility engine for strong external difference families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run the rule battery on one parameter set")
    p_check.add_argument("--v", type=int, required=True)
    p_check.add_argument("--m", type=int, required=True)
    p_check.add_argument("--k", type=int, required=True)
    p_check.add_argument("--lambda", dest="lam", type=int, required=True)
    p_check.add_argument("--group", default=None, help='group literal, e.g. "2,4,8"')
    p_check.add_argument("--all-groups", action="store_true", help="all abelian groups of order v (default)")
    _add_common(p_check)

    p_scan = sub.add_parser("scan", help="scan a parameter range (lambda from the counting identity)")
    p_scan.add_argument("--v", required=True, help="v range, N or LO:HI")
    p_scan.add_argument("--m", required=True, help="m range, N or LO:HI")
    p_scan.add_argument("--k", default=None, help="optional k range")
    p_scan.add_argument("--lambda", dest="lam", default=None, help="optional lambda filter range")
    p_scan.add_argument("--group", default=None, help="restrict to one group literal")
    p_scan.add_argument("--format", choices=("json", "csv"), default="json")
    p_scan.add_argument(
        "--jobs",
        type=int,
        default=int(os.environ.get("SEDFKIT_JOBS", "1")),
        help="worker processes (default from SEDFKIT_JOBS, else 1)",
    )
    _add_common(p_scan)

    p_table = sub.add_parser("paper-table", help="battery over the fifteen excluded parameter sets")
    p_table.add_argument("--format", choices=("text", "json"), default="text")
    _add_common(p_table)

    p_verify = sub.add_parser("verify", help="verify a family file")
    p_verify.add_argument("file")
    p_verify.add_argument("--out", default=None)

    p_search = sub.add_parser("search", help="exhaustive search for a family")
    p_search.add_argument("--group", required=True)
    p_search.add_argument("--m", type=int, required=True)
    p_search.add_argument("--k", type=int, required=True)
    p_search.add_argument("--lambda", dest="lam", type=int, required=True)
    p_search.add_argument("--budget", type=int, default=10**7)
    p_search.add_argument("--out", default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "check": cmd_check,
        "scan": cmd_scan,
        "paper-table": cmd_paper_table,
        "verify": cmd_verify,
        "search": cmd_search,
    }[args.command]
    try:
        return handler(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
