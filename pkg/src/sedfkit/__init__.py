"""sedfkit: exact-arithmetic feasibility engine for strong external
difference families in finite abelian groups."""

from .groups import GroupSpec, parse_group_literal
from .rules import AllAbelianOfOrder, Outcome, RuleCaps, run_battery
from .sedf import Params, SearchStatus, SetFamily, is_edf, is_sedf, search_sedf

__all__ = [
    "GroupSpec",
    "parse_group_literal",
    "AllAbelianOfOrder",
    "Outcome",
    "RuleCaps",
    "run_battery",
    "Params",
    "SearchStatus",
    "SetFamily",
    "is_edf",
    "is_sedf",
    "search_sedf",
]

__version__ = "0.1.0"
