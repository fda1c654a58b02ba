"""Petri nets with persistent places: firing, unfolding and event structures."""

from ._core import (
    EventStructure,
    Net,
    UnfoldResult,
    check_live,
    check_locally_connected,
    es_of_net,
    es_of_pnet,
    is_connected,
    iso_check,
    net_of_es,
    parse_es,
    parse_net,
    round_trip,
    run,
    unfold,
    unit_iso_check,
)

__all__ = [
    "EventStructure",
    "Net",
    "UnfoldResult",
    "check_live",
    "check_locally_connected",
    "es_of_net",
    "es_of_pnet",
    "is_connected",
    "iso_check",
    "net_of_es",
    "parse_es",
    "parse_net",
    "round_trip",
    "run",
    "unfold",
    "unit_iso_check",
]
