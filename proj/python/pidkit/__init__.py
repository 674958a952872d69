"""Exact partial information decomposition for discrete distributions."""

from ._core import (
    InputError,
    Joint,
    NonConvergenceError,
    ResourceError,
    broja,
    decompose,
    entropy_bits,
    excluded,
    fixture,
    fixture_names,
    from_json,
    gh,
    gk,
    is_garbling,
    load,
    redundancy,
    source_information,
    synergy,
    total_information,
    union,
    unique,
    wedge,
)

__all__ = [
    "InputError",
    "Joint",
    "NonConvergenceError",
    "ResourceError",
    "broja",
    "decompose",
    "entropy_bits",
    "excluded",
    "fixture",
    "fixture_names",
    "from_json",
    "gh",
    "gk",
    "is_garbling",
    "load",
    "redundancy",
    "source_information",
    "synergy",
    "total_information",
    "union",
    "unique",
    "wedge",
]
