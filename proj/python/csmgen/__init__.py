"""Macro-generation compiler and analyzer for CSM library modules."""

from ._core import (
    CsmError,
    builtin_names,
    builtin_source,
    check_library,
    check_system,
    counter_oracle,
    determinism,
    expand,
    expand_system,
    explore,
    run,
    simulate,
)

__all__ = [
    "CsmError",
    "builtin_names",
    "builtin_source",
    "check_library",
    "check_system",
    "counter_oracle",
    "determinism",
    "expand",
    "expand_system",
    "explore",
    "run",
    "simulate",
]
