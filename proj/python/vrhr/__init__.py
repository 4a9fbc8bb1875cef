"""Verification toolkit for parameterized networks specified by VR/HR graph
grammars: term evaluation, bounded reachability, and the routing-based
VR-to-HR translation with its equivalence checks."""

from ._vrhr import (
    check,
    enumerate_systems,
    equiv,
    equiv_random,
    eval_term,
    prp,
    replay,
    term_dot,
    translate,
)

__all__ = [
    "check",
    "enumerate_systems",
    "equiv",
    "equiv_random",
    "eval_term",
    "prp",
    "replay",
    "term_dot",
    "translate",
]
