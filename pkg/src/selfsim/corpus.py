"""Built-in sets as one-state digit automata, read from the same manifest as the oracle."""

from __future__ import annotations

from .boxoracle import GeometricSet, builtin_set
from .core import SetAutomaton


def automaton_of(s: GeometricSet) -> SetAutomaton:
    """One looping state accepting the branch digits: the attractor's digit language."""
    return SetAutomaton.from_edges(s.k, s.d, ["q"], ["q"], [("q", b, "q") for b in s.branches])


def builtin_automaton(name: str) -> SetAutomaton:
    return automaton_of(builtin_set(name))
