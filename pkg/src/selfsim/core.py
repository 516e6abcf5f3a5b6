"""Digit alphabets and safety automata over digit tuples.

A point of ``[0,1]^d`` is named by an infinite word over ``Sigma_k^d``: the
``t``-th letter is the tuple of ``t``-th base-``k`` digits of its coordinates.
Every automaton here is a *safety* automaton: all states accept and the
named set is the set of values of infinite paths.  Trim automata therefore
name nonempty compact sets, and two trim automata name the same set exactly
when their finite-prefix languages agree.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Mapping

from .errors import ArityMismatchError, BaseMismatchError, DigitRangeError, EmptySetError

Digit = tuple  # a DigitTuple: d integers in [0, k)

MAX_BASE = 36
MAX_DIM = 4


def check_digit(k: int, d: int, digit: Iterable[int]) -> Digit:
    digit = tuple(int(e) for e in digit)
    if len(digit) != d:
        raise ArityMismatchError(f"digit tuple {digit} has length {len(digit)}, expected {d}")
    for e in digit:
        if not 0 <= e < k:
            raise DigitRangeError(f"digit {e} outside [0, {k})")
    return digit


def alphabet(k: int, d: int) -> list[Digit]:
    """All of ``Sigma_k^d`` in lexicographic order."""
    return list(itertools.product(range(k), repeat=d))


@dataclass(frozen=True, eq=False)
class SetAutomaton:
    """Nondeterministic safety automaton; ``transitions[q][b]`` is a frozenset of states."""

    k: int
    d: int
    states: tuple
    initial: frozenset
    transitions: Mapping[Hashable, Mapping[Digit, frozenset]]

    @classmethod
    def from_edges(cls, k, d, states, initial, edges) -> "SetAutomaton":
        states = tuple(states)
        known = set(states)
        table: dict = {q: {} for q in states}
        for src, digit, dst in edges:
            if src not in known or dst not in known:
                raise ValueError(f"edge {src!r} -> {dst!r} uses an undeclared state")
            digit = check_digit(k, d, digit)
            table[src].setdefault(digit, set()).add(dst)
        frozen = {q: {b: frozenset(t) for b, t in sorted(row.items())} for q, row in table.items()}
        init = frozenset(initial)
        if not init <= known:
            raise ValueError("initial states must be declared")
        return cls(k, d, states, init, frozen)

    def edges(self) -> Iterator[tuple]:
        for q in self.states:
            for b, targets in self.transitions[q].items():
                for r in targets:
                    yield q, b, r

    def post(self, current: Iterable, digit: Digit) -> frozenset:
        out = set()
        for q in current:
            out.update(self.transitions[q].get(digit, ()))
        return frozenset(out)

    def num_edges(self) -> int:
        return sum(len(t) for row in self.transitions.values() for t in row.values())


@dataclass(frozen=True, eq=False)
class DeterministicAutomaton:
    """Deterministic safety automaton on states ``0..n-1``.

    ``delta[q]`` maps a digit tuple to the unique successor.  ``labels``
    optionally records where each state came from (e.g. a subset of states
    of a nondeterministic automaton) and does not take part in equality.
    """

    k: int
    d: int
    initial: int
    delta: tuple
    labels: tuple | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.delta)

    def step(self, q: int, digit: Digit):
        return self.delta[q].get(digit)

    def run(self, word: Iterable[Digit], start: int | None = None):
        q = self.initial if start is None else start
        for b in word:
            q = self.delta[q].get(tuple(b))
            if q is None:
                return None
        return q

    def to_set_automaton(self) -> SetAutomaton:
        transitions = {q: {b: frozenset([r]) for b, r in sorted(row.items())} for q, row in enumerate(self.delta)}
        return SetAutomaton(self.k, self.d, tuple(range(self.n)), frozenset([self.initial]), transitions)

    def reroot(self, q: int) -> "DeterministicAutomaton":
        return _bfs_renumber(self.k, self.d, q, self.delta)

    @cached_property
    def canonical_key(self) -> tuple:
        """Hashable key; equal for two automata iff their minimal forms are isomorphic."""
        m = minimize(self)
        return (m.k, m.d, tuple(tuple(sorted(row.items())) for row in m.delta))

    def __eq__(self, other):
        if not isinstance(other, DeterministicAutomaton):
            return NotImplemented
        return (self.k, self.d, self.initial, self.delta) == (other.k, other.d, other.initial, other.delta)

    def __hash__(self):
        return hash((self.k, self.d, self.initial, tuple(tuple(sorted(r.items())) for r in self.delta)))


def _nfa_view(a):
    if isinstance(a, DeterministicAutomaton):
        a = a.to_set_automaton()
    return a


def trim(a: SetAutomaton) -> SetAutomaton:
    """Restrict to states that are reachable and have an infinite continuation."""
    successors = {q: set() for q in a.states}
    predecessors = {q: set() for q in a.states}
    for q, _, r in a.edges():
        successors[q].add(r)
        predecessors[r].add(q)

    live = set(a.states)
    out_live = {q: len(successors[q]) for q in a.states}
    queue = deque(q for q in a.states if out_live[q] == 0)
    while queue:
        q = queue.popleft()
        if q not in live:
            continue
        live.discard(q)
        for p in predecessors[q]:
            if p in live:
                out_live[p] -= 1
                if out_live[p] == 0:
                    queue.append(p)

    seen = {q for q in a.initial if q in live}
    queue = deque(q for q in a.states if q in seen)
    while queue:
        q = queue.popleft()
        for r in successors[q]:
            if r in live and r not in seen:
                seen.add(r)
                queue.append(r)
    if not seen:
        raise EmptySetError("automaton names the empty set")

    states = tuple(q for q in a.states if q in seen)
    transitions = {}
    for q in states:
        row = {}
        for b, targets in a.transitions[q].items():
            kept = frozenset(r for r in targets if r in seen)
            if kept:
                row[b] = kept
        transitions[q] = row
    return SetAutomaton(a.k, a.d, states, frozenset(q for q in a.initial if q in seen), transitions)


def determinize(a) -> DeterministicAutomaton:
    """Subset construction, states numbered in breadth-first discovery order."""
    if isinstance(a, DeterministicAutomaton):
        return a
    start = frozenset(a.initial)
    index = {start: 0}
    order = [start]
    delta: list[dict] = []
    i = 0
    while i < len(order):
        current = order[i]
        i += 1
        moves: dict = {}
        for q in current:
            for b, targets in a.transitions[q].items():
                moves.setdefault(b, set()).update(targets)
        row = {}
        for b in sorted(moves):
            target = frozenset(moves[b])
            if target not in index:
                index[target] = len(order)
                order.append(target)
            row[b] = index[target]
        delta.append(row)
    return DeterministicAutomaton(a.k, a.d, 0, tuple(delta), labels=tuple(order))


def _bfs_renumber(k, d, start, delta, block_of=None) -> DeterministicAutomaton:
    """Renumber the part reachable from ``start`` breadth-first, digits in lexicographic order.

    With ``block_of`` the states are first collapsed to their blocks.
    """
    if block_of is None:
        block_of = list(range(len(delta)))
    representative = {}
    for q in range(len(delta)):
        representative.setdefault(block_of[q], q)
    index = {block_of[start]: 0}
    order = [block_of[start]]
    rows = []
    i = 0
    while i < len(order):
        q = representative[order[i]]
        i += 1
        row = {}
        for b in sorted(delta[q]):
            blk = block_of[delta[q][b]]
            if blk not in index:
                index[blk] = len(order)
                order.append(blk)
            row[b] = index[blk]
        rows.append(row)
    return DeterministicAutomaton(k, d, 0, tuple(rows))


def minimize(a: DeterministicAutomaton) -> DeterministicAutomaton:
    """Merge states with identical outgoing behaviour and return the canonical form.

    All states accept, so the coarsest bisimulation is obtained by Moore
    refinement starting from a single block.  The result is renumbered
    breadth-first from the initial state, which makes it canonical: two
    inputs with the same prefix language yield equal automata.
    """
    n = a.n
    rows = [sorted(row.items()) for row in a.delta]
    block = [0] * n
    count = 1
    while True:
        signatures: dict = {}
        new_block = []
        for q in range(n):
            sig = (block[q], tuple((b, block[r]) for b, r in rows[q]))
            new_block.append(signatures.setdefault(sig, len(signatures)))
        block = new_block
        if len(signatures) == count:
            break
        count = len(signatures)
    return _bfs_renumber(a.k, a.d, a.initial, a.delta, block)


def language_equal(a, b) -> bool:
    """True iff the two automata have the same finite-prefix language."""
    if (a.k, a.d) != (b.k, b.d):
        raise BaseMismatchError(f"cannot compare base/dim {(a.k, a.d)} with {(b.k, b.d)}")
    return determinize(a).canonical_key == determinize(b).canonical_key


def canonical_form(a) -> DeterministicAutomaton:
    return minimize(determinize(trim(_nfa_view(a))))


def prefix_words(a, p: int) -> set[tuple]:
    """All length-``p`` words readable from the initial states (brute force)."""
    a = _nfa_view(a)
    layer = {(): frozenset(a.initial)}
    for _ in range(p):
        nxt = {}
        for word, current in layer.items():
            for b in alphabet(a.k, a.d):
                target = a.post(current, b)
                if target:
                    nxt[word + (b,)] = target
        layer = nxt
    return set(layer)


# -- JSON ---------------------------------------------------------------------

def _json_state(q):
    return q if isinstance(q, (int, str)) else None


def automaton_to_json(a) -> dict:
    """Serialize to the ``{k, d, states, initial, edges}`` schema with sorted edges."""
    a = _nfa_view(a)
    names = [_json_state(q) for q in a.states]
    if any(name is None for name in names) or len(set(map(repr, names))) != len(names):
        names = list(range(len(a.states)))
    name_of = dict(zip(a.states, names))
    edges = [
        {"from": name_of[q], "digits": list(b), "to": name_of[r]}
        for q, b, r in a.edges()
    ]
    edges.sort(key=lambda e: (repr(e["from"]), e["digits"], repr(e["to"])))
    initial = sorted((name_of[q] for q in a.initial), key=repr)
    return {"k": a.k, "d": a.d, "states": names, "initial": initial, "edges": edges}


def automaton_from_json(obj: Mapping) -> SetAutomaton:
    k, d = int(obj["k"]), int(obj["d"])
    states = [q for q in obj["states"]]
    edges = [(e["from"], tuple(e["digits"]), e["to"]) for e in obj["edges"]]
    return SetAutomaton.from_edges(k, d, states, obj["initial"], edges)


def canonical_json(a) -> str:
    """Byte-stable serialization of the canonical minimal automaton."""
    return json.dumps(automaton_to_json(canonical_form(a)), sort_keys=True, separators=(",", ":"))
