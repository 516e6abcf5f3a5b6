"""Closure of a digit automaton under alternative base-k expansions.

A real in ``[0,1]`` has two expansions exactly when it is a k-adic rational
other than 0 and 1: ``w a (k-1)(k-1)...`` and ``w (a+1) 0 0 ...``.  The carry
transducer recognizes pairs of words with equal value, one coordinate at a
time, and saturation is the image of the automaton's language under it.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .core import MAX_DIM, SetAutomaton, alphabet, determinize, language_equal, trim

EQUAL = 0
LEFT_LOW = 1   # left word continues (k-1)^w, right word 0^w
LEFT_HIGH = 2  # left word continues 0^w, right word (k-1)^w


def _coordinate_step(k: int, status: int, a: int, b: int):
    """Next status of one coordinate after reading the pair (a, b), or None."""
    if status == EQUAL:
        if a == b:
            return EQUAL
        if b == a + 1:
            return LEFT_LOW
        if a == b + 1:
            return LEFT_HIGH
        return None
    if status == LEFT_LOW:
        return LEFT_LOW if (a, b) == (k - 1, 0) else None
    return LEFT_HIGH if (a, b) == (0, k - 1) else None


@dataclass(frozen=True)
class CarryTransducer:
    """Letter-to-letter transducer for the same-value relation on ``([0,1]^d)``.

    States are per-coordinate status vectors; ``transitions[s][u]`` lists the
    ``(v, s')`` pairs allowed after reading ``u`` on the left tape.
    """

    k: int
    d: int
    states: tuple
    transitions: dict

    @property
    def start(self) -> tuple:
        return (EQUAL,) * self.d

    def step(self, state, u, v):
        nxt = []
        for status, a, b in zip(state, u, v):
            s = _coordinate_step(self.k, status, a, b)
            if s is None:
                return None
            nxt.append(s)
        return tuple(nxt)

    def accepts(self, left, right) -> bool:
        """Whether the finite words can be prefixes of equal-valued infinite words.

        Every infinite run of the transducer is accepting, so this is the
        prefix test of the relation.
        """
        state = self.start
        for u, v in zip(left, right):
            state = self.step(state, tuple(u), tuple(v))
            if state is None:
                return False
        return True


def carry_transducer(k: int, d: int) -> CarryTransducer:
    if k < 2 or not 1 <= d <= MAX_DIM:
        raise ValueError(f"unsupported base/dimension {(k, d)}")
    states = tuple(itertools.product((EQUAL, LEFT_LOW, LEFT_HIGH), repeat=d))
    letters = alphabet(k, d)
    transitions = {}
    for s in states:
        row = {}
        for u in letters:
            options = []
            for choice in itertools.product(*[_coordinate_moves(k, st, a) for st, a in zip(s, u)]):
                v = tuple(b for b, _ in choice)
                options.append((v, tuple(t for _, t in choice)))
            if options:
                row[u] = tuple(options)
        transitions[s] = row
    return CarryTransducer(k, d, states, transitions)


def _coordinate_moves(k, status, a):
    moves = []
    for b in {a - 1, a, a + 1, 0, k - 1}:
        if 0 <= b < k:
            s = _coordinate_step(k, status, a, b)
            if s is not None:
                moves.append((b, s))
    return moves


@dataclass(frozen=True, eq=False)
class SaturatedAutomaton:
    automaton: SetAutomaton
    certified: bool = True

    @property
    def k(self):
        return self.automaton.k

    @property
    def d(self):
        return self.automaton.d


def saturate(a: SetAutomaton) -> SaturatedAutomaton:
    """Accept every expansion of every point named by ``a``.

    Product of ``a`` (reading the left tape) with the carry transducer,
    projected on the right tape, then trimmed.
    """
    if isinstance(a, SaturatedAutomaton):
        a = a.automaton
    t = carry_transducer(a.k, a.d)
    start = [(q, t.start) for q in sorted(a.initial, key=a.states.index)]
    seen = set(start)
    order = list(start)
    queue = deque(start)
    transitions: dict = {}
    while queue:
        q, s = queue.popleft()
        row: dict = {}
        for u, targets in a.transitions[q].items():
            for v, s2 in t.transitions[s].get(u, ()):
                bucket = row.setdefault(v, set())
                for r in targets:
                    node = (r, s2)
                    bucket.add(node)
                    if node not in seen:
                        seen.add(node)
                        order.append(node)
                        queue.append(node)
        transitions[(q, s)] = {v: frozenset(x) for v, x in sorted(row.items())}
    product = SetAutomaton(a.k, a.d, tuple(order), frozenset(start), transitions)
    return SaturatedAutomaton(trim(product))


def is_saturated(a: SetAutomaton) -> bool:
    if isinstance(a, SaturatedAutomaton):
        a = a.automaton
    return language_equal(determinize(saturate(a).automaton), determinize(a))
