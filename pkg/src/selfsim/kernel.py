"""k-kernel of an automaton-presented set and its subdivision matrix."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .core import (
    MAX_BASE,
    DeterministicAutomaton,
    SetAutomaton,
    alphabet,
    automaton_from_json,
    automaton_to_json,
    canonical_form,
    check_digit,
    determinize,
    minimize,
)
from .errors import BaseOverflowError, KernelOverflowError, SpecError
from .saturate import SaturatedAutomaton, saturate

DEFAULT_ELEMENT_CAP = 10_000


@dataclass(frozen=True, eq=False)
class KernelPresentation:
    """Finite k-kernel ``X_0 .. X_{n-1}`` with ``X_0 = X``.

    ``table[j]`` maps a digit tuple ``b`` to the index of the element obtained
    by intersecting ``X_j`` with the closed cube of ``b`` and rescaling; digits
    whose cube misses ``X_j`` are absent from the mapping.
    """

    k: int
    d: int
    elements: tuple
    table: tuple
    labels: tuple = ()

    @property
    def n(self) -> int:
        return len(self.table)

    @cached_property
    def matrix(self) -> tuple:
        return subdivision_matrix(self)

    def automaton(self, start: int = 0) -> DeterministicAutomaton:
        """The kernel itself as a deterministic automaton on element indices."""
        return DeterministicAutomaton(self.k, self.d, start, tuple(dict(row) for row in self.table))

    def copies(self, i: int, j: int) -> list:
        """Digits ``b`` (lexicographic) placing a copy of ``X_i`` inside ``X_j``."""
        return sorted(b for b, t in self.table[j].items() if t == i)


def digit_quotient(element: DeterministicAutomaton, digit) -> DeterministicAutomaton | None:
    target = element.step(element.initial, digit)
    if target is None:
        return None
    return minimize(element.reroot(target))


def compute_kernel(a, cap: int = DEFAULT_ELEMENT_CAP) -> KernelPresentation:
    """Breadth-first closure of ``X`` under digit quotients.

    Accepts a :class:`SaturatedAutomaton` (or a plain automaton, which is
    saturated first).  Elements are deduplicated by canonical minimal form and
    numbered in discovery order with ``X`` first.
    """
    if not isinstance(a, SaturatedAutomaton):
        a = saturate(a)
    root = canonical_form(a.automaton)
    elements = [root]
    index = {root.canonical_key: 0}
    table: list[dict] = []
    letters = alphabet(a.k, a.d)
    queue = deque([0])
    while queue:
        j = queue.popleft()
        row = {}
        for b in letters:
            q = digit_quotient(elements[j], b)
            if q is None:
                continue
            key = q.canonical_key
            if key not in index:
                if len(elements) >= cap:
                    raise KernelOverflowError(f"kernel exceeds {cap} elements")
                index[key] = len(elements)
                elements.append(q)
                queue.append(index[key])
            row[b] = index[key]
        while len(table) <= j:
            table.append({})
        table[j] = row
    labels = tuple(f"X{i}" for i in range(len(elements)))
    return KernelPresentation(a.k, a.d, tuple(elements), tuple(table), labels)


def kernel_of(a: SetAutomaton, cap: int = DEFAULT_ELEMENT_CAP) -> KernelPresentation:
    return compute_kernel(saturate(a), cap)


def subdivision_matrix(kp: KernelPresentation) -> tuple:
    """``A[i][j]`` = number of digits ``b`` with ``table[j][b] == i``."""
    n = kp.n
    A = [[0] * n for _ in range(n)]
    for j, row in enumerate(kp.table):
        for i in row.values():
            A[i][j] += 1
    return tuple(tuple(r) for r in A)


def rebase(a, e: int):
    """Regroup ``e`` consecutive base-k digits into one base-``k**e`` digit.

    Works on plain and saturated automata; the named set is unchanged and a
    saturated input stays saturated.
    """
    saturated = isinstance(a, SaturatedAutomaton)
    base = a.automaton if saturated else a
    if e < 1:
        raise ValueError("exponent must be >= 1")
    K = base.k ** e
    if K > MAX_BASE:
        raise BaseOverflowError(f"base {base.k}**{e} = {K} exceeds {MAX_BASE}")
    transitions = {}
    for q in base.states:
        paths = {(): frozenset([q])}
        for _ in range(e):
            nxt = {}
            for word, current in paths.items():
                for b in alphabet(base.k, base.d):
                    target = base.post(current, b)
                    if target:
                        nxt[word + (b,)] = target
            paths = nxt
        row = {}
        for word, target in paths.items():
            digit = tuple(
                sum(word[t][c] * base.k ** (e - 1 - t) for t in range(e)) for c in range(base.d)
            )
            row[digit] = target
        transitions[q] = dict(sorted(row.items()))
    out = SetAutomaton(K, base.d, base.states, base.initial, transitions)
    return SaturatedAutomaton(out) if saturated else out


# -- JSON ---------------------------------------------------------------------

def kernel_to_json(kp: KernelPresentation) -> dict:
    return {
        "k": kp.k,
        "d": kp.d,
        "labels": list(kp.labels),
        "elements": [automaton_to_json(e) for e in kp.elements],
        "transitions": [
            [{"digits": list(b), "to": t} for b, t in sorted(row.items())] for row in kp.table
        ],
        "matrix": [list(r) for r in kp.matrix],
    }


def kernel_to_text(kp: KernelPresentation) -> str:
    return json.dumps(kernel_to_json(kp), indent=2, sort_keys=True) + "\n"


def kernel_from_json(obj) -> tuple[KernelPresentation, tuple]:
    """Load an exported kernel without recomputing anything.

    Returns the presentation and the matrix exactly as recorded in the file,
    so that verification can compare it with the transition table.
    """
    try:
        k, d = int(obj["k"]), int(obj["d"])
        elements = []
        for e in obj["elements"]:
            elements.append(determinize(automaton_from_json(e)))
        table = []
        for row in obj["transitions"]:
            table.append({check_digit(k, d, x["digits"]): int(x["to"]) for x in row})
        n = len(table)
        for row in table:
            for t in row.values():
                if not 0 <= t < n:
                    raise SpecError(f"transition target {t} outside 0..{n - 1}")
        recorded = tuple(tuple(int(v) for v in r) for r in obj.get("matrix", []))
        labels = tuple(obj.get("labels") or (f"X{i}" for i in range(n)))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed kernel file: {exc}") from exc
    return KernelPresentation(k, d, tuple(elements), tuple(table), labels), recorded
