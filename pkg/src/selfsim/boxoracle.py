"""Geometric ground truth: closed-cube box counts of IFS attractors.

The attractor of ``x -> (x + b)/k`` over the branch digits ``b`` is handled
directly as a point set; nothing here touches digit automata.  A closed
rectangle ``R`` meets the attractor iff some branch preimage
``k R - b`` still meets ``[0,1]^d`` and, recursively, meets the attractor.
Degenerate rectangles (faces, points) can map back onto themselves, so the
recursion is evaluated as a greatest fixpoint over the finite graph of
rectangles instead of a depth-bounded descent.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .errors import BudgetExceededError, UnknownSetError

DEFAULT_BOX_CAP = 10**7


@dataclass(frozen=True)
class GeometricSet:
    name: str
    k: int
    d: int
    branches: tuple


@dataclass(frozen=True)
class BoxCount:
    p: int
    count: int


def load_manifest() -> dict:
    return json.loads(resources.files("selfsim").joinpath("corpus.json").read_text(encoding="utf-8"))


def builtin_names() -> list[str]:
    return list(load_manifest()["verify_corpus"])


def builtin_set(name: str, k: int | None = None, d: int | None = None) -> GeometricSet:
    """Look up a corpus set; ``full-cube-K-D`` selects a full cube of base K and dimension D."""
    entries = load_manifest()["sets"]
    base = name
    if name.startswith("full-cube"):
        rest = name[len("full-cube"):]
        if rest:
            try:
                _, ks, ds = rest.split("-")
                k, d = int(ks), int(ds)
            except ValueError:
                raise UnknownSetError(f"unknown built-in set {name!r}") from None
        base = "full-cube"
    for e in entries:
        if e["name"] == base or base in e.get("aliases", ()):
            kk = k if k is not None and base == "full-cube" else e["k"]
            dd = d if d is not None and base == "full-cube" else e["d"]
            if e["branches"] == "all":
                if kk < 2 or not 1 <= dd <= 4:
                    raise UnknownSetError(f"unsupported full cube {(kk, dd)}")
                branches = tuple(itertools.product(range(kk), repeat=dd))
                label = f"full-cube-{kk}-{dd}"
            else:
                branches = tuple(tuple(b) for b in e["branches"])
                label = e["name"]
            return GeometricSet(label, kk, dd, branches)
    raise UnknownSetError(f"unknown built-in set {name!r}")


class _Oracle:
    """Memoized rectangle-meets-attractor test at a fixed resolution ``D = k**depth``."""

    def __init__(self, s: GeometricSet, depth: int):
        self.s = s
        self.D = s.k ** depth
        self.known: dict = {}

    def successors(self, rect):
        k, D = self.s.k, self.D
        out = []
        for b in self.s.branches:
            nxt = []
            for (lo, hi), bc in zip(rect, b):
                lo2, hi2 = k * lo - bc * D, k * hi - bc * D
                if lo2 < 0:
                    lo2 = 0
                if hi2 > D:
                    hi2 = D
                if lo2 > hi2:
                    break
                nxt.append((lo2, hi2))
            else:
                nxt = tuple(nxt)
                if self.known.get(nxt):
                    return nxt, None
                out.append(nxt)
        return None, out

    def meets(self, rect) -> bool:
        known = self.known
        if rect in known:
            return known[rect]
        hit, first = self.successors(rect)
        if hit is not None:
            known[rect] = True
            return True
        graph = {rect: first}
        stack = list(first)
        while stack:
            r = stack.pop()
            if r in graph or r in self.known:
                continue
            hit, succ = self.successors(r)
            graph[r] = [hit] if hit is not None else succ
            stack.extend(x for x in graph[r] if x not in graph and x not in self.known)
        alive = set(graph)
        changed = True
        while changed:
            changed = False
            for r in list(alive):
                if not any(x in alive or self.known.get(x) for x in graph[r]):
                    alive.discard(r)
                    changed = True
        for r in graph:
            self.known[r] = r in alive
        return self.known[rect]


def count_boxes_upto(s: GeometricSet, pmax: int, cap: int = DEFAULT_BOX_CAP) -> list[int]:
    """``[N_0, ..., N_pmax]``; a level-``p`` cube is only tested if its parent meets the set."""
    oracle = _Oracle(s, pmax)
    k, D = s.k, oracle.D
    layer = [(0,) * s.d]
    counts = [1]
    for p in range(1, pmax + 1):
        scale = k ** (pmax - p)
        nxt = []
        for parent in layer:
            for off in itertools.product(range(k), repeat=s.d):
                pos = tuple(k * c + o for c, o in zip(parent, off))
                rect = tuple((c * scale, (c + 1) * scale) for c in pos)
                if oracle.meets(rect):
                    nxt.append(pos)
                    if len(nxt) > cap:
                        raise BudgetExceededError(f"box count at depth {p} exceeds {cap}")
        layer = nxt
        counts.append(len(layer))
    assert D == k ** pmax
    return counts


def count_boxes(s: GeometricSet, p: int, cap: int = DEFAULT_BOX_CAP) -> BoxCount:
    return BoxCount(p, count_boxes_upto(s, p, cap)[p])


def box_dimension_estimate(s: GeometricSet, p: int, cap: int = DEFAULT_BOX_CAP) -> tuple[float, float]:
    """``(log_k(N_p)/p, log_k(N_{p+1}/N_p))``."""
    if p < 1:
        raise ValueError("depth must be >= 1")
    counts = count_boxes_upto(s, p + 1, cap)
    logk = math.log(s.k)
    direct = math.log(counts[p]) / logk / p
    ratio = math.log(Fraction(counts[p + 1], counts[p])) / logk
    return direct, ratio
