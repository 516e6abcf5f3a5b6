"""Exact word and cube counts, entropy estimators and the dimension/entropy check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .core import SetAutomaton, determinize
from .errors import VerificationFailedError
from .kernel import KernelPresentation, digit_quotient, subdivision_matrix
from .spectral import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    LogEnclosure,
    log_enclosure,
    working_precision,
    spectral_radius,
)


@dataclass(frozen=True)
class CountingAutomaton:
    """Subset construction of the kernel automaton started from *all* elements.

    ``subsets[s]`` is the set of kernel elements tracked by state ``s``;
    state 0 is the full set.  A length-``p`` path from state 0 is exactly a
    word whose cube meets some kernel element.
    """

    subsets: tuple
    delta: tuple

    @property
    def n(self) -> int:
        return len(self.delta)

    def transfer_matrix(self) -> tuple:
        """``T[t][s]`` = number of digits leading from state ``s`` to ``t``."""
        T = [[0] * self.n for _ in range(self.n)]
        for s, row in enumerate(self.delta):
            for t in row.values():
                T[t][s] += 1
        return tuple(tuple(r) for r in T)


@lru_cache(maxsize=64)
def counting_automaton(kp: KernelPresentation) -> CountingAutomaton:
    transitions = {
        j: {b: frozenset([t]) for b, t in row.items()} for j, row in enumerate(kp.table)
    }
    nfa = SetAutomaton(kp.k, kp.d, tuple(range(kp.n)), frozenset(range(kp.n)), transitions)
    dfa = determinize(nfa)
    return CountingAutomaton(tuple(tuple(sorted(s)) for s in dfa.labels), dfa.delta)


def _apply(A, v):
    n = len(v)
    return [sum(A[i][j] * v[j] for j in range(n) if v[j]) for i in range(n)]


def cube_count(kp: KernelPresentation, i: int, p: int, matrix=None) -> int:
    """Number of level-``p`` closed cubes meeting ``X_i``: ``J^T A^p e_i``."""
    A = kp.matrix if matrix is None else matrix
    v = [0] * len(A)
    v[i] = 1
    for _ in range(p):
        v = _apply(A, v)
    return sum(v)


def cube_counts(kp: KernelPresentation, p: int, matrix=None) -> list[int]:
    """All of ``cube_count(kp, i, p)`` at once (the column sums of ``A^p``)."""
    A = kp.matrix if matrix is None else matrix
    n = len(A)
    # row vector J^T A^p
    row = [1] * n
    for _ in range(p):
        row = [sum(row[i] * A[i][j] for i in range(n) if A[i][j]) for j in range(n)]
    return row


def word_counts(kp: KernelPresentation, pmax: int) -> list[int]:
    """``[P(L_X, 0), ..., P(L_X, pmax)]`` by dynamic programming on the counting automaton."""
    ca = counting_automaton(kp)
    dist = [0] * ca.n
    dist[0] = 1
    out = [1]
    for _ in range(pmax):
        nxt = [0] * ca.n
        for s, c in enumerate(dist):
            if c:
                for t in ca.delta[s].values():
                    nxt[t] += c
        dist = nxt
        out.append(sum(dist))
    return out


def word_count(kp: KernelPresentation, p: int) -> int:
    return word_counts(kp, p)[p]


def _log_k(x: Fraction, k: int) -> float:
    """``log_k x`` exactly when ``x`` is a power of ``k``; otherwise from big-integer logs."""
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    for top, sign in ((num, 1), (den, -1)):
        other = den if sign == 1 else num
        if other == 1:
            e, m = 0, top
            while m % k == 0 and m > 1:
                m //= k
                e += 1
            if m == 1:
                return float(sign * e)
    return (math.log(num) - math.log(den)) / math.log(k)


@dataclass(frozen=True)
class CountReport:
    p: int
    total: int
    per_element: tuple
    direct: float
    ratio: float | None = None

    def to_row(self) -> dict:
        return {
            "p": self.p,
            "word_count": str(self.total),
            "cube_count_0": str(self.per_element[0]),
            "direct": f"{self.direct:.12f}",
            "ratio": "" if self.ratio is None else f"{self.ratio:.12f}",
        }


def entropy_estimate(kp: KernelPresentation, p: int) -> tuple[float, float]:
    """``((1/p) log_k P(p), log_k(P(p+1)/P(p)))``; only the final logarithm is inexact."""
    if p < 1:
        raise ValueError("depth must be >= 1")
    counts = word_counts(kp, p + 1)
    return _log_k(Fraction(counts[p]), kp.k) / p, _log_k(Fraction(counts[p + 1], counts[p]), kp.k)


def count_table(kp: KernelPresentation, pmax: int) -> list[CountReport]:
    counts = word_counts(kp, pmax + 1)
    rows = []
    for p in range(pmax + 1):
        direct = 0.0 if p == 0 else _log_k(Fraction(counts[p]), kp.k) / p
        ratio = _log_k(Fraction(counts[p + 1], counts[p]), kp.k)
        rows.append(CountReport(p, counts[p], tuple(cube_counts(kp, p)), direct, ratio))
    return rows


@dataclass(frozen=True)
class EntropyResult:
    enclosure: LogEnclosure
    diagnostics: tuple = ()

    @property
    def value(self) -> float:
        return self.enclosure.value

    def to_json(self, digits: int = 15) -> dict:
        out = {"entropy": self.enclosure.to_json(digits)}
        out["estimates"] = [r.to_row() for r in self.diagnostics]
        return out


def entropy(kp: KernelPresentation, tol=DEFAULT_TOL, depth: int = 10,
            max_iter: int = DEFAULT_MAX_ITER) -> EntropyResult:
    """``h(X) = log_k rho(A)`` with finite-depth estimator rows up to ``depth``."""
    enc = log_enclosure(spectral_radius(kp.matrix, tol, max_iter), kp.k, True, working_precision(tol))
    return EntropyResult(enc, tuple(count_table(kp, depth)))


# -- verification --------------------------------------------------------------

@dataclass
class TheoremReport:
    checks: list = field(default_factory=list)
    dimension: LogEnclosure | None = None
    entropy: LogEnclosure | None = None

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def add(self, name, passed, detail=""):
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})

    def failures(self) -> list:
        return [c for c in self.checks if not c["passed"]]

    def to_json(self, digits: int = 15) -> dict:
        out = {"status": "PASS" if self.passed else "FAIL", "checks": self.checks}
        if self.dimension is not None:
            out["dimension"] = self.dimension.to_json(digits)
        if self.entropy is not None:
            out["entropy"] = self.entropy.to_json(digits)
        return out


def check_closure(kp: KernelPresentation, report: TheoremReport) -> None:
    keys = [e.canonical_key for e in kp.elements]
    bad = []
    for j, element in enumerate(kp.elements):
        for b in sorted(set(element.delta[element.initial]) | set(kp.table[j])):
            q = digit_quotient(element, b)
            recorded = kp.table[j].get(b)
            if q is None or recorded is None or q.canonical_key != keys[recorded]:
                bad.append(f"X{j} on {list(b)}")
    report.add("kernel-closure", not bad, "; ".join(bad[:5]) or "every digit quotient matches its recorded element")


def verify_theorem(kp: KernelPresentation, tol=DEFAULT_TOL, depth: int = 30, matrix=None,
                   max_iter: int = DEFAULT_MAX_ITER, raise_on_fail: bool = True) -> TheoremReport:
    """Check dimension = entropy through two separately assembled matrices.

    The dimension side uses the subdivision matrix ``A`` (or ``matrix`` when a
    recorded one is supplied); the entropy side uses the transfer matrix of the
    counting automaton, built from the transition table alone.  Finite-depth
    counts must satisfy ``max_i c_i <= P <= sum_i c_i <= n max_i c_i`` and
    ``rho_lower**p <= sum_i c_i``.
    """
    report = TheoremReport()
    derived = subdivision_matrix(kp)
    A = derived if matrix is None else tuple(tuple(r) for r in matrix)
    report.add("matrix-consistency", A == derived,
               "recorded matrix equals digit counts of the transition table" if A == derived
               else "recorded matrix differs from the transition table")
    check_closure(kp, report)

    rho_a = spectral_radius(A, tol, max_iter)
    dim = log_enclosure(rho_a, kp.k, True, working_precision(tol))
    T = counting_automaton(kp).transfer_matrix()
    rho_t = spectral_radius(T, tol, max_iter)
    ent = log_enclosure(rho_t, kp.k, True, working_precision(tol))
    report.dimension, report.entropy = dim, ent
    report.add("dimension-equals-entropy", dim.intersects(ent),
               f"dim in [{float(dim.lower):.12f}, {float(dim.upper):.12f}], "
               f"h in [{float(ent.lower):.12f}, {float(ent.upper):.12f}]")

    counts = word_counts(kp, depth)
    n = len(A)
    violations = []
    for p in range(depth + 1):
        cubes = cube_counts(kp, p, A)
        top, total, P = max(cubes), sum(cubes), counts[p]
        if not (top <= P <= total <= n * top):
            violations.append(f"p={p}: max={top} P={P} sum={total} n*max={n * top}")
        if rho_a.lower ** p > total:
            violations.append(f"p={p}: rho_lower^p > sum of cube counts {total}")
    report.add("sandwich", not violations, "; ".join(violations[:5]) or f"holds for p <= {depth}")

    if report.passed or not raise_on_fail:
        return report
    first = report.failures()[0]
    raise VerificationFailedError(f"{first['name']}: {first['detail']}", report)
