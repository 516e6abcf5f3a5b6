"""Certified Perron root of nonnegative integer matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import iv
from mpmath.libmp import to_rational

from .errors import ToleranceNotReachedError

DEFAULT_TOL = Fraction(1, 10**9)
DEFAULT_MAX_ITER = 10**6


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float (via its repr)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class Condensation:
    components: tuple  # each a sorted tuple of indices, ordered by smallest member
    dag: frozenset     # (source component, target component) pairs

    def component_of(self, v: int) -> int:
        for c, members in enumerate(self.components):
            if v in members:
                return c
        raise KeyError(v)


def _edges(A):
    n = len(A)
    return [[i for i in range(n) if A[i][j] > 0] for j in range(n)]


def scc_decompose(A) -> Condensation:
    """Strongly connected components of the digraph with an edge ``j -> i`` when ``A[i][j] > 0``.

    Iterative Tarjan; components are reported in order of their smallest member.
    """
    n = len(A)
    succ = _edges(A)
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recursed = False
            while pos < len(succ[v]):
                w = succ[v][pos]
                pos += 1
                if index[w] is None:
                    work.append((v, pos))
                    work.append((w, 0))
                    recursed = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recursed:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(tuple(sorted(comp)))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    comps.sort(key=lambda c: c[0])
    where = {v: c for c, members in enumerate(comps) for v in members}
    dag = frozenset(
        (where[j], where[i]) for j in range(n) for i in succ[j] if where[i] != where[j]
    )
    return Condensation(tuple(comps), dag)


@dataclass(frozen=True)
class SpectralResult:
    lower: Fraction
    upper: Fraction
    scc_witness: tuple
    iterations: int
    certified: bool = True
    components: tuple = field(default=(), compare=False)  # per-SCC (members, lower, upper)

    @property
    def value(self) -> float:
        return float((self.lower + self.upper) / 2)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        return self.lower <= as_fraction(x) <= self.upper

    def intersects(self, other: "SpectralResult") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def to_json(self, digits: int = 15) -> dict:
        return {
            "lower": decimal_string(self.lower, digits, "floor"),
            "upper": decimal_string(self.upper, digits, "ceil"),
            "precision": digits,
            "scc_witness": list(self.scc_witness),
            "iterations": self.iterations,
            "certified": self.certified,
        }


def decimal_string(x: Fraction, digits: int, rounding: str = "nearest") -> str:
    """Fixed-point decimal with ``digits`` places, rounded as requested (no floats involved)."""
    x = as_fraction(x)
    scaled = x * 10**digits
    if rounding == "floor":
        q = scaled.numerator // scaled.denominator
    elif rounding == "ceil":
        q = -((-scaled.numerator) // scaled.denominator)
    else:
        q = round(scaled)
    sign = "-" if q < 0 else ""
    q = abs(q)
    if digits == 0:
        return f"{sign}{q}"
    s = str(q).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def _collatz_wielandt(B, tol: Fraction, max_iter: int):
    """Enclose the Perron root of an irreducible integer matrix ``B``.

    Iterates ``v <- (B + I) v`` from the all-ones vector.  ``v`` is kept as an
    integer vector rescaled to a fixed number of bits after every step; the
    bounds ``min/max (Mv)_i / v_i`` are valid for any positive ``v``, so the
    rounding never affects soundness, only the speed of convergence.
    """
    m = len(B)
    M = [[B[i][j] + (1 if i == j else 0) for j in range(m)] for i in range(m)]
    rows = [[(j, M[i][j]) for j in range(m) if M[i][j]] for i in range(m)]
    bits = max(64, (tol.denominator // max(tol.numerator, 1)).bit_length() + 64)
    v = [1] * m
    best = None
    stall = 0
    for it in range(1, max_iter + 1):
        w = [sum(c * v[j] for j, c in row) for row in rows]
        lo = min((Fraction(w[i], v[i]) for i in range(m)))
        hi = max((Fraction(w[i], v[i]) for i in range(m)))
        if best is None or hi - lo < best[1] - best[0]:
            best = (lo, hi)
            stall = 0
        else:
            stall += 1
            if stall > 50:
                bits *= 2
                stall = 0
        if best[1] - best[0] <= tol:
            return best[0] - 1, best[1] - 1, it, True
        top = max(w)
        shift = top.bit_length() - bits
        if shift > 0:
            v = [max(1, (x + (1 << (shift - 1))) >> shift) for x in w]
        else:
            v = w
    return best[0] - 1, best[1] - 1, max_iter, False


def spectral_radius(A, tol=DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """Certified enclosure of the spectral radius of a nonnegative integer matrix.

    The matrix is split into strongly connected components; each irreducible
    block gets its own Collatz-Wielandt enclosure and the overall enclosure is
    the componentwise maximum.  Raises :class:`ToleranceNotReachedError` (with
    the best non-certified result attached) when the iteration cap is hit.
    """
    tol = as_fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    n = len(A)
    if n == 0 or any(len(r) != n for r in A):
        raise ValueError("matrix must be square and nonempty")
    if any(x < 0 for r in A for x in r):
        raise ValueError("matrix must be nonnegative")
    cond = scc_decompose(A)
    parts = []
    total_iter = 0
    certified = True
    for members in cond.components:
        if len(members) == 1:
            x = Fraction(A[members[0]][members[0]])
            parts.append((members, x, x))
            continue
        B = [[A[i][j] for j in members] for i in members]
        lo, hi, it, ok = _collatz_wielandt(B, tol, max_iter)
        total_iter += it
        certified &= ok
        parts.append((members, lo, hi))
    lower = max(p[1] for p in parts)
    upper = max(p[2] for p in parts)
    witness = max(parts, key=lambda p: (p[2], p[1]))[0]
    result = SpectralResult(lower, upper, witness, total_iter, certified, tuple(parts))
    if not certified:
        raise ToleranceNotReachedError(
            f"enclosure width {float(result.width):.3g} > {float(tol):.3g} after {max_iter} iterations",
            result,
        )
    return result


@dataclass(frozen=True)
class LogEnclosure:
    """Outward-rounded enclosure of ``log_k`` of a spectral enclosure."""

    lower: Fraction
    upper: Fraction
    base: int
    spectral: SpectralResult

    @property
    def value(self) -> float:
        return float((self.lower + self.upper) / 2)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def intersects(self, other: "LogEnclosure") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def contains(self, x) -> bool:
        return self.lower <= as_fraction(x) <= self.upper

    def to_json(self, digits: int = 15) -> dict:
        return {
            "value": decimal_string(Fraction((self.lower + self.upper) / 2), digits),
            "lower": decimal_string(self.lower, digits, "floor"),
            "upper": decimal_string(self.upper, digits, "ceil"),
            "precision": digits,
            "base": self.base,
            "rho": self.spectral.to_json(digits),
        }


def working_precision(tol) -> int:
    """Bits for interval logs: enough that rounding stays far below ``tol``."""
    tol = as_fraction(tol)
    return max(256, (tol.denominator // max(tol.numerator, 1)).bit_length() + 64)


def log_enclosure(result: SpectralResult, k: int, floor_one: bool = False, prec: int = 256) -> LogEnclosure:
    """Interval evaluation of ``log_k`` over ``[lower, upper]`` at ``prec`` bits.

    With ``floor_one`` the lower end of the root is clamped at 1, which is
    valid for subdivision matrices (every column has a positive sum).
    """
    lo, hi = result.lower, result.upper
    if floor_one:
        lo = max(lo, Fraction(1))
        hi = max(hi, Fraction(1))
    if lo <= 0:
        raise ValueError("log of a nonpositive spectral radius")
    old = iv.prec
    iv.prec = prec
    try:
        interval = iv.log(iv.mpf(lo.numerator) / lo.denominator) / iv.log(iv.mpf(k))
        high = iv.log(iv.mpf(hi.numerator) / hi.denominator) / iv.log(iv.mpf(k))
        a = Fraction(*to_rational(interval._mpi_[0]))
        b = Fraction(*to_rational(high._mpi_[1]))
    finally:
        iv.prec = old
    # exact powers of k have exact logarithms
    e = _exact_log(lo, k)
    if e is not None:
        a = Fraction(e)
    e = _exact_log(hi, k)
    if e is not None:
        b = Fraction(e)
    return LogEnclosure(a, b, k, result)


def _exact_log(x: Fraction, k: int):
    if x.denominator != 1:
        return None
    n, e = x.numerator, 0
    while n % k == 0:
        n //= k
        e += 1
    return e if n == 1 else None


def dimension(kp, tol=DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> LogEnclosure:
    """Hausdorff dimension ``log_k rho(A)`` of the set presented by a kernel."""
    return log_enclosure(spectral_radius(kp.matrix, tol, max_iter), kp.k, True, working_precision(tol))
