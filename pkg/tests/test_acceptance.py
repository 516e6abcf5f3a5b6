"""Acceptance suite: one test and one PASS/FAIL line per criterion."""

import itertools
import math
import random
import time
from fractions import Fraction

from selfsim.boxoracle import builtin_set, count_boxes_upto
from selfsim.core import SetAutomaton, language_equal
from selfsim.corpus import builtin_automaton
from selfsim.entropy import cube_count, entropy_estimate, verify_theorem, word_counts
from selfsim.errors import SpecError
from selfsim.ggdc import build_ggdc, ggdc_dimension, validate_ggdc
from selfsim.kernel import compute_kernel, rebase
from selfsim.saturate import saturate
from selfsim.specdsl import parse_spec, validate
from selfsim.spectral import dimension, spectral_radius

from conftest import CANTOR_TEXT, CORPUS, kernel_for, record_criterion

A = [[2, 0, 0, 0], [1, 0, 0, 0], [0, 1, 1, 0], [0, 1, 0, 1]]
A2 = [[4, 0, 0, 0], [2, 0, 0, 0], [1, 1, 1, 0], [1, 1, 0, 1]]
A3 = [[8, 0, 0, 0], [4, 0, 0, 0], [3, 1, 1, 0], [3, 1, 0, 1]]
A4 = [[16, 0, 0, 0], [8, 0, 0, 0], [7, 1, 1, 0], [7, 1, 0, 1]]
LOG3_2 = 0.6309297535714574


def matmul(X, Y):
    n = len(X)
    return [[sum(X[i][t] * Y[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def point_set(k, words):
    """Saturated automaton of the points ``0.v v v ...`` for constant digits v."""
    states = list(range(len(words)))
    edges = [(q, (v,), q) for q, v in enumerate(words)]
    return saturate(SetAutomaton.from_edges(k, 1, states, states, edges)).automaton


def cantor_alignment(kp):
    """Permutation fixing 0 that sends the ordering (C, {0,1}, {0}, {1}) to ours, or None."""
    cantor = saturate(builtin_automaton("cantor")).automaton
    targets = [cantor, point_set(3, [0, 2]), point_set(3, [0]), point_set(3, [2])]
    for perm in itertools.permutations(range(1, kp.n)):
        order = (0,) + perm
        if all(language_equal(kp.elements[order[t]], targets[t]) for t in range(4)):
            return order
    return None


def test_criterion_1_cantor_kernel():
    start = time.perf_counter()
    kp = compute_kernel(validate(parse_spec(CANTOR_TEXT)))
    elapsed = time.perf_counter() - start
    order = cantor_alignment(kp) if kp.n == 4 else None
    matrix_ok = order is not None and all(
        kp.matrix[order[i]][order[j]] == A[i][j] for i in range(4) for j in range(4)
    )
    ok = kp.n == 4 and order is not None and matrix_ok and elapsed < 1.0
    record_criterion(1, ok, f"{kp.n} elements, order {order}, A={list(map(list, kp.matrix))}, {elapsed:.3f}s")
    assert ok


def test_criterion_2_matrix_powers(cantor_kernel):
    order = cantor_alignment(cantor_kernel)
    M = [[cantor_kernel.matrix[order[i]][order[j]] for j in range(4)] for i in range(4)]
    P2 = matmul(M, M)
    P3 = matmul(P2, M)
    P4 = matmul(P3, M)
    ok = (P2, P3, P4) == (A2, A3, A4)
    firsts = [tuple(r[0] for r in P) for P in (P2, P3, P4)]
    record_criterion(2, ok, f"first columns {firsts}")
    assert ok


def test_criterion_3_dimension(cantor_kernel):
    tol = Fraction(1, 10**12)
    rho = spectral_radius(cantor_kernel.matrix, tol)
    dim = dimension(cantor_kernel, tol)
    err = abs(dim.value - LOG3_2)
    ok = rho.contains(2) and rho.width <= tol and err <= 1e-11
    record_criterion(3, ok, f"rho in [{float(rho.lower)}, {float(rho.upper)}], width {float(rho.width):.1e}, "
                            f"dim {dim.value!r}, error {err:.1e}")
    assert ok


def test_criterion_4_entropy_counts():
    start = time.perf_counter()
    kp = compute_kernel(validate(parse_spec(CANTOR_TEXT)))
    counts = word_counts(kp, 60)
    formula = all(counts[p] == 5 * 2 ** (p - 1) - 2 for p in range(2, 61))
    coincide = all(counts[p] == cube_count(kp, 0, p) for p in range(61))
    _, ratio = entropy_estimate(kp, 60)
    elapsed = time.perf_counter() - start
    err = abs(ratio - math.log(2) / math.log(3))
    ok = formula and coincide and err <= 1e-9 and elapsed < 1.0
    record_criterion(4, ok, f"closed form {formula}, P=cube_count {coincide}, ratio error {err:.1e}, "
                            f"{elapsed:.3f}s")
    assert ok


def test_criterion_5_ggdc(cantor_kernel):
    g = build_ggdc(cantor_kernel)
    labels = {v: f"{v[0]}{v[1] + 1}{v[2] + 1}" for v in g.vertices}
    expected = {
        ("111", "121"), ("211", "121"), ("111", "211"), ("211", "111"), ("111", "111"), ("211", "211"),
        ("121", "132"), ("121", "142"), ("132", "133"), ("142", "144"), ("133", "133"), ("144", "144"),
    }
    edges = {(labels[u], labels[w]) for u, w in g.edges}
    axioms = validate_ggdc(g)
    tol = Fraction(1, 10**9)
    rt = ggdc_dimension(g, tol).spectral
    ra = spectral_radius(cantor_kernel.matrix, tol)
    ok = (len(g.vertices) == 7 and len(g.edges) == 12 and edges == expected and axioms["passed"]
          and rt.intersects(ra) and rt.width <= tol and ra.width <= tol)
    record_criterion(5, ok, f"{len(g.vertices)} vertices, {len(g.edges)} edges, edge set match {edges == expected}, "
                            f"axioms {'PASS' if axioms['passed'] else 'FAIL'}, enclosures intersect {rt.intersects(ra)}")
    assert ok


def test_criterion_6_dimension_equals_entropy():
    failures = []
    for name in CORPUS:
        kp = kernel_for(name)
        report = verify_theorem(kp, depth=30, raise_on_fail=False)
        if not report.passed or not report.dimension.intersects(report.entropy):
            failures.append(name)
    ok = not failures
    record_criterion(6, ok, f"{len(CORPUS) - len(failures)}/{len(CORPUS)} corpus sets pass, p <= 30")
    assert ok


def test_criterion_7_oracle_equivalence():
    mismatches = []
    carpet_n1 = None
    for name in CORPUS:
        counts = count_boxes_upto(builtin_set(name), 6)
        kp = kernel_for(name)
        if counts != [cube_count(kp, 0, p) for p in range(7)]:
            mismatches.append(name)
        if name == "sierpinski-carpet":
            carpet_n1 = counts[1]
    ok = not mismatches and carpet_n1 == 9
    record_criterion(7, ok, f"mismatches {mismatches}, carpet N_1 = {carpet_n1}")
    assert ok


def test_criterion_8_base_change():
    errors = {}
    for name in ("cantor", "cantor-square"):
        a = saturate(builtin_automaton(name))
        tol = Fraction(1, 10**12)
        errors[name] = abs(dimension(compute_kernel(a), tol).value - dimension(compute_kernel(rebase(a, 2)), tol).value)
    ok = all(e <= 1e-9 for e in errors.values())
    record_criterion(8, ok, ", ".join(f"{n} diff {e:.1e}" for n, e in errors.items()))
    assert ok


TOKENS = ["base", "dim", "state", "edge", "allow", "initial", "A", "B", "C", "q", "(", ")", ",", "-", "->",
          "-(", ")->", "0", "1", "2", "3", "4", "36", "99", "\n", " ", "\t", "# note\n", "@", "x_1", "é"]


def fuzz_inputs(count, seed=2024):
    rng = random.Random(seed)
    valid = [CANTOR_TEXT, "base 3\ndim 2\nstate A initial\nstate B\nedge A -(1,1)-> B\nedge B -(0,2)-> A\n"]
    for n in range(count):
        kind = n % 3
        if kind == 0:
            yield " ".join(rng.choice(TOKENS) for _ in range(rng.randint(0, 256)))
        elif kind == 1:
            text = list(rng.choice(valid))
            for _ in range(rng.randint(1, 6)):
                pos = rng.randrange(len(text) + 1)
                op = rng.random()
                if op < 0.4 and text:
                    del text[min(pos, len(text) - 1)]
                elif op < 0.8:
                    text.insert(pos, rng.choice(TOKENS))
                else:
                    text.insert(pos, chr(rng.randint(0, 0x2FF)))
            yield "".join(text)[:256]
        else:
            header = f"base {rng.randint(0, 6)} dim {rng.randint(0, 3)}\n"
            yield header + " ".join(rng.choice(TOKENS) for _ in range(rng.randint(0, 60)))


def test_criterion_9_saturation_and_fuzz():
    not_idempotent = []
    for name in CORPUS:
        once = saturate(builtin_automaton(name)).automaton
        if not language_equal(once, saturate(once).automaton):
            not_idempotent.append(name)
    crashes = []
    accepted = rejected = 0
    for text in fuzz_inputs(10_000):
        try:
            spec = parse_spec(text)
        except SpecError as exc:
            rejected += 1
            if exc.line is None:
                crashes.append((text, "unpositioned " + repr(exc)))
            continue
        except Exception as exc:  # anything else is a crash
            crashes.append((text, repr(exc)))
            continue
        try:
            validate(spec)
            accepted += 1
        except SpecError:
            rejected += 1
        except Exception as exc:
            crashes.append((text, repr(exc)))
    ok = not not_idempotent and not crashes and accepted + rejected == 10_000
    record_criterion(9, ok, f"idempotent on {len(CORPUS) - len(not_idempotent)}/{len(CORPUS)}, "
                            f"fuzz 10000 inputs: {accepted} valid, {rejected} rejected, {len(crashes)} crashes")
    assert ok, crashes[:3]
