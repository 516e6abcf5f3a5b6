import math

import pytest

from selfsim.boxoracle import (
    BoxCount,
    box_dimension_estimate,
    builtin_names,
    builtin_set,
    count_boxes,
    count_boxes_upto,
)
from selfsim.entropy import cube_count, cube_counts, word_counts
from selfsim.errors import BudgetExceededError, UnknownSetError

from conftest import CORPUS, kernel_for


def test_manifest_lists_the_corpus():
    assert builtin_names() == CORPUS


def test_builtin_lookup():
    s = builtin_set("cantor")
    assert (s.k, s.d, s.branches) == (3, 1, ((0,), (2,)))
    assert len(builtin_set("full-cube").branches) == 4
    assert builtin_set("full-cube-3-2").branches[-1] == (2, 2)
    carpet = builtin_set("sierpinski-carpet")
    assert len(carpet.branches) == 8 and (1, 1) not in carpet.branches
    assert builtin_set("singleton") == builtin_set("singleton-zero")


@pytest.mark.parametrize("name", ["koch", "full-cube-x", "full-cube-2-9", "full-cube-1-1"])
def test_unknown_sets(name):
    with pytest.raises(UnknownSetError):
        builtin_set(name)


def test_reference_counts():
    assert count_boxes(builtin_set("cantor"), 2) == BoxCount(2, 8)
    assert count_boxes(builtin_set("sierpinski-carpet"), 1).count == 9


def test_full_cube_counts():
    s = builtin_set("full-cube-2-2")
    assert count_boxes_upto(s, 6) == [4 ** p for p in range(7)]


def test_cantor_closed_form():
    counts = count_boxes_upto(builtin_set("cantor"), 9)
    assert counts[1] == 3
    assert all(counts[p] == 5 * 2 ** (p - 1) - 2 for p in range(2, 10))


@pytest.mark.parametrize("name", CORPUS)
def test_pipeline_equality(name):
    s = builtin_set(name)
    kp = kernel_for(name)
    pmax = 6 if s.k ** s.d <= 9 and name not in ("full-cube-3-2", "sierpinski-carpet") else 5
    counts = count_boxes_upto(s, pmax)
    assert counts == [cube_count(kp, 0, p) for p in range(pmax + 1)]
    words = word_counts(kp, pmax)
    for p in range(pmax + 1):
        assert counts[p] <= words[p] <= sum(cube_counts(kp, p))
        if p:
            assert counts[p] <= s.k ** s.d * counts[p - 1]


@pytest.mark.parametrize("name", ["cantor", "vicsek", "cantor-square", "sierpinski-carpet"])
def test_submultiplicative(name):
    counts = count_boxes_upto(builtin_set(name), 8 if name == "cantor" else 5)
    top = len(counts) - 1
    for p in range(1, 5):
        for q in range(1, 5):
            if p + q <= top:
                assert counts[p + q] <= counts[p] * counts[q]


def test_dimension_estimates():
    _, ratio = box_dimension_estimate(builtin_set("cantor"), 10)
    assert abs(ratio - math.log(2, 3)) < 2e-3
    assert box_dimension_estimate(builtin_set("full-cube-2-2"), 4) == (2.0, 2.0)
    _, ratio = box_dimension_estimate(builtin_set("vicsek"), 6)
    assert abs(ratio - math.log(5, 3)) < 5e-2
    with pytest.raises(ValueError):
        box_dimension_estimate(builtin_set("cantor"), 0)


def test_budget():
    with pytest.raises(BudgetExceededError):
        count_boxes(builtin_set("full-cube-2-2"), 6, cap=100)
