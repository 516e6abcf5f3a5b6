import functools
from pathlib import Path

import pytest

from selfsim.corpus import builtin_automaton
from selfsim.kernel import compute_kernel
from selfsim.specdsl import parse_spec, validate

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

CORPUS = [
    "cantor", "singleton-zero", "full-cube-2-1", "full-cube-2-2", "full-cube-3-1",
    "full-cube-3-2", "cantor-square", "vicsek", "sierpinski-carpet",
]

CANTOR_TEXT = "base 3\ndim 1\nallow (0)\nallow (2)\n"


@functools.lru_cache(maxsize=None)
def kernel_for(name):
    return compute_kernel(builtin_automaton(name))


def kernel_from_text(text):
    return compute_kernel(validate(parse_spec(text)))


@pytest.fixture(scope="session")
def cantor_kernel():
    return kernel_from_text(CANTOR_TEXT)


ACCEPTANCE_LINES = {}


def record_criterion(number, passed, detail):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
