"""Golden render cases; regenerate with ``python3 tests/golden_cases.py`` after an intended change."""

from pathlib import Path

from selfsim.corpus import builtin_automaton
from selfsim.kernel import compute_kernel
from selfsim.render import level_approximation, render_pgm, render_svg
from selfsim.specdsl import parse_spec, validate

GOLDEN = Path(__file__).parent / "golden"


def _kernel(source):
    if source.startswith("base"):
        return compute_kernel(validate(parse_spec(source)))
    return compute_kernel(builtin_automaton(source))


CASES = {
    "cantor-p3.svg": ("cantor", 3, "svg", None),
    "carpet-p2.svg": ("sierpinski-carpet", 2, "svg", None),
    "vicsek-p3.svg": ("vicsek", 3, "svg", None),
    "carpet-p1-r9.pgm": ("sierpinski-carpet", 1, "pgm", 9),
    "carpet-p3-r54.pgm": ("sierpinski-carpet", 3, "pgm", 54),
    "full-cube-p2-r16.pgm": ("full-cube-2-2", 2, "pgm", 16),
    "singleton2d-p2-r9.pgm": ("base 3\ndim 2\nallow (0,0)\n", 2, "pgm", 9),
}


def render_case(name):
    source, p, kind, res = CASES[name]
    cubes = level_approximation(_kernel(source), 0, p)
    if kind == "svg":
        return render_svg(cubes).encode("utf-8")
    return render_pgm(cubes, res)


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for case in CASES:
        (GOLDEN / case).write_bytes(render_case(case))
        print("wrote", case)
