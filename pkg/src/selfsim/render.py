"""Level-p approximations as SVG and binary PGM.

Both formats use mathematical orientation: the origin is the lower-left
corner, so the second coordinate grows upward.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, ResolutionMismatchError, UnsupportedDimensionError
from .kernel import KernelPresentation

DEFAULT_WIDTH = 1024
DEFAULT_CUBE_CAP = 10**7


@dataclass(frozen=True)
class CubeList:
    """Level-``p`` grid cubes by integer position in ``[0, k**p)**d``."""

    k: int
    d: int
    p: int
    cubes: tuple
    offsets: tuple = ()

    @property
    def grid(self) -> int:
        return self.k ** self.p

    def __len__(self) -> int:
        return len(self.cubes)


def level_approximation(kp: KernelPresentation, i: int = 0, p: int = 0,
                        cap: int = DEFAULT_CUBE_CAP) -> CubeList:
    """Every level-``p`` cube meeting ``X_i``, read off the kernel transition table."""
    if p < 0:
        raise ValueError("depth must be >= 0")
    k, d = kp.k, kp.d
    layer = [((0,) * d, i)]
    for _ in range(p):
        nxt = []
        for pos, j in layer:
            for b, t in kp.table[j].items():
                nxt.append((tuple(k * x + y for x, y in zip(pos, b)), t))
        if len(nxt) > cap:
            raise BudgetExceededError(f"level approximation exceeds {cap} cubes")
        layer = nxt
    return CubeList(k, d, p, tuple(sorted(pos for pos, _ in layer)))


def _planar(c: CubeList, slice_):
    """Positions projected to the one or two drawn axes."""
    if c.d <= 2:
        if slice_:
            raise UnsupportedDimensionError("slices apply only for d >= 3")
        return c.d, c.cubes
    if not slice_:
        raise UnsupportedDimensionError(f"cannot draw d={c.d} without a slice")
    fixed = dict(slice_)
    if len(fixed) != c.d - 2 or not all(0 <= a < c.d for a in fixed):
        raise UnsupportedDimensionError(f"a slice must fix exactly {c.d - 2} of the {c.d} axes")
    free = [a for a in range(c.d) if a not in fixed]
    out = sorted({tuple(pos[a] for a in free) for pos in c.cubes
                  if all(pos[a] == v for a, v in fixed.items())})
    return 2, out


def render_svg(c: CubeList, width: int = DEFAULT_WIDTH, slice=None) -> str:
    """Deterministic SVG: one ``rect`` per cube, coordinates in grid units.

    ``slice`` maps axis -> fixed level-``p`` position for ``d >= 3``.
    """
    dim, cubes = _planar(c, slice)
    n = c.grid
    if dim == 1:
        height = max(1, width // 16)
        view = f"0 0 {n} 1"
        rects = [f'<rect x="{x}" y="0" width="1" height="1"/>' for (x,) in cubes]
    else:
        height = width
        view = f"0 0 {n} {n}"
        rects = [f'<rect x="{x}" y="{n - 1 - y}" width="1" height="1"/>' for x, y in cubes]
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="{view}" preserveAspectRatio="none" shape-rendering="crispEdges">\n'
        '<g fill="#000000">\n'
    )
    return head + "".join(r + "\n" for r in rects) + "</g>\n</svg>\n"


def render_pgm(c: CubeList, resolution: int | None = None, slice=None) -> bytes:
    """Binary P5 bitmap, ``resolution`` pixels square; a pixel is 0 iff its cell is listed."""
    dim, cubes = _planar(c, slice)
    if dim != 2:
        raise UnsupportedDimensionError("PGM output needs a two-dimensional picture")
    n = c.grid
    resolution = n if resolution is None else resolution
    if resolution <= 0 or resolution % n:
        raise ResolutionMismatchError(f"resolution {resolution} is not a positive multiple of {n}")
    scale = resolution // n
    rows = [bytearray(b"\xff" * n) for _ in range(n)]
    for x, y in cubes:
        rows[n - 1 - y][x] = 0
    body = bytearray()
    for row in rows:
        line = bytes(v for v in row for _ in range(scale))
        body += line * scale
    return f"P5\n{resolution} {resolution}\n255\n".encode("ascii") + bytes(body)
