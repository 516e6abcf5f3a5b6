"""Graph-directed construction realizing the disjoint union of kernel elements.

Kernel element ``X_j`` is placed in the block ``[0,1]^d + (2j, 0, ..., 0)``.
Vertex ``(h, i, j)`` is the ``h``-th 1/k-scaled copy of ``X_i`` inside ``X_j``
(copies ordered by their digit tuple); its seed is the closed grid cube of
that digit inside block ``j``.  Vertex ``(h, i, j)`` has an edge to every
vertex ``(r, s, i)`` and every edge out of it carries the same similarity,
mapping block ``i`` onto the seed of ``(h, i, j)``.

Indices are 0-based here; exported labels use 1-based element indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PathBudgetExceededError
from .kernel import KernelPresentation
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, LogEnclosure, log_enclosure, scc_decompose, spectral_radius, working_precision

DEFAULT_CUBE_CAP = 10**6


@dataclass(frozen=True)
class SimilarityMap:
    """``x -> ratio * x + translation``."""

    ratio: Fraction
    translation: tuple

    def apply(self, point) -> tuple:
        return tuple(self.ratio * x + t for x, t in zip(point, self.translation))

    def apply_cube(self, cube: "Cube") -> "Cube":
        return Cube(self.apply(cube.corner), self.ratio * cube.side)


@dataclass(frozen=True, order=True)
class Cube:
    """Closed axis-parallel cube ``corner + [0, side]^d``."""

    corner: tuple
    side: Fraction

    def contains(self, other: "Cube") -> bool:
        return all(a <= b and b + other.side <= a + self.side for a, b in zip(self.corner, other.corner))

    def interiors_overlap(self, other: "Cube") -> bool:
        return all(a < b + other.side and b < a + self.side for a, b in zip(self.corner, other.corner))


def block_offset(j: int, d: int) -> tuple:
    return (Fraction(2 * j),) + (Fraction(0),) * (d - 1)


@dataclass(frozen=True)
class GgdcGraph:
    k: int
    d: int
    vertices: tuple              # (h, i, j), h 1-based
    digits: dict                 # vertex -> digit tuple realizing the copy
    seeds: dict                  # vertex -> Cube
    maps: dict                   # vertex -> SimilarityMap (shared by all its out-edges)
    edges: tuple                 # (u, v) pairs
    matrix: tuple = field(default=(), compare=False)  # subdivision matrix it was built from

    def successors(self, u) -> list:
        return [v for a, v in self.edges if a == u]

    def adjacency(self) -> tuple:
        """Unweighted adjacency ``Ã[u][v] = 1`` for an edge ``u -> v``."""
        index = {v: x for x, v in enumerate(self.vertices)}
        M = [[0] * len(self.vertices) for _ in self.vertices]
        for u, v in self.edges:
            M[index[u]][index[v]] = 1
        return tuple(tuple(r) for r in M)


def build_ggdc(kp: KernelPresentation) -> GgdcGraph:
    k, d = kp.k, kp.d
    vertices, digits, seeds, maps = [], {}, {}, {}
    ratio = Fraction(1, k)
    for j in range(kp.n):
        for i in range(kp.n):
            for h, b in enumerate(kp.copies(i, j), start=1):
                v = (h, i, j)
                vertices.append(v)
                digits[v] = b
                corner = tuple(Fraction(x, k) + o for x, o in zip(b, block_offset(j, d)))
                seeds[v] = Cube(corner, ratio)
                # block i -> seed: x -> (x - off_i)/k + corner
                translation = tuple(c - ratio * o for c, o in zip(corner, block_offset(i, d)))
                maps[v] = SimilarityMap(ratio, translation)
    vertices.sort(key=lambda v: (v[2], v[1], v[0]))
    by_container: dict = {}
    for v in vertices:
        by_container.setdefault(v[2], []).append(v)
    edges = tuple((u, w) for u in vertices for w in by_container.get(u[1], []))
    return GgdcGraph(k, d, tuple(vertices), digits, seeds, maps, edges, kp.matrix)


def validate_ggdc(g: GgdcGraph) -> dict:
    """Check the construction axioms with exact arithmetic; violations are returned, not raised."""
    violations = []
    out_degree = {v: 0 for v in g.vertices}
    for u, _ in g.edges:
        out_degree[u] += 1
    for v in g.vertices:
        if out_degree[v] == 0:
            violations.append({"axiom": "liveness", "vertex": list(v)})

    for v in g.vertices:
        if g.seeds[v].side <= 0:
            violations.append({"axiom": "nonempty-interior", "vertex": list(v)})
    ordered = sorted(g.vertices, key=lambda v: g.seeds[v].corner)
    for x, u in enumerate(ordered):
        cu = g.seeds[u]
        for w in ordered[x + 1:]:
            cw = g.seeds[w]
            if cw.corner[0] >= cu.corner[0] + cu.side:
                break
            if cu.interiors_overlap(cw):
                violations.append({"axiom": "seed-interiors-disjoint", "vertices": [list(u), list(w)]})

    images: dict = {}
    for u, w in g.edges:
        img = g.maps[u].apply_cube(g.seeds[w])
        if not g.seeds[u].contains(img):
            violations.append({"axiom": "image-containment", "edge": [list(u), list(w)]})
        images.setdefault(u, []).append((w, img))
    for u, lst in images.items():
        for x in range(len(lst)):
            for y in range(x + 1, len(lst)):
                if lst[x][1].interiors_overlap(lst[y][1]):
                    violations.append({"axiom": "image-interiors-disjoint",
                                       "edges": [[list(u), list(lst[x][0])], [list(u), list(lst[y][0])]]})

    # every cycle lies inside an SCC; ratio < 1 on all SCC-internal edges suffices
    index = {v: x for x, v in enumerate(g.vertices)}
    adj = g.adjacency()
    cond = scc_decompose([[adj[c][r] for c in range(len(adj))] for r in range(len(adj))])
    comp = {v: cond.component_of(index[v]) for v in g.vertices}
    for u, w in g.edges:
        if comp[u] == comp[w] and not 0 < g.maps[u].ratio < 1:
            violations.append({"axiom": "cycle-contraction", "edge": [list(u), list(w)]})

    return {"passed": not violations, "violations": violations}


def ggdc_dimension(g: GgdcGraph, tol=DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> LogEnclosure:
    """All ratios are 1/k, so ``rho(A_beta) = 1`` solves to ``beta = log_k rho(Ã)``."""
    return log_enclosure(spectral_radius(g.adjacency(), tol, max_iter), g.k, True, working_precision(tol))


def level_sets(g: GgdcGraph, p: int, cap: int = DEFAULT_CUBE_CAP) -> list[Cube]:
    """Level ``p`` of the construction: images ``T_sigma(J_sigma(p))`` over all length-``p`` paths.

    Computed vertex by vertex: ``S_0(u) = {J_u}`` and
    ``S_p(u) = union over u -> w of T_u(S_{p-1}(w))``.
    """
    if p < 0:
        raise ValueError("depth must be >= 0")
    level = {v: {g.seeds[v]} for v in g.vertices}
    for _ in range(p):
        nxt = {}
        total = 0
        for u in g.vertices:
            cubes = set()
            T = g.maps[u]
            for w in g.successors(u):
                cubes.update(T.apply_cube(c) for c in level[w])
            total += len(cubes)
            if total > cap:
                raise PathBudgetExceededError(f"level set exceeds {cap} cubes")
            nxt[u] = cubes
        level = nxt
    out = set()
    for cubes in level.values():
        out |= cubes
    return sorted(out)


def _label(v) -> str:
    h, i, j = v[0], v[1] + 1, v[2] + 1
    if max(h, i, j) < 10:
        return f"{h}{i}{j}"
    return f"{h},{i},{j}"


def to_dot(g: GgdcGraph) -> str:
    lines = ["digraph ggdc {"]
    for v in g.vertices:
        lines.append(f'  v{v[0]}_{v[1]}_{v[2]} [label="{_label(v)}"];')
    for u, w in g.edges:
        lines.append(f"  v{u[0]}_{u[1]}_{u[2]} -> v{w[0]}_{w[1]}_{w[2]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _q(x: Fraction) -> list:
    return [x.numerator, x.denominator]


def to_json(g: GgdcGraph) -> dict:
    return {
        "k": g.k,
        "d": g.d,
        "vertices": [
            {
                "h": v[0], "i": v[1], "j": v[2], "label": _label(v),
                "digits": list(g.digits[v]),
                "seed": {"corner": [_q(c) for c in g.seeds[v].corner], "side": _q(g.seeds[v].side)},
                "map": {"ratio": _q(g.maps[v].ratio), "translation": [_q(t) for t in g.maps[v].translation]},
            }
            for v in g.vertices
        ],
        "edges": [[list(u), list(w)] for u, w in g.edges],
    }
