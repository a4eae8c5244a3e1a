"""Constructors for the graph families and edge-length families under study:
regular-tree truncations, complete graphs, cycles, hexagonal-lattice regions,
perfect-matching settings, line-solution chains, half-half settings, and
two-progression settings.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass

from .dynamics import Setting, t1_next_ratios
from .errors import (
    BadParams,
    InconsistentParams,
    InvalidRatioChain,
    NonpositiveLength,
    NotPerfect,
    TooLarge,
)
from .graph import Region, WeightedGraph, build_graph, edge_key, extract_region

_TreeShape = namedtuple("_TreeShape", "vertices edges parent children depth_of")


def _tree_shape(q: int, depth: int) -> _TreeShape:
    """Rooted truncation of the degree-(q+1) tree, breadth-first ids."""
    root = "0"
    vertices = [root]
    parent = {root: None}
    children = {root: []}
    depth_of = {root: 0}
    edges = []
    frontier = [root]
    counter = 1
    for level in range(1, depth + 1):
        nxt = []
        for v in frontier:
            want = q + 1 if v == root else q
            for _ in range(want):
                w = str(counter)
                counter += 1
                vertices.append(w)
                parent[w] = v
                children[v].append(w)
                children[w] = []
                depth_of[w] = level
                edges.append((v, w))
                nxt.append(w)
        frontier = nxt
    return _TreeShape(vertices, edges, parent, children, depth_of)


def gen_tree(q: int, depth: int) -> WeightedGraph:
    """Unit-length truncation of the tree where every vertex has degree q+1.

    The root sits at depth 0 and each vertex within depth-1 carries its full
    q+1 neighbors; the depth ring consists of cut leaves.
    """
    if q < 1 or depth < 1:
        raise BadParams("need q >= 1 and depth >= 1")
    shape = _tree_shape(q, depth)
    return build_graph(shape.vertices, [(u, v, 1.0) for u, v in shape.edges])


def gen_complete(n: int) -> WeightedGraph:
    if n < 3:
        raise BadParams("need n >= 3")
    verts = [str(k) for k in range(n)]
    edges = [(verts[a], verts[b], 1.0) for a in range(n) for b in range(a + 1, n)]
    return build_graph(verts, edges)


def gen_cycle(n: int) -> WeightedGraph:
    if n < 3:
        raise BadParams("need n >= 3")
    verts = [str(k) for k in range(n)]
    edges = [(verts[k], verts[(k + 1) % n], 1.0) for k in range(n)]
    return build_graph(verts, edges)


def constant_setting(g: WeightedGraph, a: float) -> Setting:
    if not a > 0:
        raise NonpositiveLength(f"constant length must be positive, got {a}")
    return Setting({key: float(a) for key in g.lengths()})


# ---------------------------------------------------------------------------
# perfect matchings


@dataclass(frozen=True)
class Matching:
    """A set of pairwise vertex-disjoint edges."""

    edges: frozenset

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u in seen or v in seen:
                raise BadParams("matching edges share a vertex")
            seen.add(u)
            seen.add(v)

    def covered(self):
        out = set()
        for u, v in self.edges:
            out.add(u)
            out.add(v)
        return out

    def is_perfect(self, g: WeightedGraph) -> bool:
        return self.covered() == set(g.vertices)


def find_perfect_matching(g: WeightedGraph):
    """A perfect matching of g, or None.  Exhaustive with memoized failure
    states; limited to 24 vertices."""
    verts = g.vertices
    if len(verts) > 24:
        raise TooLarge("perfect-matching search is capped at 24 vertices")
    if len(verts) % 2 == 1:
        return None
    dead = set()

    def extend(unmatched):
        if not unmatched:
            return []
        if unmatched in dead:
            return None
        u = min(unmatched, key=repr)
        for v in g.neighbors(u):
            if v in unmatched:
                rest = extend(unmatched - {u, v})
                if rest is not None:
                    return [edge_key(u, v)] + rest
        dead.add(unmatched)
        return None

    picked = extend(frozenset(verts))
    if picked is None:
        return None
    return Matching(edges=frozenset(picked))


def matching_setting(g: WeightedGraph, m: Matching, eps: float, off_lengths: Setting | None = None) -> Setting:
    """Matched edges get length eps, the rest keep ``off_lengths`` (default 1).

    Driving eps to zero realizes the degenerate matching limit while keeping
    every length positive.
    """
    if not m.is_perfect(g):
        raise NotPerfect("matching does not cover every vertex")
    if not eps > 0:
        raise NonpositiveLength(f"eps must be positive, got {eps}")
    out = {}
    for key in g.lengths():
        if key in m.edges:
            out[key] = float(eps)
        elif off_lengths is not None and key in off_lengths:
            out[key] = off_lengths[key]
        else:
            out[key] = 1.0
    return Setting(out)


# ---------------------------------------------------------------------------
# line solutions and half-half settings


def t1_setting(ratios, first_length: float = 1.0):
    """Path graph plus setting whose inverse lengths follow ``ratios``.

    Edge k+1 has inverse length equal to ratios[k] times that of edge k; the
    chain solves the line equations of motion exactly when every ratio comes
    from the two-value family of its predecessor.
    """
    if not first_length > 0:
        raise NonpositiveLength("first_length must be positive")
    ratios = list(ratios)
    lengths = [float(first_length)]
    for r in ratios:
        if not r > 0:
            raise BadParams("ratios must be positive")
        lengths.append(lengths[-1] / r)
    verts = [str(k) for k in range(len(lengths) + 1)]
    edges = [(verts[k], verts[k + 1], lengths[k]) for k in range(len(lengths))]
    g = build_graph(verts, edges)
    return g, Setting({edge_key(u, v): ell for u, v, ell in edges})


def valid_t1_chain(r0: float, picks) -> list:
    """Ratio chain over the admissible pair {r0, (r0+1)/(r0-1)}.

    ``picks`` is an iterable of 0/1 choices selecting which of the two values
    each step uses.
    """
    pair = t1_next_ratios(r0)
    if len(pair) == 1:
        pair = (pair[0], pair[0])
    return [pair[p] for p in picks]


def half_half_setting(q: int, depth: int, ratios) -> Setting:
    """Half-half setting on the gen_tree(q, depth) truncation.

    Every vertex is given (q+1)/2 edges toward lower levels and (q+1)/2
    toward higher levels; the per-level lengths follow the inverse-length
    ratio chain ``ratios`` (a single value r > 1 gives the geometric family).
    The chain needs 2*depth - 1 entries, all drawn from the two-value family
    of the first.
    """
    if q < 1 or q % 2 == 0:
        raise InvalidRatioChain(f"half-half settings need odd q, got {q}")
    if depth < 1:
        raise BadParams("need depth >= 1")
    n_trans = 2 * depth
    if isinstance(ratios, (int, float)):
        chain = [float(ratios)] * (n_trans - 1)
    else:
        chain = [float(r) for r in ratios]
    if len(chain) != n_trans - 1:
        raise InvalidRatioChain(
            f"need {n_trans - 1} ratios for depth {depth}, got {len(chain)}"
        )
    for r in chain:
        if not r > 1.0:
            raise InvalidRatioChain(f"ratios must exceed 1, got {r}")
    r0 = chain[0]
    admissible = {r0, (r0 + 1.0) / (r0 - 1.0)}
    for r in chain:
        if min(abs(r - a) for a in admissible) > 1e-9:
            raise InvalidRatioChain(
                f"ratio {r} is outside the admissible pair for r0={r0}"
            )
    # inverse lengths per level transition, lowest level first
    inv = [1.0]
    for r in chain:
        inv.append(inv[-1] * r)
    level_len = {n: 1.0 / inv[k] for k, n in enumerate(range(-depth, depth))}

    shape = _tree_shape(q, depth)
    half = (q + 1) // 2
    level = {"0": 0}
    for v in shape.vertices:
        kids = shape.children[v]
        if not kids:
            continue
        if v == "0":
            n_up = half
        else:
            went_up = level[v] > level[shape.parent[v]]
            n_up = half if went_up else half - 1
        for k, w in enumerate(kids):
            level[w] = level[v] + (1 if k < n_up else -1)
    lengths = {}
    for u, v in shape.edges:
        lengths[edge_key(u, v)] = level_len[min(level[u], level[v])]
    return Setting(lengths)


def two_progression_setting(q: int, m: int, s: int, alpha: float, x: float, y: float, depth: int) -> Setting:
    """Two-geometric-progression setting on gen_tree(q, depth).

    Each vertex sees m edges of relative length 1, m of x, s of alpha, and s
    of alpha*y; stepping along an m-class edge multiplies the local scale by
    x or 1/x, and along an s-class edge by y or 1/y.
    """
    if m < 0 or s < 0 or 2 * (m + s) != q + 1:
        raise InconsistentParams(f"need 2(m+s) = q+1, got m={m} s={s} q={q}")
    if not (alpha > 0 and x > 0 and y > 0):
        raise InconsistentParams("alpha, x, y must all be positive")
    if depth < 1:
        raise BadParams("need depth >= 1")
    rel = {"u": 1.0, "x": float(x), "a": float(alpha), "ay": float(alpha) * float(y)}
    # traversing a class: scale factor for the child, and which of the
    # child's class slots the traversed edge occupies
    step = {
        "u": (1.0 / x, "x"),
        "x": (float(x), "u"),
        "a": (1.0 / y, "ay"),
        "ay": (float(y), "a"),
    }
    shape = _tree_shape(q, depth)
    scale = {"0": 1.0}
    spent = {"0": None}  # class slot used up by the parent edge
    lengths = {}
    for v in shape.vertices:
        kids = shape.children[v]
        if not kids:
            continue
        quota = {"u": m, "x": m, "a": s, "ay": s}
        if spent[v] is not None:
            quota[spent[v]] -= 1
        order = [cls for cls in ("u", "x", "a", "ay") for _ in range(quota[cls])]
        if len(order) != len(kids):
            raise InconsistentParams("class quota does not match child count")
        for cls, w in zip(order, kids):
            lengths[edge_key(v, w)] = scale[v] * rel[cls]
            factor, occupied = step[cls]
            scale[w] = scale[v] * factor
            spent[w] = occupied
    return Setting(lengths)


# ---------------------------------------------------------------------------
# hexagonal lattice regions


@dataclass(frozen=True)
class HexRegionSpec:
    """Flower of hexagons of the given radius, padded by ``strong_margin``
    rings of constant-length lattice so the strong boundary condition can be
    imposed by construction."""

    radius: int
    strong_margin: int = 2

    def __post_init__(self):
        if self.radius < 1:
            raise BadParams("radius must be >= 1")
        if self.strong_margin < 2:
            raise BadParams("strong_margin must be >= 2")


def _hex_neighbors(v):
    a, b, s = v
    if s == 0:
        return ((a, b, 1), (a - 1, b, 1), (a, b - 1, 1))
    return ((a, b, 0), (a + 1, b, 0), (a, b + 1, 0))


def _hex_face(p, q):
    return (
        (p, q, 0),
        (p, q, 1),
        (p + 1, q, 0),
        (p + 1, q - 1, 1),
        (p + 1, q - 1, 0),
        (p, q - 1, 1),
    )


def _hex_id(v):
    return f"{v[0]},{v[1]},{v[2]}"


def gen_hex_region(spec: HexRegionSpec):
    """Hexagonal-lattice patch with a pendant boundary ring and padding.

    Returns (graph, region).  The region consists of the hexagon flower plus
    one pendant vertex per perimeter vertex; each pendant has exactly one
    edge into the region, matching the unique-inward-edge picture, and two
    edges into the padding.  All lengths start at 1.
    """
    faces = [
        (p, q)
        for p in range(-spec.radius, spec.radius + 1)
        for q in range(-spec.radius, spec.radius + 1)
        if (abs(p) + abs(q) + abs(p + q)) // 2 <= spec.radius - 1
    ]
    patch = set()
    for p, q in faces:
        patch.update(_hex_face(p, q))
    pendants = set()
    for v in patch:
        for w in _hex_neighbors(v):
            if w not in patch:
                pendants.add(w)
    sigma = patch | pendants
    shell = set(sigma)
    for _ in range(spec.strong_margin + 1):
        grown = set(shell)
        for v in shell:
            grown.update(_hex_neighbors(v))
        shell = grown
    edges = set()
    for v in shell:
        for w in _hex_neighbors(v):
            if w in shell:
                edges.add(edge_key(_hex_id(v), _hex_id(w)))
    g = build_graph(
        sorted(_hex_id(v) for v in shell),
        [(u, v, 1.0) for u, v in sorted(edges)],
    )
    region = extract_region(g, {_hex_id(v) for v in sigma})
    return g, region


def hex_strong_fixed_edges(g: WeightedGraph, region: Region) -> frozenset:
    """Edges pinned by the strong boundary condition: the boundary edges and
    everything within two edge-steps of them."""
    fixed = {edge_key(u, v) for u, v in region.boundary_edges}
    frontier = set(fixed)
    for _ in range(2):
        grown = set()
        for u, v in frontier:
            for x in (u, v):
                for w in g.neighbors(x):
                    key = edge_key(x, w)
                    if key not in fixed:
                        grown.add(key)
        fixed |= grown
        frontier = grown
    return frozenset(fixed)
