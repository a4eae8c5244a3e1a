"""Weighted graphs, geodesic distances, local inverse-length sums, and regions.

Vertices are opaque hashable ids (strings in all JSON-facing paths).  Edges are
undirected and stored under an order-normalized key.  All structures are
treated as immutable after construction; anything that changes lengths goes
through :meth:`WeightedGraph.with_lengths` and gets a fresh geodesic table.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass

from .errors import (
    Disconnected,
    DisconnectedRegion,
    DuplicateEdge,
    EmptyRegion,
    NonpositiveLength,
    NotAnEdge,
    SelfLoop,
    UnknownVertex,
)


def edge_key(u, v):
    """Order-normalized key for the undirected edge between u and v."""
    try:
        return (u, v) if u <= v else (v, u)
    except TypeError:
        return (u, v) if str(u) <= str(v) else (v, u)


class WeightedGraph:
    """Connected simple graph with strictly positive edge lengths.

    Use :func:`build_graph` to construct; the constructor assumes validated
    input.
    """

    __slots__ = ("_vertices", "_adj", "_lengths")

    def __init__(self, vertices, adj, lengths):
        self._vertices = tuple(vertices)
        self._adj = adj
        self._lengths = lengths

    @property
    def vertices(self):
        return self._vertices

    @property
    def edges(self):
        return tuple(sorted(self._lengths, key=repr))

    @property
    def num_edges(self):
        return len(self._lengths)

    def __contains__(self, v):
        return v in self._adj

    def neighbors(self, v):
        if v not in self._adj:
            raise UnknownVertex(f"unknown vertex {v!r}")
        return self._adj[v]

    def degree(self, v):
        return len(self.neighbors(v))

    def has_edge(self, u, v):
        return edge_key(u, v) in self._lengths

    def length(self, u, v):
        key = edge_key(u, v)
        if key not in self._lengths:
            raise NotAnEdge(f"no edge between {u!r} and {v!r}")
        return self._lengths[key]

    def lengths(self):
        """Copy of the edge -> length map."""
        return dict(self._lengths)

    def with_lengths(self, new_lengths):
        """Same topology with edge lengths replaced.

        ``new_lengths`` maps normalized edge keys (or a Setting-like object
        with a ``lengths`` attribute) to positive values; it must cover every
        edge of the graph.
        """
        mapping = getattr(new_lengths, "lengths", new_lengths)
        out = {}
        for key in self._lengths:
            if key not in mapping:
                raise NotAnEdge(f"no length given for edge {key!r}")
            val = float(mapping[key])
            if not val > 0 or val != val or val == float("inf"):
                raise NonpositiveLength(f"length for edge {key!r} must be positive and finite")
            out[key] = val
        return WeightedGraph(self._vertices, self._adj, out)


def build_graph(vertex_ids, weighted_edges):
    """Validate and build a WeightedGraph.

    ``weighted_edges`` is an iterable of (u, v, length) triples.  Raises
    SelfLoop, UnknownVertex, NonpositiveLength, DuplicateEdge, or Disconnected.
    """
    vertices = list(dict.fromkeys(vertex_ids))
    if not vertices:
        raise EmptyRegion("graph needs at least one vertex")
    vset = set(vertices)
    lengths = {}
    adj = {v: [] for v in vertices}
    for u, v, ell in weighted_edges:
        if u == v:
            raise SelfLoop(f"self-loop at {u!r}")
        if u not in vset or v not in vset:
            raise UnknownVertex(f"edge ({u!r}, {v!r}) references unknown vertex")
        ell = float(ell)
        if not ell > 0 or ell != ell or ell == float("inf"):
            raise NonpositiveLength(f"edge ({u!r}, {v!r}) has nonpositive length {ell}")
        key = edge_key(u, v)
        if key in lengths:
            raise DuplicateEdge(f"duplicate edge {key!r}")
        lengths[key] = ell
        adj[u].append(v)
        adj[v].append(u)
    adj = {v: tuple(sorted(nbrs, key=repr)) for v, nbrs in adj.items()}
    # connectivity
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(vertices):
        raise Disconnected("graph is not connected")
    return WeightedGraph(vertices, adj, lengths)


class GeodesicTable:
    """Lazy all-pairs shortest-path distances under the edge lengths.

    Runs Dijkstra per queried source and caches the result.  Tables are tied
    to one immutable graph; build a new table after `with_lengths`.
    """

    def __init__(self, g: WeightedGraph):
        self._g = g
        self._rows = {}

    def row(self, source):
        """Distances from ``source`` to every vertex."""
        if source not in self._g:
            raise UnknownVertex(f"unknown vertex {source!r}")
        if source not in self._rows:
            self._rows[source] = self._dijkstra(source)
        return self._rows[source]

    def dist(self, i, j):
        if i not in self._g or j not in self._g:
            raise UnknownVertex(f"unknown vertex in pair ({i!r}, {j!r})")
        if i == j:
            return 0.0
        if j in self._rows:
            return self._rows[j][i]
        return self.row(i)[j]

    def _dijkstra(self, source):
        g = self._g
        dist = {source: 0.0}
        done = set()
        counter = 0  # heap tiebreaker, keeps pop order deterministic
        heap = [(0.0, counter, source)]
        while heap:
            d, _, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for w in g.neighbors(u):
                nd = d + g.length(u, w)
                if w not in done and (w not in dist or nd < dist[w]):
                    dist[w] = nd
                    counter += 1
                    heapq.heappush(heap, (nd, counter, w))
        return dist


def local_sums(g: WeightedGraph, geo: GeodesicTable, i):
    """Inverse and inverse-square sums of geodesic lengths to the neighbors of i.

    Returns (sum of 1/P, sum of 1/P^2) over neighbors of i, where P is the
    geodesic distance from i to the neighbor (at most the direct edge length).
    """
    inv = 0.0
    inv2 = 0.0
    for w in g.neighbors(i):
        p = geo.dist(i, w)
        inv += 1.0 / p
        inv2 += 1.0 / (p * p)
    return inv, inv2


@dataclass(frozen=True)
class Region:
    """A finite connected induced subgraph with its vertex/edge boundary."""

    interior: frozenset
    boundary_vertices: frozenset
    boundary_edges: frozenset

    @property
    def vertices(self):
        return self.interior | self.boundary_vertices


def extract_region(g: WeightedGraph, sigma_vertices) -> Region:
    """Region over ``sigma_vertices``: boundary vertices are those with at
    least one neighbor outside, boundary edges those between two boundary
    vertices or leaving the region."""
    sigma = set(sigma_vertices)
    if not sigma:
        raise EmptyRegion("region must contain at least one vertex")
    for v in sigma:
        if v not in g:
            raise UnknownVertex(f"unknown vertex {v!r}")
    # induced connectivity
    start = next(iter(sigma))
    seen = {start}
    stack = [start]
    while stack:
        for w in g.neighbors(stack.pop()):
            if w in sigma and w not in seen:
                seen.add(w)
                stack.append(w)
    if seen != sigma:
        raise DisconnectedRegion("induced subgraph is not connected")
    boundary = {v for v in sigma if any(w not in sigma for w in g.neighbors(v))}
    bedges = set()
    for v in boundary:
        for w in g.neighbors(v):
            if w not in sigma or w in boundary:
                bedges.add(edge_key(v, w))
    return Region(
        interior=frozenset(sigma - boundary),
        boundary_vertices=frozenset(boundary),
        boundary_edges=frozenset(bedges),
    )


def sigma_edges(g: WeightedGraph, region: Region):
    """Edges of the induced subgraph on the region's vertices."""
    verts = region.vertices
    out = []
    for u, v in g.edges:
        if u in verts and v in verts:
            out.append((u, v))
    return tuple(out)


# JSON interface: {"vertices": [str], "edges": [{"u": str, "v": str, "len": float}]}

def graph_to_json(g: WeightedGraph) -> dict:
    return {
        "vertices": [str(v) for v in g.vertices],
        "edges": [
            {"u": str(u), "v": str(v), "len": g.length(u, v)} for u, v in g.edges
        ],
    }


def graph_from_json(doc: dict) -> WeightedGraph:
    vertices = [str(v) for v in doc["vertices"]]
    edges = [(str(e["u"]), str(e["v"]), float(e["len"])) for e in doc["edges"]]
    return build_graph(vertices, edges)


def region_from_json(doc: dict, g: WeightedGraph) -> Region:
    return extract_region(g, [str(v) for v in doc["sigma"]])


def region_to_json(region: Region) -> dict:
    return {"sigma": sorted(str(v) for v in region.vertices)}


def load_json(path):
    with open(path) as fh:
        return json.load(fh)
