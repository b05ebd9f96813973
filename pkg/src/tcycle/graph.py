"""Embedded planar multigraphs.

A graph is stored combinatorially: vertices, edges with explicit ids, and a
rotation system giving the cyclic order of edge ends around every vertex.
Faces are traced from the rotation system, and the Euler relation
V - E + F = 2 per connected component certifies that the rotation system
describes a sphere embedding.  Nothing here uses coordinates.
"""

from collections import Counter, deque
from dataclasses import dataclass, field

from .errors import (
    Disconnected,
    MalformedRotation,
    NonPlanarCertificate,
    NotACycle,
    UnknownVertex,
)


@dataclass(frozen=True)
class Face:
    """One face of the embedding.

    walk is the cyclic boundary walk as a tuple of darts (eid, side); a dart
    (e, 0) traverses e from its stored tail to its head, (e, 1) the other
    way.  Isolated vertices get a one-off face with an empty walk.
    """

    id: int
    walk: tuple
    vertices: frozenset
    edge_ids: frozenset


class EmbeddedGraph:
    """An embedded planar multigraph with terminals.

    Treated as immutable once built; all mutators return new graphs.
    """

    def __init__(self, vertices, edges, rotation, terminals=(), outer_hint=None):
        self.vertices = frozenset(vertices)
        self.edges = dict(edges)  # eid -> (u, v)
        self.rotation = {v: tuple(r) for v, r in rotation.items() if r}
        self.terminals = frozenset(terminals)
        # outer_hint: vertex set identifying the intended outer face, if any
        self.outer_hint = frozenset(outer_hint) if outer_hint else None
        self._emb = None
        self._validate_basic()

    # -- basic structure ---------------------------------------------------

    def _validate_basic(self):
        for eid, (u, v) in self.edges.items():
            if u not in self.vertices or v not in self.vertices:
                raise UnknownVertex(f"edge {eid} touches unknown vertex")
        if not self.terminals <= self.vertices:
            raise UnknownVertex("terminal is not a vertex")
        want = {v: Counter() for v in self.vertices}
        for eid, (u, v) in self.edges.items():
            want[u][eid] += 1
            want[v][eid] += 1
        for v in self.vertices:
            have = Counter(self.rotation.get(v, ()))
            if have != want[v]:
                raise MalformedRotation(
                    f"rotation at {v} lists {sorted(have.elements())}, "
                    f"incident edges are {sorted(want[v].elements())}"
                )

    def degree(self, v):
        return len(self.rotation.get(v, ()))

    def incident_edges(self, v):
        return self.rotation.get(v, ())

    def neighbors(self, v):
        out = set()
        for eid in self.rotation.get(v, ()):
            a, b = self.edges[eid]
            out.add(b if a == v else a)
        out.discard(v)
        return out

    def edge_between(self, u, v):
        """Some edge id joining u and v, or None."""
        for eid in self.rotation.get(u, ()):
            a, b = self.edges[eid]
            if {a, b} == {u, v}:
                return eid
        return None

    def other_end(self, eid, v):
        a, b = self.edges[eid]
        return b if a == v else a

    def components(self):
        """Connected components as a list of frozensets of vertices."""
        seen = set()
        out = []
        for s in sorted(self.vertices):
            if s in seen:
                continue
            comp = {s}
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.neighbors(x):
                    if y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            out.append(frozenset(comp))
        return out

    # -- derived graphs ----------------------------------------------------

    def subgraph(self, keep):
        """Induced subgraph on the vertex set keep; embedding is inherited by
        filtering every rotation, which preserves planarity."""
        keep = frozenset(keep)
        edges = {
            eid: (u, v)
            for eid, (u, v) in self.edges.items()
            if u in keep and v in keep
        }
        rot = {
            v: tuple(e for e in self.rotation.get(v, ()) if e in edges)
            for v in keep
        }
        hint = self.outer_hint if self.outer_hint and self.outer_hint <= keep else None
        return EmbeddedGraph(keep, edges, rot, self.terminals & keep, hint)

    def without_vertices(self, drop):
        return self.subgraph(self.vertices - frozenset(drop))

    def without_edges(self, drop):
        drop = frozenset(drop)
        edges = {e: uv for e, uv in self.edges.items() if e not in drop}
        rot = {
            v: tuple(e for e in r if e not in drop)
            for v, r in self.rotation.items()
        }
        return EmbeddedGraph(self.vertices, edges, rot, self.terminals, self.outer_hint)

    def with_terminals(self, terminals):
        return EmbeddedGraph(
            self.vertices, self.edges, self.rotation, terminals, self.outer_hint
        )

    # -- embedding ---------------------------------------------------------

    def embedding(self):
        if self._emb is None:
            self._emb = _trace_embedding(self)
        return self._emb


class Embedding:
    """Traced faces of an EmbeddedGraph plus incidence lookups."""

    def __init__(self, graph, faces, face_of_dart, component_of, outer_faces):
        self.graph = graph
        self.faces = faces  # list of Face
        self.face_of_dart = face_of_dart  # (eid, side) -> face id
        self.component_of = component_of  # vertex -> component index
        self.outer_faces = outer_faces  # component index -> face id
        self.faces_of_vertex = {v: set() for v in graph.vertices}
        for f in faces:
            for v in f.vertices:
                self.faces_of_vertex[v].add(f.id)

    def faces_of_edge(self, eid):
        return (self.face_of_dart[(eid, 0)], self.face_of_dart[(eid, 1)])

    def outer_face(self, v=None):
        """Outer face id of v's component (or of the whole graph if it is
        connected and v is omitted)."""
        if v is None:
            comps = set(self.component_of.values())
            if len(comps) != 1:
                raise Disconnected("outer face of a disconnected graph is per component")
            return self.outer_faces[next(iter(comps))]
        return self.outer_faces[self.component_of[v]]


def _darts_at(graph):
    """For every vertex, the darts leaving it in rotation order."""
    out = {}
    for v in graph.vertices:
        darts = []
        seen_loop = Counter()
        for eid in graph.rotation.get(v, ()):
            a, b = graph.edges[eid]
            if a == b:
                darts.append((eid, seen_loop[eid]))
                seen_loop[eid] += 1
            else:
                darts.append((eid, 0 if a == v else 1))
        out[v] = darts
    return out


def _dart_head(graph, dart):
    eid, side = dart
    a, b = graph.edges[eid]
    return b if side == 0 else a


def _trace_embedding(graph):
    darts_at = _darts_at(graph)
    pos = {}
    for v, darts in darts_at.items():
        for i, d in enumerate(darts):
            pos[d] = (v, i)

    def next_face_dart(d):
        w = _dart_head(graph, d)
        rev = (d[0], 1 - d[1])
        _, p = pos[rev]
        ring = darts_at[w]
        return ring[(p + 1) % len(ring)]

    faces = []
    face_of_dart = {}
    for v in sorted(graph.vertices):
        for start in darts_at[v]:
            if start in face_of_dart:
                continue
            walk = []
            d = start
            while True:
                walk.append(d)
                face_of_dart[d] = len(faces)
                d = next_face_dart(d)
                if d == start:
                    break
            verts = frozenset(pos[d][0] for d in walk)
            eids = frozenset(d[0] for d in walk)
            faces.append(Face(len(faces), tuple(walk), verts, eids))
    for v in sorted(graph.vertices):
        if graph.degree(v) == 0:
            faces.append(Face(len(faces), (), frozenset([v]), frozenset()))

    comps = graph.components()
    component_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            component_of[v] = i

    # Euler check per connected component certifies planarity of the rotation
    for i, comp in enumerate(comps):
        nv = len(comp)
        ne = sum(1 for u, w in graph.edges.values() if u in comp)
        nf = sum(1 for f in faces if f.vertices <= comp)
        if nv - ne + nf != 2:
            raise NonPlanarCertificate(
                f"component {sorted(comp)[:6]}...: V-E+F = {nv}-{ne}+{nf} != 2"
            )

    outer_faces = {}
    for i, comp in enumerate(comps):
        cand = [f for f in faces if f.vertices <= comp]
        hint = graph.outer_hint
        chosen = None
        if hint and hint <= comp:
            exact = [f for f in cand if f.vertices == hint]
            if len(exact) == 1:
                chosen = exact[0]
        if chosen is None:
            chosen = min(cand, key=lambda f: tuple(sorted(f.vertices)))
        outer_faces[i] = chosen.id

    return Embedding(graph, faces, face_of_dart, component_of, outer_faces)


# -- radial (vertex-face incidence) traversal -----------------------------


def radial_bfs(graph, sources, emb=None):
    """Radial distances from a set of sources.

    One step goes from a vertex to any vertex sharing a face with it, so the
    result is d^R(v, sources) = min over sources of the radial distance.
    Vertices in other components are absent from the result.
    """
    if emb is None:
        emb = graph.embedding()
    if isinstance(sources, int):
        sources = [sources]
    sources = list(sources)
    for s in sources:
        if s not in graph.vertices:
            raise UnknownVertex(f"source {s}")
    dist = {s: 0 for s in sources}
    seen_faces = set()
    frontier = list(dict.fromkeys(sources))
    d = 0
    while frontier:
        d += 1
        nxt = []
        for v in frontier:
            for fid in emb.faces_of_vertex[v]:
                if fid in seen_faces:
                    continue
                seen_faces.add(fid)
                for w in emb.faces[fid].vertices:
                    if w not in dist:
                        dist[w] = d
                        nxt.append(w)
        frontier = nxt
    return dist


def radial_distance(graph, u, v, emb=None):
    """d^R(u, v): one less than the shortest vertex sequence from u to v in
    which consecutive vertices share a face."""
    dist = radial_bfs(graph, [u], emb)
    if v not in graph.vertices:
        raise UnknownVertex(f"vertex {v}")
    if v not in dist:
        raise Disconnected(f"{u} and {v} are in different components")
    return dist[v]


# -- cycles and disks ------------------------------------------------------


def cycle_vertices(graph, cycle_edges):
    """Vertex set of an edge set that must form a single simple cycle."""
    cycle_edges = frozenset(cycle_edges)
    deg = Counter()
    for eid in cycle_edges:
        u, v = graph.edges[eid]
        if u == v:
            raise NotACycle("loop edge in cycle")
        deg[u] += 1
        deg[v] += 1
    if not cycle_edges or any(d != 2 for d in deg.values()):
        raise NotACycle("edge set is not 2-regular")
    verts = set(deg)
    # connectivity within the cycle's own edges
    adj = {v: [] for v in verts}
    for eid in cycle_edges:
        u, v = graph.edges[eid]
        adj[u].append(v)
        adj[v].append(u)
    start = next(iter(verts))
    comp = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in comp:
                comp.add(y)
                queue.append(y)
    if comp != verts:
        raise NotACycle("edge set has more than one cycle")
    return frozenset(verts)


def cycle_sides(graph, cycle_edges, emb=None):
    """Partition of the faces of the cycle's component into the two sides of
    the cycle.  Faces are connected across every edge not on the cycle."""
    if emb is None:
        emb = graph.embedding()
    cycle_edges = frozenset(cycle_edges)
    verts = cycle_vertices(graph, cycle_edges)
    comp_idx = emb.component_of[next(iter(verts))]
    comp_faces = {
        f.id
        for f in emb.faces
        if f.vertices and emb.component_of[next(iter(f.vertices))] == comp_idx
    }
    adj = {fid: set() for fid in comp_faces}
    for eid, (u, v) in graph.edges.items():
        if eid in cycle_edges or emb.component_of[u] != comp_idx:
            continue
        f1, f2 = emb.faces_of_edge(eid)
        if f1 != f2:
            adj[f1].add(f2)
            adj[f2].add(f1)
    regions = []
    left = set(comp_faces)
    while left:
        s = left.pop()
        reg = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in reg:
                    reg.add(y)
                    left.discard(y)
                    queue.append(y)
        left -= reg
        regions.append(frozenset(reg))
    if len(regions) != 2:
        raise NotACycle(
            f"cycle does not split its component's faces into two regions "
            f"(got {len(regions)})"
        )
    return regions[0], regions[1]


@dataclass
class Disk:
    """Closed disk bounded by a cycle: the cycle plus everything on one side."""

    cycle_edges: frozenset
    cycle_verts: frozenset
    inside_faces: frozenset  # faces strictly inside
    strict_vertices: frozenset  # vertices strictly inside
    strict_edges: frozenset  # edges strictly inside
    vertices: frozenset = field(init=False)  # closed: cycle + strict
    edges: frozenset = field(init=False)

    def __post_init__(self):
        self.vertices = self.cycle_verts | self.strict_vertices
        self.edges = self.cycle_edges | self.strict_edges

    def contains_vertex(self, v):
        return v in self.vertices

    def contains_edge(self, eid):
        return eid in self.edges


def _region_disk(graph, emb, cycle_edges, region):
    cycle_edges = frozenset(cycle_edges)
    verts = cycle_vertices(graph, cycle_edges)
    strict_v = set()
    for f in region:
        strict_v |= emb.faces[f].vertices
    strict_v -= verts
    strict_e = set()
    for eid in graph.edges:
        if eid in cycle_edges:
            continue
        f1, f2 = emb.faces_of_edge(eid)
        if f1 in region and f2 in region:
            strict_e.add(eid)
    return Disk(cycle_edges, verts, frozenset(region), frozenset(strict_v), frozenset(strict_e))


def disk_of_cycle(graph, cycle_edges, emb=None, inside=None):
    """Closed disk of a cycle.

    inside picks the side explicitly (a set of face ids); by default the
    side not containing the outer face of the cycle's component is used.
    """
    if emb is None:
        emb = graph.embedding()
    a, b = cycle_sides(graph, cycle_edges, emb)
    if inside is not None:
        inside = frozenset(inside)
        if inside == a:
            region = a
        elif inside == b:
            region = b
        else:
            raise NotACycle("given face set is not a side of the cycle")
    else:
        verts = cycle_vertices(graph, cycle_edges)
        outer = emb.outer_faces[emb.component_of[next(iter(verts))]]
        if outer in a:
            region = b
        elif outer in b:
            region = a
        else:
            raise NotACycle("outer face not on either side of the cycle")
    return _region_disk(graph, emb, cycle_edges, region)


def both_disks(graph, cycle_edges, emb=None):
    """The two closed disks of a cycle, one per side, in arbitrary order."""
    if emb is None:
        emb = graph.embedding()
    a, b = cycle_sides(graph, cycle_edges, emb)
    return (
        _region_disk(graph, emb, cycle_edges, a),
        _region_disk(graph, emb, cycle_edges, b),
    )
