"""Kernelization: protrusion decomposition, linkage profiles, replacement
search and the assembled pipeline.

A protrusion is a part of the graph that meets the rest only in a small
boundary.  Two parts with the same boundary behave identically for loop
finding exactly when they enable the same linkages across that boundary,
so a part can be swapped for any smaller graph with an equal profile.
Every swap is certified twice: the replacement must be a minor of the
part it replaces, and the profiles must match on both feasibility sets.
"""

import functools
import itertools
from dataclasses import dataclass, field

from .cycles import is_isolated
from .decomposition import IsolationBudget, isolation_threshold, reed_pipeline
from .dp import solve_disjoint_paths, solve_m_cycle, solve_t_cycle
from .errors import (
    BoundaryTooLarge,
    BudgetExceeded,
    InvalidConfiguration,
    ModulatorInvalid,
    SpliceError,
    TCycleError,
    UnknownVertex,
)
from .graph import EmbeddedGraph
from .oracle import all_cycles, brute_minor
from .treewidth import build, lca_closure, make_nice

BOUNDARY_LIMIT = 6
SEARCH_BOUNDARY_LIMIT = 6
MINOR_HOST_LIMIT = 18
CONTRACTION_SIZE_LIMIT = 60


# -- protrusion decomposition ----------------------------------------------


@dataclass
class ProtrusionDecomposition:
    """x0 plus parts X_1..X_l partitioning the vertices; boundaries[i] is
    the neighborhood of parts[i], always inside x0."""

    x0: frozenset
    parts: list
    boundaries: list
    eta: int

    @property
    def gamma(self):
        return 3 * self.eta + 2

    def validate(self, graph):
        """Check all structural invariants; return the largest part width."""
        pieces = [self.x0] + list(self.parts)
        total = 0
        for p in pieces:
            total += len(p)
        if total != len(graph.vertices) or frozenset().union(*pieces) != graph.vertices:
            raise InvalidConfiguration("parts do not partition the vertices")
        widest = 0
        for part, B in zip(self.parts, self.boundaries):
            nb = set()
            for v in part:
                nb |= graph.neighbors(v)
            nb -= part
            if nb != B:
                raise InvalidConfiguration("recorded boundary is wrong")
            if not B <= self.x0:
                raise InvalidConfiguration("part touches something outside x0")
            if len(B) > self.gamma:
                raise InvalidConfiguration("boundary larger than gamma")
            w = build(graph.subgraph(part | B)).validate(graph.subgraph(part | B))
            if w > self.gamma:
                raise InvalidConfiguration("part width larger than gamma")
            widest = max(widest, w)
        return widest


def protrusion_decompose(graph, modulator, eta, td=None):
    """Split graph into a core x0 containing the modulator and parts that
    each meet x0 in a small boundary.

    Works on a nice tree decomposition of graph minus the modulator:
    marks the lowermost nodes whose subtree induces a component with at
    least three modulator neighbors, closes the marked set under lowest
    common ancestors, puts those bags into the core, and groups the
    leftover components by their neighborhoods.
    """
    S = frozenset(modulator)
    if not S <= graph.vertices:
        raise UnknownVertex(f"modulator vertices {sorted(S - graph.vertices)}")
    rest = graph.subgraph(graph.vertices - S)
    if td is None:
        td = build(rest)
    if td.validate(rest) > eta:
        raise ModulatorInvalid(
            f"graph minus modulator has width above {eta}"
        )
    nice = make_nice(td)

    sneigh = {
        v: graph.neighbors(v) & S for v in rest.vertices
    }

    adj = {v: rest.neighbors(v) for v in rest.vertices}

    def has_busy_component(vs):
        seen = set()
        for s in sorted(vs):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            hits = set(sneigh[s])
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y in vs and y not in comp:
                        comp.add(y)
                        stack.append(y)
                        hits |= sneigh[y]
            seen |= comp
            if len(hits) >= 3:
                return True
        return False

    subtree = {}
    marked = set()
    marked_below = {}
    for node in nice.postorder():
        vs = set(nice.bags[node])
        below = False
        for c in nice.children[node]:
            vs |= subtree[c]
            below = below or marked_below[c]
        subtree[node] = vs
        if not below and has_busy_component(vs):
            marked.add(node)
            below = True
        marked_below[node] = below

    closure = lca_closure(nice, marked)
    x0 = set(S)
    for node in closure:
        x0 |= nice.bags[node]

    leftover = graph.vertices - x0
    groups = {}
    seen = set()
    for s in sorted(leftover):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in graph.neighbors(x):
                if y in leftover and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        nb = frozenset()
        for v in comp:
            nb |= graph.neighbors(v)
        nb = frozenset(nb - comp)
        groups.setdefault(nb, set()).update(comp)
    keys = sorted(groups, key=lambda b: (sorted(b), min(groups[b], default=0)))
    parts = [frozenset(groups[b]) for b in keys]
    return ProtrusionDecomposition(frozenset(x0), parts, list(keys), eta)


# -- linkage profiles -------------------------------------------------------


def all_matchings(vertices):
    """Every set of disjoint unordered pairs over the given vertices,
    including the empty one."""
    vs = sorted(set(vertices))

    def rec(rest):
        if not rest:
            yield frozenset()
            return
        a = rest[0]
        yield from rec(rest[1:])
        for i, b in enumerate(rest[1:]):
            tail = rest[1 : i + 1] + rest[i + 2 :]
            for m in rec(tail):
                yield m | {frozenset((a, b))}

    yield from rec(vs)


@functools.lru_cache(maxsize=None)
def _pattern_shapes(b):
    """All linear forests over b labelled points, as tuples of index pairs
    ordered by pair count.  Degree at most two per point and no closed
    component: exactly the ways a single cycle can traverse a part, with a
    degree-two point passed straight through."""
    pairs = list(itertools.combinations(range(b), 2))
    shapes = []
    for m in range(0, b + 1):
        for combo in itertools.combinations(pairs, m):
            deg = {}
            root = {}

            def find(x):
                while root[x] != x:
                    root[x] = root[root[x]]
                    x = root[x]
                return x

            ok = True
            for a, c in combo:
                deg[a] = deg.get(a, 0) + 1
                deg[c] = deg.get(c, 0) + 1
                if deg[a] > 2 or deg[c] > 2:
                    ok = False
                    break
                root.setdefault(a, a)
                root.setdefault(c, c)
                ra, rc = find(a), find(c)
                if ra == rc:
                    ok = False
                    break
                root[ra] = rc
            if ok:
                shapes.append(combo)
    return tuple(shapes)


def all_patterns(vertices):
    """Every way a simple cycle can cross the given boundary, as a set of
    unordered pairs: each vertex in at most two pairs, no subset of pairs
    closing a cycle.  Yielded by pair count, which the profile's pruning
    relies on."""
    vs = sorted(set(vertices))
    for shape in _pattern_shapes(len(vs)):
        yield frozenset(frozenset((vs[a], vs[c])) for a, c in shape)


def _pattern_query(graph, boundary, pattern):
    """True iff disjoint paths realize every pair of the pattern, together
    meeting the boundary exactly in the pattern's vertices.

    A vertex in two pairs is passed through: its two paths share it and
    nothing else.  That case is fed to the plain disjoint-paths solver by
    splitting the vertex into two copies with duplicated incidences; the
    copies are query endpoints, so disjointness keeps them exclusive.  The
    split graph carries a placeholder rotation for the solver only."""
    support = {v for p in pattern for v in p}
    drop = (set(boundary) - support) & graph.vertices
    g = graph.without_vertices(drop) if drop else graph
    if not support <= g.vertices:
        return False
    deg = {}
    for p in pattern:
        for v in p:
            deg[v] = deg.get(v, 0) + 1
    verts = set(g.vertices)
    edges = dict(g.edges)
    fresh_v = max(verts, default=0) + 1
    fresh_e = max(edges, default=0) + 1
    copies = {v: [v] for v in deg}
    for v in sorted(v for v, d in deg.items() if d == 2):
        w = fresh_v
        fresh_v += 1
        verts.add(w)
        for eid, (a, c) in g.edges.items():
            if a == v or c == v:
                edges[fresh_e] = (w if a == v else a, w if c == v else c)
                fresh_e += 1
        copies[v].append(w)
    used = dict.fromkeys(deg, 0)
    pairs = []
    for p in sorted(pattern, key=sorted):
        a, c = sorted(p)
        pairs.append((copies[a][used[a]], copies[c][used[c]]))
        used[a] += 1
        used[c] += 1
    incident = {x: [] for x in verts}
    for eid, (a, c) in edges.items():
        incident[a].append(eid)
        if c != a:
            incident[c].append(eid)
        else:
            incident[a].append(eid)
    rotation = {x: tuple(sorted(incident[x])) for x in verts}
    gq = EmbeddedGraph(verts, edges, rotation)
    return solve_disjoint_paths(gq, pairs)


def _pattern_profile(graph, boundary):
    """The set of feasible crossing patterns.  Feasibility is monotone
    under dropping a pair, so a pattern is only queried when all its
    one-pair-smaller subpatterns passed."""
    feas = set()
    for pattern in all_patterns(boundary):
        if pattern and any(pattern - {e} not in feas for e in pattern):
            continue
        if _pattern_query(graph, boundary, pattern):
            feas.add(pattern)
    return frozenset(feas)


@dataclass(frozen=True)
class LinkageProfile:
    boundary: frozenset
    feasible_dp: frozenset
    feasible_mc: frozenset
    feasible_cycle: frozenset


def linkage_profile(graph, boundary, td=None):
    """How the graph can serve a loop that crosses its boundary.

    Three feasibility sets: crossing patterns (pair sets with each
    boundary vertex in at most two, realized by paths meeting the
    boundary in exactly the pattern's vertices), matchings that close
    into one cycle through fresh middle vertices, and boundary subsets
    lying together on some cycle.  Patterns rather than matchings in the
    first set because a loop may run straight through a boundary vertex
    inside the part, consuming it without stopping; the cycle set matters
    when an entire loop fits inside the part, which no path pattern can
    express."""
    B = sorted(set(boundary))
    if len(B) > BOUNDARY_LIMIT:
        raise BoundaryTooLarge(f"boundary of {len(B)} is over {BOUNDARY_LIMIT}")
    if not set(B) <= graph.vertices:
        raise UnknownVertex(f"boundary vertices {sorted(set(B) - graph.vertices)}")
    if td is None:
        td = build(graph)
    fdp = _pattern_profile(graph, B)
    fmc = set()
    for m in all_matchings(B):
        pairs = sorted(tuple(sorted(p)) for p in m)
        if solve_m_cycle(graph, B, pairs, td):
            fmc.add(m)
    fcy = set()
    for r in range(1, len(B) + 1):
        for combo in itertools.combinations(B, r):
            if solve_t_cycle(graph, set(combo), td) is not None:
                fcy.add(frozenset(combo))
    return LinkageProfile(
        frozenset(B), frozenset(fdp), frozenset(fmc), frozenset(fcy)
    )


def _profile_matches(graph, boundary, target):
    """linkage_profile(graph, boundary) == target, with early exit on the
    first disagreement.  Candidate filtering only; accepted replacements
    are re-verified with full profiles."""
    B = sorted(set(boundary))
    if frozenset(B) != target.boundary:
        return False
    if len(graph.vertices) <= 10:
        # tiny candidates: sweep every simple cycle directly, which skips
        # the decomposition build that dominates the search loop
        fcy = set()
        bset = set(B)
        for c in all_cycles(graph):
            on = frozenset(
                v for eid in c for v in graph.edges[eid][:2] if v in bset
            )
            if on:
                for r in range(1, len(on) + 1):
                    fcy.update(map(frozenset, itertools.combinations(on, r)))
        if fcy != set(target.feasible_cycle):
            return False
        td = build(graph)
    else:
        td = build(graph)
        for r in range(1, len(B) + 1):
            for combo in itertools.combinations(B, r):
                has = solve_t_cycle(graph, set(combo), td) is not None
                if has != (frozenset(combo) in target.feasible_cycle):
                    return False
    feas = set()
    for pattern in all_patterns(B):
        if pattern and any(pattern - {e} not in feas for e in pattern):
            has = False
        else:
            has = _pattern_query(graph, B, pattern)
            if has:
                feas.add(pattern)
        if has != (pattern in target.feasible_dp):
            return False
    for m in all_matchings(B):
        pairs = sorted(tuple(sorted(p)) for p in m)
        if solve_m_cycle(graph, B, pairs, td) != (m in target.feasible_mc):
            return False
    return True


# -- replacement search -----------------------------------------------------


def _cycle_sets_match(nodes, edges, boundary, target):
    """Candidate pre-filter: the boundary subsets covered by the candidate's
    simple cycles equal the target's, computed on a bare adjacency so the
    search loop never embeds a candidate it is going to reject."""
    bset = set(boundary)
    adj = {v: [] for v in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    order = {v: i for i, v in enumerate(nodes)}
    allowed = set(target.feasible_cycle)
    covered = set()

    def sweep(start, cur, visited):
        for w in adj[cur]:
            if w == start and len(visited) >= 3:
                on = frozenset(v for v in visited if v in bset)
                if on:
                    if on not in allowed:
                        return False
                    covered.add(on)
            elif order[w] > order[start] and w not in visited:
                visited.add(w)
                if not sweep(start, w, visited):
                    return False
                visited.remove(w)
        return True

    for s in nodes:
        if not sweep(s, s, {s}):
            return False
    full = set()
    for on in covered:
        for r in range(1, len(on) + 1):
            full.update(map(frozenset, itertools.combinations(on, r)))
    return full == allowed


def _as_embedded(nodes, edge_pairs):
    import networkx as nx

    Gx = nx.Graph()
    Gx.add_nodes_from(nodes)
    Gx.add_edges_from(edge_pairs)
    from .generate import from_networkx_planar

    return from_networkx_planar(Gx)


def replacement_search(protrusion, boundary, size_budget=None, candidate_cap=60000):
    """Smallest graph with the protrusion's boundary profile that is also a
    minor of it, or None if nothing smaller than the protrusion passes.

    Candidates are enumerated by vertex count, then edge count, then edge
    set; the boundary vertices keep their identities, extra vertices are
    fresh.  Raises BudgetExceeded when the space is too big to finish.
    """
    import networkx as nx

    B = sorted(set(boundary))
    if len(B) > SEARCH_BOUNDARY_LIMIT:
        raise BoundaryTooLarge(f"boundary of {len(B)} is over {SEARCH_BOUNDARY_LIMIT}")
    n_part = len(protrusion.vertices)
    if n_part > MINOR_HOST_LIMIT:
        raise BudgetExceeded("protrusion too large to certify a replacement")
    if size_budget is None:
        size_budget = n_part - 1
    size_budget = min(size_budget, n_part - 1)
    if size_budget < len(B):
        return None
    target = linkage_profile(protrusion, B)
    # degree lower bounds every viable candidate must meet: a boundary
    # vertex on some feasible cycle or passed through by some feasible
    # pattern needs two edges, one touched by any pattern or matching
    # needs at least one.  Extras always need two: a pendant extra sits
    # on no cycle and no path interior, so dropping it gives an
    # equal-profile candidate already tried at a smaller size.
    on_cycle = {v for s in target.feasible_cycle for v in s}
    for mm in target.feasible_dp:
        pdeg = {}
        for p in mm:
            for v in p:
                pdeg[v] = pdeg.get(v, 0) + 1
        on_cycle.update(v for v, c in pdeg.items() if c == 2)
    on_path = {
        v
        for fs in (target.feasible_dp, target.feasible_mc)
        for mm in fs
        for p in mm
        for v in p
    }
    # vertex groups any viable candidate must keep connected
    together = {frozenset(s) for s in target.feasible_cycle if len(s) > 1}
    for fs in (target.feasible_dp, target.feasible_mc):
        for mm in fs:
            together.update(p for p in mm)
    together = [tuple(s) for s in together]
    fresh_base = max(list(protrusion.vertices) + [0]) + 1
    tried = 0
    for n_h in range(len(B), size_budget + 1):
        extras = list(range(fresh_base, fresh_base + n_h - len(B)))
        nodes = B + extras
        min_deg = {v: 2 if v in on_cycle else 1 if v in on_path else 0 for v in B}
        min_deg.update(dict.fromkeys(extras, 2))
        pairs = [
            (a, b) for a, b in itertools.combinations(nodes, 2)
        ]
        space = 2 ** len(pairs)
        if tried + space > candidate_cap:
            raise BudgetExceeded(
                f"{space} candidates at {n_h} vertices is over the cap"
            )
        for m in range(len(pairs) + 1):
            for combo in itertools.combinations(pairs, m):
                tried += 1
                deg = dict.fromkeys(nodes, 0)
                for a, b in combo:
                    deg[a] += 1
                    deg[b] += 1
                if any(deg[v] < need for v, need in min_deg.items()):
                    continue
                root = {v: v for v in nodes}

                def find(v):
                    while root[v] != v:
                        root[v] = root[root[v]]
                        v = root[v]
                    return v

                for a, b in combo:
                    root[find(a)] = find(b)
                if any(
                    len({find(v) for v in grp}) > 1 for grp in together
                ):
                    continue
                if not _cycle_sets_match(nodes, combo, B, target):
                    continue
                Gx = nx.Graph()
                Gx.add_nodes_from(nodes)
                Gx.add_edges_from(combo)
                if not nx.check_planarity(Gx)[0]:
                    continue
                H = _as_embedded(nodes, combo)
                if not _profile_matches(H, B, target):
                    continue
                if not brute_minor(protrusion, H):
                    continue
                return H, {
                    "candidates": tried,
                    "old_size": n_part,
                    "new_size": n_h,
                }
    return None


def contraction_replacement(protrusion, boundary, max_interior=6):
    """A smaller profile-equal graph obtained by contracting the interior.

    Unlike the exhaustive search this scales to protrusions of any size:
    the result is a minor by construction, certified by explicit branch
    sets.  Interior vertices are contracted farthest-from-the-boundary
    first; the least contracted graph whose profile still matches wins.
    Returns None when every contraction level changes the profile.
    """
    B = sorted(set(boundary))
    if len(B) > BOUNDARY_LIMIT:
        raise BoundaryTooLarge(f"boundary of {len(B)} is over {BOUNDARY_LIMIT}")
    interior = sorted(protrusion.vertices - set(B))
    if not interior:
        return None
    target = linkage_profile(protrusion, B)
    candidates = []
    top = min(max_interior, len(interior) - 1)
    for m in range(top + 1):
        candidates.append(_contract_to(protrusion, B, m))
    candidates.extend(_rim_quotients(protrusion, B))
    candidates.sort(key=lambda hb: (len(hb[0].vertices), len(hb[0].edges)))
    for H, branch in candidates:
        if len(H.vertices) >= len(protrusion.vertices):
            continue
        if not _profile_matches(H, B, target):
            continue
        return H, {
            "old_size": len(protrusion.vertices),
            "new_size": len(H.vertices),
            "branch_sets": branch,
        }
    return None


def _contract_to(protrusion, boundary, m):
    """Contract interior vertices into nearer neighbors until at most m
    remain; returns the contracted multigraph and its branch sets.

    Parallel edges are kept (capped at two per pair): collapsing them
    would lose the difference between one and two disjoint routes, which
    the cycle part of the profile can see."""
    mult = {}
    adj = {v: set() for v in protrusion.vertices}
    for u, v in protrusion.edges.values():
        if u == v:
            continue
        pair = frozenset((u, v))
        mult[pair] = min(2, mult.get(pair, 0) + 1)
        adj[u].add(v)
        adj[v].add(u)
    Bs = set(boundary)
    branch = {v: {v} for v in adj}

    def remove_vertex(v):
        for w in adj[v]:
            adj[w].discard(v)
            mult.pop(frozenset((v, w)), None)
        del adj[v]

    while True:
        interior = [v for v in adj if v not in Bs]
        if len(interior) <= m:
            break
        dist = {b: 0 for b in Bs}
        frontier = sorted(Bs)
        d = 0
        while frontier:
            d += 1
            nxt = []
            for x in frontier:
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = d
                        nxt.append(y)
            frontier = sorted(nxt)
        far = 10 ** 9
        v = max(interior, key=lambda x: (dist.get(x, far), x))
        if not adj[v]:
            # interior piece with no route to the boundary: delete it
            remove_vertex(v)
            del branch[v]
            continue
        u = min(adj[v], key=lambda x: (dist.get(x, far), x))
        moved = {}
        for w in adj[v]:
            if w != u:
                moved[w] = mult[frozenset((v, w))]
        remove_vertex(v)
        for w, count in moved.items():
            pair = frozenset((u, w))
            mult[pair] = min(2, mult.get(pair, 0) + count)
            adj[u].add(w)
            adj[w].add(u)
        branch[u] |= branch.pop(v)
    edges = {}
    eid = 1
    for pair in sorted(mult, key=sorted):
        u, v = sorted(pair)
        for _ in range(mult[pair]):
            edges[eid] = (u, v)
            eid += 1
    H = _reembed(set(adj), edges, frozenset())
    return H, {v: frozenset(s) for v, s in branch.items()}


def _quotient(protrusion, rep):
    """Contract each class of the rep map (vertex -> class label) to one
    vertex; parallel edges capped at two.  Returns (graph, branch sets)."""
    classes = {}
    for v in protrusion.vertices:
        classes.setdefault(rep[v], set()).add(v)
    mult = {}
    for u, v in protrusion.edges.values():
        ru, rv = rep[u], rep[v]
        if ru == rv:
            continue
        pair = frozenset((ru, rv))
        mult[pair] = min(2, mult.get(pair, 0) + 1)
    edges = {}
    eid = 1
    for pair in sorted(mult, key=sorted):
        a, b = sorted(pair)
        for _ in range(mult[pair]):
            edges[eid] = (a, b)
            eid += 1
    try:
        H = _reembed(set(classes), edges, frozenset())
    except SpliceError:
        return None
    return H, {r: frozenset(vs) for r, vs in classes.items()}


def _rim_quotients(protrusion, boundary, cap=4):
    """Quotients that keep a face holding the whole boundary as a cycle.

    Farthest-first contraction is blind to the embedding and tends to merge
    the two rim routes between a boundary pair, losing cycles.  Here each
    boundary vertex stays its own class, every rim run between consecutive
    boundary vertices becomes one class, and each off-rim component becomes
    one class, so cycles along the attachment face survive."""
    try:
        emb = protrusion.embedding()
    except TCycleError:
        return []
    B = set(boundary)
    parent = {v: v for v in protrusion.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            ra, rb = sorted((ra, rb))
            parent[rb] = ra

    out = []
    for face in emb.faces:
        if not face.walk or not B <= face.vertices:
            continue
        seq = []
        for eid, side in face.walk:
            u, v = protrusion.edges[eid]
            seq.append(u if side == 0 else v)
        start = next(i for i, v in enumerate(seq) if v in B)
        seq = seq[start:] + seq[:start]
        for v in parent:
            parent[v] = v
        anchor = None
        for v in seq:
            if v in B:
                anchor = None
            else:
                if anchor is not None:
                    union(anchor, v)
                anchor = v
        rim = set(seq)
        left = protrusion.vertices - rim
        for s in sorted(left):
            for y in protrusion.neighbors(s):
                if y in left:
                    union(s, y)
        rep = {v: (v if v in B else find(v)) for v in protrusion.vertices}
        got = _quotient(protrusion, rep)
        if got is not None:
            out.append(got)
        if len(out) >= cap:
            break
    return out


def verify_minor_map(host, pattern, branch):
    """Independent check that branch sets witness pattern as a minor of
    host: disjoint connected sets, one per pattern vertex containing it,
    and a host edge behind every pattern edge."""
    seen = set()
    for p, vs in branch.items():
        if p not in pattern.vertices or p not in vs:
            return False
        if not vs <= host.vertices or vs & seen:
            return False
        seen |= vs
        comp = {min(vs)}
        stack = [min(vs)]
        while stack:
            x = stack.pop()
            for y in host.neighbors(x):
                if y in vs and y not in comp:
                    comp.add(y)
                    stack.append(y)
        if comp != set(vs):
            return False
    if set(branch) != set(pattern.vertices):
        return False
    demand = {}
    for u, v in pattern.edges.values():
        if u != v:
            demand[frozenset((u, v))] = demand.get(frozenset((u, v)), 0) + 1
    for pair, need in demand.items():
        u, v = sorted(pair)
        supply = sum(
            1
            for a, b in host.edges.values()
            if (a in branch[u] and b in branch[v])
            or (a in branch[v] and b in branch[u])
        )
        if supply < need:
            return False
    return True


# -- splicing ---------------------------------------------------------------


def _reembed(vertices, edges, terminals):
    """Rebuild rotations for a planar multigraph via a planarity test;
    parallel edges are nested (their order is reversed at one endpoint)."""
    import networkx as nx

    Gx = nx.Graph()
    Gx.add_nodes_from(vertices)
    for u, v in edges.values():
        Gx.add_edge(u, v)
    ok, emb = nx.check_planarity(Gx)
    if not ok:
        raise SpliceError("spliced graph is not planar")
    by_pair = {}
    for eid in sorted(edges):
        u, v = edges[eid]
        by_pair.setdefault(frozenset((u, v)), []).append(eid)
    rotation = {}
    for v in vertices:
        if Gx.degree(v) == 0:
            rotation[v] = ()
            continue
        rot = []
        for w in emb.neighbors_cw_order(v):
            ids = by_pair[frozenset((v, w))]
            rot.extend(ids if v < w else reversed(ids))
        rotation[v] = tuple(rot)
    return EmbeddedGraph(set(vertices), dict(edges), rotation, terminals)


def splice(host, part, replacement, boundary):
    """Replace the interior of part (everything off the boundary) with the
    replacement graph; the result is re-embedded and re-validated."""
    B = frozenset(boundary)
    part = frozenset(part)
    interior = part - B
    if not B <= replacement.vertices:
        raise SpliceError("replacement misses boundary vertices")
    for v in interior:
        if not host.neighbors(v) <= part:
            raise SpliceError("part interior touches the rest of the host")
    keep = host.vertices - interior
    vertices = set(keep)
    edges = {
        eid: (u, v)
        for eid, (u, v) in host.edges.items()
        if u in keep and v in keep
    }
    relabel = {}
    nxt = max(list(host.vertices) + [0]) + 1
    for v in sorted(replacement.vertices):
        if v in B:
            relabel[v] = v
        else:
            relabel[v] = nxt
            nxt += 1
    vertices |= set(relabel.values())
    eid = max(list(host.edges) + [0]) + 1
    for old in sorted(replacement.edges):
        u, v = replacement.edges[old]
        edges[eid] = tuple(sorted((relabel[u], relabel[v])))
        eid += 1
    out = _reembed(vertices, edges, host.terminals & vertices)
    try:
        out.embedding()
    except TCycleError as exc:
        raise SpliceError(str(exc)) from exc
    return out


def part_graph(graph, part, boundary):
    """The part as its own instance: induced on part plus boundary, minus
    the host-side edges joining two boundary vertices."""
    sub = graph.subgraph(frozenset(part) | frozenset(boundary))
    bb = {
        eid
        for eid, (u, v) in sub.edges.items()
        if u in boundary and v in boundary
    }
    return sub.without_edges(bb)


# -- the assembled pipeline -------------------------------------------------


@dataclass
class KernelReport:
    input_size: int
    final_size: int = 0
    stages: list = field(default_factory=list)
    replacements: list = field(default_factory=list)
    kept_verbatim: int = 0


def _linkage_irrelevant_sweep(graph, part, boundary, threshold):
    """Fixpoint deletion of interior vertices isolated from the boundary."""
    pg = part_graph(graph, part, boundary)
    gone = set()
    while True:
        emb = pg.embedding()
        far = {
            v
            for v in sorted(pg.vertices - boundary)
            if is_isolated(pg, boundary, v, threshold, emb)
        }
        if not far:
            return gone
        gone |= far
        pg = pg.without_vertices(far)


def kernelize(
    graph,
    terminals=None,
    budget=None,
    level=2,
    eta1=None,
    eta2=None,
    boundary_cap=SEARCH_BOUNDARY_LIMIT,
    candidate_cap=60000,
):
    """Shrink the instance while preserving the answer exactly.

    Stage 1 removes isolated vertices and yields a boundary set U; stage 2
    splits off protrusions around U and the terminals; per protrusion,
    stage 3 deletes interior vertices isolated from its boundary, stage 4
    splits the rest into subprotrusions, and stage 5 swaps each for the
    smallest certified equivalent.  Any part that is too big to certify
    is kept verbatim.
    """
    T = set(graph.terminals if terminals is None else terminals)
    if not T:
        raise InvalidConfiguration("no terminals")
    if not T <= graph.vertices:
        raise UnknownVertex(f"terminals {sorted(T - graph.vertices)}")
    report = KernelReport(input_size=len(graph.vertices))
    host = graph.with_terminals(T)

    g0 = budget.g if budget is not None else isolation_threshold(len(T))
    reduced, U, removal = reed_pipeline(host, budget=budget)
    report.stages.append(("reduce", len(host.vertices), len(reduced.vertices)))
    kernel = reduced

    S = (U | T) & kernel.vertices
    if eta1 is None:
        eta1 = 4 * g0
    try:
        decomp = protrusion_decompose(kernel, S, eta1)
    except (ModulatorInvalid, TCycleError):
        report.stages.append(("protrusions", len(kernel.vertices), len(kernel.vertices)))
        report.final_size = len(kernel.vertices)
        return kernel, report

    for part, B in zip(decomp.parts, decomp.boundaries):
        part = part & kernel.vertices
        if not part:
            continue
        if level >= 2:
            t3 = budget.g if budget is not None else isolation_threshold(
                g0 + len(B)
            )
            gone = _linkage_irrelevant_sweep(kernel, part, B, t3)
            if gone:
                kernel = kernel.without_vertices(gone)
                part = part - gone
                report.stages.append(("part-sweep", len(gone) + len(part), len(part)))
            if not part:
                continue
            sub_eta = eta2
            if sub_eta is None:
                sub_eta = 4 * isolation_threshold(g0 + len(B))
            try:
                pg = part_graph(kernel, part, B)
                nested = protrusion_decompose(pg, B, sub_eta)
                jobs = [
                    (y & part, yb)
                    for y, yb in zip(nested.parts, nested.boundaries)
                ]
            except (ModulatorInvalid, TCycleError):
                jobs = [(part, B)]
        else:
            jobs = [(part, B)]
        for sub, sub_b in jobs:
            if not sub:
                continue
            pgraph = part_graph(kernel, sub, sub_b)
            found = None
            method = None
            if (
                len(sub_b) <= boundary_cap
                and len(pgraph.vertices) <= MINOR_HOST_LIMIT
            ):
                try:
                    found = replacement_search(
                        pgraph, sub_b, candidate_cap=candidate_cap
                    )
                    method = "search"
                except (BoundaryTooLarge, BudgetExceeded):
                    found = None
            small = len(pgraph.vertices) <= MINOR_HOST_LIMIT
            # mid-size parts cap the boundary harder: the pattern count
            # (and with it the profile cost) grows seven-fold per vertex
            mid = (
                len(pgraph.vertices) <= CONTRACTION_SIZE_LIMIT
                and len(sub_b) <= SEARCH_BOUNDARY_LIMIT - 1
            )
            if found is None and len(sub_b) <= BOUNDARY_LIMIT and (small or mid):
                found = contraction_replacement(pgraph, sub_b)
                method = "contraction"
            if found is None:
                report.kept_verbatim += 1
                continue
            H, certificate = found
            # re-verify independently of how the candidate was found
            ok = linkage_profile(H, sub_b) == linkage_profile(pgraph, sub_b)
            if method == "contraction":
                ok = ok and verify_minor_map(
                    pgraph, H, certificate["branch_sets"]
                )
            else:
                ok = ok and brute_minor(pgraph, H)
            if not ok or len(H.vertices) >= len(pgraph.vertices):
                report.kept_verbatim += 1
                continue
            kernel = splice(kernel, sub | sub_b, H, sub_b)
            certificate["method"] = method
            certificate["verified"] = True
            report.replacements.append(certificate)

    report.final_size = len(kernel.vertices)
    return kernel, report
