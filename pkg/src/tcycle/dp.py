"""Dynamic programming over nice tree decompositions.

Solves T-Cycle (with witness), vertex-disjoint linkages for a matching,
and the subdivided M-cycle variant.  Each edge of the graph is charged to
the node closest to the root whose bag contains both endpoints, so it is
considered exactly once.
"""

from .errors import InvalidConfiguration
from .graph import EmbeddedGraph
from .oracle import check_matching, is_t_loop
from .treewidth import NiceTreeDecomposition, TreeDecomposition, build, make_nice


def _prepare(graph, td):
    """Nice decomposition plus the edge-to-node assignment."""
    if td is None:
        td = build(graph)
    if not isinstance(td, NiceTreeDecomposition):
        td = make_nice(td)
    td.validate(graph)
    depth = {td.root: 0}
    stack = [td.root]
    while stack:
        x = stack.pop()
        for c in td.children[x]:
            depth[c] = depth[x] + 1
            stack.append(c)
    assign = {n: [] for n in td.bags}
    for eid in sorted(graph.edges):
        u, v = graph.edges[eid]
        if u == v:
            continue  # a loop edge is never part of a simple cycle or path
        cands = [n for n, bag in td.bags.items() if u in bag and v in bag]
        assign[min(cands, key=lambda n: depth[n])].append(eid)
    return td, assign


def _components(pair_edges):
    """Split a union of endpoint pairs (a degree <= 2 multigraph) into
    components; returns (paths, cycle_count) with paths as (end, end)."""
    adj = {}
    for k, (a, b) in enumerate(pair_edges):
        adj.setdefault(a, []).append((k, b))
        adj.setdefault(b, []).append((k, a))
    seen = set()
    paths = []
    cycles = 0
    # walk open paths starting from their degree-one endpoints
    for start in sorted(adj, key=repr):
        if len(adj[start]) != 1 or adj[start][0][0] in seen:
            continue
        cur = start
        while True:
            step = [(k, w) for k, w in adj[cur] if k not in seen]
            if not step:
                break
            k, w = step[0]
            seen.add(k)
            cur = w
        paths.append((start, cur))
    # whatever is left closes on itself
    for k, (a, b) in enumerate(pair_edges):
        if k in seen:
            continue
        cycles += 1
        seen.add(k)
        cur = b
        while cur != a:
            k2, w = next((x, y) for x, y in adj[cur] if x not in seen)
            seen.add(k2)
            cur = w
    return paths, cycles


class _TCycleDP:
    """State: per-bag-vertex degrees, pairing of the open path ends, and a
    closed flag; values carry one witness edge set per state."""

    def __init__(self, graph, terminals, td, assign):
        self.g = graph
        self.T = frozenset(terminals)
        self.td = td
        self.assign = assign

    def run(self):
        tables = {}
        for node in self.td.postorder():
            kind = self.td.kind[node]
            bag = tuple(sorted(self.td.bags[node]))
            if kind == "leaf":
                table = {((), frozenset(), False): frozenset()}
            elif kind == "introduce":
                table = self._introduce(tables, node, bag)
            elif kind == "forget":
                table = self._forget(tables, node, bag)
            else:
                table = self._join(tables, node, bag)
            for c in self.td.children[node]:
                del tables[c]
            for eid in self.assign[node]:
                table = self._edge(table, bag, eid)
            tables[node] = table
        root = tables[self.td.root]
        return root.get(((), frozenset(), True))

    def _introduce(self, tables, node, bag):
        (child,) = self.td.children[node]
        v = self.td.distinguished(node)
        pos = bag.index(v)
        out = {}
        for (degs, pairs, closed), wit in tables[child].items():
            ndegs = degs[:pos] + (0,) + degs[pos:]
            out[(ndegs, pairs, closed)] = wit
        return out

    def _forget(self, tables, node, bag):
        (child,) = self.td.children[node]
        v = self.td.distinguished(node)
        cbag = tuple(sorted(self.td.bags[child]))
        pos = cbag.index(v)
        out = {}
        for (degs, pairs, closed), wit in tables[child].items():
            d = degs[pos]
            if v in self.T:
                if d != 2:
                    continue
            elif d not in (0, 2):
                continue
            key = (degs[:pos] + degs[pos + 1 :], pairs, closed)
            out.setdefault(key, wit)
        return out

    def _join(self, tables, node, bag):
        a, b = self.td.children[node]
        out = {}
        for (da, pa, ca), wa in tables[a].items():
            for (db, pb, cb), wb in tables[b].items():
                if ca and cb:
                    continue
                degs = tuple(x + y for x, y in zip(da, db))
                if any(d > 2 for d in degs):
                    continue
                paths, cycles = _components(
                    [tuple(sorted(p)) for p in pa] + [tuple(sorted(p)) for p in pb]
                )
                if cycles > 1 or (cycles and (ca or cb)):
                    continue
                closed = ca or cb or cycles == 1
                pairs = frozenset(frozenset(p) for p in paths)
                if closed and pairs:
                    continue
                key = (degs, pairs, closed)
                out.setdefault(key, wa | wb)
        return out

    def _edge(self, table, bag, eid):
        u, v = self.g.edges[eid]
        iu, iv = bag.index(u), bag.index(v)
        out = dict(table)
        for (degs, pairs, closed), wit in table.items():
            if closed or degs[iu] >= 2 or degs[iv] >= 2:
                continue
            ndegs = list(degs)
            ndegs[iu] += 1
            ndegs[iv] += 1
            ndegs = tuple(ndegs)
            pu = next((p for p in pairs if u in p), None)
            pv = next((p for p in pairs if v in p), None)
            if pu is None and pv is None:
                key = (ndegs, pairs | {frozenset({u, v})}, False)
            elif pu is None or pv is None:
                p = pu or pv
                x, y = (u, v) if pu is None else (v, u)
                (other,) = p - {y}
                if other == x:
                    continue
                key = (ndegs, (pairs - {p}) | {frozenset({x, other})}, False)
            elif pu == pv:
                if len(pairs) != 1:
                    continue
                key = (ndegs, frozenset(), True)
            else:
                (x,) = pu - {u}
                (y,) = pv - {v}
                if x == y:
                    continue
                key = (ndegs, (pairs - {pu, pv}) | {frozenset({x, y})}, False)
            out.setdefault(key, wit | {eid})
        return out


def solve_t_cycle(graph, terminals=None, td=None):
    """A T-loop as a sorted edge-id list, or None."""
    T = frozenset(graph.terminals if terminals is None else terminals)
    if not T:
        raise InvalidConfiguration("terminal set is empty")
    if not T <= graph.vertices:
        raise InvalidConfiguration("terminal is not a vertex")
    td, assign = _prepare(graph, td)
    wit = _TCycleDP(graph, T, td, assign).run()
    if wit is None:
        return None
    loop = sorted(wit)
    assert is_t_loop(graph, T, loop)
    return loop


class _LinkageDP:
    """State: degrees, open path fragments (ends are bag vertices or sealed
    matched vertices), and the set of completed pairs."""

    def __init__(self, graph, pairs, td, assign):
        self.g = graph
        self.pairs = frozenset(pairs)
        self.matched = frozenset(v for p in pairs for v in p)
        self.td = td
        self.assign = assign

    def cap(self, v):
        return 1 if v in self.matched else 2

    def run(self):
        tables = {}
        for node in self.td.postorder():
            kind = self.td.kind[node]
            bag = tuple(sorted(self.td.bags[node]))
            if kind == "leaf":
                table = {((), frozenset(), frozenset())}
            elif kind == "introduce":
                table = self._introduce(tables, node, bag)
            elif kind == "forget":
                table = self._forget(tables, node, bag)
            else:
                table = self._join(tables, node, bag)
            for c in self.td.children[node]:
                del tables[c]
            for eid in self.assign[node]:
                table = self._edge(table, bag, eid)
            tables[node] = table
        return ((), frozenset(), self.pairs) in tables[self.td.root]

    def _introduce(self, tables, node, bag):
        (child,) = self.td.children[node]
        v = self.td.distinguished(node)
        pos = bag.index(v)
        out = set()
        for degs, frags, done in tables[child]:
            out.add((degs[:pos] + (0,) + degs[pos:], frags, done))
        return out

    def _forget(self, tables, node, bag):
        (child,) = self.td.children[node]
        v = self.td.distinguished(node)
        cbag = tuple(sorted(self.td.bags[child]))
        pos = cbag.index(v)
        out = set()
        for degs, frags, done in tables[child]:
            d = degs[pos]
            ndegs = degs[:pos] + degs[pos + 1 :]
            if v in self.matched:
                if d != 1:
                    continue
                frag = next(f for f in frags if ("v", v) in f)
                (other,) = frag - {("v", v)}
                if other[0] == "a":
                    pair = frozenset({v, other[1]})
                    if pair not in self.pairs:
                        continue
                    out.add((ndegs, frags - {frag}, done | {pair}))
                else:
                    nfrag = frozenset({("a", v), other})
                    out.add((ndegs, (frags - {frag}) | {nfrag}, done))
            else:
                if d not in (0, 2):
                    continue
                out.add((ndegs, frags, done))
        return out

    def _join(self, tables, node, bag):
        a, b = self.td.children[node]
        out = set()
        for da, fa, za in tables[a]:
            for db, fb, zb in tables[b]:
                degs = tuple(x + y for x, y in zip(da, db))
                if any(d > self.cap(v) for d, v in zip(degs, bag)):
                    continue
                paths, cycles = _components(
                    [tuple(sorted(f, key=repr)) for f in fa]
                    + [tuple(sorted(f, key=repr)) for f in fb]
                )
                if cycles:
                    continue
                done = set(za | zb)
                frags = set()
                ok = True
                for x, y in paths:
                    if x == y:
                        ok = False
                        break
                    if x[0] == "a" and y[0] == "a":
                        pair = frozenset({x[1], y[1]})
                        if pair not in self.pairs:
                            ok = False
                            break
                        done.add(pair)
                    else:
                        frags.add(frozenset({x, y}))
                if ok:
                    out.add((degs, frozenset(frags), frozenset(done)))
        return out

    def _edge(self, table, bag, eid):
        u, v = self.g.edges[eid]
        iu, iv = bag.index(u), bag.index(v)
        out = set(table)
        for degs, frags, done in table:
            if degs[iu] >= self.cap(u) or degs[iv] >= self.cap(v):
                continue
            ndegs = list(degs)
            ndegs[iu] += 1
            ndegs[iv] += 1
            ndegs = tuple(ndegs)
            eu, ev = ("v", u), ("v", v)
            fu = next((f for f in frags if eu in f), None)
            fv = next((f for f in frags if ev in f), None)
            if fu is not None and fu == fv:
                continue  # would close a cycle
            if fu is None and fv is None:
                out.add((ndegs, frags | {frozenset({eu, ev})}, done))
                continue
            if fu is None or fv is None:
                f = fu or fv
                mine = eu if fu is None else ev
                gone = ev if fu is None else eu
                (other,) = f - {gone}
                out.add((ndegs, (frags - {f}) | {frozenset({mine, other})}, done))
                continue
            (x,) = fu - {eu}
            (y,) = fv - {ev}
            if x[0] == "a" and y[0] == "a":
                pair = frozenset({x[1], y[1]})
                if pair not in self.pairs:
                    continue
                out.add((ndegs, frags - {fu, fv}, done | {pair}))
            else:
                out.add((ndegs, (frags - {fu, fv}) | {frozenset({x, y})}, done))
        return out


def solve_disjoint_paths(graph, matching, td=None):
    """True iff vertex-disjoint paths realize every pair of the matching."""
    pairs = check_matching(graph, matching)
    if not pairs:
        return True
    td, assign = _prepare(graph, td)
    return _LinkageDP(graph, pairs, td, assign).run()


def subdivided_instance(graph, matching):
    """The matching-subdivided graph: a fresh degree-2 vertex per pair.

    Returns (graph_m, subdivision_vertices).  The result carries a
    placeholder rotation usable by the DP but not by embedding-dependent
    code.
    """
    pairs = check_matching(graph, matching)
    edges = dict(graph.edges)
    verts = set(graph.vertices)
    fresh_v = max(verts, default=0)
    fresh_e = max(edges, default=0)
    new_verts = []
    for pair in sorted(pairs, key=sorted):
        u, v = sorted(pair)
        fresh_v += 1
        w = fresh_v
        verts.add(w)
        new_verts.append(w)
        for end in (u, v):
            fresh_e += 1
            edges[fresh_e] = (end, w)
    incident = {x: [] for x in verts}
    for eid, (u, v) in edges.items():
        incident[u].append(eid)
        incident[v].append(eid)
    rotation = {x: tuple(sorted(incident[x])) for x in verts}
    gm = EmbeddedGraph(verts, edges, rotation, frozenset(new_verts))
    return gm, frozenset(new_verts)


def solve_m_cycle(graph, boundary, matching, td=None):
    """True iff a cycle visits the matched pairs consecutively: a terminal
    loop through the subdivision vertices of the subdivided graph."""
    pairs = check_matching(graph, matching)
    if not frozenset(v for p in pairs for v in p) <= frozenset(boundary):
        raise InvalidConfiguration("matching leaves the boundary")
    if not pairs:
        return True  # an empty requirement is satisfied by convention
    gm, subs = subdivided_instance(graph, matching)
    if td is not None:
        td = _extend_for_subdivision(td, graph, boundary, gm, subs)
    return solve_t_cycle(gm, subs, td) is not None


def _extend_for_subdivision(td, graph, boundary, gm, subs):
    """Cover the subdivision vertices: add the boundary to every bag and
    hang one bag per fresh vertex off the root."""
    boundary = frozenset(boundary)
    bags = {n: bag | boundary for n, bag in td.bags.items()}
    links = list(td.links)
    nxt = max(bags) + 1
    for w in sorted(subs):
        bags[nxt] = boundary | {w}
        links.append((td.root, nxt))
        nxt += 1
    out = TreeDecomposition(bags, links, root=td.root)
    out.validate(gm)
    return out
