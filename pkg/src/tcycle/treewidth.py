"""Tree decompositions: construction heuristics, validation, nice form and
LCA closure.

No exact treewidth is attempted; every decomposition is validated before
use, and the consumers only need validity, not optimality.
"""

from .errors import (
    EdgeUncovered,
    InvalidDecomposition,
    ParseError,
    VertexSubtreeDisconnected,
)
from .graph import radial_bfs


class TreeDecomposition:
    """bags: node id -> vertex set; links: undirected tree edges."""

    def __init__(self, bags, links, root=None):
        if not bags:
            raise InvalidDecomposition("no bags")
        self.bags = {n: frozenset(b) for n, b in bags.items()}
        self.links = [tuple(sorted(l)) for l in links]
        self.adj = {n: set() for n in self.bags}
        for a, b in self.links:
            if a not in self.adj or b not in self.adj:
                raise InvalidDecomposition("link endpoint is not a node")
            self.adj[a].add(b)
            self.adj[b].add(a)
        if root is None:
            root = min(self.bags, key=lambda n: (-len(self.adj[n]), n))
        self.root = root

    @property
    def width(self):
        return max(len(b) for b in self.bags.values()) - 1

    def rooted(self):
        """(parent, children, preorder) from the root; requires a tree."""
        parent = {self.root: None}
        children = {n: [] for n in self.bags}
        order = [self.root]
        queue = [self.root]
        while queue:
            x = queue.pop(0)
            for y in sorted(self.adj[x]):
                if y not in parent:
                    parent[y] = x
                    children[x].append(y)
                    order.append(y)
                    queue.append(y)
        if len(parent) != len(self.bags):
            raise InvalidDecomposition("tree is not connected")
        return parent, children, order

    def validate(self, graph):
        """Check the decomposition conditions against graph; return width."""
        if len(self.links) != len(self.bags) - 1:
            raise InvalidDecomposition("link count is wrong for a tree")
        self.rooted()
        everything = frozenset().union(*self.bags.values())
        if not everything <= graph.vertices:
            raise InvalidDecomposition("bag contains an unknown vertex")
        occurrences = {v: set() for v in graph.vertices}
        for n, bag in self.bags.items():
            for v in bag:
                occurrences[v].add(n)
        for eid, (u, v) in graph.edges.items():
            if not any(u in bag and v in bag for bag in self.bags.values()):
                raise EdgeUncovered(f"edge {eid} ({u},{v}) is in no bag")
        for v, occ in occurrences.items():
            if not occ:
                raise VertexSubtreeDisconnected(f"vertex {v} is in no bag")
            seen = {next(iter(sorted(occ)))}
            stack = list(seen)
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if y in occ and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if seen != occ:
                raise VertexSubtreeDisconnected(
                    f"bags of vertex {v} are not connected"
                )
        return self.width


def _greedy_fill(graph):
    """Min-fill elimination ordering; returns (order, bags per vertex)."""
    adj = {v: set() for v in graph.vertices}
    for u, v in graph.edges.values():
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    order = []
    bags = []
    left = set(adj)
    while left:
        best, best_fill = None, None
        for v in sorted(left):
            nb = adj[v]
            fill = sum(
                1
                for a in nb
                for b in nb
                if a < b and b not in adj[a]
            )
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
        nb = set(adj[best])
        order.append(best)
        bags.append(frozenset({best} | nb))
        for a in nb:
            for b in nb:
                if a != b:
                    adj[a].add(b)
        for a in nb:
            adj[a].discard(best)
        del adj[best]
        left.discard(best)
    return order, bags


def build(graph, mode="greedy"):
    """A validated tree decomposition of graph.

    greedy: min-fill elimination.  radial: BFS layers of the vertex-face
    incidence graph from the outer face, bagging consecutive layer triples
    (width tied to the radial depth, path-shaped tree).
    """
    if not graph.vertices:
        td = TreeDecomposition({0: frozenset()}, [])
        return td
    if mode == "greedy":
        order, elim_bags = _greedy_fill(graph)
        n = len(order)
        index = {v: i for i, v in enumerate(order)}
        links = []
        for i in range(n - 1):
            rest = elim_bags[i] - {order[i]}
            if rest:
                j = min(index[v] for v in rest)
            else:
                j = i + 1
            links.append((i, j))
        td = TreeDecomposition(dict(enumerate(elim_bags)), links)
    elif mode == "radial":
        emb = graph.embedding()
        sources = set()
        for comp in set(emb.component_of.values()):
            sources |= emb.faces[emb.outer_faces[comp]].vertices
        # components that are a single vertex have an empty outer walk
        sources |= {v for v in graph.vertices if graph.degree(v) == 0}
        dist = radial_bfs(graph, sorted(sources), emb)
        top = max(dist.values())
        bags = {}
        for i in range(max(1, top - 1)):
            bags[i] = frozenset(v for v, d in dist.items() if i <= d <= i + 2)
        links = [(i, i + 1) for i in range(len(bags) - 1)]
        td = TreeDecomposition(bags, links)
    else:
        raise InvalidDecomposition(f"unknown build mode {mode!r}")
    td.validate(graph)
    return td


class NiceTreeDecomposition(TreeDecomposition):
    """Rooted decomposition whose nodes are leaves, introduces, forgets and
    joins; leaf and root bags are empty."""

    def __init__(self, bags, kind, children, root):
        links = [(p, c) for p, cs in children.items() for c in cs]
        super().__init__(bags, links, root)
        self.kind = dict(kind)
        self.children = {n: list(cs) for n, cs in children.items()}

    def postorder(self):
        out = []
        stack = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                out.append(node)
            else:
                stack.append((node, True))
                for c in self.children[node]:
                    stack.append((c, False))
        return out

    def distinguished(self, node):
        """The vertex introduced or forgotten at node."""
        (child,) = self.children[node]
        diff = self.bags[node] ^ self.bags[child]
        (v,) = diff
        return v

    def check_shape(self):
        for n, k in self.kind.items():
            bag = self.bags[n]
            cs = self.children[n]
            if k == "leaf":
                assert not bag and not cs
            elif k == "introduce":
                assert len(cs) == 1 and bag > self.bags[cs[0]] and len(bag - self.bags[cs[0]]) == 1
            elif k == "forget":
                assert len(cs) == 1 and bag < self.bags[cs[0]] and len(self.bags[cs[0]] - bag) == 1
            elif k == "join":
                assert len(cs) == 2 and all(self.bags[c] == bag for c in cs)
            else:
                raise InvalidDecomposition(f"unknown node kind {k!r}")
        assert not self.bags[self.root]
        return True


def make_nice(td):
    """Turn a valid decomposition into nice form of the same width."""
    parent, children, order = td.rooted()
    bags = {}
    kind = {}
    kids = {}
    counter = [0]

    def new(bag, k, ch):
        nid = counter[0]
        counter[0] += 1
        bags[nid] = frozenset(bag)
        kind[nid] = k
        kids[nid] = list(ch)
        return nid

    def chain(cur, from_bag, to_bag):
        bag = set(from_bag)
        for v in sorted(from_bag - to_bag):
            bag.discard(v)
            cur = new(bag, "forget", [cur])
        for v in sorted(to_bag - from_bag):
            bag.add(v)
            cur = new(bag, "introduce", [cur])
        return cur

    tops = {}
    for node in reversed(order):
        target = td.bags[node]
        subs = [chain(tops[c], td.bags[c], target) for c in children[node]]
        if not subs:
            top = chain(new((), "leaf", []), frozenset(), target)
        else:
            while len(subs) > 1:
                b, a = subs.pop(), subs.pop()
                subs.append(new(target, "join", [a, b]))
            top = subs[0]
        tops[node] = top
    root = chain(tops[td.root], td.bags[td.root], frozenset())
    return NiceTreeDecomposition(bags, kind, kids, root)


def lca_closure(td, marked):
    """Smallest superset of marked closed under pairwise LCAs in td's tree."""
    marked = set(marked)
    if not marked:
        return frozenset()
    parent, children, order = td.rooted()
    depth = {td.root: 0}
    for node in order[1:]:
        depth[node] = depth[parent[node]] + 1
    pre = {node: i for i, node in enumerate(_dfs_preorder(td.root, children))}

    def lca(a, b):
        while a != b:
            if depth[a] < depth[b]:
                b = parent[b]
            else:
                a = parent[a]
        return a

    seq = sorted(marked, key=lambda n: pre[n])
    closure = set(seq)
    for a, b in zip(seq, seq[1:]):
        closure.add(lca(a, b))
    return frozenset(closure)


def _dfs_preorder(root, children):
    out = []
    stack = [root]
    while stack:
        node = stack.pop()
        out.append(node)
        for c in reversed(children[node]):
            stack.append(c)
    return out


def from_pace_lines(lines):
    """Inverse of pace_lines: header, bag records, tree edge records."""
    bags = {}
    links = []
    header = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            if parts[0] == "s":
                if header is not None:
                    raise ParseError(f"line {lineno}: second header")
                if len(parts) != 5 or parts[1] != "td":
                    raise ParseError(f"line {lineno}: bad header {raw!r}")
                header = tuple(int(x) for x in parts[2:])
            elif parts[0] == "b":
                node = int(parts[1])
                if node in bags:
                    raise ParseError(f"line {lineno}: duplicate bag {node}")
                bags[node] = frozenset(int(v) for v in parts[2:])
            else:
                a, b = (int(x) for x in parts)
                links.append((a, b))
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {raw!r}: {exc}") from exc
    if header is None:
        raise ParseError("missing s td header")
    if header[0] != len(bags):
        raise ParseError("header bag count disagrees with bag records")
    return TreeDecomposition(bags, links)


def pace_lines(td, n_vertices):
    """PACE-style text form: header, bag lines, then tree edge lines."""
    nodes = sorted(td.bags)
    renum = {node: i + 1 for i, node in enumerate(nodes)}
    lines = [f"s td {len(nodes)} {td.width + 1} {n_vertices}"]
    for node in nodes:
        inside = " ".join(str(v) for v in sorted(td.bags[node]))
        lines.append(f"b {renum[node]} {inside}".rstrip())
    for a, b in sorted(td.links):
        lines.append(f"{renum[a]} {renum[b]}")
    return lines
