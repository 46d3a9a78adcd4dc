"""Undirected multigraphs and the Dynkin / extended Dynkin trichotomy.

Connected components are classified as Dynkin (A, D, E), extended Dynkin
(A~, D~, E~) or a proper superset of an extended Dynkin shape, in which case
an embedded extended shape is returned as witness.  Loops are not supported:
separated quivers never produce them.
"""

from __future__ import annotations

from dataclasses import dataclass


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Multigraph:
    vertices: tuple
    edges: tuple  # tuple of unordered pairs, stored as sorted 2-tuples

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertices")
        norm = []
        for (u, v) in self.edges:
            if u == v:
                raise GraphError(f"loop at {u!r} not supported")
            if u not in vs or v not in vs:
                raise GraphError(f"edge ({u!r}, {v!r}) uses unknown vertex")
            norm.append(tuple(sorted((u, v))))
        object.__setattr__(self, "edges", tuple(norm))

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)

    def multiplicity(self, u, v) -> int:
        e = tuple(sorted((u, v)))
        return sum(1 for x in self.edges if x == e)

    def neighbours(self, v) -> list:
        out = []
        for (a, b) in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return out

    def components(self) -> list[tuple]:
        seen = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            stack, comp = [v], []
            seen.add(v)
            while stack:
                cur = stack.pop()
                comp.append(cur)
                for n in self.neighbours(cur):
                    if n not in seen:
                        seen.add(n)
                        stack.append(n)
            comps.append(tuple(sorted(comp, key=lambda x: self.vertices.index(x))))
        return comps

    def induced(self, vertices) -> "Multigraph":
        vs = tuple(v for v in self.vertices if v in set(vertices))
        es = tuple(e for e in self.edges if e[0] in set(vs) and e[1] in set(vs))
        return Multigraph(vs, es)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "edges": [list(e) for e in self.edges]}


# ---------------------------------------------------------------------------
# catalog shapes as graphs


def a_tilde_graph(n: int) -> Multigraph:
    """Cycle with n+1 vertices; n = 1 is the double edge."""
    if n < 1:
        raise GraphError("A~ needs index >= 1")
    k = n + 1
    vs = tuple(f"c{i}" for i in range(k))
    if k == 2:
        es = (("c0", "c1"), ("c0", "c1"))
    else:
        es = tuple((f"c{i}", f"c{(i + 1) % k}") for i in range(k))
    return Multigraph(vs, es)


def d_tilde_graph(n: int) -> Multigraph:
    """n+1 vertices; D~4 is the 4-leaf star, larger ones have two forks."""
    if n < 4:
        raise GraphError("D~ needs index >= 4")
    if n == 4:
        vs = ("c", "u1", "u2", "u3", "u4")
        es = tuple(("c", u) for u in vs[1:])
        return Multigraph(vs, es)
    spine = [f"s{i}" for i in range(n - 3)]
    vs = tuple(["u1", "u2"] + spine + ["v1", "v2"])
    es = [("u1", spine[0]), ("u2", spine[0]), ("v1", spine[-1]), ("v2", spine[-1])]
    es += [(spine[i], spine[i + 1]) for i in range(len(spine) - 1)]
    return Multigraph(vs, tuple(es))


def e_tilde_graph(n: int) -> Multigraph:
    arms = {6: (2, 2, 2), 7: (1, 3, 3), 8: (1, 2, 5)}.get(n)
    if arms is None:
        raise GraphError("E~ index must be 6, 7 or 8")
    vs = ["c"]
    es = []
    for ai, length in enumerate(arms):
        prev = "c"
        for j in range(length):
            v = f"a{ai}_{j}"
            vs.append(v)
            es.append((prev, v))
            prev = v
    return Multigraph(tuple(vs), tuple(es))


def extended_graph(family: str, index: int) -> Multigraph:
    if family == "A~":
        return a_tilde_graph(index)
    if family == "D~":
        return d_tilde_graph(index)
    if family == "E~":
        return e_tilde_graph(index)
    raise GraphError(f"unknown extended family {family!r}")


# ---------------------------------------------------------------------------
# subgraph containment (monomorphism) for small patterns


def contains_subgraph(G: Multigraph, H: Multigraph) -> dict | None:
    """A vertex embedding of H into G with enough edge multiplicity, or None."""
    hv = list(H.vertices)
    if not hv:
        return {}
    # order H vertices so each one (after the first) touches an earlier one
    order = [hv[0]]
    rest = set(hv[1:])
    while rest:
        nxt = None
        for v in sorted(rest, key=lambda v: (-H.degree(v), str(v))):
            if any(n in order for n in H.neighbours(v)):
                nxt = v
                break
        if nxt is None:
            nxt = sorted(rest, key=str)[0]
        order.append(nxt)
        rest.discard(nxt)

    gdeg = {v: G.degree(v) for v in G.vertices}

    def extend(assign: dict):
        if len(assign) == len(order):
            return dict(assign)
        v = order[len(assign)]
        need_deg = H.degree(v)
        for cand in G.vertices:
            if cand in assign.values():
                continue
            if gdeg[cand] < need_deg:
                continue
            ok = True
            for n in H.neighbours(v):
                if n in assign and G.multiplicity(cand, assign[n]) < H.multiplicity(v, n):
                    ok = False
                    break
            if ok:
                assign[v] = cand
                got = extend(assign)
                if got is not None:
                    return got
                del assign[v]
        return None

    return extend({})


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ComponentClass:
    vertices: tuple
    kind: str  # "dynkin" | "extended" | "superset"
    family: str | None  # A, D, E, A~, D~, E~ (the witness family for supersets)
    index: int | None
    witness: Multigraph | None = None  # embedded extended shape for supersets

    def label(self) -> str:
        if self.kind == "superset":
            return f"superset({self.family}{self.index})"
        return f"{self.family}{self.index}"

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "kind": self.kind,
            "family": self.family,
            "index": self.index,
            "witness": self.witness.to_json() if self.witness else None,
        }


@dataclass(frozen=True)
class GraphClass:
    components: tuple[ComponentClass, ...]

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components]}


def _find_cycle(G: Multigraph, comp) -> Multigraph:
    """Some cycle inside the component, as an A~ witness subgraph."""
    for (u, v) in G.edges:
        if u in comp and G.multiplicity(u, v) >= 2:
            return Multigraph((u, v), ((u, v), (u, v)))
    # DFS for a simple cycle
    adj: dict = {v: [] for v in comp}
    for (u, v) in set(G.edges):
        if u in adj and v in adj:
            adj[u].append(v)
            adj[v].append(u)
    start = comp[0]
    parent = {start: None}
    stack = [(start, None)]
    while stack:
        cur, par = stack.pop()
        for n in adj[cur]:
            if n == par or parent.get(n) == cur:
                continue
            if n in parent:
                # walk both branches back to the root to close the cycle
                path_a, node = [cur], cur
                while parent[node] is not None:
                    node = parent[node]
                    path_a.append(node)
                path_b, node = [n], n
                while parent[node] is not None:
                    node = parent[node]
                    path_b.append(node)
                sa, sb = set(path_a), set(path_b)
                meet = next(x for x in path_a if x in sb)
                cyc = path_a[: path_a.index(meet) + 1] + path_b[: path_b.index(meet)][::-1]
                es = tuple((cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc)))
                return Multigraph(tuple(cyc), es)
            parent[n] = cur
            stack.append((n, cur))
    raise GraphError("no cycle found where one was expected")


def _arm_lengths(G: Multigraph, comp, branch) -> list[tuple[int, tuple]]:
    """Arm lengths from the unique branch vertex of a tree, with vertex lists."""
    arms = []
    for start in G.neighbours(branch):
        arm = [start]
        prev, cur = branch, start
        while True:
            nxt = [n for n in G.neighbours(cur) if n != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            arm.append(cur)
        arms.append((len(arm), tuple(arm)))
    return sorted(arms)


def _classify_tree(G: Multigraph, comp) -> ComponentClass:
    degs = {v: G.degree(v) for v in comp}
    maxdeg = max(degs.values()) if comp else 0
    if maxdeg <= 2:
        return ComponentClass(comp, "dynkin", "A", len(comp))
    big = [v for v in comp if degs[v] >= 4]
    branch = [v for v in comp if degs[v] == 3]
    if big:
        c = big[0]
        ns = sorted(G.neighbours(c), key=str)[:4]
        wit = Multigraph(tuple([c] + ns), tuple((c, n) for n in ns))
        if len(comp) == 5 and degs[c] == 4 and len(big) == 1 and not branch:
            return ComponentClass(comp, "extended", "D~", 4)
        return ComponentClass(comp, "superset", "D~", 4, wit)
    if len(branch) >= 2:
        # pick the closest pair of branch vertices
        dist = _tree_distances(G, comp)
        u, v = min(
            ((a, b) for a in branch for b in branch if a != b),
            key=lambda p: (dist[p[0]][p[1]], str(p[0]), str(p[1])),
        )
        path = _tree_path(G, u, v)
        u_extra = [n for n in G.neighbours(u) if n not in path][:2]
        v_extra = [n for n in G.neighbours(v) if n not in path][:2]
        wvs = tuple(u_extra + list(path) + v_extra)
        wes = [(u, n) for n in u_extra] + [(v, n) for n in v_extra]
        wes += [(path[i], path[i + 1]) for i in range(len(path) - 1)]
        wit = Multigraph(wvs, tuple(wes))
        index = len(wvs) - 1
        if len(branch) == 2 and len(comp) == len(wvs):
            return ComponentClass(comp, "extended", "D~", index)
        return ComponentClass(comp, "superset", "D~", index, wit)
    # exactly one branch vertex of degree 3
    c = branch[0]
    arms = _arm_lengths(G, comp, c)
    (a, arm_a), (b, arm_b), (cc, arm_c) = arms
    profile = (a, b, cc)
    if a == 1 and b == 1:
        return ComponentClass(comp, "dynkin", "D", len(comp))
    if profile == (1, 2, 2):
        return ComponentClass(comp, "dynkin", "E", 6)
    if profile == (1, 2, 3):
        return ComponentClass(comp, "dynkin", "E", 7)
    if profile == (1, 2, 4):
        return ComponentClass(comp, "dynkin", "E", 8)
    if profile == (2, 2, 2):
        return ComponentClass(comp, "extended", "E~", 6)
    if profile == (1, 3, 3):
        return ComponentClass(comp, "extended", "E~", 7)
    if profile == (1, 2, 5):
        return ComponentClass(comp, "extended", "E~", 8)
    # superset: trim arms down to an extended profile
    if a >= 2:
        target = (2, 2, 2)
        fam, idx = "E~", 6
    elif b >= 3:
        target = (1, 3, 3)
        fam, idx = "E~", 7
    else:  # a == 1, b == 2, c >= 6
        target = (1, 2, 5)
        fam, idx = "E~", 8
    keep = [c]
    es = []
    for need, (ln, arm) in zip(target, arms):
        prev = c
        for v in arm[:need]:
            keep.append(v)
            es.append((prev, v))
            prev = v
    wit = Multigraph(tuple(keep), tuple(es))
    return ComponentClass(comp, "superset", fam, idx, wit)


def _tree_distances(G: Multigraph, comp):
    dist = {}
    for s in comp:
        d = {s: 0}
        stack = [s]
        while stack:
            cur = stack.pop()
            for n in G.neighbours(cur):
                if n not in d:
                    d[n] = d[cur] + 1
                    stack.append(n)
        dist[s] = d
    return dist


def _tree_path(G: Multigraph, u, v):
    parent = {u: None}
    stack = [u]
    while stack:
        cur = stack.pop()
        if cur == v:
            break
        for n in G.neighbours(cur):
            if n not in parent:
                parent[n] = cur
                stack.append(n)
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


def classify_component(G: Multigraph, comp) -> ComponentClass:
    sub = G.induced(comp)
    V = len(sub.vertices)
    E = len(sub.edges)
    if E == V - 1:
        return _classify_tree(sub, tuple(sub.vertices))
    # at least one cycle
    cyc = _find_cycle(sub, tuple(sub.vertices))
    n = len(cyc.vertices) if len(cyc.vertices) > 2 else 1
    if E == V and all(sub.degree(v) == 2 for v in sub.vertices):
        return ComponentClass(tuple(sub.vertices), "extended", "A~", V - 1 if V > 2 else 1)
    index = 1 if len(cyc.vertices) == 2 else len(cyc.vertices) - 1
    return ComponentClass(tuple(sub.vertices), "superset", "A~", index, cyc)


def classify_graph(G: Multigraph) -> GraphClass:
    return GraphClass(tuple(classify_component(G, c) for c in G.components()))


def contained_extended_shapes(G: Multigraph, comp=None) -> list[tuple[str, int]]:
    """All extended Dynkin shapes embedding into G (or a component of it)."""
    sub = G if comp is None else G.induced(comp)
    V = len(sub.vertices)
    out = []
    for n in range(1, V):
        if contains_subgraph(sub, a_tilde_graph(n)):
            out.append(("A~", n))
    for n in range(4, V):
        if contains_subgraph(sub, d_tilde_graph(n)):
            out.append(("D~", n))
    for n in (6, 7, 8):
        if n + 1 <= V and contains_subgraph(sub, e_tilde_graph(n)):
            out.append(("E~", n))
    return out
