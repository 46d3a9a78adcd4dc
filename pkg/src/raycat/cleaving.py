"""Cleaving diagrams: functors that reflect zeroness and factorisations.

A diagram is a functor from a finite shape category (quiver without
oriented cycles; any two parallel paths are identified, zero relations are
explicit) into a host ray category.  It is cleaving when

  a) images of nonzero morphisms are nonzero,
  b) no irreducible morphism maps to an identity,
  c) for irreducible alpha, beta at a common source and every maximal
     nonzero mu factoring through beta but not through alpha, the image of
     mu does not factor through the image of alpha,
  d) the dual of c.

Crowns are periodic zigzags checked directly by their four non-equations.
The module also builds separated quivers and searches the built-in extended
Dynkin catalog for cleaving witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import Multigraph
from .presentation import (
    Arrow,
    CommutativityRelation,
    Presentation,
    PresentationError,
    Quiver,
    ZeroRelation,
)
from .raycore import RayCategory, RayMorphism, build_ray_category


class FunctorError(ValueError):
    """The arrow assignment does not define a functor into the host."""


class BudgetExhausted(RuntimeError):
    def __init__(self, attempts):
        self.attempts = attempts
        super().__init__(f"witness search budget exhausted after {attempts} attempts")


# ---------------------------------------------------------------------------
# shape categories


def _has_oriented_cycle(quiver: Quiver) -> bool:
    color = {p: 0 for p in quiver.points}
    out = {p: [a.target for a in quiver.arrows_from(p)] for p in quiver.points}

    def dfs(p):
        color[p] = 1
        for q in out[p]:
            if color[q] == 1:
                return True
            if color[q] == 0 and dfs(q):
                return True
        color[p] = 2
        return False

    return any(color[p] == 0 and dfs(p) for p in quiver.points)


def _all_paths(quiver: Quiver):
    """Every nonempty path of an acyclic quiver, in composition order."""
    out = []

    def extend(path, src):
        for a in quiver.arrows_into(src):
            new = path + (a.name,)
            out.append(new)
            extend(new, a.source)

    for a in quiver.arrows:
        out.append((a.name,))
        extend((a.name,), a.source)
    return out


def shape_category(pres: Presentation) -> RayCategory:
    """Build the shape as a ray category: all parallel paths are identified
    on top of the explicit relations."""
    if _has_oriented_cycle(pres.quiver):
        raise PresentationError("shape quiver has an oriented cycle")
    paths = _all_paths(pres.quiver)
    by_pair: dict[tuple[str, str], list] = {}
    from .presentation import path_source, path_target

    for p in paths:
        key = (path_source(pres.quiver, p), path_target(pres.quiver, p))
        by_pair.setdefault(key, []).append(p)
    rels = list(pres.relations)
    for group in by_pair.values():
        group.sort(key=lambda t: (len(t), t))
        first = group[0]
        for other in group[1:]:
            if (first, other) != (other, first):
                try:
                    rels.append(CommutativityRelation(other, first))
                except PresentationError:
                    # arrow parallel to itself etc.; skip degenerate pairs
                    pass
    longest = max((len(p) for p in paths), default=1)
    pres2 = Presentation(pres.name, pres.quiver, tuple(rels))
    return build_ray_category(pres2, cap=longest + 2)


# ---------------------------------------------------------------------------
# diagram functors


@dataclass(eq=False)
class DiagramFunctor:
    shape: Presentation
    host: RayCategory
    objects: dict[str, str]
    arrows: dict[str, RayMorphism]
    _shape_cat: RayCategory | None = field(default=None, repr=False)

    @property
    def shape_cat(self) -> RayCategory:
        if self._shape_cat is None:
            self._shape_cat = shape_category(self.shape)
        return self._shape_cat

    def image(self, m: RayMorphism) -> RayMorphism:
        """Host image of a shape morphism."""
        if m.is_zero:
            return self.host.zero(self.objects[m.source], self.objects[m.target])
        if m.is_identity:
            return self.host.identity(self.objects[m.source])
        out = self.host.identity(self.objects[m.source])
        for name in reversed(m.rep):
            out = self.host.compose(self.arrows[name], out)
        return out

    def image_of_path(self, path) -> RayMorphism:
        from .presentation import path_source

        out = self.host.identity(self.objects[path_source(self.shape.quiver, path)])
        for name in reversed(path):
            out = self.host.compose(self.arrows[name], out)
        return out

    def validate(self) -> None:
        """Functoriality: endpoints respected, shape relations hold in host."""
        for a in self.shape.quiver.arrows:
            m = self.arrows.get(a.name)
            if m is None:
                raise FunctorError(f"no image for arrow {a.name}")
            if m.source != self.objects.get(a.source) or m.target != self.objects.get(a.target):
                raise FunctorError(
                    f"arrow {a.name} image {m} does not respect the object map"
                )
        D = self.shape_cat
        for m in D.all_morphisms(include_identities=False):
            images = {self.image_of_path(p) for p in D.members(m)}
            if len(images) > 1:
                raise FunctorError(
                    f"parallel paths {D.members(m)} receive different images"
                )
        for rel in self.shape.relations:
            if isinstance(rel, ZeroRelation):
                if not self.image_of_path(rel.path).is_zero:
                    raise FunctorError(
                        f"zero relation {' '.join(rel.path)} broken in the host"
                    )

    def to_json(self) -> dict:
        from .presentation import presentation_to_json

        return {
            "shape": presentation_to_json(self.shape),
            "objects": dict(sorted(self.objects.items())),
            "arrows": {
                name: list(m.rep) for name, m in sorted(self.arrows.items())
            },
        }


@dataclass
class CleavingVerdict:
    ok: bool
    condition: str | None = None  # a | b | c | d
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "condition": self.condition, "witness": self.witness}


def _factors_through_left(P: RayCategory, m: RayMorphism, a: RayMorphism):
    """xi with m = xi . a, allowing the identity; None if none exists."""
    if m.source != a.source:
        return None
    for xi in P.nonzero_classes(a.target, m.target):
        if P.compose(xi, a) == m:
            return xi
    return None


def forward_triples(D: RayCategory) -> list[tuple[RayMorphism, RayMorphism, RayMorphism]]:
    """(alpha, beta, mu) instances of condition c, shape side only.

    alpha, beta irreducible with a common source, mu nonzero and maximal
    (killed by every irreducible out of its target), factoring through beta
    but not through alpha.  These depend only on the shape, so witness
    searches compute them once per shape.
    """
    irr = D.irreducibles()
    nonzero = D.all_morphisms(include_identities=False)
    arrows_at: dict[str, list[RayMorphism]] = {}
    for a in irr:
        arrows_at.setdefault(a.source, []).append(a)
    out = []
    for x, alphas in arrows_at.items():
        if len(alphas) < 2:
            continue
        maximal = [
            mu
            for mu in nonzero
            if mu.source == x
            and all(
                D.compose(g, mu).is_zero for g in irr if g.source == mu.target
            )
        ]
        for alpha in alphas:
            for beta in alphas:
                if beta == alpha:
                    continue
                for mu in maximal:
                    if _factors_through_left(D, mu, beta) is None:
                        continue
                    if _factors_through_left(D, mu, alpha) is not None:
                        continue
                    out.append((alpha, beta, mu))
    return out


def _check_forward(F: DiagramFunctor, D: RayCategory, label: str,
                   triples=None) -> CleavingVerdict | None:
    """Condition c on the given shape/host pair."""
    host = F.host
    if triples is None:
        triples = forward_triples(D)
    for alpha, beta, mu in triples:
        xi = _factors_through_left(host, F.image(mu), F.image(alpha))
        if xi is not None:
            return CleavingVerdict(
                False,
                label,
                {
                    "alpha": str(alpha),
                    "beta": str(beta),
                    "mu": str(mu),
                    "xi": str(xi),
                    "image_mu": str(F.image(mu)),
                    "image_alpha": str(F.image(alpha)),
                },
            )
    return None


def opposite_functor(F: DiagramFunctor, host_op: RayCategory) -> DiagramFunctor:
    from .reductions import opposite_morphism, opposite_presentation

    shape_op = opposite_presentation(F.shape)
    arrows_op = {
        name: opposite_morphism(host_op, m) for name, m in F.arrows.items()
    }
    return DiagramFunctor(shape_op, host_op, dict(F.objects), arrows_op)


def check_cleaving(F: DiagramFunctor, host_op: RayCategory | None = None) -> CleavingVerdict:
    """Evaluate conditions a-d exhaustively; functoriality failures raise."""
    F.validate()
    D = F.shape_cat
    host = F.host

    for m in D.all_morphisms(include_identities=False):
        if F.image(m).is_zero:
            return CleavingVerdict(False, "a", {"mu": str(m)})

    for a in D.irreducibles():
        if F.image(a).is_identity:
            return CleavingVerdict(False, "b", {"alpha": str(a)})

    got = _check_forward(F, D, "c")
    if got is not None:
        return got

    if host_op is None:
        from .reductions import opposite

        host_op = opposite(host)
    F_op = opposite_functor(F, host_op)
    got = _check_forward(F_op, F_op.shape_cat, "d")
    if got is not None:
        # translate the witness back into host orientation
        got.witness = {
            k: _unreverse(v) for k, v in got.witness.items()
        }
        return got
    return CleavingVerdict(True)


def _unreverse(text: str) -> str:
    if text.startswith(("id_", "0[")):
        return text
    return " ".join(reversed(text.split()))


# ---------------------------------------------------------------------------
# crowns


@dataclass(frozen=True)
class Crown:
    """Periodic zigzag: sigma_i, rho_i share a domain, rho_i and
    sigma_{i+1} share a codomain (indices mod the period)."""

    sigmas: tuple[RayMorphism, ...]
    rhos: tuple[RayMorphism, ...]

    @property
    def period(self) -> int:
        return len(self.sigmas)

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "sigmas": [str(m) for m in self.sigmas],
            "rhos": [str(m) for m in self.rhos],
        }


def _solvable(P: RayCategory, lhs: RayMorphism, a: RayMorphism, side: str) -> bool:
    """side 'left': exists xi with lhs = xi . a; 'right': lhs = a . xi."""
    if side == "left":
        if lhs.source != a.source:
            return False
        return any(
            P.compose(xi, a) == lhs for xi in P.nonzero_classes(a.target, lhs.target)
        )
    if lhs.target != a.target:
        return False
    return any(
        P.compose(a, xi) == lhs for xi in P.nonzero_classes(lhs.source, a.source)
    )


def crown_violations(P: RayCategory, crown: Crown) -> list[dict]:
    """Solutions to any of the four forbidden equations, per index."""
    out = []
    n = crown.period
    for i in range(n):
        s, r = crown.sigmas[i], crown.rhos[i]
        s_next = crown.sigmas[(i + 1) % n]
        if s.source != r.source:
            out.append({"i": i, "why": "domain mismatch"})
            continue
        if r.target != s_next.target:
            out.append({"i": i, "why": "codomain mismatch"})
            continue
        if _solvable(P, s, r, "left"):
            out.append({"i": i, "equation": "sigma_i = xi rho_i"})
        if _solvable(P, r, s, "left"):
            out.append({"i": i, "equation": "xi sigma_i = rho_i"})
        if _solvable(P, r, s_next, "right"):
            out.append({"i": i, "equation": "sigma_i+1 xi = rho_i"})
        if _solvable(P, s_next, r, "right"):
            out.append({"i": i, "equation": "sigma_i+1 = rho_i xi"})
    return out


def find_crown(P: RayCategory, n_max: int = 6) -> Crown | None:
    """Smallest-period crown with period <= n_max, or None."""
    ms = [m for m in P.all_morphisms(include_identities=False)]
    ms.sort(key=RayMorphism.sort_key)
    if not ms:
        return None
    dom_ok: dict[RayMorphism, list[RayMorphism]] = {}
    cod_ok: dict[RayMorphism, list[RayMorphism]] = {}
    for s in ms:
        dom_ok[s] = [
            r
            for r in ms
            if r.source == s.source
            and r != s
            and not _solvable(P, s, r, "left")
            and not _solvable(P, r, s, "left")
        ]
    for r in ms:
        cod_ok[r] = [
            s2
            for s2 in ms
            if s2.target == r.target
            and s2 != r
            and not _solvable(P, r, s2, "right")
            and not _solvable(P, s2, r, "right")
        ]
    # sigma -> sigma' adjacency with the rho recorded
    succ: dict[RayMorphism, list[tuple[RayMorphism, RayMorphism]]] = {}
    for s in ms:
        pairs = []
        for r in dom_ok[s]:
            for s2 in cod_ok[r]:
                pairs.append((r, s2))
        pairs.sort(key=lambda p: (p[0].sort_key(), p[1].sort_key()))
        succ[s] = pairs
    # reach[k][s] = sigma nodes reachable in exactly k steps
    idx = {s: i for i, s in enumerate(ms)}
    adj_mask = [0] * len(ms)
    for s, pairs in succ.items():
        mask = 0
        for _, s2 in pairs:
            mask |= 1 << idx[s2]
        adj_mask[idx[s]] = mask

    for n in range(1, n_max + 1):
        # nodes that can return to themselves in exactly n steps
        reach = [1 << i for i in range(len(ms))]
        for _ in range(n):
            reach = [
                _mask_step(reach_i, adj_mask) for reach_i in reach
            ]
        for start in ms:
            if not (reach[idx[start]] >> idx[start]) & 1:
                continue
            got = _crown_dfs(start, start, n, succ, adj_mask, idx, [], [])
            if got is not None:
                sigmas, rhos = got
                crown = Crown(tuple(sigmas), tuple(rhos))
                if not crown_violations(P, crown):
                    return crown
    return None


def _mask_step(mask: int, adj_mask: list[int]) -> int:
    out = 0
    i = 0
    while mask:
        if mask & 1:
            out |= adj_mask[i]
        mask >>= 1
        i += 1
    return out


def _crown_dfs(cur, start, remaining, succ, adj_mask, idx, sigmas, rhos):
    if remaining == 0:
        if cur == start:
            return list(sigmas), list(rhos)
        return None
    # prune: start must be reachable in exactly `remaining` steps
    mask = 1 << idx[cur]
    for _ in range(remaining):
        mask = _mask_step(mask, adj_mask)
    if not (mask >> idx[start]) & 1:
        return None
    for r, s2 in succ[cur]:
        got = _crown_dfs(s2, start, remaining - 1, succ, adj_mask, idx,
                         sigmas + [cur], rhos + [r])
        if got is not None:
            return got
    return None


# ---------------------------------------------------------------------------
# separated quiver


def separated_quiver(P: RayCategory) -> Multigraph:
    """Bipartite doubling: vertices x+ and x-, one edge x+ -- y- per arrow."""
    vs = []
    for p in P.points:
        vs.extend([f"{p}+", f"{p}-"])
    es = tuple((f"{a.source}+", f"{a.target}-") for a in P.quiver.arrows)
    return Multigraph(tuple(vs), es)


# ---------------------------------------------------------------------------
# catalog shapes with orientations


def _tree_automorphisms(G: Multigraph):
    vs = list(G.vertices)
    n = len(vs)
    adj = {v: sorted(G.neighbours(v), key=str) for v in vs}
    deg = {v: len(adj[v]) for v in vs}
    autos = []

    def backtrack(assign):
        if len(assign) == n:
            autos.append(dict(assign))
            return
        v = vs[len(assign)]
        for w in vs:
            if w in assign.values() or deg[w] != deg[v]:
                continue
            ok = True
            for u in adj[v]:
                if u in assign and assign[u] not in adj[w]:
                    ok = False
                    break
            for u, img in assign.items():
                if (u in adj[v]) != (img in adj[w]):
                    ok = False
                    break
            if ok:
                assign[v] = w
                backtrack(assign)
                del assign[v]

    backtrack({})
    return autos


def orientations(G: Multigraph, name: str) -> list[Presentation]:
    """All orientations of a (simple, tree) base graph up to automorphism."""
    edges = list(G.edges)
    autos = _tree_automorphisms(G)
    edge_index = {e: i for i, e in enumerate(edges)}
    seen = set()
    out = []
    for mask in range(1 << len(edges)):
        canon = mask
        for pi in autos:
            m2 = 0
            for i, (u, v) in enumerate(edges):
                iu, iv = pi[u], pi[v]
                e2 = tuple(sorted((iu, iv)))
                j = edge_index[e2]
                bit = (mask >> i) & 1
                flipped = (iu, iv) != e2
                m2 |= ((bit ^ flipped) & 1) << j
            canon = min(canon, m2)
        if canon in seen:
            continue
        seen.add(canon)
        arrows = []
        for i, (u, v) in enumerate(edges):
            if (mask >> i) & 1:
                u, v = v, u
            arrows.append(Arrow(f"e{i}", u, v))
        safe = name.replace("~", "_tilde_")
        out.append(
            Presentation(f"{safe}_o{mask}", Quiver(G.vertices, tuple(arrows)), ())
        )
    return out


def catalog_shapes(max_d: int = 6, include_e: bool = True) -> list[tuple[str, Presentation]]:
    """The built-in D~ and E~ shapes, all orientations, ascending node count."""
    from .graphs import d_tilde_graph, e_tilde_graph

    out = []
    for n in range(4, max_d + 1):
        base = d_tilde_graph(n)
        for pres in orientations(base, f"D~{n}"):
            out.append((f"D~{n}", pres))
    if include_e:
        for n in (6, 7):
            base = e_tilde_graph(n)
            for pres in orientations(base, f"E~{n}"):
                out.append((f"E~{n}", pres))
    out.sort(key=lambda t: (len(t[1].quiver.points), t[0], t[1].name))
    return out


# ---------------------------------------------------------------------------
# witness search


@dataclass
class WitnessSearch:
    witness: object | None  # DiagramFunctor or Crown
    kind: str | None  # "crown" | "diagram"
    shape_name: str | None
    exhausted: bool
    attempts: int
    host: RayCategory | None = None  # the category searched; not serialised

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        wit = None
        if self.witness is not None:
            wit = self.witness.to_json()
        return {
            "found": self.found,
            "kind": self.kind,
            "shape": self.shape_name,
            "exhausted": self.exhausted,
            "attempts": self.attempts,
            "witness": wit,
        }


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExhausted(self.used)


class _ShapePlan:
    """Shape-side data reused across all candidate assignments."""

    def __init__(self, pres: Presentation):
        from .reductions import opposite_presentation

        self.pres = pres
        self.cat = shape_category(pres)
        self.op_pres = opposite_presentation(pres)
        self.op_cat = shape_category(self.op_pres)
        self.nonzero = self.cat.all_morphisms(include_identities=False)
        self.irr = self.cat.irreducibles()
        self.c_triples = forward_triples(self.cat)
        self.d_triples = forward_triples(self.op_cat)


_PLAN_CACHE: dict = {}


def _shape_plan(pres: Presentation) -> _ShapePlan:
    plan = _PLAN_CACHE.get(pres)
    if plan is None:
        plan = _ShapePlan(pres)
        _PLAN_CACHE[pres] = plan
    return plan


def _fast_cleaving(plan: _ShapePlan, host: RayCategory, host_op: RayCategory,
                   objects: dict, images: dict) -> bool:
    """Conditions a-d over a complete assignment, without re-deriving the
    shape data.  Parallel-path agreement (functoriality) is included."""

    def image_of(m: RayMorphism, cat: RayCategory, imgs: dict, hst: RayCategory):
        out = hst.identity(objects[m.source])
        for name in reversed(m.rep):
            out = hst.compose(imgs[name], out)
        return out

    values: dict[RayMorphism, RayMorphism] = {}
    for m in plan.nonzero:
        val = image_of(m, plan.cat, images, host)
        if val.is_zero:
            return False  # condition a
        member_paths = plan.cat.members(m)
        if len(member_paths) > 1:
            for p in member_paths[1:]:
                out = host.identity(objects[plan.pres.quiver.arrow(p[-1]).source])
                for name in reversed(p):
                    out = host.compose(images[name], out)
                if out != val:
                    return False  # not functorial: parallel paths disagree
        values[m] = val
    for rel in plan.pres.relations:
        if isinstance(rel, ZeroRelation):
            out = host.identity(objects[plan.pres.quiver.arrow(rel.path[-1]).source])
            for name in reversed(rel.path):
                out = host.compose(images[name], out)
            if not out.is_zero:
                return False
    for a in plan.irr:
        if values[a].is_identity:
            return False  # condition b
    for alpha, beta, mu in plan.c_triples:
        if _factors_through_left(host, values[mu], values[alpha]) is not None:
            return False  # condition c
    op_images = None
    if plan.d_triples:
        from .reductions import opposite_morphism

        op_images = {n: opposite_morphism(host_op, m) for n, m in images.items()}
        op_values: dict[RayMorphism, RayMorphism] = {}
        for alpha, beta, mu in plan.d_triples:
            for m in (alpha, mu):
                if m not in op_values:
                    out = host_op.identity(objects[m.source])
                    for name in reversed(m.rep):
                        out = host_op.compose(op_images[name], out)
                    op_values[m] = out
            if _factors_through_left(host_op, op_values[mu], op_values[alpha]) is not None:
                return False  # condition d
    return True


def _search_shape(P: RayCategory, P_op: RayCategory, pres: Presentation,
                  budget: _Budget) -> DiagramFunctor | None:
    quiver = pres.quiver
    arrows = list(quiver.arrows)
    if not arrows:
        return None
    plan = _shape_plan(pres)
    # order arrows so each touches a previously placed point
    order = [arrows[0]]
    placed = {arrows[0].source, arrows[0].target}
    rest = arrows[1:]
    while rest:
        nxt = next(
            (a for a in rest if a.source in placed or a.target in placed),
            rest[0],
        )
        order.append(nxt)
        placed.update((nxt.source, nxt.target))
        rest.remove(nxt)
    pos = {a.name: i for i, a in enumerate(order)}

    pool = sorted(
        (m for m in P.all_morphisms(include_identities=False)),
        key=RayMorphism.sort_key,
    )
    by_source: dict[str, list[RayMorphism]] = {}
    by_target: dict[str, list[RayMorphism]] = {}
    by_pair: dict[tuple[str, str], list[RayMorphism]] = {}
    for m in pool:
        by_source.setdefault(m.source, []).append(m)
        by_target.setdefault(m.target, []).append(m)
        by_pair.setdefault((m.source, m.target), []).append(m)

    objects: dict[str, str] = {}
    images: dict[str, RayMorphism] = {}

    def image_of_path(path) -> RayMorphism:
        out = images[path[-1]]
        for name in path[-2::-1]:
            out = P.compose(images[name], out)
        return out

    def op_image_of_path(path) -> RayMorphism:
        from .reductions import opposite_morphism

        out = opposite_morphism(P_op, images[path[-1]])
        for name in path[-2::-1]:
            out = P_op.compose(opposite_morphism(P_op, images[name]), out)
        return out

    # checks runnable as soon as all their arrows are assigned, bucketed by
    # the assignment depth at which they become complete
    checks_at: list[list] = [[] for _ in order]

    def register(names, fn):
        checks_at[max(pos[n] for n in names)].append(fn)

    for m in plan.nonzero:
        paths = plan.cat.members(m)
        involved = set()
        for p in paths:
            involved |= set(p)

        def check_class(paths=paths):
            val = image_of_path(paths[0])
            if val.is_zero:
                return False
            for p in paths[1:]:
                if image_of_path(p) != val:
                    return False
            return True

        register(involved, check_class)
    for rel in pres.relations:
        if isinstance(rel, ZeroRelation):
            register(set(rel.path), lambda path=rel.path: image_of_path(path).is_zero)
    for a in plan.irr:
        register(set(a.rep), lambda rep=a.rep: not image_of_path(rep).is_identity)
    for alpha, beta, mu in plan.c_triples:
        def check_c(alpha=alpha, mu=mu):
            return _factors_through_left(
                P, image_of_path(mu.rep), image_of_path(alpha.rep)
            ) is None

        register(set(alpha.rep) | set(mu.rep), check_c)
    for alpha, beta, mu in plan.d_triples:
        def check_d(alpha=alpha, mu=mu):
            return _factors_through_left(
                P_op, op_image_of_path(mu.rep), op_image_of_path(alpha.rep)
            ) is None

        register(set(alpha.rep) | set(mu.rep), check_d)

    def candidates(a: Arrow):
        su, tv = objects.get(a.source), objects.get(a.target)
        if su is not None and tv is not None:
            return by_pair.get((su, tv), ())
        if su is not None:
            return by_source.get(su, ())
        if tv is not None:
            return by_target.get(tv, ())
        return pool

    def assign(i: int):
        if i == len(order):
            F = DiagramFunctor(pres, P, dict(objects), dict(images))
            F._shape_cat = plan.cat
            verdict = check_cleaving(F, host_op=P_op)
            if verdict.ok:
                return F
            return None
        a = order[i]
        for m in candidates(a):
            budget.spend()
            if a.source == a.target and m.source != m.target:
                continue
            prev_s, prev_t = objects.get(a.source), objects.get(a.target)
            if prev_s is not None and prev_s != m.source:
                continue
            if prev_t is not None and prev_t != m.target:
                continue
            objects[a.source] = m.source
            objects[a.target] = m.target
            images[a.name] = m
            if all(fn() for fn in checks_at[i]):
                got = assign(i + 1)
                if got is not None:
                    return got
            del images[a.name]
            if prev_s is None:
                objects.pop(a.source, None)
            else:
                objects[a.source] = prev_s
            if prev_t is None:
                objects.pop(a.target, None)
            else:
                objects[a.target] = prev_t
        return None

    return assign(0)


def find_dynkin_cleaving(P: RayCategory, shapes=None, budget: int = 10**6,
                         crown_max: int = 6, max_d: int = 6) -> WitnessSearch:
    """Search crowns and the extended Dynkin catalog for a cleaving witness.

    Entries are tried by ascending node count; the budget counts candidate
    arrow assignments.  'Absent within budget' (exhausted=True) is distinct
    from a completed search with no witness.
    """
    from .reductions import opposite

    entries: list[tuple[int, int, str, object]] = []
    for n in range(1, crown_max + 1):
        entries.append((2 * n, 0, f"A~crown{n}", n))
    if shapes is None:
        shapes = catalog_shapes(max_d=max_d)
    for name, pres in shapes:
        entries.append((len(pres.quiver.points), 1, name, pres))
    entries.sort(key=lambda t: (t[0], t[1], t[2]))

    P_op = None
    b = _Budget(budget)
    try:
        for _, kind, name, payload in entries:
            if kind == 0:
                crown = _find_crown_exact(P, payload)
                if crown is not None:
                    return WitnessSearch(crown, "crown", name, False, b.used, P)
            else:
                if P_op is None:
                    P_op = opposite(P)
                got = _search_shape(P, P_op, payload, b)
                if got is not None:
                    return WitnessSearch(got, "diagram", name, False, b.used, P)
    except BudgetExhausted as exc:
        return WitnessSearch(None, None, None, True, exc.attempts)
    return WitnessSearch(None, None, None, False, b.used)


def _find_crown_exact(P: RayCategory, n: int) -> Crown | None:
    got = find_crown(P, n_max=n)
    if got is not None and got.period == n:
        return got
    return None
