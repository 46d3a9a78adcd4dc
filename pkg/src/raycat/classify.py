"""Contour classification into the three families, with refutation search.

The procedure: orient the contour so its generator is transit (dualising
once if needed), factor the radical generator of the target through the
leading arrows of the two paths, split into the dumb-bell / penny-farthing
/ diamond branches, then match the full subcategory on the contour points
against the corresponding template and extract the parameters.  When any
structural step fails, a crown / extended Dynkin witness is searched in the
decisive quotient; a witness refutes the configuration, otherwise the
verdict is inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cleaving import WitnessSearch, check_cleaving, find_dynkin_cleaving
from .contours import Contour, contour_points
from .families import diamond as diamond_template
from .families import dumbbell as dumbbell_template
from .families import penny_farthing as pf_template
from .morphology import pi_hom, pi_loop, supports, transit_class
from .presentation import Presentation, PresentationError
from .raycore import RayCategory, RayMorphism, build_ray_category
from .reductions import (
    ReductionError,
    decisive_quotient,
    decisive_subcats,
    full_subcategory,
    opposite,
    opposite_morphism,
)


class ClassifyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class DumbBell:
    r: int  # loop nilpotence at x
    s: int  # loop nilpotence at y

    family = "dumb-bell"

    def to_json(self):
        return {"family": self.family, "r": self.r, "s": self.s}


@dataclass(frozen=True)
class PennyFarthing:
    n: int
    e: tuple[int, ...]

    family = "penny-farthing"

    def to_json(self):
        return {"family": self.family, "n": self.n, "e": list(self.e)}


@dataclass(frozen=True)
class Diamond:
    family = "diamond"

    def to_json(self):
        return {"family": self.family}


@dataclass
class Refuted:
    search: WitnessSearch
    in_quotient: bool
    reason: str
    quotient: RayCategory | None = field(default=None, repr=False)

    family = "refuted"

    def to_json(self):
        return {
            "family": self.family,
            "reason": self.reason,
            "in_quotient": self.in_quotient,
            "witness": self.search.to_json(),
        }


@dataclass
class Inconclusive:
    reason: str

    family = "inconclusive"

    def to_json(self):
        return {"family": self.family, "reason": self.reason}


FAMILY_VERDICTS = (DumbBell, PennyFarthing, Diamond)


def is_family_verdict(v) -> bool:
    return isinstance(v, FAMILY_VERDICTS)


# ---------------------------------------------------------------------------
# structural isomorphism cross-check


def structure_match(T: RayCategory, B: RayCategory, point_map: dict[str, str],
                    images: dict[str, RayMorphism]) -> bool:
    """Does the arrow assignment extend to an isomorphism T -> B?

    ``point_map`` sends template points to B points, ``images`` template
    arrow names to B morphisms.  Checks hom sizes, injectivity and
    preservation of composition.
    """
    for p in T.points:
        if p not in point_map:
            return False
    if len(set(point_map.values())) != len(point_map):
        return False

    def evaluate(m: RayMorphism) -> RayMorphism:
        out = B.identity(point_map[m.source])
        for name in reversed(m.rep):
            out = B.compose(images[name], out)
        return out

    mapping = {}
    for p in T.points:
        for q in T.points:
            src = T.nonzero_classes(p, q)
            dst = B.nonzero_classes(point_map[p], point_map[q])
            if len(src) != len(dst):
                return False
            seen = set()
            for m in src:
                val = evaluate(m)
                if val.is_zero or val in seen:
                    return False
                seen.add(val)
                mapping[m] = val
    for g in mapping:
        for f in mapping:
            if f.target != g.source:
                continue
            gf = T.compose(g, f)
            val = B.compose(mapping[g], mapping[f])
            if gf.is_zero:
                if not val.is_zero:
                    return False
            elif mapping.get(gf) != val:
                return False
    return True


# ---------------------------------------------------------------------------
# branch analysis: factor the target radical through the leading arrows


def _omega_solutions(P: RayCategory, alpha: RayMorphism, rho: RayMorphism):
    """All omega with alpha . omega = rho."""
    out = []
    for om in P.nonzero_classes(rho.source, alpha.source):
        if P.compose(alpha, om) == rho:
            out.append(om)
    return out


def _factors_two_sided(P: RayCategory, sigma: RayMorphism, m: RayMorphism) -> bool:
    """sigma = a . m . b for some (possibly identity) a, b."""
    for b in P.nonzero_classes(sigma.source, m.source):
        mb = P.compose(m, b)
        if mb.is_zero:
            continue
        for a in P.nonzero_classes(m.target, sigma.target):
            if P.compose(a, mb) == sigma:
                return True
    return False


def classify_contour(P: RayCategory, C: Contour, budget: int = 10**6):
    """Classify a non-deep contour; family verdicts re-check their gates."""
    if not C.non_deep:
        raise ClassifyError("classification concerns non-deep contours only")
    verdict = _classify(P, C, budget, dualized=False)
    _assert_gate(verdict)
    return verdict


def _assert_gate(verdict) -> None:
    if isinstance(verdict, DumbBell):
        if min(verdict.r, verdict.s) != 3 or max(verdict.r, verdict.s) > 5:
            raise ClassifyError(
                f"gate violation: dumb-bell parameters {verdict.r, verdict.s}"
            )
    if isinstance(verdict, PennyFarthing):
        if len(verdict.e) != verdict.n - 1 or any(
            verdict.e[i] > verdict.e[i + 1] for i in range(len(verdict.e) - 1)
        ):
            raise ClassifyError(f"gate violation: penny-farthing e {verdict.e}")


def _dualize_contour(P_op: RayCategory, C: Contour) -> Contour:
    ray_op = opposite_morphism(P_op, C.ray)
    v, w = sorted((C.v[::-1], C.w[::-1]))
    py = pi_loop(P_op, ray_op.target)
    tpath = None
    if py is not None:
        tpath = min(P_op.members(py), key=lambda t: (len(t), t))
    return Contour(
        x=C.y, y=C.x, v=v, w=w, ray=ray_op, non_deep=C.non_deep,
        transit_path=tpath,
    )


def _dual_verdict(v):
    if isinstance(v, DumbBell):
        return DumbBell(v.s, v.r)
    return v


def _classify(P: RayCategory, C: Contour, budget: int, dualized: bool):
    gen = pi_hom(P, C.x, C.y)
    if gen is None:
        return Inconclusive("empty hom set for the contour pair")
    cls = transit_class(P, gen)
    if not cls.is_transit:
        if dualized:
            return Inconclusive("no transit orientation after dualising")
        P_op = opposite(P)
        return _dual_verdict(_classify(P_op, _dualize_contour(P_op, C), budget, True))
    rho = pi_loop(P, C.y)
    if rho is None:
        return _refute(P, C, budget, "no radical generator at the target")

    chosen = None
    for cand_v, cand_w in ((C.v, C.w), (C.w, C.v)):
        alpha = P.ray_of((cand_v[0],))
        oms = _omega_solutions(P, alpha, rho)
        if oms:
            chosen = (cand_v, cand_w, alpha, oms)
            break
    if chosen is None:
        # second branch: the radical generator of the source factors
        # through one of the path components; classify dually.
        if not dualized and cls.is_cotransit:
            sigma = pi_loop(P, C.x)
            if sigma is not None and any(
                _factors_two_sided(P, sigma, P.ray_of((name,)))
                for name in sorted(set(C.v) | set(C.w))
            ):
                P_op = opposite(P)
                return _dual_verdict(
                    _classify(P_op, _dualize_contour(P_op, C), budget, True)
                )
        return _refute(P, C, budget,
                       "the target radical factors through neither leading arrow")

    v, w, alpha, omegas = chosen
    beta = P.ray_of((w[0],))
    if any(om.is_identity for om in omegas):
        if len(v) < 2:
            return _refute(P, C, budget, "degenerate one-arrow transit path")
        v2 = P.ray_of((v[1],))
        if v2 == alpha:
            got = _match_pennyfarthing(P, C, v, w)
            if got is not None:
                return got
            return _refute(P, C, budget, "penny-farthing template mismatch")
        if v2 == beta:
            got = _match_dumbbell(P, C, v, w, budget)
            if isinstance(got, (DumbBell, Refuted, Inconclusive)):
                return got
            return _refute(P, C, budget, "dumb-bell template mismatch")
        return _refute(P, C, budget,
                       "second arrow of the transit path matches neither branch")
    got = _match_diamond(P, C, v, w)
    if got is not None:
        return got
    return _refute(P, C, budget, "diamond template mismatch")


def _refute(P: RayCategory, C: Contour, budget: int, reason: str):
    try:
        quot, _, _, _ = decisive_quotient(P, C)
    except ReductionError as exc:
        return Inconclusive(f"{reason}; decisive quotient unavailable ({exc})")
    ws = find_dynkin_cleaving(quot, budget=budget)
    if ws.found:
        return Refuted(ws, True, reason, quotient=quot)
    if ws.exhausted:
        return Inconclusive(f"{reason}; witness search budget exhausted")
    return Inconclusive(f"{reason}; no catalog witness in the decisive quotient")


# ---------------------------------------------------------------------------
# template matching


def _restricted_arrows(P: RayCategory, pts) -> list:
    pset = set(pts)
    return [a for a in P.quiver.arrows if a.source in pset and a.target in pset]


def _match_dumbbell(P: RayCategory, C: Contour, v, w, budget):
    x, y = C.x, C.y
    if x == y:
        return None
    pts = contour_points(P, C)
    if set(pts) != {x, y}:
        return None
    arrows = _restricted_arrows(P, pts)
    loops_x = [a for a in arrows if a.source == a.target == x]
    loops_y = [a for a in arrows if a.source == a.target == y]
    cross = [a for a in arrows if a.source == x and a.target == y]
    back = [a for a in arrows if a.source == y and a.target == x]
    if len(loops_x) != 1 or len(loops_y) != 1 or len(cross) != 1 or back:
        return None
    if len(arrows) != 3:
        return None
    lam, mu, rho = loops_x[0], cross[0], loops_y[0]
    if P.nonzero_classes(y, x):
        return None
    r = P.nilpotence(P.ray_of((lam.name,)))
    s = P.nilpotence(P.ray_of((rho.name,)))
    if P.ray_of((mu.name, lam.name)) != P.ray_of((rho.name, mu.name)):
        return None
    sub = full_subcategory(P, pts)
    template = build_ray_category(dumbbell_template(r, s))
    images = {
        "l": sub.from_ambient(P.ray_of((lam.name,))),
        "m": sub.from_ambient(P.ray_of((mu.name,))),
        "r": sub.from_ambient(P.ray_of((rho.name,))),
    }
    if not structure_match(template, sub.category, {"x": x, "y": y}, images):
        return None
    if min(r, s) != 3 or max(r, s) > 5:
        verdict = _refute(P, C, budget,
                          f"dumb-bell parameters ({r},{s}) violate the "
                          "min=3, max<=5 bounds")
        return verdict
    return DumbBell(r, s)


def _match_pennyfarthing(P: RayCategory, C: Contour, v, w):
    if C.x != C.y:
        return None
    x0 = C.x
    cycle = w  # (a_n, ..., a_1) in composition order
    n = len(cycle)
    if len(set(cycle)) != n:
        return None
    # walk the cycle from x0
    pts = [x0]
    for name in reversed(cycle):
        a = P.quiver.arrow(name)
        if a.source != pts[-1]:
            return None
        pts.append(a.target)
    if pts[-1] != x0 or len(set(pts[:-1])) != n:
        return None
    cyc_points = pts[:-1]
    arrows = _restricted_arrows(P, cyc_points)
    rho_name = v[0]
    expected = set(cycle) | {rho_name}
    if {a.name for a in arrows} != expected:
        return None
    rho = P.ray_of((rho_name,))
    a1 = cycle[-1]
    an = cycle[0]
    if not P.ray_of((a1, an)).is_zero:
        return None
    if P.ray_of(v) != P.ray_of(w):
        return None
    # e extraction: e(i) minimal k with a_k..a_1 rho a_n..a_{i+1} = 0
    e = []
    for i in range(1, n):
        found = None
        for k in range(1, n + 1):
            head = tuple(cycle[n - k:])  # a_k ... a_1
            tail = tuple(cycle[: n - i])  # a_n ... a_{i+1}
            if P.ray_of(head + (rho_name,) + tail).is_zero:
                found = k
                break
        if found is None:
            return None
        e.append(found)
    e = tuple(e)
    if any(e[i] > e[i + 1] for i in range(len(e) - 1)):
        return None
    sub = full_subcategory(P, cyc_points)
    template = build_ray_category(pf_template(n, e))
    point_map = {"x0": x0}
    images = {"rho": sub.from_ambient(rho)}
    for j, name in enumerate(reversed(cycle), start=1):  # a1 .. an
        images[f"a{j}"] = sub.from_ambient(P.ray_of((name,)))
        point_map[f"x{j % n}"] = cyc_points[j % n]
    if not structure_match(template, sub.category, point_map, images):
        return None
    return PennyFarthing(n, e)


def _match_diamond(P: RayCategory, C: Contour, v, w):
    x, y = C.x, C.y
    if x == y or len(v) != 2 or len(w) != 2:
        return None
    a_name, g_name = v
    b_name, d_name = w
    z = P.quiver.arrow(a_name).source
    t = P.quiver.arrow(b_name).source
    if len({x, y, z, t}) != 4:
        return None
    pts = (x, z, t, y)
    arrows = _restricted_arrows(P, pts)
    lam_arrows = [a for a in arrows if a.source == z and a.target == x]
    kap_arrows = [a for a in arrows if a.source == y and a.target == z]
    core = {a_name, g_name, b_name, d_name}
    extras = [a for a in arrows if a.name not in core]
    if len(lam_arrows) != 1 or len(kap_arrows) != 1:
        return None
    if {a.name for a in extras} != {lam_arrows[0].name, kap_arrows[0].name}:
        return None
    lam, kap = lam_arrows[0].name, kap_arrows[0].name
    if not P.ray_of((lam, kap)).is_zero:
        return None
    if P.ray_of((kap, a_name)) != P.ray_of((g_name, lam)):
        return None
    if P.ray_of(v) != P.ray_of(w):
        return None
    sub = full_subcategory(P, pts)
    template = build_ray_category(diamond_template())
    images = {
        name_t: sub.from_ambient(P.ray_of((name_a,)))
        for name_t, name_a in [
            ("a", a_name), ("g", g_name), ("b", b_name), ("d", d_name),
            ("l", lam), ("k", kap),
        ]
    }
    if not structure_match(template, sub.category,
                           {"x": x, "z": z, "t": t, "y": y}, images):
        return None
    return Diamond()


# ---------------------------------------------------------------------------
# mildness search


@dataclass
class MildReport:
    status: str  # mild-consistent | not-mild | inconclusive
    decisive_sets: tuple[tuple[str, ...], ...]
    witness_set: tuple[str, ...] | None = None
    search: WitnessSearch | None = None
    budget: int = 0
    detail: str = ""

    def to_json(self):
        return {
            "status": self.status,
            "decisive_sets": [list(s) for s in self.decisive_sets],
            "witness_set": list(self.witness_set) if self.witness_set else None,
            "witness": self.search.to_json() if self.search else None,
            "budget": self.budget,
            "detail": self.detail,
        }


def check_mild(P: RayCategory, C: Contour, budget: int = 10**6,
               k: int = 4) -> MildReport:
    """Search every decisive subcategory for representation-infiniteness
    witnesses.  A clean sweep is consistency, not a proof of mildness."""
    if not C.non_deep:
        raise ClassifyError("mildness is defined for non-deep contours")
    try:
        fam = decisive_subcats(P, C, k)
    except ReductionError as exc:
        return MildReport("inconclusive", (), detail=str(exc), budget=budget)
    for s in fam.sets:
        sub = full_subcategory(fam.quotient, s)
        ws = find_dynkin_cleaving(sub.category, budget=budget)
        if ws.found:
            return MildReport("not-mild", fam.sets, witness_set=s, search=ws,
                              budget=budget)
        if ws.exhausted:
            return MildReport("inconclusive", fam.sets, witness_set=s,
                              detail="budget exhausted", budget=budget)
    return MildReport("mild-consistent", fam.sets, budget=budget,
                      detail=f"no witness over {len(fam.sets)} decisive sets")


# ---------------------------------------------------------------------------
# disjointness


@dataclass
class DisjointnessReport:
    shared_arrows: tuple[str, ...]
    shared_points: tuple[str, ...]
    arrows_clause_pass: bool  # arrow clause (k = 5)
    points_clause_pass: bool  # point clause (k = 6)
    k: int
    witness_set: tuple[str, ...] | None = None
    search: WitnessSearch | None = None

    def to_json(self):
        return {
            "shared_arrows": list(self.shared_arrows),
            "shared_points": list(self.shared_points),
            "arrows_clause_pass": self.arrows_clause_pass,
            "points_clause_pass": self.points_clause_pass,
            "k": self.k,
            "witness_set": list(self.witness_set) if self.witness_set else None,
            "witness": self.search.to_json() if self.search else None,
        }


def contour_disjointness(P: RayCategory, C: Contour, C2: Contour, k: int,
                         budget: int = 10**6) -> DisjointnessReport:
    """Arrow and point overlaps of two contours; on overlap, search the
    decisive-pair subcategories of the quotient for witnesses."""
    arrows1 = set(C.v) | set(C.w)
    arrows2 = set(C2.v) | set(C2.w)
    shared_arrows = tuple(sorted(arrows1 & arrows2))
    pts1 = set(contour_points(P, C))
    pts2 = set(contour_points(P, C2))
    shared_points = tuple(sorted(pts1 & pts2, key=P.points.index))
    witness_set = None
    search = None
    if shared_arrows or shared_points:
        try:
            fam = decisive_subcats(P, C, k, pair_with=C2)
        except (ReductionError, PresentationError):
            fam = None
        if fam is not None:
            for s in fam.sets:
                sub = full_subcategory(fam.quotient, s)
                ws = find_dynkin_cleaving(sub.category, budget=budget)
                if ws.found:
                    witness_set, search = s, ws
                    break
    return DisjointnessReport(
        shared_arrows=shared_arrows,
        shared_points=shared_points,
        arrows_clause_pass=not shared_arrows,
        points_clause_pass=not shared_points,
        k=k,
        witness_set=witness_set,
        search=search,
    )


# ---------------------------------------------------------------------------
# neighbourhood constraints around a classified contour


@dataclass
class Clause:
    name: str
    status: str  # pass | fail | vacuous
    detail: str = ""
    witness: dict | None = None

    def to_json(self):
        return {"name": self.name, "status": self.status, "detail": self.detail,
                "witness": self.witness}


@dataclass
class NeighborhoodReport:
    family: str
    clauses: list[Clause]
    situation: str | None = None  # penny-farthing: a | b | c | isolated | none

    @property
    def all_ok(self) -> bool:
        return all(c.status != "fail" for c in self.clauses)

    def to_json(self):
        return {
            "family": self.family,
            "situation": self.situation,
            "all_ok": self.all_ok,
            "clauses": [c.to_json() for c in self.clauses],
        }


def neighborhood_constraints(P: RayCategory, C: Contour,
                             classification) -> NeighborhoodReport:
    """Structural constraints the ambient category must satisfy around a
    classified contour; each clause records witnesses on failure."""
    if not is_family_verdict(classification):
        raise ClassifyError("neighbourhood constraints need a family verdict")
    if isinstance(classification, DumbBell):
        return _nbhd_dumbbell(P, C)
    if isinstance(classification, PennyFarthing):
        return _nbhd_pennyfarthing(P, C, classification)
    return _nbhd_diamond(P, C)


def _db_roles(P: RayCategory, C: Contour):
    names = set(C.v) | set(C.w)
    lam = mu = rho = None
    for name in names:
        a = P.quiver.arrow(name)
        if a.source == a.target == C.x:
            lam = name
        elif a.source == a.target == C.y:
            rho = name
        elif a.source == C.x and a.target == C.y:
            mu = name
    return lam, mu, rho


def _nbhd_dumbbell(P: RayCategory, C: Contour) -> NeighborhoodReport:
    lam, mu, rho = _db_roles(P, C)
    clauses = []
    x, y = C.x, C.y
    extras_y = [a for a in P.quiver.arrows_from(y) if a.name != rho]
    if not extras_y:
        for name in ("a", "b", "c", "d"):
            clauses.append(Clause(name, "vacuous", "no additional arrow leaves y"))
        return NeighborhoodReport("dumb-bell", clauses)
    tau = sorted(extras_y, key=lambda a: a.name)[0]
    # a) tau and rho are the only arrows starting in y
    if len(extras_y) == 1:
        clauses.append(Clause("a", "pass", f"tau = {tau.name}"))
    else:
        clauses.append(Clause("a", "fail", "several additional arrows leave y",
                              {"arrows": [a.name for a in extras_y]}))
    # b) lam and mu are the only arrows touching x
    touching = sorted(
        {a.name for a in P.quiver.arrows if x in (a.source, a.target)}
    )
    if set(touching) == {lam, mu}:
        clauses.append(Clause("b", "pass"))
    else:
        clauses.append(Clause("b", "fail", "extra arrows at x",
                              {"arrows": touching}))
    # c) lam^3 = 0 and rho^3 = 0
    lam3 = P.ray_of((lam, lam, lam))
    rho3 = P.ray_of((rho, rho, rho))
    if lam3.is_zero and rho3.is_zero:
        clauses.append(Clause("c", "pass"))
    else:
        bad = "lam^3" if not lam3.is_zero else "rho^3"
        clauses.append(Clause("c", "fail", f"{bad} is nonzero",
                              {"composition": str(lam3 if not lam3.is_zero else rho3)}))
    # d) if tau.mu != 0: tau is the only arrow into z and zeta.tau = 0
    taumu = P.ray_of((tau.name, mu))
    if taumu.is_zero:
        clauses.append(Clause("d", "vacuous", "tau mu = 0"))
    else:
        z = tau.target
        into_z = sorted(a.name for a in P.quiver.arrows_into(z))
        after = [
            zeta.name
            for zeta in P.quiver.arrows_from(z)
            if not P.ray_of((zeta.name, tau.name)).is_zero
        ]
        if into_z == [tau.name] and not after:
            clauses.append(Clause("d", "pass"))
        else:
            clauses.append(Clause("d", "fail", "arrows continue past z",
                                  {"into_z": into_z, "nonzero_after": after}))
    return NeighborhoodReport("dumb-bell", clauses)


def _pf_roles(P: RayCategory, C: Contour):
    a, b = C.v, C.w
    if len(a) == 2 and a[0] == a[1]:
        rho_path, cycle = a, b
    else:
        rho_path, cycle = b, a
    return rho_path[0], cycle


def _nbhd_pennyfarthing(P: RayCategory, C: Contour,
                        verdict: PennyFarthing) -> NeighborhoodReport:
    rho, cycle = _pf_roles(P, C)
    x0 = C.x
    n = verdict.n
    cyc_points = [x0]
    for name in reversed(cycle):
        cyc_points.append(P.quiver.arrow(name).target)
    cyc_points = cyc_points[:-1]
    inside = set(cyc_points)
    proj, _ = supports(P, x0)
    outside_supp = [p for p in proj if p not in inside]
    clauses = []
    if not outside_supp:
        clauses.append(Clause("premise", "vacuous",
                              "hom(x0, -) is supported inside the contour"))
        return NeighborhoodReport("penny-farthing", clauses, situation="isolated")
    clauses.append(Clause("premise", "pass",
                          f"outside support {sorted(outside_supp)}"))
    if n != 2:
        clauses.append(Clause("n=2", "fail",
                              f"outside support with cycle length {n}"))
        return NeighborhoodReport("penny-farthing", clauses, situation="none")
    clauses.append(Clause("n=2", "pass"))
    x1 = cyc_points[1]
    a1, a2 = cycle[1], cycle[0]  # cycle = (a2, a1) for n = 2
    cross = [
        a for a in P.quiver.arrows
        if (a.source in inside) != (a.target in inside)
    ]
    betas = [a for a in cross if a.source == x0]
    gammas = [a for a in cross if a.source == x1]
    others = [a for a in cross if a not in betas and a not in gammas]
    situation = None

    def no_extra_into(pt) -> list[str]:
        return sorted(
            a.name for a in P.quiver.arrows_into(pt)
            if a.source not in inside or a.name not in {c.name for c in cross}
        )

    if betas and not gammas and not others and len(betas) == 1:
        beta = betas[0]
        b = beta.target
        ok = P.ray_of((beta.name, rho)).is_zero
        ok &= all(
            P.ray_of((d.name, beta.name)).is_zero
            for d in P.quiver.arrows_from(b)
        )
        ok &= set(outside_supp) == {b}
        ok &= [a.name for a in P.quiver.arrows_into(b)] == [beta.name]
        situation = "a" if ok else None
        clauses.append(Clause("situation-a", "pass" if ok else "fail",
                              f"beta = {beta.name}: x0 -> {b}"))
    elif gammas and not betas and not others and len(gammas) == 1:
        gamma = gammas[0]
        c = gamma.target
        ok = P.ray_of((gamma.name, a1, rho)).is_zero
        ok &= all(
            P.ray_of((d.name, gamma.name)).is_zero
            for d in P.quiver.arrows_from(c)
        )
        ok &= set(outside_supp) == {c}
        ok &= [a.name for a in P.quiver.arrows_into(c)] == [gamma.name]
        situation = "b" if ok else None
        clauses.append(Clause("situation-b", "pass" if ok else "fail",
                              f"gamma = {gamma.name}: x1 -> {c}"))
    elif len(betas) == 1 and len(gammas) == 1 and not others:
        beta, gamma = betas[0], gammas[0]
        b, c = beta.target, gamma.target
        ok = b != c
        ok &= P.ray_of((beta.name, rho)).is_zero
        ok &= P.ray_of((beta.name, a2)).is_zero
        ok &= all(P.ray_of((d.name, beta.name)).is_zero
                  for d in P.quiver.arrows_from(b))
        ok &= P.ray_of((gamma.name, a1)).is_zero
        ok &= all(P.ray_of((d.name, gamma.name)).is_zero
                  for d in P.quiver.arrows_from(c))
        ok &= set(outside_supp) == {b}
        ok &= [a.name for a in P.quiver.arrows_into(b)] == [beta.name]
        ok &= [a.name for a in P.quiver.arrows_into(c)] == [gamma.name]
        situation = "c" if ok else None
        clauses.append(Clause("situation-c", "pass" if ok else "fail",
                              f"beta = {beta.name}, gamma = {gamma.name}"))
    else:
        clauses.append(Clause("situation", "fail",
                              "cross arrows match none of the three situations",
                              {"cross": sorted(a.name for a in cross)}))
    return NeighborhoodReport("penny-farthing", clauses, situation=situation)


def _diamond_roles(P: RayCategory, C: Contour):
    x, y = C.x, C.y
    paths = [C.v, C.w]
    mids = [P.quiver.arrow(p[0]).source for p in paths]
    # z is the mid point receiving an arrow from y and sending one to x
    z_index = None
    for i, mid in enumerate(mids):
        has_kappa = any(a.source == y and a.target == mid for a in P.quiver.arrows)
        has_lam = any(a.source == mid and a.target == x for a in P.quiver.arrows)
        if has_kappa and has_lam:
            z_index = i
            break
    if z_index is None:
        raise ClassifyError("cannot locate the z corner of the diamond")
    v = paths[z_index]
    w = paths[1 - z_index]
    z, t = mids[z_index], mids[1 - z_index]
    lam = next(a.name for a in P.quiver.arrows if a.source == z and a.target == x)
    kap = next(a.name for a in P.quiver.arrows if a.source == y and a.target == z)
    return {"x": x, "y": y, "z": z, "t": t, "a": v[0], "g": v[1],
            "b": w[0], "d": w[1], "l": lam, "k": kap}


def _unrolled_diamond_shape(roles: dict, lam_path, kap_path):
    """Two periods of the diamond chain with lam and kap unrolled."""
    from .presentation import Arrow, Quiver

    points = ["X1", "Z1", "T1", "Y1"]
    arrows = [
        Arrow("g1", "X1", "Z1"), Arrow("d1", "X1", "T1"),
        Arrow("a1", "Z1", "Y1"), Arrow("b1", "T1", "Y1"),
    ]
    images = {"g1": roles["g"], "d1": roles["d"], "a1": roles["a"], "b1": roles["b"]}
    prev = "Z1"
    for j, name in enumerate(reversed(lam_path), start=1):
        nxt = "X2" if j == len(lam_path) else f"L{j}"
        if nxt != "X2":
            points.append(nxt)
        arrows.append(Arrow(f"l{j}", prev, nxt))
        images[f"l{j}"] = name
        prev = nxt
    points.append("X2")
    prev = "Y1"
    for j, name in enumerate(reversed(kap_path), start=1):
        nxt = "Z2" if j == len(kap_path) else f"K{j}"
        if nxt != "Z2":
            points.append(nxt)
        arrows.append(Arrow(f"k{j}", prev, nxt))
        images[f"k{j}"] = name
        prev = nxt
    points.extend(["Z2", "T2", "Y2"])
    arrows.extend([
        Arrow("g2", "X2", "Z2"), Arrow("d2", "X2", "T2"),
        Arrow("a2", "Z2", "Y2"), Arrow("b2", "T2", "Y2"),
    ])
    images.update({"g2": roles["g"], "d2": roles["d"], "a2": roles["a"],
                   "b2": roles["b"]})
    pres = Presentation("diamond_unrolled", Quiver(tuple(points), tuple(arrows)), ())
    return pres, images


def _nbhd_diamond(P: RayCategory, C: Contour) -> NeighborhoodReport:
    roles = _diamond_roles(P, C)
    clauses = []
    lam_m = P.ray_of((roles["l"],))
    kap_m = P.ray_of((roles["k"],))
    lam_decomps = P.members(lam_m)
    kap_decomps = P.members(kap_m)
    s, t = len(lam_decomps[0]), len(kap_decomps[0])
    # b) unique decompositions with s, t <= 2
    if len(lam_decomps) == 1 and len(kap_decomps) == 1 and s <= 2 and t <= 2:
        clauses.append(Clause("b", "pass", f"s = {s}, t = {t}"))
    else:
        clauses.append(Clause("b", "fail",
                              f"decompositions lam: {len(lam_decomps)}, "
                              f"kap: {len(kap_decomps)}, s = {s}, t = {t}"))
    # a) the unrolled two-period diagram is cleaving in P
    shape, image_names = _unrolled_diamond_shape(roles, lam_decomps[0], kap_decomps[0])
    objects = {}
    pmap = {"X": "x", "Z": "z", "T": "t", "Y": "y"}
    for p in shape.quiver.points:
        if p[0] in pmap and p[1:] in ("1", "2"):
            objects[p] = roles[pmap[p[0]]]
    # interior chain points follow the decomposition paths
    prev = roles["z"]
    for j, name in enumerate(reversed(lam_decomps[0]), start=1):
        nxt = P.quiver.arrow(name).target
        if f"L{j}" in shape.quiver.points:
            objects[f"L{j}"] = nxt
        prev = nxt
    for j, name in enumerate(reversed(kap_decomps[0]), start=1):
        nxt = P.quiver.arrow(name).target
        if f"K{j}" in shape.quiver.points:
            objects[f"K{j}"] = nxt
    from .cleaving import DiagramFunctor

    arrows = {nm: P.ray_of((an,)) for nm, an in image_names.items()}
    try:
        F = DiagramFunctor(shape, P, objects, arrows)
        verdict = check_cleaving(F)
        if verdict.ok:
            clauses.append(Clause("a", "pass", "unrolled two-period diagram is cleaving"))
        else:
            clauses.append(Clause("a", "fail",
                                  f"condition {verdict.condition} fails",
                                  verdict.witness))
    except Exception as exc:  # non-functorial assignments reported, not raised
        clauses.append(Clause("a", "fail", f"diagram invalid: {exc}"))
    # c) every nonzero morphism out of x appears in the unrolled chain
    generated = _diamond_path_values(P, roles)
    extras = []
    for q in P.points:
        for m in P.nonzero_classes(C.x, q):
            if m.is_identity:
                continue
            if m not in generated:
                extras.append(m)
    if not extras:
        clauses.append(Clause("c", "pass"))
    elif s == 1 and len(extras) == 1 and len(extras[0].rep) >= 4:
        # the one admissible leftover is a long composite continuing the
        # chain, never an extra arrow out of x
        clauses.append(Clause("c", "pass",
                              "one additional composite, admissible for s = 1",
                              {"extra": str(extras[0])}))
    else:
        clauses.append(Clause("c", "fail", "morphisms outside the unrolled chain",
                              {"extras": [str(m) for m in extras]}))
    return NeighborhoodReport("diamond", clauses)


def _diamond_path_values(P: RayCategory, roles: dict) -> set:
    """Rays of all composites of the six diamond generators starting at x."""
    gens = {
        roles["x"]: [roles["g"], roles["d"]],
        roles["z"]: [roles["a"], roles["l"]],
        roles["t"]: [roles["b"]],
        roles["y"]: [roles["k"]],
    }
    out = set()
    frontier = [P.identity(roles["x"])]
    seen = set(frontier)
    while frontier:
        new = []
        for m in frontier:
            for name in gens.get(m.target, ()):
                nxt = P.compose(P.ray_of((name,)), m)
                if nxt.is_zero or nxt in seen:
                    continue
                seen.add(nxt)
                out.add(nxt)
                new.append(nxt)
        frontier = new
    return out
