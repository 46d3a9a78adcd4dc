"""Category surgery: quotients, point splitting, full subcategories, opposites.

Every operation produces a fresh presentation and re-runs the single
verified closure engine rather than editing class tables in place.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .morphology import pi_hom, pi_loop, supports, transit_class
from .presentation import (
    Arrow,
    CommutativityRelation,
    Presentation,
    Quiver,
    ZeroRelation,
)
from .raycore import RayCategory, RayMorphism, build_ray_category, verify_axioms


class ReductionError(ValueError):
    pass


def quotient_by_ideal(P: RayCategory, m: RayMorphism,
                      verify: bool = True) -> RayCategory:
    """Quotient by the two-sided ideal generated by a nonzero morphism.

    Built by adding a zero relation for the representative of m and
    re-running closure; the quotient of a valid ray category is again one,
    which is re-checked unless ``verify`` is disabled.
    """
    if m.is_zero:
        raise ReductionError("quotient by zero would be the identity quotient")
    if m.is_identity:
        raise ReductionError("quotient by an identity kills the whole point")
    pres = P.presentation
    rels = pres.relations + (ZeroRelation(m.rep),)
    out = build_ray_category(
        Presentation(pres.name + "_mod", pres.quiver, rels), cap=P.cap
    )
    if verify:
        report = verify_axioms(out)
        if not report.all_passed:
            raise ReductionError(
                f"quotient is not a ray category: {[c.axiom for c in report.failed()]}"
            )
    return out


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "_"
    return name


def split_point(P: RayCategory, x: str) -> RayCategory:
    """Replace x by an emitter and a receiver.

    Precondition: the composition of all arrows going through x vanishes,
    i.e. every (outgoing arrow) . (incoming arrow) at x is zero.
    """
    quiver = P.quiver
    if x not in quiver.points:
        raise ReductionError(f"unknown point {x!r}")
    for a_in in quiver.arrows_into(x):
        for a_out in quiver.arrows_from(x):
            comp = P.compose(P.ray_of((a_out.name,)), P.ray_of((a_in.name,)))
            if not comp.is_zero:
                raise ReductionError(
                    f"nonzero composition through {x}: "
                    f"{a_out.name} {a_in.name} = {comp}"
                )
    taken = set(quiver.points)
    x_out = _fresh(f"{x}_out", taken)
    taken.add(x_out)
    x_in = _fresh(f"{x}_in", taken)
    points = []
    for p in quiver.points:
        if p == x:
            points.extend([x_out, x_in])
        else:
            points.append(p)
    arrows = []
    for a in quiver.arrows:
        src = x_out if a.source == x else a.source
        tgt = x_in if a.target == x else a.target
        arrows.append(Arrow(a.name, src, tgt))
    new_quiver = Quiver(tuple(points), tuple(arrows))

    def alive(path) -> bool:
        # a path dies when it passes through the split point in the interior
        for i in range(len(path) - 1):
            if quiver.arrow(path[i + 1]).target == x:
                return False
        return True

    rels = []
    for rel in P.presentation.relations:
        if isinstance(rel, ZeroRelation):
            if alive(rel.path):
                rels.append(ZeroRelation(rel.path))
        else:
            la, ra = alive(rel.lhs), alive(rel.rhs)
            if la and ra:
                rels.append(CommutativityRelation(rel.lhs, rel.rhs))
            elif la:
                rels.append(ZeroRelation(rel.lhs))
            elif ra:
                rels.append(ZeroRelation(rel.rhs))
    pres = Presentation(P.presentation.name + "_split", new_quiver, tuple(rels))
    return build_ray_category(pres, cap=P.cap)


def opposite(P: RayCategory) -> RayCategory:
    """Arrows and compositions reversed; an involution on presentations."""
    return build_ray_category(opposite_presentation(P.presentation), cap=P.cap)


def opposite_presentation(pres: Presentation) -> Presentation:
    name = pres.name[:-3] if pres.name.endswith("_op") else pres.name + "_op"
    quiver = Quiver(
        pres.quiver.points,
        tuple(Arrow(a.name, a.target, a.source) for a in pres.quiver.arrows),
    )
    rels = []
    for rel in pres.relations:
        if isinstance(rel, ZeroRelation):
            rels.append(ZeroRelation(rel.path[::-1]))
        else:
            rels.append(CommutativityRelation(rel.lhs[::-1], rel.rhs[::-1]))
    return Presentation(name, quiver, tuple(rels))


def opposite_morphism(P_op: RayCategory, m: RayMorphism) -> RayMorphism:
    """The morphism of the opposite category matching m."""
    if m.is_zero:
        return P_op.zero(m.target, m.source)
    if m.is_identity:
        return P_op.identity(m.source)
    return P_op.ray_of(m.rep[::-1])


@dataclass
class Subcategory:
    """A full subcategory rebuilt as a standalone category.

    ``arrow_images`` sends each arrow of the rebuilt presentation to the
    ambient morphism it names; composites through discarded points may
    become arrows here, so the quiver need not be a subquiver of the
    ambient one.
    """

    category: RayCategory
    ambient: RayCategory
    points: tuple[str, ...]
    arrow_images: dict[str, RayMorphism]

    def from_ambient(self, m: RayMorphism) -> RayMorphism:
        """Class of the rebuilt category matching an ambient morphism."""
        if m.source not in self.points or m.target not in self.points:
            raise ReductionError(f"{m} is not supported on the subcategory")
        if m.is_zero:
            return self.category.zero(m.source, m.target)
        if m.is_identity:
            return self.category.identity(m.source)
        got = self._reverse().get((m.source, m.target, m.rep))
        if got is None:
            raise ReductionError(f"{m} does not survive on the subcategory")
        return got

    def _reverse(self):
        if not hasattr(self, "_rev"):
            rev = {}
            for sub_m, amb in self._value_table().items():
                rev[(amb.source, amb.target, amb.rep)] = sub_m
            self._rev = rev
        return self._rev

    def _value_table(self):
        if not hasattr(self, "_values"):
            values = {}
            for m in self.category.all_morphisms():
                amb = self.evaluate(m)
                values[m] = amb
            self._values = values
        return self._values

    def evaluate(self, m: RayMorphism) -> RayMorphism:
        """Ambient value of a morphism of the rebuilt category."""
        if m.is_zero:
            return self.ambient.zero(m.source, m.target)
        if m.is_identity:
            return self.ambient.identity(m.source)
        out = self.ambient.identity(m.source)
        for name in reversed(m.rep):
            out = self.ambient.compose(self.arrow_images[name], out)
        return out


def full_subcategory(P: RayCategory, points) -> Subcategory:
    """Restrict to a point set; hom sets inherited, quiver recomputed."""
    points = tuple(p for p in P.points if p in set(points))
    if not points:
        raise ReductionError("empty point set")
    pset = set(points)

    def restricted(x, y):
        return [m for m in P.nonzero_classes(x, y) if not m.is_identity]

    # irreducible = admits no factorisation through the subcategory
    irreducible = []
    for x in points:
        for y in points:
            for m in restricted(x, y):
                reducible = False
                for c in points:
                    for f in restricted(x, c):
                        if reducible:
                            break
                        for g in restricted(c, y):
                            if P.compose(g, f) == m:
                                reducible = True
                                break
                    if reducible:
                        break
                if not reducible:
                    irreducible.append(m)

    taken = set(pset)
    arrow_names: dict[RayMorphism, str] = {}
    arrows = []
    for m in sorted(irreducible, key=RayMorphism.sort_key):
        if len(m.rep) == 1:
            name = m.rep[0]
        else:
            name = _fresh("_".join(m.rep), taken)
        taken.add(name)
        arrow_names[m] = name
        arrows.append(Arrow(name, m.source, m.target))
    quiver = Quiver(points, tuple(arrows))
    images = {arrow_names[m]: m for m in arrow_names}

    # enumerate canonical sub-paths per ambient value; emit relations where
    # values merge or die
    rels = []
    canon: dict[RayMorphism, tuple[str, ...]] = {}
    frontier: list[tuple[tuple[str, ...], RayMorphism]] = []
    for m in sorted(arrow_names, key=RayMorphism.sort_key):
        name = arrow_names[m]
        if m in canon:
            rels.append(CommutativityRelation((name,), canon[m]))
            continue
        canon[m] = (name,)
        frontier.append(((name,), m))
    while frontier:
        new_frontier = []
        for path, value in frontier:
            for m in sorted(arrow_names, key=RayMorphism.sort_key):
                if m.source != value.target:
                    continue
                name = arrow_names[m]
                new_path = (name,) + path
                new_value = P.compose(m, value)
                if new_value.is_zero:
                    rels.append(ZeroRelation(new_path))
                elif new_value in canon:
                    if canon[new_value] != new_path:
                        rels.append(CommutativityRelation(new_path, canon[new_value]))
                else:
                    canon[new_value] = new_path
                    new_frontier.append((new_path, new_value))
        frontier = new_frontier

    pres = Presentation(P.presentation.name + "_sub", quiver, tuple(rels))
    cat = build_ray_category(pres, cap=P.cap)
    return Subcategory(cat, P, points, images)


@dataclass
class DecisiveFamily:
    """Point sets that decide a contour (or a contour pair) in P/pi(y).ray."""

    quotient: RayCategory
    x: str
    y: str
    k: int
    support_union: tuple[str, ...]
    sets: tuple[tuple[str, ...], ...]
    dualized: bool

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "k": self.k,
            "support_union": list(self.support_union),
            "sets": [list(s) for s in self.sets],
            "dualized": self.dualized,
        }


def _oriented(P: RayCategory, contour):
    """(category, contour endpoints, ray, dualized) with pi(x,y) transit."""
    from .reductions import opposite  # self-import for clarity at call sites

    gen = pi_hom(P, contour.x, contour.y)
    if gen is None:
        raise ReductionError("contour hom set is trivial")
    cls = transit_class(P, gen)
    if cls.is_transit:
        return P, contour.x, contour.y, contour.ray, False
    P_op = opposite(P)
    ray_op = opposite_morphism(P_op, contour.ray)
    return P_op, contour.y, contour.x, ray_op, True


def decisive_quotient(P: RayCategory, contour) -> tuple[RayCategory, str, str, bool]:
    """P' = P / pi(y).ray, in the transit orientation of the contour."""
    work, x, y, ray, dual = _oriented(P, contour)
    py = pi_loop(work, y)
    if py is None:
        raise ReductionError(f"no radical generator at {y}")
    ideal = work.compose(py, ray)
    if ideal.is_zero:
        raise ReductionError("pi(y).ray vanishes; the contour is deep")
    return quotient_by_ideal(work, ideal), x, y, dual


def decisive_subcats(P: RayCategory, contour, k: int,
                     pair_with=None) -> DecisiveFamily:
    """Full-subcategory point sets of P' that contain x and y and sit inside
    the union of the relevant supports (projective of x with injective of y;
    for a contour pair, projective of x with projective of x')."""
    if not contour.non_deep:
        raise ReductionError("decisive subcategories are defined for non-deep contours")
    quot, x, y, dual = decisive_quotient(P, contour)
    proj_x, _ = supports(quot, x)
    if pair_with is None:
        _, inj_y = supports(quot, y)
        union = sorted(set(proj_x) | set(inj_y), key=quot.points.index)
    else:
        x2 = pair_with.y if dual else pair_with.x
        proj_x2, _ = supports(quot, x2)
        union = sorted(set(proj_x) | set(proj_x2), key=quot.points.index)
    must = {x, y}
    optional = [p for p in union if p not in must]
    sets = []
    base = tuple(sorted(must, key=quot.points.index))
    if len(base) <= k and set(base) <= set(union):
        sets.append(base)
        for extra in range(1, k - len(base) + 1):
            for combo in combinations(optional, extra):
                sets.append(tuple(sorted(set(base) | set(combo),
                                         key=quot.points.index)))
    sets.sort(key=lambda s: (len(s), s))
    return DecisiveFamily(quot, x, y, k, tuple(union), tuple(sets), dual)
