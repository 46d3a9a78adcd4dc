"""Morphism classification: transit/cotransit/bitransit, deepness, generators.

A nonzero morphism m: x -> y is *transit* when its right orbit m.End(x) is
contained in the left orbit End(y).m, *cotransit* dually, *bitransit* when
both hold.  By axiom e every nonzero morphism is at least one of the two.
It is *deep* when both pi(y).m and m.pi(x) vanish, where pi(x) generates the
radical of the endomorphisms of x; a missing generator annihilates
everything, so the corresponding half-condition holds vacuously.
Identities are bitransit and never deep.
"""

from __future__ import annotations

from dataclasses import dataclass

from .presentation import PresentationError
from .raycore import RayCategory, RayMorphism

BITRANSIT = "bitransit"
TRANSIT_ONLY = "transit"
COTRANSIT_ONLY = "cotransit"


@dataclass(frozen=True)
class TransitClass:
    kind: str  # bitransit | transit | cotransit
    deep: bool

    @property
    def is_transit(self) -> bool:
        return self.kind in (BITRANSIT, TRANSIT_ONLY)

    @property
    def is_cotransit(self) -> bool:
        return self.kind in (BITRANSIT, COTRANSIT_ONLY)


def _left_orbit(P: RayCategory, m: RayMorphism) -> set[RayMorphism]:
    return {P.compose(e, m) for e in P.nonzero_classes(m.target, m.target)}


def _right_orbit(P: RayCategory, m: RayMorphism) -> set[RayMorphism]:
    return {P.compose(m, e) for e in P.nonzero_classes(m.source, m.source)}


def transit_class(P: RayCategory, m: RayMorphism) -> TransitClass:
    """Classify a nonzero morphism; raises on the zero morphism."""
    if m.is_zero:
        raise PresentationError("transit classification needs a nonzero morphism")
    left = _left_orbit(P, m)
    right = _right_orbit(P, m)
    zero = P.zero(m.source, m.target)
    transit = right <= left | {zero}
    cotransit = left <= right | {zero}
    if transit and cotransit:
        kind = BITRANSIT
    elif transit:
        kind = TRANSIT_ONLY
    elif cotransit:
        kind = COTRANSIT_ONLY
    else:
        raise PresentationError(
            f"{m} is neither transit nor cotransit; axiom e fails here"
        )
    if m.is_identity:
        return TransitClass(kind, False)
    # annihilation by pi(x) and pi(y); phrased over the whole radical so the
    # verdict stays defined on hosts where axiom d fails (every radical
    # element is a power of pi when it holds, so the two versions agree)
    rad_src = [e for e in P.nonzero_classes(m.source, m.source) if not e.is_identity]
    rad_tgt = [e for e in P.nonzero_classes(m.target, m.target) if not e.is_identity]
    dead_right = all(P.compose(m, e).is_zero for e in rad_src)
    dead_left = all(P.compose(e, m).is_zero for e in rad_tgt)
    return TransitClass(kind, dead_right and dead_left)


def pi_loop(P: RayCategory, x: str) -> RayMorphism | None:
    """The radical generator of hom(x, x); absent when only id is nonzero."""
    nonid = [m for m in P.nonzero_classes(x, x) if not m.is_identity]
    if not nonid:
        return None
    for sigma in sorted(nonid, key=RayMorphism.sort_key):
        powers = set()
        cur = sigma
        while not cur.is_zero and len(powers) <= len(nonid):
            powers.add(cur)
            cur = P.compose(cur, sigma)
        if cur.is_zero and powers == set(nonid):
            return sigma
    raise PresentationError(f"axiom d violated at {x}: no single generator")


def pi_hom(P: RayCategory, x: str, y: str) -> RayMorphism | None:
    """Cyclic generator of hom(x, y); absent when the hom set is {0}.

    For x == y this is pi_loop(x).  When both endomorphism actions witness
    cyclicity the left (target) action is the canonical one.
    """
    if x == y:
        return pi_loop(P, x)
    classes = P.nonzero_classes(x, y)
    if not classes:
        return None
    for g in sorted(classes, key=RayMorphism.sort_key):
        if _left_orbit(P, g) >= set(classes):
            return g
    for g in sorted(classes, key=RayMorphism.sort_key):
        if _right_orbit(P, g) >= set(classes):
            return g
    raise PresentationError(f"hom({x},{y}) is not cyclic; axiom e fails there")


def supports(P: RayCategory, x: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """(projective support of x, injective support of x).

    The projective support holds every y with hom(x, y) != {0}; the
    injective support every z with hom(z, x) != {0}.
    """
    if x not in P.points:
        raise PresentationError(f"unknown point {x!r}")
    proj = tuple(y for y in P.points if P.nonzero_classes(x, y))
    inj = tuple(z for z in P.points if P.nonzero_classes(z, x))
    return proj, inj


def classification_table(P: RayCategory) -> dict[RayMorphism, TransitClass]:
    """Transit classification of every nonzero morphism."""
    return {m: transit_class(P, m) for m in P.all_morphisms()}
