"""Contours: pairs of non-interlaced parallel paths with the same nonzero ray.

Two parallel paths are interlaced when they lie in the transitive closure of
the one-step relation R: (v, w) in R iff v = p v' q and w = p w' q with
ray(v') = ray(w') != 0 and p, q not both identities.  A single R-step
preserves the ray of the whole path, so interlacement components refine the
morphism classes; the closure is therefore computed per class, over the
interned member paths (paths with nonzero ray, plus the minimal zero
witnesses, which never meet the nonzero ones).
"""

from __future__ import annotations

from dataclasses import dataclass

from .morphology import pi_loop, transit_class
from .presentation import PresentationError, path_source, path_target, validate_path
from .raycore import RayCategory, RayMorphism


@dataclass(frozen=True)
class Contour:
    """Unordered pair {v, w} stored with v lexicographically first."""

    x: str
    y: str
    v: tuple[str, ...]
    w: tuple[str, ...]
    ray: RayMorphism
    non_deep: bool
    transit_path: tuple[str, ...] | None  # lex-minimal path with ray pi(y)

    @property
    def paths(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        return (self.v, self.w)

    def to_json(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "v": list(self.v),
            "w": list(self.w),
            "ray": str(self.ray),
            "non_deep": self.non_deep,
            "transit_path": list(self.transit_path) if self.transit_path else None,
        }


def contour_points(P: RayCategory, C: Contour) -> tuple[str, ...]:
    """Points visited by the two paths, in first-visit order."""
    seen: list[str] = []

    def visit(p):
        if p not in seen:
            seen.append(p)

    for path in (C.v, C.w):
        visit(path_source(P.quiver, path))
        for name in reversed(path):
            visit(P.quiver.arrow(name).target)
    return tuple(seen)


def contour_arrows(C: Contour) -> tuple[str, ...]:
    return tuple(sorted(set(C.v) | set(C.w)))


def _r_neighbours(P: RayCategory, path: tuple[str, ...]):
    """Paths one R-step from ``path`` (same class by congruence)."""
    n = len(path)
    out = set()
    for i in range(n):
        for j in range(i + 1, n + 1):
            if i == 0 and j == n:
                continue  # p and q would both be identities
            inner = path[i:j]
            ray = P.ray_of(inner)
            if ray.is_zero:
                continue
            for other in P.members(ray):
                cand = path[:i] + other + path[j:]
                if cand != path:
                    out.add(cand)
    return out


def _interlacing_components(P: RayCategory, m: RayMorphism) -> list[frozenset]:
    """Partition of the member paths of a nonzero class under interlacing."""
    members = list(P.members(m))
    idx = {p: i for i, p in enumerate(members)}
    parent = list(range(len(members)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    for p in members:
        for q in _r_neighbours(P, p):
            j = idx.get(q)
            if j is not None:
                union(idx[p], j)
            # q not interned would mean a zero-ray path, impossible here
    comps: dict[int, set] = {}
    for p, i in idx.items():
        comps.setdefault(find(i), set()).add(p)
    return [frozenset(c) for c in comps.values()]


def interlaced(P: RayCategory, v, w) -> bool:
    """Membership of (v, w) in the transitive closure of R.

    R-steps preserve the ray, so paths with different rays are never
    interlaced; within a class the closure runs over the member paths.
    Pairs of zero-ray paths report False: contours require a nonzero ray,
    and the closure domain is the interned paths.
    """
    v = validate_path(P.quiver, v)
    w = validate_path(P.quiver, w)
    if (
        path_source(P.quiver, v) != path_source(P.quiver, w)
        or path_target(P.quiver, v) != path_target(P.quiver, w)
    ):
        raise PresentationError("interlacing needs parallel paths")
    if v == w:
        return _self_interlaced(P, v)
    rv, rw = P.ray_of(v), P.ray_of(w)
    if rv != rw or rv.is_zero:
        return False
    for comp in _interlacing_components(P, rv):
        if v in comp:
            return w in comp
    return False


def _self_interlaced(P: RayCategory, v) -> bool:
    """(v, v) in R iff some decomposition v = p v' q with nonzero inner ray
    and p, q not both identities exists."""
    n = len(v)
    for i in range(n):
        for j in range(i + 1, n + 1):
            if i == 0 and j == n:
                continue
            if not P.ray_of(v[i:j]).is_zero:
                return True
    return False


def find_contours(P: RayCategory) -> list[Contour]:
    """All contours, in lexicographic order of (x, y, v, w)."""
    out = []
    for m in P.all_morphisms(include_identities=True):
        members = P.members(m)
        if len(members) < 2:
            continue
        comps = _interlacing_components(P, m)
        if len(comps) < 2:
            continue
        reps = sorted(comps, key=lambda c: min((len(p), p) for p in c))
        cls = transit_class(P, m)
        tpath = None
        try:
            py = pi_loop(P, m.target)
        except PresentationError:
            py = None  # axiom d fails at the target; no canonical transit path
        if py is not None:
            tpath = min(P.members(py), key=lambda t: (len(t), t))
        for i in range(len(reps)):
            for j in range(i + 1, len(reps)):
                for v in sorted(reps[i]):
                    for w in sorted(reps[j]):
                        a, b = sorted((v, w))
                        out.append(
                            Contour(
                                x=m.source,
                                y=m.target,
                                v=a,
                                w=b,
                                ray=m,
                                non_deep=not cls.deep,
                                transit_path=tpath,
                            )
                        )
    out.sort(key=lambda c: (c.x, c.y, c.v, c.w))
    return out


@dataclass
class UniquenessVerdict:
    ok: bool
    counterexample: tuple[str, ...] | None = None
    precondition_failure: str | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "precondition_failure": self.precondition_failure,
        }


def check_path_uniqueness(P: RayCategory, C: Contour) -> UniquenessVerdict:
    """Every path with the contour's ray must be v or w.

    Preconditions (reported, not guessed): the contour is non-deep and its
    ray is transit.
    """
    if not C.non_deep:
        return UniquenessVerdict(False, precondition_failure="contour is deep")
    cls = transit_class(P, C.ray)
    if not cls.is_transit:
        return UniquenessVerdict(False, precondition_failure="ray is not transit")
    expected = {C.v, C.w}
    for path in P.members(C.ray):
        if path not in expected:
            return UniquenessVerdict(False, counterexample=path)
    return UniquenessVerdict(True)
