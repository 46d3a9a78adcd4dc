"""Builders for the three classified contour families.

The templates are produced as presentations over canonical names so that
classification can cross-check an extracted candidate against a freshly
built reference structure.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from .presentation import Presentation, make_presentation


def dumbbell(r: int, s: int, name: str | None = None) -> Presentation:
    """Two loops l, r joined by m: x -> y, with m l = r m and l^r = 0 = r^s."""
    if r < 2 or s < 2:
        raise ValueError("loop nilpotence must be at least 2")
    return make_presentation(
        name or f"dumbbell_{r}_{s}",
        ["x", "y"],
        [("l", "x", "x"), ("m", "x", "y"), ("r", "y", "y")],
        [
            (("m", "l"), ("r", "m")),
            (("l",) * r, None),
            (("r",) * s, None),
        ],
    )


def penny_farthing(n: int, e: tuple[int, ...] = (), name: str | None = None) -> Presentation:
    """Loop rho at x0 plus the cycle a1: x0 -> x1, ..., an: x_{n-1} -> x0.

    Relations: a1 an = 0, rho^2 = an ... a1, and for each i the zero relation
    a_{e[i]} ... a1 rho an ... a_{i+1} = 0 (e non-decreasing with values in
    1..n, one entry per i in 1..n-1).
    """
    if n < 1:
        raise ValueError("cycle length must be at least 1")
    e = tuple(e)
    if len(e) != n - 1:
        raise ValueError(f"e must have {n - 1} entries")
    if any(not 1 <= v <= n for v in e) or any(e[i] > e[i + 1] for i in range(len(e) - 1)):
        raise ValueError("e must be non-decreasing with values in 1..n")
    points = [f"x{i}" for i in range(n)]
    arrows = [("rho", "x0", "x0")]
    for i in range(1, n + 1):
        arrows.append((f"a{i}", f"x{i - 1}", f"x{i % n}"))
    cycle = tuple(f"a{i}" for i in range(n, 0, -1))  # an ... a1
    rels = [
        (("a1", f"a{n}"), None),
        (("rho", "rho"), cycle),
    ]
    for i in range(1, n):
        head = tuple(f"a{k}" for k in range(e[i - 1], 0, -1))
        tail = tuple(f"a{k}" for k in range(n, i, -1))
        rels.append((head + ("rho",) + tail, None))
    if name is None:
        name = f"pennyfarthing_{n}" + ("_e" + "".join(map(str, e)) if e else "")
    return make_presentation(name, points, arrows, rels)


def nondecreasing_maps(n: int):
    """All admissible e for a penny-farthing with cycle length n."""
    if n == 1:
        return [()]
    return [tuple(c) for c in combinations_with_replacement(range(1, n + 1), n - 1)]


def diamond(name: str = "diamond") -> Presentation:
    """The four-point family: square x -> {z, t} -> y with back arrows
    l: z -> x and k: y -> z, relations b d = a g, l k = 0, k a = g l."""
    return make_presentation(
        name,
        ["x", "z", "t", "y"],
        [
            ("b", "t", "y"),
            ("d", "x", "t"),
            ("a", "z", "y"),
            ("g", "x", "z"),
            ("l", "z", "x"),
            ("k", "y", "z"),
        ],
        [
            (("b", "d"), ("a", "g")),
            (("l", "k"), None),
            (("k", "a"), ("g", "l")),
        ],
    )


def all_templates() -> list[Presentation]:
    """Every presentation the acceptance gate builds: dumb-bells with
    min{r,s}=3 and max{r,s}<=5, penny-farthings for n in 1..4 over every
    admissible e, and the diamond."""
    out = []
    for r, s in [(3, 3), (3, 4), (3, 5), (4, 3), (5, 3)]:
        out.append(dumbbell(r, s))
    for n in range(1, 5):
        for e in nondecreasing_maps(n):
            out.append(penny_farthing(n, e))
    out.append(diamond())
    return out
