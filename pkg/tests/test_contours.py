import pytest

from raycat.contours import (
    check_path_uniqueness,
    contour_arrows,
    contour_points,
    find_contours,
    interlaced,
)
from raycat.families import all_templates
from raycat.presentation import PresentationError, make_presentation
from raycat.raycore import build_ray_category


def nondeep(cat):
    return [c for c in find_contours(cat) if c.non_deep]


def test_diamond_common_prefix_interlaced(dia):
    assert interlaced(dia, ("k", "b", "d"), ("k", "a", "g"))


def test_dumbbell_contour_paths_not_interlaced(db33):
    assert not interlaced(db33, ("m", "l"), ("r", "m"))


def test_single_arrow_not_self_interlaced(db33):
    assert not interlaced(db33, ("m",), ("m",))
    # but a path with a decomposable nonzero interior is self-interlaced
    assert interlaced(db33, ("m", "l"), ("m", "l"))


def test_interlaced_requires_parallel(db33):
    with pytest.raises(PresentationError, match="parallel"):
        interlaced(db33, ("m",), ("l",))


def test_interlaced_symmetric(dia):
    pairs = [(("k", "b", "d"), ("k", "a", "g")), (("a", "g"), ("b", "d"))]
    for v, w in pairs:
        assert interlaced(dia, v, w) == interlaced(dia, w, v)


def test_dumbbell_contour(db33):
    cs = find_contours(db33)
    assert len(cs) == 1
    c = cs[0]
    assert (c.v, c.w) == (("m", "l"), ("r", "m"))
    assert c.non_deep
    assert c.transit_path == ("r",)
    rho = db33.ray_of_text("r")
    assert not db33.compose(rho, c.ray).is_zero


def test_linear_quiver_has_no_contours():
    cat = build_ray_category(
        make_presentation("lin", ["x", "y"], [("a", "x", "y")], [])
    )
    assert find_contours(cat) == []


def test_diamond_contours(dia):
    cs = find_contours(dia)
    nd = [c for c in cs if c.non_deep]
    assert len(nd) == 1
    assert {nd[0].v, nd[0].w} == {("a", "g"), ("b", "d")}
    # the z -> z pair {gl, ka} is a contour too, but a deep one
    deep = [c for c in cs if not c.non_deep]
    assert any({c.v, c.w} == {("g", "l"), ("k", "a")} for c in deep)


def test_pennyfarthing_uniqueness(pf2):
    c = nondeep(pf2)[0]
    assert {c.v, c.w} == {("a2", "a1"), ("rho", "rho")}
    assert set(pf2.members(c.ray)) == {("a2", "a1"), ("rho", "rho")}
    verdict = check_path_uniqueness(pf2, c)
    assert verdict.ok


@pytest.mark.parametrize("pres", all_templates(), ids=lambda p: p.name)
def test_templates_have_one_nondeep_contour_passing_uniqueness(pres):
    cat = build_ray_category(pres)
    nd = nondeep(cat)
    assert len(nd) == 1
    assert check_path_uniqueness(cat, nd[0]).ok


def test_uniqueness_reports_third_path():
    # an extra parallel arrow identified with the contour ray gives a third
    # path carrying the same ray
    pres = make_presentation(
        "extra",
        ["x", "y"],
        [("l", "x", "x"), ("m", "x", "y"), ("r", "y", "y"), ("u", "x", "y")],
        [(("m", "l"), ("r", "m")), (("l", "l", "l"), None),
         (("r", "r", "r"), None), (("u",), ("m", "l"))],
    )
    cat = build_ray_category(pres)
    cs = [c for c in find_contours(cat) if {c.v, c.w} == {("m", "l"), ("r", "m")}]
    assert cs
    verdict = check_path_uniqueness(cat, cs[0])
    assert not verdict.ok
    assert verdict.counterexample == ("u",)


def test_uniqueness_precondition_reported(dia):
    deep = [c for c in find_contours(dia) if not c.non_deep][0]
    verdict = check_path_uniqueness(dia, deep)
    assert not verdict.ok
    assert verdict.precondition_failure == "contour is deep"


def test_contour_points_and_arrows(pf2):
    c = nondeep(pf2)[0]
    assert contour_points(pf2, c) == ("x0", "x1")
    assert contour_arrows(c) == ("a1", "a2", "rho")


def test_interlacing_invariant_under_renaming():
    base = make_presentation(
        "base", ["x", "y"],
        [("l", "x", "x"), ("m", "x", "y"), ("r", "y", "y")],
        [(("m", "l"), ("r", "m")), (("l", "l", "l"), None),
         (("r", "r", "r"), None)],
    )
    renamed = make_presentation(
        "ren", ["p", "q"],
        [("u", "p", "p"), ("w", "p", "q"), ("z", "q", "q")],
        [(("w", "u"), ("z", "w")), (("u", "u", "u"), None),
         (("z", "z", "z"), None)],
    )
    a = build_ray_category(base)
    b = build_ray_category(renamed)
    assert interlaced(a, ("m", "l"), ("r", "m")) == interlaced(
        b, ("w", "u"), ("z", "w")
    )


def test_reported_contours_recheck_non_interlaced(db34, pf2, dia):
    for cat in (db34, pf2, dia):
        for c in find_contours(cat):
            assert not interlaced(cat, c.v, c.w)
