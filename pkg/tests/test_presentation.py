import pytest
from hypothesis import given, strategies as st

from raycat.families import diamond, dumbbell
from raycat.presentation import (
    Arrow,
    ParseError,
    Presentation,
    PresentationError,
    Quiver,
    ZeroRelation,
    make_presentation,
    parse_presentation,
    presentation_from_json,
    presentation_to_json,
    print_presentation,
    validate_path,
)

DUMBBELL_TEXT = """
category dumbbell
points x y
arrow l : x -> x
arrow m : x -> y
arrow r : y -> y
rel m l = r m
rel l l l = 0
rel r r r = 0
"""


def test_parse_dumbbell():
    p = parse_presentation(DUMBBELL_TEXT)
    assert len(p.quiver.points) == 2
    assert len(p.quiver.arrows) == 3
    assert len(p.relations) == 3


def test_parse_degenerate_quiver():
    p = parse_presentation("category one\npoints x\n")
    assert p.quiver.points == ("x",)
    assert p.relations == ()


def test_non_parallel_relation_rejected():
    bad = DUMBBELL_TEXT + "rel m l = r\n"
    with pytest.raises(ParseError, match="non-parallel"):
        parse_presentation(bad)


def test_unknown_arrow_rejected():
    with pytest.raises(ParseError):
        parse_presentation("category c\npoints x\nrel q = 0\n")


def test_non_composable_path_rejected():
    with pytest.raises(ParseError, match="non-composable"):
        parse_presentation(
            "category c\npoints x y\narrow a : x -> y\nrel a a = 0\n"
        )


def test_identity_forcing_relation_rejected():
    text = (
        "category c\npoints x y\narrow a : x -> y\narrow s : x -> x\n"
        "rel a s = a\n"
    )
    with pytest.raises(ParseError, match="identity"):
        parse_presentation(text)


def test_parse_error_carries_line():
    try:
        parse_presentation("category c\npoints x\nnonsense here\n")
    except ParseError as exc:
        assert exc.line == 3
    else:
        raise AssertionError("expected ParseError")


def test_duplicate_relations_deduplicated():
    text = DUMBBELL_TEXT + "rel m l = r m\nrel r m = m l\n"
    p = parse_presentation(text)
    assert len(p.relations) == 3


def test_roundtrip_dumbbell():
    p = parse_presentation(DUMBBELL_TEXT)
    assert parse_presentation(print_presentation(p)) == p


def test_diamond_prints_relations():
    text = print_presentation(diamond())
    assert "rel b d = a g" in text
    assert "rel l k = 0" in text
    assert "rel k a = g l" in text


def test_zero_only_relation_lines():
    p = make_presentation("z", ["x"], [("u", "x", "x")], [(("u", "u"), None)])
    lines = [l for l in print_presentation(p).splitlines() if "=" in l]
    assert lines == ["rel u u = 0"]


def test_json_roundtrip():
    p = dumbbell(3, 4)
    assert presentation_from_json(presentation_to_json(p)) == p


def test_duplicate_point_rejected():
    with pytest.raises(PresentationError, match="duplicate point"):
        Quiver(("x", "x"), ())


def test_arrow_endpoint_must_exist():
    with pytest.raises(PresentationError, match="unknown source"):
        Quiver(("x",), (Arrow("a", "q", "x"),))


def test_validate_path_checks_composability():
    q = dumbbell(3, 3).quiver
    assert validate_path(q, ("m", "l")) == ("m", "l")
    with pytest.raises(PresentationError):
        validate_path(q, ("l", "m"))


names = st.sampled_from(["a", "b", "c", "d", "e", "f"])


def _random_path(draw, arrows, max_extra=2):
    """A short composable path, as (names tuple, source, target)."""
    path = [draw(st.sampled_from(arrows))]
    for _ in range(draw(st.integers(0, max_extra))):
        nxt = [a for a in arrows if a[2] == path[-1][1]]
        if not nxt:
            break
        path.append(draw(st.sampled_from(nxt)))
    # arrows were appended in precomposition order, so the tuple is already
    # in composition order (leftmost applied last)
    names = tuple(a[0] for a in path)
    return names, path[-1][1], path[0][2]


@st.composite
def presentations(draw):
    n_points = draw(st.integers(1, 4))
    points = [f"p{i}" for i in range(n_points)]
    n_arrows = draw(st.integers(0, 5))
    arrows = []
    for i in range(n_arrows):
        src = draw(st.sampled_from(points))
        tgt = draw(st.sampled_from(points))
        arrows.append((f"a{i}", src, tgt))
    quiver = Quiver(tuple(points), tuple(Arrow(*a) for a in arrows))
    rels = []
    for _ in range(draw(st.integers(0, 3))):
        if not arrows:
            break
        names, _, _ = _random_path(draw, arrows)
        rels.append(ZeroRelation(names))
    for _ in range(draw(st.integers(0, 2))):
        if not arrows:
            break
        lhs, s1, t1 = _random_path(draw, arrows)
        rhs, s2, t2 = _random_path(draw, arrows)
        if (s1, t1) != (s2, t2) or lhs == rhs:
            continue
        if (len(lhs) < 2 or len(rhs) < 2) and (lhs[0] == rhs[0] or lhs[-1] == rhs[-1]):
            continue
        rels.append(CommutativityRelation(lhs, rhs))
    return Presentation("gen", quiver, tuple(rels))


@given(presentations())
def test_print_parse_is_identity(p):
    text = print_presentation(p)
    assert parse_presentation(text) == p
    # parse . print . parse == parse
    assert print_presentation(parse_presentation(text)) == text
