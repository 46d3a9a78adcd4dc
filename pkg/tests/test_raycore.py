import pytest

from oracle import NaiveClosure, production_live, production_partition
from raycat.families import all_templates, diamond, dumbbell
from raycat.presentation import Presentation, PresentationError, make_presentation
from raycat.raycore import (
    ClosureBudgetError,
    NotFiniteError,
    build_ray_category,
    verify_axioms,
)


def test_dumbbell_hom_classes(db33):
    xy = db33.nonzero_classes("x", "y")
    assert len(xy) == 3
    members = {db33.members(m) for m in xy}
    assert (("m",),) in members
    assert (("m", "l"), ("r", "m")) in members


def test_single_point_category():
    cat = build_ray_category(make_presentation("pt", ["x"], [], []))
    homs = cat.hom("x", "x")
    assert [str(m) for m in homs] == ["id_x", "0[x->x]"]


def test_pennyfarthing_rho_powers(pf2):
    rho = pf2.ray_of_text("rho")
    assert pf2.power(rho, 3) != pf2.zero("x0", "x0")
    assert pf2.power(rho, 4).is_zero
    assert pf2.ray_of_text("a1 a2").is_zero


def test_ray_of_identifies_relation_sides(db33):
    assert db33.ray_of_text("m l") == db33.ray_of_text("r m")
    assert db33.ray_of_text("r r r m").is_zero
    assert db33.ray_of((), at="x") == db33.identity("x")


def test_compose(db33):
    f = db33.ray_of_text("m")
    assert db33.compose(db33.identity("y"), f) == f
    r = db33.ray_of_text("r")
    assert db33.compose(r, db33.compose(r, f)) == db33.ray_of_text("r r m")
    assert db33.compose(db33.zero("y", "y"), f).is_zero
    with pytest.raises(PresentationError, match="mismatch"):
        db33.compose(f, f)


def test_axioms_pass_on_templates(db33, pf2, dia):
    for cat in (db33, pf2, dia):
        report = verify_axioms(cat)
        assert report.all_passed, report.failed()


def test_axiom_e_fails_on_parallel_arrows():
    cat = build_ray_category(
        make_presentation("par", ["x", "y"], [("a", "x", "y"), ("b", "x", "y")], [])
    )
    report = verify_axioms(cat)
    assert not report.check("e").passed
    assert report.check("e").witness["source"] == "x"


def test_axiom_f_cancellation_failure():
    cat = build_ray_category(
        make_presentation(
            "f_fail",
            ["x", "y"],
            [("s", "x", "x"), ("a", "x", "y"), ("b", "x", "y")],
            [(("s", "s"), None), (("a", "s"), ("b", "s"))],
        )
    )
    report = verify_axioms(cat)
    f = report.check("f")
    assert not f.passed
    assert {f.witness["mu"], f.witness["nu"]} == {"a", "b"}
    assert f.witness["kappa"] == "s"


def test_not_finite_on_free_loop():
    pres = make_presentation("free", ["x"], [("u", "x", "x")], [])
    with pytest.raises(NotFiniteError) as err:
        build_ray_category(pres)
    assert err.value.cap == 32


def test_closure_budget_guard():
    pres = make_presentation(
        "two_free", ["x"], [("u", "x", "x"), ("v", "x", "x")], []
    )
    with pytest.raises((ClosureBudgetError, NotFiniteError)):
        build_ray_category(pres, cap=32, max_paths=5000)


def test_pf1_arrow_identified_with_rho_square(pf1):
    assert pf1.ray_of_text("a1") == pf1.ray_of_text("rho rho")
    assert verify_axioms(pf1).all_passed


def test_build_is_deterministic():
    a = build_ray_category(diamond()).to_json()
    b = build_ray_category(diamond()).to_json()
    assert a == b


def test_congruence_soundness(dia):
    for m in dia.all_morphisms():
        for path in dia.members(m):
            assert dia.ray_of(path, at=m.source) == m


def test_monotone_zero(db33):
    # every extension of a zero path stays zero
    z = ("l", "l", "l")
    assert db33.ray_of(z).is_zero
    assert db33.ray_of(("m",) + z).is_zero


def test_associativity_exhaustive(dia):
    ms = dia.all_morphisms()
    for f in ms:
        for g in ms:
            if g.source != f.target:
                continue
            gf = dia.compose(g, f)
            for h in ms:
                if h.source != g.target:
                    continue
                assert dia.compose(h, gf) == dia.compose(dia.compose(h, g), f)


@pytest.mark.parametrize("pres", all_templates(), ids=lambda p: p.name)
def test_oracle_equivalence_on_templates(pres):
    cat = build_ray_category(pres)
    oracle = NaiveClosure(pres, cap=32)
    assert production_live(cat) == oracle.live_words()
    assert production_partition(cat) == oracle.partition()


def test_oracle_equivalence_on_awkward_host():
    pres = make_presentation(
        "mixed",
        ["x", "y", "z"],
        [("l", "x", "x"), ("m", "x", "y"), ("r", "y", "y"), ("t", "y", "z")],
        [(("m", "l"), ("r", "m")), (("l", "l", "l"), None),
         (("r", "r", "r"), None), (("t", "r"), None)],
    )
    cat = build_ray_category(pres)
    oracle = NaiveClosure(pres, cap=32)
    assert production_live(cat) == oracle.live_words()
    assert production_partition(cat) == oracle.partition()


def test_json_dump_shape(db33):
    data = db33.to_json()
    assert data["points"] == ["x", "y"]
    pairs = {(h["source"], h["target"]) for h in data["homs"]}
    assert ("x", "y") in pairs
    assert any(t["gf"] == "0" for t in data["composition"])


from hypothesis import given, settings, strategies as st

from test_presentation import presentations


@settings(max_examples=40, deadline=None)
@given(presentations())
def test_engine_matches_oracle_on_random_presentations(pres):
    cap = 8
    try:
        cat = build_ray_category(pres, cap=cap, max_paths=20000)
    except (NotFiniteError, ClosureBudgetError):
        return
    oracle = NaiveClosure(pres, cap=cap)
    assert production_live(cat) == oracle.live_words()
    assert production_partition(cat) == oracle.partition()
    # congruence soundness and associativity on whatever got built
    ms = cat.all_morphisms()
    for m in ms:
        for path in cat.members(m):
            assert cat.ray_of(path, at=m.source) == m
    for f in ms:
        for g in ms:
            if g.source != f.target:
                continue
            gf = cat.compose(g, f)
            for h in ms:
                if h.source == g.target:
                    assert cat.compose(h, gf) == cat.compose(cat.compose(h, g), f)
