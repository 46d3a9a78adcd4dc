import pytest

from raycat.classify import (
    ClassifyError,
    Diamond,
    DumbBell,
    Inconclusive,
    PennyFarthing,
    Refuted,
    check_mild,
    classify_contour,
    contour_disjointness,
    is_family_verdict,
    neighborhood_constraints,
)
from raycat.cleaving import check_cleaving, crown_violations
from raycat.contours import find_contours
from raycat.families import (
    all_templates,
    diamond,
    dumbbell,
    nondecreasing_maps,
    penny_farthing,
)
from raycat.presentation import make_presentation, parse_presentation
from raycat.raycore import build_ray_category
from raycat.reductions import opposite


def nondeep(cat):
    return [c for c in find_contours(cat) if c.non_deep]


def classify_first(cat, budget=10**6):
    return classify_contour(cat, nondeep(cat)[0], budget=budget)


@pytest.mark.parametrize("r,s", [(3, 3), (3, 4), (3, 5), (4, 3), (5, 3)])
def test_dumbbell_parameters(r, s):
    cat = build_ray_category(dumbbell(r, s))
    assert classify_first(cat) == DumbBell(r, s)


@pytest.mark.parametrize("r,s", [(3, 4), (4, 3), (3, 5)])
def test_dumbbell_duality_swaps(r, s):
    cat = opposite(build_ray_category(dumbbell(r, s)))
    assert classify_first(cat) == DumbBell(s, r)


@pytest.mark.parametrize(
    "n,e",
    [(n, e) for n in range(1, 5) for e in nondecreasing_maps(n)],
    ids=lambda v: str(v),
)
def test_pennyfarthing_parameters(n, e):
    cat = build_ray_category(penny_farthing(n, e))
    assert classify_first(cat) == PennyFarthing(n, e)
    # self-dual as a family
    assert isinstance(classify_first(opposite(cat)), PennyFarthing)


def test_diamond_self_dual(dia):
    assert classify_first(dia) == Diamond()
    assert classify_first(opposite(dia)) == Diamond()


def test_deep_contour_rejected(dia):
    deep = [c for c in find_contours(dia) if not c.non_deep][0]
    with pytest.raises(ClassifyError):
        classify_contour(dia, deep)


def test_dumbbell_66_is_never_a_family_verdict():
    cat = build_ray_category(dumbbell(6, 6))
    verdict = classify_first(cat)
    assert not is_family_verdict(verdict)
    assert isinstance(verdict, (Refuted, Inconclusive))
    if isinstance(verdict, Refuted):
        assert verdict.search.found
        assert verdict.in_quotient


def test_refuted_witness_recertifies():
    cat = build_ray_category(dumbbell(6, 6))
    verdict = classify_first(cat)
    assert isinstance(verdict, Refuted)
    ws = verdict.search
    if ws.kind == "diagram":
        assert check_cleaving(ws.witness).ok
    else:
        assert crown_violations(verdict.quotient, ws.witness) == []


def test_classification_invariant_under_renaming():
    renamed = parse_presentation(
        """
category renamed
points p q
arrow u : p -> p
arrow w : p -> q
arrow z : q -> q
rel w u = z w
rel u u u = 0
rel z z z z = 0
"""
    )
    cat = build_ray_category(renamed)
    assert classify_first(cat) == DumbBell(3, 4)


@pytest.mark.parametrize("pres", all_templates(), ids=lambda p: p.name)
def test_family_gate_never_violated(pres):
    cat = build_ray_category(pres)
    verdict = classify_first(cat)
    if isinstance(verdict, DumbBell):
        assert min(verdict.r, verdict.s) == 3
        assert max(verdict.r, verdict.s) <= 5
    assert is_family_verdict(verdict)


# ---------------------------------------------------------------------------
# mildness


def test_templates_mild_consistent(db33, pf2, dia):
    for cat in (db33, pf2, dia):
        rep = check_mild(cat, nondeep(cat)[0], budget=10**6)
        assert rep.status == "mild-consistent"


def test_decisive_sets_cover_endpoints(db33):
    rep = check_mild(db33, nondeep(db33)[0], budget=10**6)
    assert rep.decisive_sets == (("x", "y"),)


# ---------------------------------------------------------------------------
# disjointness


def test_disjoint_copies_pass_both_clauses():
    cat = build_ray_category(make_presentation(
        "two", ["x", "y", "u", "v"],
        [("l", "x", "x"), ("m", "x", "y"), ("r", "y", "y"),
         ("lp", "u", "u"), ("mp", "u", "v"), ("rp", "v", "v")],
        [(("m", "l"), ("r", "m")), (("l", "l", "l"), None),
         (("r", "r", "r"), None),
         (("mp", "lp"), ("rp", "mp")), (("lp", "lp", "lp"), None),
         (("rp", "rp", "rp"), None)],
    ))
    c1, c2 = nondeep(cat)
    rep = contour_disjointness(cat, c1, c2, 6)
    assert rep.arrows_clause_pass and rep.points_clause_pass
    assert rep.search is None


def test_glued_dumbbells_share_point_and_arrow():
    cat = build_ray_category(make_presentation(
        "chained", ["x", "y", "yp"],
        [("l", "x", "x"), ("m", "x", "y"), ("r", "y", "y"),
         ("mp", "y", "yp"), ("rp", "yp", "yp")],
        [(("m", "l"), ("r", "m")), (("mp", "r"), ("rp", "mp")),
         (("l", "l", "l"), None), (("r", "r", "r"), None),
         (("rp", "rp", "rp"), None)],
    ))
    c1, c2 = nondeep(cat)
    rep = contour_disjointness(cat, c1, c2, 6)
    assert rep.shared_points == ("y",)
    assert rep.shared_arrows == ("r",)
    assert not rep.arrows_clause_pass and not rep.points_clause_pass
    # the overlap comes with a representation-infiniteness witness
    assert rep.search is not None and rep.search.found


# ---------------------------------------------------------------------------
# neighbourhood constraints


def test_standalone_dumbbell_all_vacuous(db33):
    c = nondeep(db33)[0]
    rep = neighborhood_constraints(db33, c, classify_contour(db33, c))
    assert {cl.status for cl in rep.clauses} == {"vacuous"}


def test_dumbbell_with_tau_passes():
    cat = build_ray_category(parse_presentation(
        """
category db_tau
points x y z
arrow l : x -> x
arrow m : x -> y
arrow r : y -> y
arrow t : y -> z
rel m l = r m
rel l l l = 0
rel r r r = 0
rel t r = 0
"""
    ))
    c = nondeep(cat)[0]
    rep = neighborhood_constraints(cat, c, classify_contour(cat, c))
    assert rep.all_ok
    assert [cl.status for cl in rep.clauses] == ["pass"] * 4


def test_dumbbell_rho_cubed_flagged():
    cat = build_ray_category(parse_presentation(
        """
category db_tau_rho4
points x y z
arrow l : x -> x
arrow m : x -> y
arrow r : y -> y
arrow t : y -> z
rel m l = r m
rel l l l = 0
rel r r r r = 0
rel t r = 0
"""
    ))
    c = nondeep(cat)[0]
    rep = neighborhood_constraints(cat, c, classify_contour(cat, c))
    bad = [cl for cl in rep.clauses if cl.name == "c"][0]
    assert bad.status == "fail"
    assert "rho^3" in bad.detail or bad.witness


def test_pennyfarthing_situation_a():
    cat = build_ray_category(parse_presentation(
        """
category pf_beta
points x0 x1 b
arrow rho : x0 -> x0
arrow a1 : x0 -> x1
arrow a2 : x1 -> x0
arrow beta : x0 -> b
rel a1 a2 = 0
rel rho rho = a2 a1
rel a1 rho a2 = 0
rel beta rho = 0
"""
    ))
    c = nondeep(cat)[0]
    rep = neighborhood_constraints(cat, c, classify_contour(cat, c))
    assert rep.situation == "a"
    assert rep.all_ok


def test_diamond_neighborhood_clean(dia):
    c = nondeep(dia)[0]
    rep = neighborhood_constraints(dia, c, classify_contour(dia, c))
    assert rep.all_ok
    names = {cl.name for cl in rep.clauses}
    assert names == {"a", "b", "c"}


def test_neighborhood_requires_family_verdict(dia):
    c = nondeep(dia)[0]
    with pytest.raises(ClassifyError):
        neighborhood_constraints(dia, c, Inconclusive("n/a"))


def test_diamond_extra_arrow_from_x_flagged():
    # an additional arrow out of x contradicts the diamond neighbourhood
    pres = parse_presentation(
        """
category diamond_extra
points x z t y w
arrow b : t -> y
arrow d : x -> t
arrow a : z -> y
arrow g : x -> z
arrow l : z -> x
arrow k : y -> z
arrow f : x -> w
rel b d = a g
rel l k = 0
rel k a = g l
rel f l = 0
"""
    )
    cat = build_ray_category(pres)
    c = nondeep(cat)[0]
    verdict = classify_contour(cat, c)
    assert verdict == Diamond()
    rep = neighborhood_constraints(cat, c, verdict)
    clause_c = [cl for cl in rep.clauses if cl.name == "c"][0]
    assert clause_c.status == "fail"
    assert "f" in str(clause_c.witness)


def test_ops_error_paths():
    from raycat import ops

    text = ops.corpus_dir().joinpath("dumbbell_3_3.rc").read_text()
    # contour index out of range
    assert ops.op_classify(text, contour=7).exit_code == 2
    # malformed diagram payload
    assert ops.op_cleave(text, diagram_json="{not json").exit_code == 2


def test_pennyfarthing_situation_b():
    cat = build_ray_category(parse_presentation(
        """
category pf_gamma
points x0 x1 c
arrow rho : x0 -> x0
arrow a1 : x0 -> x1
arrow a2 : x1 -> x0
arrow g : x1 -> c
rel a1 a2 = 0
rel rho rho = a2 a1
rel a1 rho a2 = 0
rel g a1 rho = 0
"""
    ))
    c = nondeep(cat)[0]
    rep = neighborhood_constraints(cat, c, classify_contour(cat, c))
    assert rep.situation == "b"
    assert rep.all_ok


def test_pennyfarthing_situation_c():
    cat = build_ray_category(parse_presentation(
        """
category pf_both
points x0 x1 b c
arrow rho : x0 -> x0
arrow a1 : x0 -> x1
arrow a2 : x1 -> x0
arrow beta : x0 -> b
arrow g : x1 -> c
rel a1 a2 = 0
rel rho rho = a2 a1
rel a1 rho a2 = 0
rel beta rho = 0
rel beta a2 = 0
rel g a1 = 0
"""
    ))
    c = nondeep(cat)[0]
    rep = neighborhood_constraints(cat, c, classify_contour(cat, c))
    assert rep.situation == "c"
    assert rep.all_ok


def test_pennyfarthing_unmatched_situation_reported():
    # two outgoing arrows at x0 match none of the three situations
    cat = build_ray_category(parse_presentation(
        """
category pf_two_betas
points x0 x1 b1 b2
arrow rho : x0 -> x0
arrow a1 : x0 -> x1
arrow a2 : x1 -> x0
arrow beta1 : x0 -> b1
arrow beta2 : x0 -> b2
rel a1 a2 = 0
rel rho rho = a2 a1
rel a1 rho a2 = 0
rel beta1 rho = 0
rel beta2 rho = 0
"""
    ))
    c = nondeep(cat)[0]
    rep = neighborhood_constraints(cat, c, classify_contour(cat, c))
    assert rep.situation is None
    assert not rep.all_ok
