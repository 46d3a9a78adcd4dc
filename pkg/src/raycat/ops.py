"""Operations layer: one function per workbench command.

The CLI and the HTTP service both dispatch here.  Every operation returns
an OpResult with a machine-distinguishable exit code:

    0  clean verdicts
    1  structural findings (axiom failure, Refuted, NotMild, overlap,
       witness found)
    2  input errors
    3  NotFinite / budget exhaustion

Output is deterministic: identical inputs produce byte-identical reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from . import classify as cls
from .cleaving import (
    BudgetExhausted,
    DiagramFunctor,
    check_cleaving,
    find_crown,
    find_dynkin_cleaving,
    separated_quiver,
)
from .contours import check_path_uniqueness, find_contours
from .graphs import classify_graph, contained_extended_shapes
from .morphology import classification_table, pi_hom, pi_loop, supports
from .presentation import (
    ParseError,
    Presentation,
    PresentationError,
    parse_presentation,
    presentation_from_json,
    presentation_to_json,
    print_presentation,
)
from .raycore import (
    ClosureBudgetError,
    NotFiniteError,
    RayCategory,
    build_ray_category,
    verify_axioms,
)
from .reductions import (
    ReductionError,
    decisive_subcats,
    full_subcategory,
    quotient_by_ideal,
    split_point,
)

DEFAULT_CAP = 32
DEFAULT_BUDGET = 10**6


@dataclass
class OpResult:
    exit_code: int
    payload: dict
    text: str

    def json(self) -> str:
        return json.dumps(self.payload, indent=2, sort_keys=True) + "\n"


def _ok(payload, text, findings: bool = False) -> OpResult:
    return OpResult(1 if findings else 0, payload, text)


def _input_error(message: str) -> OpResult:
    return OpResult(2, {"error": message}, f"error: {message}\n")


def _divergent(message: str) -> OpResult:
    return OpResult(3, {"error": message}, f"error: {message}\n")


def load_presentation(text: str) -> Presentation:
    text = text.lstrip()
    if text.startswith("{"):
        return presentation_from_json(json.loads(text))
    return parse_presentation(text)


def _build(text: str, cap: int) -> RayCategory:
    return build_ray_category(load_presentation(text), cap=cap)


def _guarded(fn):
    def run(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParseError, PresentationError, ReductionError,
                cls.ClassifyError, json.JSONDecodeError) as exc:
            return _input_error(str(exc))
        except NotFiniteError as exc:
            return _divergent(str(exc))
        except ClosureBudgetError as exc:
            return _divergent(str(exc))
        except BudgetExhausted as exc:
            return _divergent(str(exc))

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _contour_list(P: RayCategory):
    return find_contours(P)


def _pick_contour(P: RayCategory, index: int):
    contours = _contour_list(P)
    if not 0 <= index < len(contours):
        raise PresentationError(
            f"contour index {index} out of range (0..{len(contours) - 1})"
        )
    return contours[index]


# ---------------------------------------------------------------------------
# operations


@_guarded
def op_parse(text: str) -> OpResult:
    pres = load_presentation(text)
    payload = {"presentation": presentation_to_json(pres)}
    return _ok(payload, print_presentation(pres))


@_guarded
def op_build(text: str, cap: int = DEFAULT_CAP) -> OpResult:
    P = _build(text, cap)
    payload = {"category": P.to_json()}
    lines = [f"category {P.presentation.name}: {len(P.points)} points"]
    for (x, y), classes in sorted(P._hom.items()):
        reps = ", ".join(str(m) for m in classes)
        lines.append(f"  hom({x},{y}): {reps}")
    return _ok(payload, "\n".join(lines) + "\n")


@_guarded
def op_axioms(text: str, cap: int = DEFAULT_CAP) -> OpResult:
    P = _build(text, cap)
    report = verify_axioms(P)
    payload = {"axioms": report.to_json()}
    lines = [
        f"axiom {c.axiom}: {'pass' if c.passed else 'FAIL'}"
        + (f" ({c.detail})" if c.detail else "")
        for c in report.checks
    ]
    return _ok(payload, "\n".join(lines) + "\n", findings=not report.all_passed)


@_guarded
def op_morph(text: str, cap: int = DEFAULT_CAP, point: str | None = None,
             pair: tuple[str, str] | None = None) -> OpResult:
    P = _build(text, cap)
    table = classification_table(P)
    rows = []
    for m, tc in table.items():
        if point is not None and point not in (m.source, m.target):
            continue
        if pair is not None and (m.source, m.target) != tuple(pair):
            continue
        rows.append(
            {
                "morphism": str(m),
                "source": m.source,
                "target": m.target,
                "kind": tc.kind,
                "deep": tc.deep,
            }
        )
    gens = {}
    for x in P.points:
        g = pi_loop(P, x)
        gens[x] = str(g) if g else None
    payload = {"morphisms": rows, "pi_loop": gens}
    if pair is not None:
        g = pi_hom(P, pair[0], pair[1])
        payload["pi_hom"] = str(g) if g else None
    if point is not None:
        proj, inj = supports(P, point)
        payload["supports"] = {"projective": list(proj), "injective": list(inj)}
    lines = [
        f"{r['morphism']}: {r['kind']}" + (" deep" if r["deep"] else "")
        for r in rows
    ]
    return _ok(payload, "\n".join(lines) + "\n")


@_guarded
def op_contours(text: str, cap: int = DEFAULT_CAP) -> OpResult:
    P = _build(text, cap)
    contours = _contour_list(P)
    payload = {"contours": [c.to_json() for c in contours]}
    lines = []
    for i, c in enumerate(contours):
        nd = "non-deep" if c.non_deep else "deep"
        lines.append(
            f"[{i}] {c.x} -> {c.y}: v = {' '.join(c.v)}, w = {' '.join(c.w)} ({nd})"
        )
    if not contours:
        lines.append("no contours")
    return _ok(payload, "\n".join(lines) + "\n")


@_guarded
def op_uniqueness(text: str, contour: int, cap: int = DEFAULT_CAP) -> OpResult:
    P = _build(text, cap)
    c = _pick_contour(P, contour)
    verdict = check_path_uniqueness(P, c)
    payload = {"contour": c.to_json(), "uniqueness": verdict.to_json()}
    text_out = "unique\n" if verdict.ok else f"not unique: {verdict.to_json()}\n"
    return _ok(payload, text_out, findings=not verdict.ok)


@_guarded
def op_classify(text: str, cap: int = DEFAULT_CAP, contour: int | None = None,
                budget: int = DEFAULT_BUDGET) -> OpResult:
    P = _build(text, cap)
    contours = _contour_list(P)
    if contour is not None:
        picked = [(contour, _pick_contour(P, contour))]
    else:
        picked = [(i, c) for i, c in enumerate(contours) if c.non_deep]
    verdicts = []
    findings = False
    for i, c in picked:
        v = cls.classify_contour(P, c, budget=budget)
        if isinstance(v, cls.Refuted):
            findings = True
        verdicts.append({"contour": i, "verdict": v.to_json()})
    payload = {"classifications": verdicts}
    lines = [
        f"[{entry['contour']}] {json.dumps(entry['verdict'], sort_keys=True)}"
        for entry in verdicts
    ] or ["no non-deep contours"]
    return _ok(payload, "\n".join(lines) + "\n", findings=findings)


@_guarded
def op_check_mild(text: str, contour: int, cap: int = DEFAULT_CAP,
                  budget: int = DEFAULT_BUDGET, k: int = 4) -> OpResult:
    P = _build(text, cap)
    c = _pick_contour(P, contour)
    rep = cls.check_mild(P, c, budget=budget, k=k)
    payload = {"mildness": rep.to_json()}
    return _ok(payload, rep.status + "\n", findings=rep.status == "not-mild")


@_guarded
def op_disjoint(text: str, contours: tuple[int, int], k: int = 6,
                cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET) -> OpResult:
    P = _build(text, cap)
    c1 = _pick_contour(P, contours[0])
    c2 = _pick_contour(P, contours[1])
    rep = cls.contour_disjointness(P, c1, c2, k, budget=budget)
    payload = {"disjointness": rep.to_json()}
    overlap = bool(rep.shared_arrows or rep.shared_points)
    lines = [
        f"shared arrows: {', '.join(rep.shared_arrows) or '(none)'}",
        f"shared points: {', '.join(rep.shared_points) or '(none)'}",
    ]
    return _ok(payload, "\n".join(lines) + "\n", findings=overlap)


@_guarded
def op_neighborhood(text: str, contour: int, cap: int = DEFAULT_CAP,
                    budget: int = DEFAULT_BUDGET) -> OpResult:
    P = _build(text, cap)
    c = _pick_contour(P, contour)
    verdict = cls.classify_contour(P, c, budget=budget)
    if not cls.is_family_verdict(verdict):
        return _ok(
            {"error": "classification is not a family verdict",
             "verdict": verdict.to_json()},
            "classification is not a family verdict\n",
            findings=True,
        )
    rep = cls.neighborhood_constraints(P, c, verdict)
    payload = {"verdict": verdict.to_json(), "neighborhood": rep.to_json()}
    lines = [f"{cl.name}: {cl.status}" for cl in rep.clauses]
    return _ok(payload, "\n".join(lines) + "\n", findings=not rep.all_ok)


@_guarded
def op_quotient(text: str, kill: str, cap: int = DEFAULT_CAP) -> OpResult:
    P = _build(text, cap)
    m = P.ray_of_text(kill)
    Q = quotient_by_ideal(P, m)
    payload = {"category": Q.to_json()}
    return _ok(payload, print_presentation(Q.presentation))


@_guarded
def op_split(text: str, point: str, cap: int = DEFAULT_CAP) -> OpResult:
    P = _build(text, cap)
    Q = split_point(P, point)
    payload = {
        "category": Q.to_json(),
        "presentation": presentation_to_json(Q.presentation),
    }
    return _ok(payload, print_presentation(Q.presentation))


@_guarded
def op_sub(text: str, points: tuple[str, ...], cap: int = DEFAULT_CAP) -> OpResult:
    P = _build(text, cap)
    sub = full_subcategory(P, points)
    payload = {
        "category": sub.category.to_json(),
        "arrow_images": {
            name: str(m) for name, m in sorted(sub.arrow_images.items())
        },
    }
    return _ok(payload, print_presentation(sub.category.presentation))


@_guarded
def op_decisive(text: str, contour: int, k: int = 4,
                cap: int = DEFAULT_CAP) -> OpResult:
    P = _build(text, cap)
    c = _pick_contour(P, contour)
    fam = decisive_subcats(P, c, k)
    payload = {"decisive": fam.to_json()}
    lines = [" ".join(s) for s in fam.sets] or ["(none)"]
    return _ok(payload, "\n".join(lines) + "\n")


@_guarded
def op_cleave(text: str, diagram_json: str, cap: int = DEFAULT_CAP) -> OpResult:
    P = _build(text, cap)
    data = json.loads(diagram_json)
    shape = presentation_from_json(data["shape"])
    objects = dict(data["objects"])
    arrows = {}
    for name, path in data["arrows"].items():
        arrows[name] = P.ray_of(tuple(path))
    F = DiagramFunctor(shape, P, objects, arrows)
    verdict = check_cleaving(F)
    payload = {"cleaving": verdict.to_json()}
    text_out = "cleaving\n" if verdict.ok else (
        f"not cleaving: condition {verdict.condition}\n"
    )
    return _ok(payload, text_out, findings=not verdict.ok)


@_guarded
def op_crown(text: str, max_period: int = 6, cap: int = DEFAULT_CAP) -> OpResult:
    P = _build(text, cap)
    crown = find_crown(P, n_max=max_period)
    if crown is None:
        return _ok({"crown": None}, "no crown\n")
    payload = {"crown": crown.to_json()}
    return _ok(payload, f"crown of period {crown.period}\n", findings=True)


@_guarded
def op_separate(text: str, cap: int = DEFAULT_CAP) -> OpResult:
    P = _build(text, cap)
    G = separated_quiver(P)
    gc = classify_graph(G)
    comps = []
    for comp in gc.components:
        comps.append(
            {
                "classification": comp.to_json(),
                "contains_extended": [
                    f"{fam}{idx}"
                    for fam, idx in contained_extended_shapes(G, comp.vertices)
                ],
            }
        )
    payload = {"separated_quiver": G.to_json(), "components": comps}
    lines = [
        f"{c['classification']['kind']} "
        f"{(c['classification']['family'] or '') }"
        f"{c['classification']['index'] if c['classification']['index'] else ''}"
        f" on {' '.join(c['classification']['vertices'])}"
        + (f" contains {', '.join(c['contains_extended'])}"
           if c["contains_extended"] else "")
        for c in comps
    ]
    return _ok(payload, "\n".join(lines) + "\n")


@_guarded
def op_witness(text: str, budget: int = DEFAULT_BUDGET,
               cap: int = DEFAULT_CAP) -> OpResult:
    P = _build(text, cap)
    ws = find_dynkin_cleaving(P, budget=budget)
    payload = {"witness_search": ws.to_json()}
    if ws.exhausted:
        return OpResult(3, payload, "absent within budget\n")
    if ws.found:
        return _ok(payload, f"witness: {ws.shape_name}\n", findings=True)
    return _ok(payload, "no witness\n")


def corpus_dir():
    return resources.files("raycat").joinpath("corpus")


def op_corpus_verify(budget: int = DEFAULT_BUDGET) -> OpResult:
    """Run the locked corpus expectations; nonzero exit on any regression."""
    lock = json.loads(corpus_dir().joinpath("lockfile.json").read_text())
    failures = []
    results = []
    for entry in lock["entries"]:
        name = entry["file"]
        text = corpus_dir().joinpath(name).read_text()
        got = _corpus_entry_outcome(text, entry, budget)
        ok = got == entry["expect"]
        results.append({"file": name, "ok": ok, "expected": entry["expect"],
                        "got": got})
        if not ok:
            failures.append(name)
    payload = {"results": results, "failures": failures}
    lines = [
        f"{'ok  ' if r['ok'] else 'FAIL'} {r['file']}" for r in results
    ]
    text_out = "\n".join(lines) + "\n"
    return OpResult(1 if failures else 0, payload, text_out)


def _corpus_entry_outcome(text: str, entry: dict, budget: int) -> dict:
    """Evaluate the checks named by a lockfile entry; shape mirrors expect."""
    out: dict = {}
    expect = entry["expect"]
    cap = entry.get("cap", DEFAULT_CAP)
    try:
        P = _build(text, cap)
        out["build"] = "ok"
    except NotFiniteError:
        out["build"] = "not-finite"
        return out
    except ClosureBudgetError:
        out["build"] = "diverges"
        return out
    if "axioms" in expect:
        out["axioms"] = verify_axioms(P).all_passed
    if "nondeep_contours" in expect:
        nd = [c for c in find_contours(P) if c.non_deep]
        out["nondeep_contours"] = len(nd)
    if "classify" in expect:
        nd = [c for c in find_contours(P) if c.non_deep]
        verdicts = []
        for c in nd:
            v = cls.classify_contour(P, c, budget=budget)
            verdicts.append(
                v.to_json() if cls.is_family_verdict(v) else v.to_json()["family"]
            )
        out["classify"] = verdicts
    if "mild" in expect:
        nd = [c for c in find_contours(P) if c.non_deep]
        out["mild"] = [
            cls.check_mild(P, c, budget=budget).status for c in nd
        ]
    if "shared_points" in expect or "shared_arrows" in expect:
        nd = [c for c in find_contours(P) if c.non_deep]
        rep = cls.contour_disjointness(P, nd[0], nd[1], entry.get("k", 6),
                                       budget=budget)
        if "shared_points" in expect:
            out["shared_points"] = list(rep.shared_points)
        if "shared_arrows" in expect:
            out["shared_arrows"] = list(rep.shared_arrows)
    if "separated_contains" in expect:
        G = separated_quiver(P)
        found = set()
        for comp in classify_graph(G).components:
            for fam, idx in contained_extended_shapes(G, comp.vertices):
                found.add(f"{fam}{idx}")
        out["separated_contains"] = sorted(
            s for s in expect["separated_contains"] if s in found
        )
    if "split_components" in expect:
        Q = split_point(P, entry["split_point"])
        from .graphs import Multigraph

        vs = tuple(Q.points)
        es = tuple((a.source, a.target) for a in Q.quiver.arrows
                   if a.source != a.target)
        comp_count = len(Multigraph(vs, es).components())
        out["split_components"] = comp_count
    return out
