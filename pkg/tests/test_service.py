from fastapi.testclient import TestClient

from raycat.ops import corpus_dir
from raycat.presentation import presentation_to_json
from raycat.families import diamond, dumbbell
from raycat.service import app

client = TestClient(app)


def corpus_text(name: str) -> str:
    return corpus_dir().joinpath(name).read_text()


def test_health():
    r = client.get("/health")
    assert r.status_code == 200 and r.json() == {"ok": True}


def test_parse_text():
    r = client.post("/parse", json={"text": corpus_text("dumbbell_3_3.rc")})
    assert r.status_code == 200
    body = r.json()
    assert body["status"] == 0
    assert body["report"]["presentation"]["points"] == ["x", "y"]


def test_parse_json_interchange():
    r = client.post(
        "/parse", json={"presentation": presentation_to_json(diamond())}
    )
    assert r.status_code == 200
    assert len(r.json()["report"]["presentation"]["arrows"]) == 6


def test_build_and_classify_roundtrip():
    r = client.post("/build", json={"text": corpus_text("diamond.rc")})
    assert r.status_code == 200
    homs = r.json()["report"]["category"]["homs"]
    assert any(h["source"] == "x" and h["target"] == "y" for h in homs)

    r = client.post("/classify", json={"text": corpus_text("diamond.rc")})
    assert r.status_code == 200
    verdicts = r.json()["report"]["classifications"]
    assert verdicts[0]["verdict"]["family"] == "diamond"


def test_axioms_failure_reported_with_status_one():
    text = (
        "category par\npoints x y\narrow a : x -> y\narrow b : x -> y\n"
    )
    r = client.post("/axioms", json={"text": text})
    assert r.status_code == 200
    body = r.json()
    assert body["status"] == 1
    assert not body["report"]["axioms"]["all_passed"]


def test_invalid_input_is_422():
    r = client.post("/build", json={"text": "category c\npoints x\nbogus\n"})
    assert r.status_code == 422
    r = client.post("/build", json={})
    assert r.status_code == 422


def test_not_finite_maps_to_status_three():
    r = client.post("/build", json={"text": corpus_text("nonadmissible_loop.rc")})
    assert r.status_code == 200
    assert r.json()["status"] == 3


def test_disjoint_endpoint():
    r = client.post(
        "/disjoint",
        json={"text": corpus_text("two_pf_glued_rim.rc"),
              "contours": [0, 1], "k": 6},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["status"] == 1
    assert body["report"]["disjointness"]["shared_points"] == ["x1"]


def test_separate_endpoint():
    r = client.post("/separate",
                    json={"text": corpus_text("two_pf_glued_rim.rc")})
    assert r.status_code == 200
    comps = r.json()["report"]["components"]
    assert any("A~5" in c["contains_extended"] for c in comps)


def test_quotient_split_sub_endpoints():
    text = corpus_text("dumbbell_3_3.rc")
    r = client.post("/quotient", json={"text": text, "kill": "r r m"})
    assert r.status_code == 200
    r = client.post("/split", json={"text": corpus_text("db_tau_split.rc"),
                                    "point": "z"})
    assert r.status_code == 200
    assert "z_out" in r.json()["report"]["presentation"]["points"]
    r = client.post("/sub", json={"text": corpus_text("diamond.rc"),
                                  "points": ["x", "y"]})
    assert r.status_code == 200
    assert "a_g" in r.json()["report"]["arrow_images"]


def test_cleave_endpoint():
    shape = {
        "name": "arrow",
        "points": ["u", "v"],
        "arrows": [{"name": "e", "source": "u", "target": "v"}],
        "relations": [],
    }
    diagram = {"shape": shape, "objects": {"u": "x", "v": "y"},
               "arrows": {"e": ["m"]}}
    r = client.post("/cleave", json={"text": corpus_text("dumbbell_3_3.rc"),
                                     "diagram": diagram})
    assert r.status_code == 200
    assert r.json()["report"]["cleaving"]["ok"] is True


def test_crown_and_witness_endpoints():
    r = client.post("/crown", json={"text": corpus_text("dumbbell_3_3.rc"),
                                    "max_period": 6})
    assert r.status_code == 200
    assert r.json()["report"]["crown"] is None
    r = client.post("/witness", json={"text": corpus_text("dumbbell_6_6.rc"),
                                      "budget": 10**6})
    assert r.status_code == 200
    assert r.json()["status"] == 1
    assert r.json()["report"]["witness_search"]["found"] is True


def test_mild_and_decisive_endpoints():
    text = corpus_text("dumbbell_3_3.rc")
    r = client.post("/check-mild", json={"text": text, "contour": 0})
    assert r.status_code == 200
    assert r.json()["report"]["mildness"]["status"] == "mild-consistent"
    r = client.post("/decisive", json={"text": text, "contour": 0, "k": 4})
    assert r.status_code == 200
    assert r.json()["report"]["decisive"]["sets"] == [["x", "y"]]


def test_openapi_lists_all_operations():
    spec = client.get("/openapi.json").json()
    paths = set(spec["paths"])
    expected = {
        "/parse", "/build", "/axioms", "/morph", "/contours", "/uniqueness",
        "/classify", "/check-mild", "/disjoint", "/neighborhood", "/quotient",
        "/split", "/sub", "/decisive", "/cleave", "/crown", "/separate",
        "/witness", "/corpus-verify", "/health",
    }
    assert expected <= paths
