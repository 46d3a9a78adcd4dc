"""HTTP service exposing the workbench operations.

Stateless: every request carries the presentation (text or JSON interchange
form) and the operation parameters; responses wrap the same reports the CLI
prints, plus the CLI exit code under ``status``.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import ops

app = FastAPI(
    title="raycat",
    description="Workbench for finite ray categories presented by quivers "
                "with relations.",
    version="0.1.0",
)


class PresentationRequest(BaseModel):
    """A presentation as DSL text or as the JSON interchange object."""

    text: str | None = None
    presentation: dict | None = None
    cap: int = Field(default=ops.DEFAULT_CAP, ge=2)

    def source(self) -> str:
        if self.text is not None:
            return self.text
        if self.presentation is not None:
            import json

            return json.dumps(self.presentation)
        raise HTTPException(422, "provide either 'text' or 'presentation'")


class ContourRequest(PresentationRequest):
    contour: int = 0
    budget: int = Field(default=ops.DEFAULT_BUDGET, ge=1)


class MildRequest(ContourRequest):
    k: int = Field(default=4, ge=2)


class DisjointRequest(PresentationRequest):
    contours: tuple[int, int] = (0, 1)
    k: int = Field(default=6, ge=2)
    budget: int = Field(default=ops.DEFAULT_BUDGET, ge=1)


class QuotientRequest(PresentationRequest):
    kill: str


class SplitRequest(PresentationRequest):
    point: str


class SubRequest(PresentationRequest):
    points: list[str]


class ClassifyRequest(PresentationRequest):
    contour: int | None = None
    budget: int = Field(default=ops.DEFAULT_BUDGET, ge=1)


class MorphRequest(PresentationRequest):
    point: str | None = None
    pair: tuple[str, str] | None = None


class CleaveRequest(PresentationRequest):
    diagram: dict


class CrownRequest(PresentationRequest):
    max_period: int = Field(default=6, ge=1)


class WitnessRequest(PresentationRequest):
    budget: int = Field(default=ops.DEFAULT_BUDGET, ge=1)


class OpResponse(BaseModel):
    status: int  # the CLI exit code for the same operation
    report: dict


def _respond(result: ops.OpResult) -> OpResponse:
    if result.exit_code == 2:
        raise HTTPException(422, result.payload.get("error", "invalid input"))
    return OpResponse(status=result.exit_code, report=result.payload)


@app.get("/health")
def health() -> dict:
    return {"ok": True}


@app.post("/parse", response_model=OpResponse)
def parse(req: PresentationRequest):
    return _respond(ops.op_parse(req.source()))


@app.post("/build", response_model=OpResponse)
def build(req: PresentationRequest):
    return _respond(ops.op_build(req.source(), cap=req.cap))


@app.post("/axioms", response_model=OpResponse)
def axioms(req: PresentationRequest):
    return _respond(ops.op_axioms(req.source(), cap=req.cap))


@app.post("/morph", response_model=OpResponse)
def morph(req: MorphRequest):
    return _respond(
        ops.op_morph(req.source(), cap=req.cap, point=req.point, pair=req.pair)
    )


@app.post("/contours", response_model=OpResponse)
def contours(req: PresentationRequest):
    return _respond(ops.op_contours(req.source(), cap=req.cap))


@app.post("/uniqueness", response_model=OpResponse)
def uniqueness(req: ContourRequest):
    return _respond(
        ops.op_uniqueness(req.source(), contour=req.contour, cap=req.cap)
    )


@app.post("/classify", response_model=OpResponse)
def classify(req: ClassifyRequest):
    return _respond(
        ops.op_classify(req.source(), cap=req.cap, contour=req.contour,
                        budget=req.budget)
    )


@app.post("/check-mild", response_model=OpResponse)
def check_mild(req: MildRequest):
    return _respond(
        ops.op_check_mild(req.source(), contour=req.contour, cap=req.cap,
                          budget=req.budget, k=req.k)
    )


@app.post("/disjoint", response_model=OpResponse)
def disjoint(req: DisjointRequest):
    return _respond(
        ops.op_disjoint(req.source(), contours=req.contours, k=req.k,
                        cap=req.cap, budget=req.budget)
    )


@app.post("/neighborhood", response_model=OpResponse)
def neighborhood(req: ContourRequest):
    return _respond(
        ops.op_neighborhood(req.source(), contour=req.contour, cap=req.cap,
                            budget=req.budget)
    )


@app.post("/quotient", response_model=OpResponse)
def quotient(req: QuotientRequest):
    return _respond(ops.op_quotient(req.source(), kill=req.kill, cap=req.cap))


@app.post("/split", response_model=OpResponse)
def split(req: SplitRequest):
    return _respond(ops.op_split(req.source(), point=req.point, cap=req.cap))


@app.post("/sub", response_model=OpResponse)
def sub(req: SubRequest):
    return _respond(
        ops.op_sub(req.source(), points=tuple(req.points), cap=req.cap)
    )


@app.post("/decisive", response_model=OpResponse)
def decisive(req: MildRequest):
    return _respond(
        ops.op_decisive(req.source(), contour=req.contour, k=req.k, cap=req.cap)
    )


@app.post("/cleave", response_model=OpResponse)
def cleave(req: CleaveRequest):
    import json

    return _respond(
        ops.op_cleave(req.source(), diagram_json=json.dumps(req.diagram),
                      cap=req.cap)
    )


@app.post("/crown", response_model=OpResponse)
def crown(req: CrownRequest):
    return _respond(
        ops.op_crown(req.source(), max_period=req.max_period, cap=req.cap)
    )


@app.post("/separate", response_model=OpResponse)
def separate(req: PresentationRequest):
    return _respond(ops.op_separate(req.source(), cap=req.cap))


@app.post("/witness", response_model=OpResponse)
def witness(req: WitnessRequest):
    return _respond(ops.op_witness(req.source(), budget=req.budget, cap=req.cap))


@app.post("/corpus-verify", response_model=OpResponse)
def corpus_verify():
    return _respond(ops.op_corpus_verify())
