"""HTTP facade over the solver.

Stateless endpoints: every request carries the full model document, so
the service holds nothing between calls and concurrent requests cannot
interact.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import cluster_decision, model, modelfile, oracle, policy_queries
from ..errors import InvalidDiagram, SolverError
from ..model import InfluenceDiagram
from ..modelfile import ModelFileError
from ..policy_queries import EvaluationResult
from .schemas import (
    DecisionInfo,
    ErrorBody,
    InfoResponse,
    Issue,
    PolicyOut,
    SolveRequest,
    SolveResponse,
    TreeRequest,
    TreeResponse,
    ValidateRequest,
    ValidateResponse,
)

VALIDATION_ERRORS = (ModelFileError, InvalidDiagram)


def _load(doc: dict[str, Any], evidence: Mapping[str, Any]) -> InfluenceDiagram:
    if evidence:
        doc = dict(doc)
        doc["evidence"] = {**doc.get("evidence", {}), **dict(evidence)}
    return modelfile.load_model(json.dumps(doc))


def _issues(raw) -> list[Issue]:
    return [
        Issue(code=code, message=message, variables=list(ids))
        for code, message, ids in raw
    ]


def run_solve(
    diagram: InfluenceDiagram,
    method: str,
    mode: str,
    full_information: bool,
) -> EvaluationResult:
    """Dispatch to a backend; shared by the service and in-process callers."""
    report = model.validate(diagram)
    if not report.ok:
        raise InvalidDiagram(report)
    if method == "queries":
        return policy_queries.solve_by_queries(
            diagram, use_full_information=full_information
        )
    if method == "cluster":
        return cluster_decision.solve_by_clustering(
            diagram, mode=mode, use_full_information=full_information
        )
    if method == "onedir":
        if mode == "likelihood":
            raise SolverError("the one-directional backend has no likelihood mode")
        return cluster_decision.solve_one_directional(
            diagram, mode=mode if mode == "valuation" else "rescaled",
            use_full_information=full_information,
        )
    if method == "oracle":
        scope_mode = "full-information" if full_information else "relevant"
        return oracle.brute_solve(diagram, scope_mode).as_result(diagram)
    raise SolverError(f"unknown method {method!r}")


def _policies_out(result: EvaluationResult) -> list[PolicyOut]:
    return [
        PolicyOut(
            decision=rule.decision,
            scope=list(rule.scope),
            choices=[rule.alternatives[i] for i in rule.choices.reshape(-1).tolist()],
        )
        for rule in result.policies
    ]


def create_app() -> FastAPI:
    app = FastAPI(title="idsolve", description="exact influence-diagram solver")

    @app.exception_handler(SolverError)
    async def solver_error(request: Request, exc: SolverError):
        category = "validation" if isinstance(exc, VALIDATION_ERRORS) else "solver"
        body = ErrorBody(code=exc.code, category=category, detail=str(exc))
        return JSONResponse(status_code=422, content=body.model_dump())

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.post("/validate", response_model=ValidateResponse)
    async def validate(request: ValidateRequest):
        diagram = _load(request.model, {})
        report = model.validate(diagram)
        return ValidateResponse(
            ok=report.ok,
            errors=_issues(report.errors),
            warnings=_issues(report.warnings),
        )

    @app.post("/solve", response_model=SolveResponse)
    async def solve(request: SolveRequest):
        diagram = _load(request.model, request.evidence)
        result = run_solve(
            diagram, request.method, request.mode, request.full_information
        )
        diagnostics = json.loads(json.dumps(result.diagnostics, default=str))
        return SolveResponse(
            mev=result.mev,
            meu=result.meu,
            evidence_probability=result.evidence_probability,
            policies=_policies_out(result),
            diagnostics=diagnostics,
        )

    @app.post("/info", response_model=InfoResponse)
    async def info(request: ValidateRequest):
        diagram = _load(request.model, {})
        report = model.validate(diagram)
        if not report.ok:
            raise InvalidDiagram(report)
        details = []
        for decision in diagram.decision_order:
            details.append(
                DecisionInfo(
                    id=decision,
                    alternatives=list(diagram.variable(decision).outcomes),
                    information=list(diagram.information_set(decision)),
                    relevant=list(model.relevant_information(diagram, decision)),
                )
            )
        kinds = [v.kind for v in diagram.variables]
        return InfoResponse(
            chance=kinds.count("chance"),
            decisions=kinds.count("decision"),
            values=kinds.count("value"),
            combination=diagram.combination,
            decision_order=list(diagram.decision_order),
            evidence={
                var: diagram.variable(var).outcomes[idx]
                for var, idx in sorted(diagram.evidence.items())
            },
            decision_details=details,
        )

    @app.post("/tree", response_model=TreeResponse)
    async def tree(request: TreeRequest):
        diagram = _load(request.model, request.evidence)
        report = model.validate(diagram)
        if not report.ok:
            raise InvalidDiagram(report)
        rooted = cluster_decision.build_one_directional_tree(
            diagram, mode=request.mode, absorb=request.absorb
        )
        return TreeResponse(
            dot=cluster_decision.rooted_to_dot(rooted),
            clusters=[list(c) for c in rooted.clusters],
            root=rooted.root,
            edges=[list(e) for e in rooted.edges],
        )

    return app


app = create_app()
