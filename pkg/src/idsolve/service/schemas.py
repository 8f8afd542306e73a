"""Request and response models for the solver service."""

from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, Field

Method = Literal["queries", "cluster", "onedir", "oracle"]
Mode = Literal["rescaled", "valuation", "likelihood"]


class Issue(BaseModel):
    code: str
    message: str
    variables: list[str] = Field(default_factory=list)


class ValidateRequest(BaseModel):
    model: dict[str, Any]


class ValidateResponse(BaseModel):
    ok: bool
    errors: list[Issue] = Field(default_factory=list)
    warnings: list[Issue] = Field(default_factory=list)


class SolveRequest(BaseModel):
    model: dict[str, Any]
    method: Method = "queries"
    mode: Mode = "rescaled"
    evidence: dict[str, Union[str, int]] = Field(default_factory=dict)
    full_information: bool = False


class PolicyOut(BaseModel):
    decision: str
    scope: list[str]
    choices: list[str]


class SolveResponse(BaseModel):
    mev: float
    meu: Optional[float] = None
    evidence_probability: float
    policies: list[PolicyOut]
    diagnostics: dict[str, Any] = Field(default_factory=dict)


class DecisionInfo(BaseModel):
    id: str
    alternatives: list[str]
    information: list[str]
    relevant: list[str]


class InfoResponse(BaseModel):
    chance: int
    decisions: int
    values: int
    combination: str
    decision_order: list[str]
    evidence: dict[str, str]
    decision_details: list[DecisionInfo]


class TreeRequest(BaseModel):
    model: dict[str, Any]
    mode: Literal["rescaled", "valuation"] = "valuation"
    evidence: dict[str, Union[str, int]] = Field(default_factory=dict)
    absorb: bool = True


class TreeResponse(BaseModel):
    dot: str
    clusters: list[list[str]]
    root: int
    edges: list[list[int]]


class ErrorBody(BaseModel):
    code: str
    category: Literal["validation", "solver"]
    detail: str
