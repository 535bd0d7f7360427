"""Pydantic request/response schemas for the service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

Mode = Literal["equatorial", "polar", "general-alpha"]
Topology = Literal["standard", "same-location"]


class SpecParams(BaseModel):
    mode: Mode
    phi: Optional[float] = None
    theta: Optional[float] = None
    alpha: Optional[float] = None


class RunRequest(SpecParams):
    pass


class OutcomeModel(BaseModel):
    outcome_bit: int
    probability: float
    fidelity_B: float
    fidelity_C: float


class RunResponse(BaseModel):
    mode: Mode
    phi: Optional[float]
    theta: Optional[float]
    alpha: Optional[float]
    outcomes: list[OutcomeModel]
    pole_fidelity: Optional[float]
    pole_mismatch: Optional[bool]


class SolverOptions(BaseModel):
    gap_tol: float = Field(default=1e-4, gt=0)
    max_iters: int = Field(default=2000, ge=1)


class TradeoffRequest(SolverOptions):
    alpha_steps: int = Field(default=9, ge=2)


class TradeoffResponse(BaseModel):
    csv_text: str
    note: str


class EreRequest(SolverOptions):
    matrix_text: str


class EreResponse(BaseModel):
    value_bits: float
    gap_bits: float
    lower_bound_bits: float
    iterations: int
    converged: bool
    concurrence: float
    eof_bits: float
    sigma_text: str
    note: str
    reference_claims: dict[str, float]


class LoccSessionRequest(SpecParams):
    topology: Topology = "standard"
    seed: int = 0


class LoccSessionResponse(BaseModel):
    transcript_text: str
    classical_cost_bits: int
    outcome_bit: int
    fidelity_B: float
    fidelity_C: float


class LoccReplayRequest(BaseModel):
    transcript_text: str


class LoccReplayResponse(BaseModel):
    matches: bool
    transcript_text: str
    fidelity_B: float
    fidelity_C: float


class VerifyRequest(BaseModel):
    criteria: Optional[list[int]] = None


class CriterionModel(BaseModel):
    cid: int
    label: str
    passed: bool
    detail: str
    seconds: float


class VerifyResponse(BaseModel):
    all_passed: bool
    results: list[CriterionModel]


class HealthResponse(BaseModel):
    status: str
    version: str
