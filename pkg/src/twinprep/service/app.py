"""FastAPI service wrapping the protocol simulator and the REE solver.

The CLI talks to this app in-process by default; `twinprep serve` hosts
it for remote clients. Domain validation failures surface as 422
responses whose detail names the violated invariant.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import acceptance, locc, ree, report, tradeoff
from ..errors import (
    AngleOutOfRange,
    DomainError,
    MatrixFileError,
    TranscriptError,
)
from ..protocol import ProtocolSpec
from . import models

API_PREFIX = "/api/v1"


def spec_from_params(params: models.SpecParams) -> ProtocolSpec:
    try:
        if params.mode == "equatorial":
            if params.phi is None:
                raise AngleOutOfRange("equatorial mode requires phi")
            return ProtocolSpec.equatorial(params.phi)
        if params.theta is None:
            raise AngleOutOfRange(f"{params.mode} mode requires theta")
        if params.mode == "polar" and params.alpha is None:
            return ProtocolSpec.polar(params.theta)
        if params.alpha is None:
            raise DomainError("general-alpha mode requires alpha")
        # polar with an explicit alpha is the general family
        return ProtocolSpec.general(params.theta, params.alpha)
    except (AngleOutOfRange, DomainError) as exc:
        raise HTTPException(
            status_code=422, detail={"invariant": "protocol-spec", "message": str(exc)}
        )


def _solver_options(req: models.SolverOptions) -> ree.ReeOptions:
    return ree.ReeOptions(gap_tol=req.gap_tol, max_iters=req.max_iters)


def create_app() -> FastAPI:
    app = FastAPI(title="twinprep", version="0.1.0")

    @app.get(API_PREFIX + "/health", response_model=models.HealthResponse)
    def health() -> models.HealthResponse:
        return models.HealthResponse(status="ok", version="0.1.0")

    @app.post(API_PREFIX + "/protocol/run", response_model=models.RunResponse)
    def protocol_run(req: models.RunRequest) -> models.RunResponse:
        result = report.build_run_report(spec_from_params(req))
        return models.RunResponse(
            mode=result.mode,
            phi=result.phi,
            theta=result.theta,
            alpha=result.alpha,
            outcomes=[models.OutcomeModel(**vars(o)) for o in result.outcomes],
            pole_fidelity=result.pole_fidelity,
            pole_mismatch=result.pole_mismatch,
        )

    @app.post(API_PREFIX + "/tradeoff", response_model=models.TradeoffResponse)
    def tradeoff_sweep(req: models.TradeoffRequest) -> models.TradeoffResponse:
        csv_text = report.build_tradeoff_csv(req.alpha_steps, _solver_options(req))
        return models.TradeoffResponse(csv_text=csv_text, note=tradeoff.DISCREPANCY_NOTE)

    @app.post(API_PREFIX + "/ree", response_model=models.EreResponse)
    def ree_minimize(req: models.EreRequest) -> models.EreResponse:
        try:
            result = report.build_ere_report(req.matrix_text, _solver_options(req))
        except MatrixFileError as exc:
            raise HTTPException(
                status_code=422, detail={"invariant": exc.invariant, "message": str(exc)}
            )
        return models.EreResponse(**vars(result))

    @app.post(API_PREFIX + "/locc/session", response_model=models.LoccSessionResponse)
    def locc_session(req: models.LoccSessionRequest) -> models.LoccSessionResponse:
        session = locc.run_session(spec_from_params(req), req.topology, req.seed)
        return models.LoccSessionResponse(
            transcript_text=session.transcript.serialize(),
            classical_cost_bits=locc.classical_cost(session.transcript),
            outcome_bit=session.outcome_bit,
            fidelity_B=session.fidelity_B,
            fidelity_C=session.fidelity_C,
        )

    @app.post(API_PREFIX + "/locc/replay", response_model=models.LoccReplayResponse)
    def locc_replay(req: models.LoccReplayRequest) -> models.LoccReplayResponse:
        try:
            matches, result = locc.replay_matches(req.transcript_text)
        except TranscriptError as exc:
            raise HTTPException(
                status_code=422, detail={"invariant": "transcript", "message": str(exc)}
            )
        return models.LoccReplayResponse(
            matches=matches,
            transcript_text=result.transcript.serialize(),
            fidelity_B=result.fidelity_B,
            fidelity_C=result.fidelity_C,
        )

    @app.post(API_PREFIX + "/verify", response_model=models.VerifyResponse)
    def verify(req: models.VerifyRequest) -> models.VerifyResponse:
        results = acceptance.run_criteria(req.criteria)
        return models.VerifyResponse(
            all_passed=acceptance.all_passed(results),
            results=[models.CriterionModel(**vars(r)) for r in results],
        )

    return app


app = create_app()
