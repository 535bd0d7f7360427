"""Report builders shared by the service endpoints and the CLI.

Everything here is presentation-free computation: parse and validate
inputs, run the underlying operations, and package results (including
the always-on reference-claim discrepancy note) for whatever front end
is asking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import formats, linalg, protocol, ree, tradeoff
from .errors import MatrixFileError
from .protocol import ProtocolSpec
from .states import DensityMatrix


def density_from_matrix_text(text: str) -> DensityMatrix:
    """Parse a complex-matrix v1 payload into a two-qubit density matrix.

    Raises MatrixFileError with the violated invariant named.
    """
    m = formats.loads_matrix(text)
    if m.shape != (4, 4):
        raise MatrixFileError(f"need a 4x4 (two-qubit) matrix, got {m.shape}", "dimension")
    if np.max(np.abs(m - m.conj().T)) > linalg.HERMITICITY_TOL:
        raise MatrixFileError("matrix is not Hermitian within 1e-10", "hermitian")
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > 1e-10:
        raise MatrixFileError(f"trace {tr} is not 1 within 1e-10", "trace")
    if float(np.min(np.linalg.eigvalsh(m))) < -linalg.EIGENVALUE_CLAMP:
        raise MatrixFileError("matrix has an eigenvalue below -1e-10", "psd")
    return DensityMatrix(("a", "B"), m)


@dataclass(frozen=True)
class EreReport:
    value_bits: float
    gap_bits: float
    lower_bound_bits: float
    iterations: int
    converged: bool
    concurrence: float
    eof_bits: float
    sigma_text: str
    note: str
    reference_claims: dict


def build_ere_report(matrix_text: str,
                     options: Optional[ree.ReeOptions] = None) -> EreReport:
    rho = density_from_matrix_text(matrix_text)
    result = ree.ree_frank_wolfe(rho, options)
    return EreReport(
        value_bits=result.value_bits,
        gap_bits=result.gap_bits,
        lower_bound_bits=result.lower_bound_bits,
        iterations=result.iterations,
        converged=result.converged,
        concurrence=ree.concurrence(rho),
        eof_bits=ree.eof(rho),
        sigma_text=formats.dumps_matrix(result.sigma.matrix),
        note=tradeoff.DISCREPANCY_NOTE,
        reference_claims={
            "equatorial": tradeoff.REFERENCE_ER_EQUATORIAL,
            "polar": tradeoff.REFERENCE_ER_POLAR,
        },
    )


@dataclass(frozen=True)
class OutcomeReport:
    outcome_bit: int
    probability: float
    fidelity_B: float
    fidelity_C: float


@dataclass(frozen=True)
class RunReport:
    mode: str
    phi: Optional[float]
    theta: Optional[float]
    alpha: Optional[float]
    outcomes: tuple[OutcomeReport, OutcomeReport]
    pole_fidelity: Optional[float]
    pole_mismatch: Optional[bool]


def build_run_report(spec: ProtocolSpec) -> RunReport:
    outcomes = tuple(
        OutcomeReport(o.outcome_bit, o.probability, o.fidelity_B, o.fidelity_C)
        for o in protocol.run_protocol(spec)
    )
    pole = None
    mismatch = None
    if spec.mode in ("polar", "general-alpha"):
        pole = protocol.pole_fidelity(spec.alpha)
        mismatch = abs(pole - outcomes[0].fidelity_B) > 1e-9
    return RunReport(
        mode=spec.mode,
        phi=spec.phi,
        theta=spec.theta,
        alpha=spec.alpha,
        outcomes=outcomes,
        pole_fidelity=pole,
        pole_mismatch=mismatch,
    )


def build_tradeoff_csv(alpha_steps: int,
                       options: Optional[ree.ReeOptions] = None) -> str:
    rows = tradeoff.compute_tradeoff(alpha_steps, options)
    return formats.dumps_tradeoff(rows, comments=tradeoff.csv_comments())
