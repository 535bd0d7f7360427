"""One-shot remote preparation of two instances of a qubit state.

A four-qubit resource on (a, A, B, C) is measured on qubit a, one bit is
broadcast, and the three remaining qubits receive local corrections. The
receivers B and C then each hold the same optimal approximation of the
requested qubit.

Three target families are supported:
  equatorial      (|0> + e^{i phi} |1>)/sqrt(2)
  polar           cos(theta)|0> + sin(theta)|1>, clone weight alpha^2 = 2/3
  general-alpha   polar targets with a tunable clone weight alpha in [0, 1]

The spec angles are nominally phi in (0, 2pi] and theta in (0, pi]; both
are accepted on the closed intervals since the endpoint 0 is a perfectly
valid (and heavily exercised) parameter value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import states
from .errors import (
    AngleOutOfRange,
    DimensionMismatch,
    DomainError,
    InputsNotOrthonormal,
)
from .states import Basis2, DensityMatrix, StateVector

RESOURCE_LABELS = ("a", "A", "B", "C")
CLONE_LABELS = ("A", "B", "C")

POLAR_ALPHA = math.sqrt(2.0 / 3.0)
EQUATORIAL_ALPHA = 1.0 / math.sqrt(2.0)

SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
MINUS_I_SIGMA_Y = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class ProtocolSpec:
    """Which target family to prepare, and with what parameters.

    beta is derived from alpha via alpha^2 + 2 beta^2 = 1.
    """

    mode: str
    phi: Optional[float] = None
    theta: Optional[float] = None
    alpha: Optional[float] = None

    def __post_init__(self):
        if self.mode == "equatorial":
            if self.phi is None or not 0.0 <= self.phi <= 2 * math.pi:
                raise AngleOutOfRange(f"phi={self.phi} outside [0, 2pi]")
        elif self.mode == "polar":
            if self.theta is None or not 0.0 <= self.theta <= math.pi:
                raise AngleOutOfRange(f"theta={self.theta} outside [0, pi]")
            object.__setattr__(self, "alpha", POLAR_ALPHA)
        elif self.mode == "general-alpha":
            if self.theta is None or not 0.0 <= self.theta <= math.pi:
                raise AngleOutOfRange(f"theta={self.theta} outside [0, pi]")
            if self.alpha is None or not 0.0 <= self.alpha <= 1.0:
                raise DomainError(f"alpha={self.alpha} outside [0, 1]")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def beta(self) -> float:
        if self.alpha is None:
            return 0.5  # equatorial clone weights are alpha=1/sqrt(2), beta=1/2
        return math.sqrt((1.0 - self.alpha**2) / 2.0)

    @property
    def clone_alpha(self) -> float:
        return EQUATORIAL_ALPHA if self.mode == "equatorial" else float(self.alpha)

    @classmethod
    def equatorial(cls, phi: float) -> "ProtocolSpec":
        return cls(mode="equatorial", phi=phi)

    @classmethod
    def polar(cls, theta: float) -> "ProtocolSpec":
        return cls(mode="polar", theta=theta)

    @classmethod
    def general(cls, theta: float, alpha: float) -> "ProtocolSpec":
        return cls(mode="general-alpha", theta=theta, alpha=alpha)


@dataclass(frozen=True)
class Correction:
    """The same single-qubit gate applied locally to each of A, B, C."""

    gate_name: str
    gate: np.ndarray
    labels: tuple[str, ...] = CLONE_LABELS


@dataclass(frozen=True)
class ProtocolOutcome:
    """One branch of the protocol after broadcast and correction.

    outcome_bit 0 is the perpendicular-result branch (no correction
    needed); outcome_bit 1 required the correction.
    """

    outcome_bit: int
    probability: float
    corrected_state: StateVector
    rho_B: DensityMatrix
    rho_C: DensityMatrix
    fidelity_B: float
    fidelity_C: float


def equatorial_target(phi: float) -> StateVector:
    """(|0> + e^{i phi} |1>)/sqrt(2) on a single qubit."""
    if not 0.0 <= phi <= 2 * math.pi:
        raise AngleOutOfRange(f"phi={phi} outside [0, 2pi]")
    return StateVector(("B",), np.array([1.0, np.exp(1j * phi)]) / math.sqrt(2.0))


def polar_target(theta: float) -> StateVector:
    """cos(theta)|0> + sin(theta)|1> on a single qubit."""
    if not 0.0 <= theta <= math.pi:
        raise AngleOutOfRange(f"theta={theta} outside [0, pi]")
    return StateVector(("B",), np.array([math.cos(theta), math.sin(theta)], dtype=complex))


def target_state(spec: ProtocolSpec) -> StateVector:
    if spec.mode == "equatorial":
        return equatorial_target(spec.phi)
    return polar_target(spec.theta)


def clone_states(spec: ProtocolSpec) -> tuple[StateVector, StateVector]:
    """The orthogonal pair of tripartite cloning states on (A, B, C).

    Both families share the pattern alpha|x x x> + beta(|x 01> + |x 10>)
    with x = 0 for the first state and x = 1 for the second; the
    equatorial family fixes alpha = 1/sqrt(2), beta = 1/2.
    """
    alpha, beta = spec.clone_alpha, spec.beta
    amps0 = np.zeros(8, dtype=complex)
    amps1 = np.zeros(8, dtype=complex)
    amps0[0b000] = alpha
    amps0[0b101] = beta
    amps0[0b110] = beta
    amps1[0b111] = alpha
    amps1[0b001] = beta
    amps1[0b010] = beta
    return (
        StateVector(CLONE_LABELS, amps0),
        StateVector(CLONE_LABELS, amps1),
    )


def resource_state(phi0: StateVector, phi1: StateVector) -> StateVector:
    """(|0>_a |phi1> - |1>_a |phi0>)/sqrt(2) on (a, A, B, C)."""
    if phi0.labels != CLONE_LABELS or phi1.labels != CLONE_LABELS:
        raise DimensionMismatch(f"clone states must live on {CLONE_LABELS}")
    gram_off = np.vdot(phi0.amplitudes, phi1.amplitudes)
    if abs(gram_off) > 1e-12:
        raise InputsNotOrthonormal(f"|<phi0|phi1>| = {abs(gram_off):.3e} exceeds 1e-12")
    amps = np.concatenate([phi1.amplitudes, -phi0.amplitudes]) / math.sqrt(2.0)
    return StateVector(RESOURCE_LABELS, amps)


def alice_basis(spec: ProtocolSpec) -> Basis2:
    """Measurement basis for qubit a: (matching state, perpendicular state).

    Phase conventions (verified numerically by the branch tests):
    equatorial perpendicular is (|0> - e^{i phi}|1>)/sqrt(2); polar
    perpendicular is sin(theta)|0> - cos(theta)|1>.
    """
    if spec.mode == "equatorial":
        e = np.exp(1j * spec.phi)
        return Basis2(
            first=np.array([1.0, e]) / math.sqrt(2.0),
            second=np.array([1.0, -e]) / math.sqrt(2.0),
        )
    c, s = math.cos(spec.theta), math.sin(spec.theta)
    return Basis2(
        first=np.array([c, s], dtype=complex),
        second=np.array([s, -c], dtype=complex),
    )


def correction(spec: ProtocolSpec) -> Correction:
    """Local correction for the wrong measurement branch, per receiver qubit."""
    if spec.mode == "equatorial":
        return Correction(gate_name="sigma_z", gate=SIGMA_Z)
    return Correction(gate_name="minus_i_sigma_y", gate=MINUS_I_SIGMA_Y)


def apply_correction(state: StateVector, corr: Correction) -> StateVector:
    out = state
    for label in corr.labels:
        out = states.apply_single_qubit(corr.gate, label, out)
    return out


def one_parameter_tripartite(spec: ProtocolSpec) -> StateVector:
    """The shared tripartite state after a successful run.

    (|phi0> + e^{i phi} |phi1>)/sqrt(2) for equatorial targets,
    cos(theta)|Phi0> + sin(theta)|Phi1> for polar ones.
    """
    phi0, phi1 = clone_states(spec)
    if spec.mode == "equatorial":
        amps = (phi0.amplitudes + np.exp(1j * spec.phi) * phi1.amplitudes) / math.sqrt(2.0)
    else:
        amps = math.cos(spec.theta) * phi0.amplitudes + math.sin(spec.theta) * phi1.amplitudes
    return StateVector(CLONE_LABELS, amps)


def _branch_outcome(spec: ProtocolSpec, bit: int, probability: float,
                    post: StateVector) -> ProtocolOutcome:
    corrected = post if bit == 0 else apply_correction(post, correction(spec))
    rho = states.density_of(corrected)
    rho_b = states.partial_trace(rho, ("B",))
    rho_c = states.partial_trace(rho, ("C",))
    target = target_state(spec)
    rho_c_relabeled = DensityMatrix(("B",), rho_c.matrix)
    return ProtocolOutcome(
        outcome_bit=bit,
        probability=probability,
        corrected_state=corrected,
        rho_B=rho_b,
        rho_C=rho_c,
        fidelity_B=states.fidelity_with_pure(rho_b, target),
        fidelity_C=states.fidelity_with_pure(rho_c_relabeled, target),
    )


def run_protocol(spec: ProtocolSpec) -> tuple[ProtocolOutcome, ProtocolOutcome]:
    """Deterministically resolve both measurement branches of the protocol.

    Returns (outcome 0, outcome 1). Outcome 0 (perpendicular result)
    needs no correction; outcome 1 gets correction(spec) on A, B, C.
    The two corrected states agree up to a global phase.
    """
    phi0, phi1 = clone_states(spec)
    psi = resource_state(phi0, phi1)
    basis = alice_basis(spec)
    resolution = states.measure_in_basis(psi, "a", basis)
    # Basis order is (matching, perpendicular); the perpendicular branch
    # is outcome_bit 0.
    p_match, p_perp = resolution.probabilities
    post_match, post_perp = resolution.posts
    out0 = _branch_outcome(spec, 0, p_perp, post_perp)
    out1 = _branch_outcome(spec, 1, p_match, post_match)
    return out0, out1


def pre_correction_marginal(spec: ProtocolSpec, bit: int, receiver: str) -> DensityMatrix:
    """Receiver marginal of the given branch BEFORE any correction."""
    phi0, phi1 = clone_states(spec)
    psi = resource_state(phi0, phi1)
    resolution = states.measure_in_basis(psi, "a", alice_basis(spec))
    post = resolution.posts[1 - bit]  # basis order (matching, perpendicular)
    return states.partial_trace(states.density_of(post), (receiver,))


def pole_fidelity(alpha: float) -> float:
    """(1 + alpha^2)/2: the isotropy-argument fidelity for clone weight alpha."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha={alpha} outside [0, 1]")
    return (1.0 + alpha**2) / 2.0


def tradeoff_entanglement(fidelity: float) -> float:
    """Entanglement (bits) required for a given fidelity, analytic curve.

    ((3F-1)/2) log2((3F-1)/2) + ((1-F)/2) log2((1-F)/2) - F log2(F/2),
    with 0 log 0 := 0, on F in [1/2, 1].
    """
    f = fidelity
    if not 0.5 <= f <= 1.0:
        raise DomainError(f"fidelity={f} outside [1/2, 1]")

    def xlog2(x: float) -> float:
        return x * math.log2(x) if x > 0.0 else 0.0

    return xlog2((3 * f - 1) / 2) + xlog2((1 - f) / 2) - f * math.log2(f / 2)


def cut_marginal(resource: StateVector, keep: Sequence[str]) -> DensityMatrix:
    """Two-qubit marginal of the resource state, e.g. keep=("a", "B")."""
    return states.partial_trace(states.density_of(resource), keep)


def resource_for(spec: ProtocolSpec) -> StateVector:
    phi0, phi1 = clone_states(spec)
    return resource_state(phi0, phi1)
