"""Multi-party session runtime: Alice, Bob and Charlie as state machines.

A session is one causal chain: setup, Alice's measurement (sampled), a
single 1-bit broadcast, local corrections by whoever holds the affected
qubits, and a final report. Sampling uses numpy's PCG64 generator
(``default_rng(seed)``) with one uniform draw per session, mapped to the
outcome bit by inverse CDF over the two branch probabilities; everything
downstream of the draw is deterministic, so replaying a transcript
reproduces the final states bit-for-bit.

Transcripts serialize as line-delimited records (one event per line,
comma-separated fields, floats in shortest round-trip form) under the
header ``rsp-transcript v1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import protocol, states
from .errors import AuditFailure, InvalidTransition, TranscriptError
from .protocol import ProtocolSpec
from .states import DensityMatrix, StateVector

TRANSCRIPT_HEADER = "rsp-transcript v1"
TOPOLOGIES = ("standard", "same-location")

PHASES = ("AwaitingSetup", "Measured", "AwaitingBit", "Corrected", "Done")


@dataclass
class Party:
    name: str
    held_labels: frozenset
    phase: str = "AwaitingSetup"

    def advance(self, to: str) -> None:
        """Move to the next phase; transitions must follow PHASES with no skips."""
        current = PHASES.index(self.phase)
        target = PHASES.index(to)
        if target != current + 1:
            raise InvalidTransition(f"{self.name}: {self.phase} -> {to}")
        self.phase = to


def parties_for(topology: str) -> list[Party]:
    if topology == "standard":
        return [
            Party("Alice", frozenset({"a", "A"})),
            Party("Bob", frozenset({"B"})),
            Party("Charlie", frozenset({"C"})),
        ]
    if topology == "same-location":
        return [
            Party("Alice", frozenset({"a"})),
            Party("Bob", frozenset({"A", "B", "C"})),
        ]
    raise ValueError(f"unknown topology {topology!r}")


@dataclass(frozen=True)
class Setup:
    spec: ProtocolSpec
    topology: str
    seed: int


@dataclass(frozen=True)
class MeasurementSampled:
    outcome_bit: int
    probability: float


@dataclass(frozen=True)
class Broadcast:
    bit: int


@dataclass(frozen=True)
class CorrectionApplied:
    party: str
    gate: str


@dataclass(frozen=True)
class FinalReport:
    fidelity_B: float
    fidelity_C: float


Event = Union[Setup, MeasurementSampled, Broadcast, CorrectionApplied, FinalReport]


@dataclass
class Transcript:
    events: list = field(default_factory=list)

    @property
    def setup(self) -> Setup:
        if not self.events or not isinstance(self.events[0], Setup):
            raise TranscriptError("transcript has no setup event")
        return self.events[0]

    def serialize(self) -> str:
        lines = [TRANSCRIPT_HEADER]
        for ev in self.events:
            if isinstance(ev, Setup):
                spec = ev.spec
                fields = [f"mode={spec.mode}"]
                if spec.mode == "equatorial":
                    fields.append(f"phi={spec.phi!r}")
                else:
                    fields.append(f"theta={spec.theta!r}")
                if spec.mode == "general-alpha":
                    fields.append(f"alpha={spec.alpha!r}")
                fields += [f"topology={ev.topology}", f"seed={ev.seed}"]
                lines.append("setup," + ",".join(fields))
            elif isinstance(ev, MeasurementSampled):
                lines.append(
                    f"measurement,outcome={ev.outcome_bit},probability={ev.probability!r}"
                )
            elif isinstance(ev, Broadcast):
                lines.append(f"broadcast,{ev.bit}")
            elif isinstance(ev, CorrectionApplied):
                lines.append(f"correction,{ev.party},{ev.gate}")
            elif isinstance(ev, FinalReport):
                lines.append(f"final,B={ev.fidelity_B!r},C={ev.fidelity_C!r}")
            else:  # pragma: no cover
                raise TranscriptError(f"unknown event {ev!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Transcript":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0].strip() != TRANSCRIPT_HEADER:
            raise TranscriptError(f"missing header {TRANSCRIPT_HEADER!r}")
        events: list = []
        for ln in lines[1:]:
            kind, _, rest = ln.partition(",")
            if kind == "setup":
                kv = dict(item.split("=", 1) for item in rest.split(","))
                mode = kv["mode"]
                if mode == "equatorial":
                    spec = ProtocolSpec.equatorial(float(kv["phi"]))
                elif mode == "polar":
                    spec = ProtocolSpec.polar(float(kv["theta"]))
                elif mode == "general-alpha":
                    spec = ProtocolSpec.general(float(kv["theta"]), float(kv["alpha"]))
                else:
                    raise TranscriptError(f"unknown mode {mode!r}")
                if kv["topology"] not in TOPOLOGIES:
                    raise TranscriptError(f"unknown topology {kv['topology']!r}")
                events.append(Setup(spec=spec, topology=kv["topology"], seed=int(kv["seed"])))
            elif kind == "measurement":
                kv = dict(item.split("=", 1) for item in rest.split(","))
                events.append(MeasurementSampled(int(kv["outcome"]), float(kv["probability"])))
            elif kind == "broadcast":
                events.append(Broadcast(int(rest)))
            elif kind == "correction":
                party, _, gate = rest.partition(",")
                events.append(CorrectionApplied(party, gate))
            elif kind == "final":
                kv = dict(item.split("=", 1) for item in rest.split(","))
                events.append(FinalReport(float(kv["B"]), float(kv["C"])))
            else:
                raise TranscriptError(f"unknown event line {ln!r}")
        transcript = cls(events=events)
        transcript.check_structure()
        return transcript

    def check_structure(self) -> None:
        """One Broadcast carrying one bit; every correction after it."""
        broadcasts = [i for i, e in enumerate(self.events) if isinstance(e, Broadcast)]
        if len(broadcasts) != 1:
            raise TranscriptError(f"expected exactly one broadcast, got {len(broadcasts)}")
        if self.events[broadcasts[0]].bit not in (0, 1):
            raise TranscriptError("broadcast payload must be a single bit")
        for i, e in enumerate(self.events):
            if isinstance(e, CorrectionApplied) and i < broadcasts[0]:
                raise TranscriptError("correction precedes the broadcast")


@dataclass
class SessionResult:
    transcript: Transcript
    final_state: StateVector
    rho_B: DensityMatrix
    rho_C: DensityMatrix
    fidelity_B: float
    fidelity_C: float
    outcome_bit: int
    parties: list


def classical_cost(transcript: Transcript) -> int:
    """Total broadcast payload in bits (1 for every completed session)."""
    return sum(1 for e in transcript.events if isinstance(e, Broadcast))


def run_session(spec: ProtocolSpec, topology: str = "standard",
                seed: int = 0) -> SessionResult:
    """Execute one protocol session with a sampled measurement outcome."""
    parties = parties_for(topology)
    holder = {label: p for p in parties for label in p.held_labels}

    psi = protocol.resource_for(spec)
    resolution = states.measure_in_basis(psi, "a", protocol.alice_basis(spec))
    # basis order is (matching, perpendicular); perpendicular is outcome bit 0
    p_bit0 = resolution.probabilities[1]
    rng = np.random.default_rng(seed)
    bit = 0 if rng.random() < p_bit0 else 1
    probability = p_bit0 if bit == 0 else resolution.probabilities[0]

    events: list = [Setup(spec=spec, topology=topology, seed=seed)]
    events.append(MeasurementSampled(outcome_bit=bit, probability=probability))
    for p in parties:
        p.advance("Measured")
        p.advance("AwaitingBit")

    events.append(Broadcast(bit=bit))
    state = resolution.posts[1 - bit]
    if bit == 1:
        corr = protocol.correction(spec)
        for label in corr.labels:
            state = states.apply_single_qubit(corr.gate, label, state)
            events.append(
                CorrectionApplied(party=holder[label].name, gate=f"{corr.gate_name}({label})")
            )
    for p in parties:
        p.advance("Corrected")

    rho = states.density_of(state)
    rho_b = states.partial_trace(rho, ("B",))
    rho_c = states.partial_trace(rho, ("C",))
    target = protocol.target_state(spec)
    fid_b = states.fidelity_with_pure(rho_b, target)
    fid_c = states.fidelity_with_pure(DensityMatrix(("B",), rho_c.matrix), target)
    events.append(FinalReport(fidelity_B=fid_b, fidelity_C=fid_c))
    for p in parties:
        p.advance("Done")

    transcript = Transcript(events=events)
    transcript.check_structure()
    return SessionResult(
        transcript=transcript,
        final_state=state,
        rho_B=rho_b,
        rho_C=rho_c,
        fidelity_B=fid_b,
        fidelity_C=fid_c,
        outcome_bit=bit,
        parties=parties,
    )


def replay(source: Union[Transcript, str]) -> SessionResult:
    """Re-run the session recorded in a transcript."""
    transcript = Transcript.parse(source) if isinstance(source, str) else source
    setup = transcript.setup
    return run_session(setup.spec, setup.topology, setup.seed)


def replay_matches(source: Union[Transcript, str]) -> tuple[bool, SessionResult]:
    """Replay and compare serialized transcripts byte for byte."""
    transcript = Transcript.parse(source) if isinstance(source, str) else source
    result = replay(transcript)
    return result.transcript.serialize() == transcript.serialize(), result


def outcome_frequency(spec: ProtocolSpec, seed: int, n_sessions: int) -> float:
    """Frequency of outcome bit 1 over n sessions sharing one generator stream.

    Statistical batch view: draws n successive uniforms from
    default_rng(seed) and applies the same inverse-CDF rule as
    run_session.
    """
    resolution = states.measure_in_basis(
        protocol.resource_for(spec), "a", protocol.alice_basis(spec)
    )
    p_bit0 = resolution.probabilities[1]
    u = np.random.default_rng(seed).random(n_sessions)
    return float(np.mean(u >= p_bit0))


@dataclass(frozen=True)
class AuditReport:
    spec: ProtocolSpec
    topology: str
    max_deviation_B: float
    max_deviation_C: float
    tolerance: float


def no_signaling_audit(spec: ProtocolSpec, topology: str = "standard",
                       tolerance: float = 1e-10) -> AuditReport:
    """Check that receivers learn nothing before the broadcast arrives.

    The outcome-probability-weighted mixture of each receiver's
    PRE-correction marginals must be I/2; raise AuditFailure (with the
    offending matrix) otherwise.
    """
    if topology not in TOPOLOGIES:
        raise ValueError(f"unknown topology {topology!r}")
    psi = protocol.resource_for(spec)
    resolution = states.measure_in_basis(psi, "a", protocol.alice_basis(spec))
    half_eye = np.eye(2) / 2
    deviations = {}
    for receiver in ("B", "C"):
        mix = np.zeros((2, 2), dtype=complex)
        for idx in (0, 1):
            post = resolution.posts[idx]
            marginal = states.partial_trace(states.density_of(post), (receiver,))
            mix += resolution.probabilities[idx] * marginal.matrix
        deviation = float(np.max(np.abs(mix - half_eye)))
        if deviation > tolerance:
            raise AuditFailure(
                f"pre-broadcast marginal of {receiver} deviates from I/2 by {deviation:.3e}",
                offending_matrix=mix,
            )
        deviations[receiver] = deviation
    return AuditReport(
        spec=spec,
        topology=topology,
        max_deviation_B=deviations["B"],
        max_deviation_C=deviations["C"],
        tolerance=tolerance,
    )
