"""Qubit-register states, gates, measurements, partial trace, entropies.

Index convention (asserted in tests): the leftmost label is the most
significant bit of the amplitude index, so ket("101", ("A", "B", "C"))
puts amplitude 1 at index 5.

All entropy-level quantities are in bits (log base 2). Matrix-level logs
stay natural (see linalg.py).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    DuplicateLabel,
    EmptyKeepSet,
    NotUnitary,
    UnknownLabel,
)

NORM_TOL = 1e-10
LN2 = np.log(2.0)


class _Divergent:
    """Sentinel for an infinite relative entropy (disjoint supports).

    A tagged object rather than float('inf') so that callers must branch
    on it explicitly instead of letting infinities leak into arithmetic.
    """

    __slots__ = ()

    def __repr__(self):
        return "DIVERGENT"


DIVERGENT = _Divergent()


def is_divergent(value) -> bool:
    return value is DIVERGENT


def _check_labels(labels: Sequence[str]) -> tuple[str, ...]:
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise DuplicateLabel(f"labels must be distinct, got {labels}")
    return labels


@dataclass(frozen=True)
class StateVector:
    """Pure state of a labeled qubit register, unit norm."""

    labels: tuple[str, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", _check_labels(self.labels))
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2 ** len(self.labels),):
            raise DimensionMismatch(
                f"{len(self.labels)} labels need {2 ** len(self.labels)} amplitudes, "
                f"got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 by more than {NORM_TOL}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def axis_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"label {label!r} not in register {self.labels}") from None

    def overlap(self, other: "StateVector") -> complex:
        """<self|other> for identical registers."""
        if self.labels != other.labels:
            raise DimensionMismatch(f"registers differ: {self.labels} vs {other.labels}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, unit-trace operator on a labeled qubit register."""

    labels: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", _check_labels(self.labels))
        m = linalg.require_hermitian(self.matrix)
        dim = 2 ** len(self.labels)
        if m.shape != (dim, dim):
            raise DimensionMismatch(
                f"{len(self.labels)} labels need a {dim}x{dim} matrix, got {m.shape}"
            )
        tr = np.trace(m).real
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"trace {tr} deviates from 1 by more than {NORM_TOL}")
        if np.min(np.linalg.eigvalsh(m)) < -linalg.EIGENVALUE_CLAMP:
            raise ValueError("matrix has an eigenvalue below -1e-10")
        object.__setattr__(self, "matrix", m)

    @property
    def n_qubits(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Basis2:
    """An orthonormal basis of a single qubit."""

    first: np.ndarray
    second: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.first, dtype=complex)
        b = np.asarray(self.second, dtype=complex)
        if a.shape != (2,) or b.shape != (2,):
            raise DimensionMismatch("basis states must be 2-vectors")
        gram = np.array([[np.vdot(a, a), np.vdot(a, b)], [np.vdot(b, a), np.vdot(b, b)]])
        if np.max(np.abs(gram - np.eye(2))) > 1e-12:
            raise ValueError("basis states are not orthonormal within 1e-12")
        object.__setattr__(self, "first", a)
        object.__setattr__(self, "second", b)

    def states(self) -> tuple[np.ndarray, np.ndarray]:
        return self.first, self.second


@dataclass(frozen=True)
class MeasurementResolution:
    """Both branches of a projective single-qubit measurement.

    Deterministic: no sampling happens here. ``posts[i]`` is the
    renormalized post-measurement state on the remaining register for
    outcome i, or None when the branch has zero probability.
    """

    probabilities: tuple[float, float]
    posts: tuple[Optional[StateVector], Optional[StateVector]]

    def __post_init__(self):
        p = self.probabilities
        if abs(p[0] + p[1] - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities {p} do not sum to 1")


def ket(bits: str, labels: Sequence[str]) -> StateVector:
    """Computational basis state |bits> on the given labels."""
    labels = _check_labels(labels)
    if len(bits) != len(labels) or any(b not in "01" for b in bits):
        raise ValueError(f"bitstring {bits!r} does not match labels {labels}")
    amps = np.zeros(2 ** len(labels), dtype=complex)
    amps[int(bits, 2)] = 1.0
    return StateVector(labels, amps)


def from_amplitudes(labels: Sequence[str], amplitudes) -> StateVector:
    """Build a StateVector, normalizing away rounding-level norm error."""
    amps = np.asarray(amplitudes, dtype=complex)
    return StateVector(tuple(labels), amps / np.linalg.norm(amps))


def apply_single_qubit(gate, label: str, s: StateVector) -> StateVector:
    """Apply a 2x2 unitary to one labeled qubit."""
    g = np.asarray(gate, dtype=complex)
    if g.shape != (2, 2):
        raise DimensionMismatch(f"gate must be 2x2, got {g.shape}")
    if np.max(np.abs(g.conj().T @ g - np.eye(2))) > 1e-10:
        raise NotUnitary("gate is not unitary within 1e-10")
    axis = s.axis_of(label)
    n = s.n_qubits
    tensor = s.amplitudes.reshape((2,) * n)
    tensor = np.tensordot(g, tensor, axes=([1], [axis]))
    tensor = np.moveaxis(tensor, 0, axis)
    return StateVector(s.labels, tensor.reshape(-1))


def measure_in_basis(s: StateVector, label: str, basis: Basis2) -> MeasurementResolution:
    """Resolve a projective measurement of one qubit in the given basis.

    Outcome i projects onto basis state i; the measured qubit leaves the
    register.
    """
    axis = s.axis_of(label)
    n = s.n_qubits
    tensor = s.amplitudes.reshape((2,) * n)
    remaining = tuple(l for l in s.labels if l != label)
    probs = []
    posts = []
    for vec in basis.states():
        branch = np.tensordot(vec.conj(), tensor, axes=([0], [axis])).reshape(-1)
        p = float(np.vdot(branch, branch).real)
        probs.append(p)
        if p > 1e-15:
            posts.append(StateVector(remaining, branch / np.sqrt(p)))
        else:
            posts.append(None)
    return MeasurementResolution(
        probabilities=(probs[0], probs[1]), posts=(posts[0], posts[1])
    )


def density_of(s: StateVector) -> DensityMatrix:
    """Rank-1 projector |s><s|."""
    return DensityMatrix(s.labels, np.outer(s.amplitudes, s.amplitudes.conj()))


def partial_trace(d: DensityMatrix, keep: Sequence[str]) -> DensityMatrix:
    """Trace out every label not in ``keep``; kept labels retain their order."""
    keep = tuple(keep)
    if not keep:
        raise EmptyKeepSet("keep set must be nonempty")
    for label in keep:
        if label not in d.labels:
            raise UnknownLabel(f"label {label!r} not in register {d.labels}")
    kept = tuple(l for l in d.labels if l in set(keep))
    n = d.n_qubits
    tensor = d.matrix.reshape((2,) * (2 * n))
    # Trace axes pairwise from the back so earlier axis numbers stay valid.
    traced_positions = [i for i, l in enumerate(d.labels) if l not in set(keep)]
    n_axes = n
    for pos in reversed(traced_positions):
        tensor = np.trace(tensor, axis1=pos, axis2=pos + n_axes)
        n_axes -= 1
    dim = 2 ** len(kept)
    m = tensor.reshape(dim, dim)
    m = (m + m.conj().T) / 2  # remove rounding-level hermiticity drift
    return DensityMatrix(kept, m)


def fidelity_with_pure(d: DensityMatrix, target: StateVector) -> float:
    """<target| d |target>, real in [0, 1]."""
    if len(d.labels) != len(target.labels) or d.matrix.shape[0] != len(target.amplitudes):
        raise DimensionMismatch(
            f"density on {d.labels} incompatible with target on {target.labels}"
        )
    v = target.amplitudes
    return float(np.real(v.conj() @ d.matrix @ v))


def von_neumann_entropy(d: DensityMatrix) -> float:
    """-sum lambda log2 lambda over eigenvalues above 1e-12, in bits."""
    w = np.linalg.eigvalsh(d.matrix)
    w = w[w > linalg.SUPPORT_EPS]
    return float(max(-np.sum(w * np.log2(w)), 0.0))


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix):
    """S(rho || sigma) in bits, or the DIVERGENT sentinel.

    Divergence is declared when rho has weight above 1e-12 on the kernel
    of sigma (eigenvalue threshold 1e-12).
    """
    if rho.matrix.shape != sigma.matrix.shape:
        raise DimensionMismatch(
            f"dimension mismatch: {rho.matrix.shape} vs {sigma.matrix.shape}"
        )
    w_r, v_r = np.linalg.eigh(rho.matrix)
    w_s, v_s = np.linalg.eigh(sigma.matrix)

    kernel = w_s <= linalg.SUPPORT_EPS
    if np.any(kernel):
        k = v_s[:, kernel]
        leakage = float(np.real(np.sum(k.conj() * (rho.matrix @ k))))
        if leakage > linalg.SUPPORT_EPS:
            return DIVERGENT

    supp_r = w_r > linalg.SUPPORT_EPS
    term_rho = float(np.sum(w_r[supp_r] * np.log(w_r[supp_r])))
    supp_s = ~kernel
    # <v_i| rho |v_i> weights for log sigma on its support
    weights = np.real(np.sum(v_s[:, supp_s].conj() * (rho.matrix @ v_s[:, supp_s]), axis=0))
    term_sigma = float(np.sum(weights * np.log(w_s[supp_s])))
    return (term_rho - term_sigma) / LN2
