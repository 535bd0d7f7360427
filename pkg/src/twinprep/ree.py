"""Relative entropy of entanglement for two-qubit states.

E_r(rho) = min over separable sigma of S(rho || sigma), minimized with a
Frank-Wolfe loop over convex combinations of product pure states. The
linear minimization oracle walks the extreme points (product states) by
alternating 2x2 eigenvector updates; the duality gap certifies a lower
bound on the true minimum.

Internal arithmetic is in natural log; values convert to bits only at
the reporting boundary. Independent cross-checks (pure-state identity,
concurrence / entanglement of formation, random sampling) live here too
so the solver never validates itself against itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels, states
from .errors import DimensionMismatch, NotHermitian, SingularSigma
from .states import DensityMatrix, StateVector

LN2 = math.log(2.0)

# Deterministic seed for the LMO restart states; restarts are tie-broken
# by value then restart index, so results are reproducible bit-for-bit.
_LMO_SEED = 74155
_EIG_FLOOR = 1e-12
_SUPPORT_EPS = 1e-12


@dataclass(frozen=True)
class ReeOptions:
    gap_tol: float = 1e-4          # bits
    max_iters: int = 2000
    lmo_restarts: int = 16
    line_search_tol: float = 1e-12
    mixing_floor: float = 1e-9     # weight of I/4 mixed in before gradients
    prune_tol: float = 1e-12


@dataclass
class SeparableEnsemble:
    """Weighted product pure states; the induced sigma is separable by construction."""

    weights: np.ndarray            # (m,), positive, sums to 1
    left: np.ndarray               # (m, 2) single-qubit pure states
    right: np.ndarray              # (m, 2)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        self.left = np.asarray(self.left, dtype=complex)
        self.right = np.asarray(self.right, dtype=complex)

    def validate(self) -> "SeparableEnsemble":
        """Check the ensemble invariants; kept out of the solver's hot loop."""
        if np.any(self.weights <= 0):
            raise ValueError("ensemble weights must be positive")
        if abs(self.weights.sum() - 1.0) > 1e-10:
            raise ValueError(f"weights sum to {self.weights.sum()}, not 1")
        norms = np.concatenate(
            [np.linalg.norm(self.left, axis=1), np.linalg.norm(self.right, axis=1)]
        )
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ValueError("ensemble atoms must be unit norm within 1e-12")
        return self

    def __len__(self) -> int:
        return len(self.weights)

    def density(self) -> np.ndarray:
        """sigma = sum_w w * |a><a| (x) |b><b| as a 4x4 matrix."""
        prod = np.einsum("wi,wj->wij", self.left, self.right).reshape(len(self), 4)
        return np.einsum("w,wi,wj->ij", self.weights, prod, prod.conj())

    @staticmethod
    def maximally_mixed() -> "SeparableEnsemble":
        """I/4 as four equally weighted computational product atoms."""
        e0 = np.array([1.0, 0.0], dtype=complex)
        e1 = np.array([0.0, 1.0], dtype=complex)
        return SeparableEnsemble(
            weights=np.full(4, 0.25),
            left=np.array([e0, e0, e1, e1]),
            right=np.array([e0, e1, e0, e1]),
        )


@dataclass
class ReeResult:
    value_bits: float
    sigma: DensityMatrix
    ensemble: SeparableEnsemble
    gap_bits: float
    iterations: int
    converged: bool
    objective_trace_bits: list = field(default_factory=list)

    @property
    def lower_bound_bits(self) -> float:
        """Certified lower bound on the true minimum (Frank-Wolfe duality)."""
        return self.value_bits - self.gap_bits


def log_gradient(rho, sigma) -> np.ndarray:
    """Gradient G of sigma -> Tr rho ln(sigma): Tr(Delta G) = d/dt Tr rho ln(sigma + t Delta).

    Computed in sigma's eigenbasis with first divided differences of the
    natural log (Daleckii-Krein): entry (i,j) is rho~_ij * (ln l_i - ln l_j)
    / (l_i - l_j), with 1/l_i on (near-)degenerate pairs.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"shape mismatch {rho.shape} vs {sigma.shape}")
    lam, v = np.linalg.eigh(sigma)
    if np.min(lam) < _EIG_FLOOR:
        raise SingularSigma(f"sigma eigenvalue {np.min(lam):.3e} below floor {_EIG_FLOOR:.0e}")
    rho_t = v.conj().T @ rho @ v
    diff = lam[:, None] - lam[None, :]
    degenerate = np.abs(diff) < 1e-12 * max(lam.max(), 1.0)
    safe = np.where(degenerate, 1.0, diff)
    k = np.where(degenerate,
                 2.0 / (lam[:, None] + lam[None, :]),
                 (np.log(lam)[:, None] - np.log(lam)[None, :]) / safe)
    g = v @ (k * rho_t) @ v.conj().T
    return (g + g.conj().T) / 2


def product_state_lmo(g, restarts: int = 16, tol: float = 1e-12,
                      max_sweeps: int = 100):
    """Best product state for a Hermitian 4x4 form: max <a (x) b| G |a (x) b>.

    Alternating optimization: with b fixed the optimal a is the top
    eigenvector of the 2x2 contraction of G, and vice versa; run from
    ``restarts`` seeded random starts until the value improvement falls
    below tol (relative to G's magnitude) and keep the best restart
    (ties resolved toward the lowest restart index).

    Returns (value, a, b).
    """
    g = np.asarray(g, dtype=complex)
    if g.shape != (4, 4):
        raise DimensionMismatch(f"expected 4x4, got {g.shape}")
    if np.max(np.abs(g - g.conj().T)) > 1e-10:
        raise NotHermitian("LMO objective matrix must be Hermitian")
    g4 = g.reshape(2, 2, 2, 2)  # indices (i, k, j, l): row i*2+k, col j*2+l
    # (k,l) x (i,j) and (i,j) x (k,l) flattenings for fast contractions
    g_b_first = np.ascontiguousarray(g4.transpose(1, 3, 0, 2).reshape(4, 4))
    g_a_first = np.ascontiguousarray(g4.transpose(0, 2, 1, 3).reshape(4, 4))

    rng = np.random.default_rng(_LMO_SEED)
    b = rng.normal(size=(restarts, 2)) + 1j * rng.normal(size=(restarts, 2))
    b /= np.linalg.norm(b, axis=1)[:, None]
    scale = max(float(np.max(np.abs(g))), 1.0)
    values, a_out, b_out = _kernels.lmo_alternating(
        g_b_first, g_a_first, np.ascontiguousarray(b), tol * scale, max_sweeps
    )
    best = int(np.argmax(values))  # argmax returns the first (lowest) index on ties
    return float(values[best]), a_out[best], b_out[best]


def _neg_tr_rho_ln(rho, sigma) -> float:
    """-Tr rho ln sigma in nats; +inf when rho leaks outside sigma's support."""
    return float(_kernels.neg_tr_rho_ln(
        np.ascontiguousarray(rho), np.ascontiguousarray(sigma), _SUPPORT_EPS
    ))


def _tr_rho_ln_rho(rho) -> float:
    w = np.linalg.eigvalsh(rho)
    w = w[w > _SUPPORT_EPS]
    return float(np.sum(w * np.log(w)))


def ree_frank_wolfe(rho: DensityMatrix, options: Optional[ReeOptions] = None) -> ReeResult:
    """Minimize S(rho || sigma) over separable two-qubit sigma.

    Iterates stay inside the separable set (explicit product-state
    ensembles); stops when the duality gap drops to options.gap_tol bits
    or at options.max_iters, whichever comes first. Exact line search by
    golden section. value_bits - gap_bits is always a certified lower
    bound on the true minimum.
    """
    if rho.n_qubits != 2:
        raise DimensionMismatch(f"need a two-qubit state, got labels {rho.labels}")
    opts = options or ReeOptions()
    r = rho.matrix
    r_c = np.ascontiguousarray(r)
    const_nats = _tr_rho_ln_rho(r)
    eye4 = np.eye(4, dtype=complex)

    ensemble = SeparableEnsemble.maximally_mixed()
    sigma = ensemble.density()
    trace_bits = []
    gap_bits = math.inf
    converged = False
    iterations = 0

    for k in range(opts.max_iters):
        objective_bits = (const_nats + _neg_tr_rho_ln(r, sigma)) / LN2
        trace_bits.append(objective_bits)

        sigma_reg = (1.0 - opts.mixing_floor) * sigma + opts.mixing_floor * eye4 / 4.0
        g = log_gradient(r, sigma_reg)
        _, a, b = product_state_lmo(g, restarts=opts.lmo_restarts)
        prod = (a[:, None] * b[None, :]).reshape(4)
        omega = np.outer(prod, prod.conj())
        gap_nats = float(np.real(np.trace((omega - sigma) @ g)))
        gap_bits = max(gap_nats, 0.0) / LN2
        iterations = k
        if gap_bits <= opts.gap_tol:
            converged = True
            break

        t_star = float(_kernels.golden_section_mix(
            r_c, sigma, omega, opts.line_search_tol, _SUPPORT_EPS
        ))
        sigma = (1.0 - t_star) * sigma + t_star * omega
        ensemble = _update_ensemble(ensemble, a, b, t_star, opts.prune_tol)
        iterations = k + 1

    ensemble.validate()
    sigma_final = ensemble.density()
    value = states.relative_entropy(
        rho, DensityMatrix(rho.labels, (sigma_final + sigma_final.conj().T) / 2)
    )
    value_bits = math.inf if states.is_divergent(value) else float(value)
    return ReeResult(
        value_bits=value_bits,
        sigma=DensityMatrix(rho.labels, (sigma_final + sigma_final.conj().T) / 2),
        ensemble=ensemble,
        gap_bits=gap_bits,
        iterations=iterations,
        converged=converged,
        objective_trace_bits=trace_bits,
    )


def _update_ensemble(ensemble: SeparableEnsemble, a, b, t: float,
                     prune_tol: float) -> SeparableEnsemble:
    weights = np.concatenate([ensemble.weights * (1.0 - t), [t]])
    left = np.vstack([ensemble.left, a[None, :]])
    right = np.vstack([ensemble.right, b[None, :]])
    keep = weights > prune_tol
    weights, left, right = weights[keep], left[keep], right[keep]
    return SeparableEnsemble(weights=weights / weights.sum(), left=left, right=right)


def pure_state_ree_oracle(psi: StateVector, keep_label: Optional[str] = None) -> float:
    """REE of a pure two-qubit state: its entanglement entropy in bits.

    Independent of the Frank-Wolfe path; used to calibrate the solver.
    """
    if psi.n_qubits != 2:
        raise DimensionMismatch(f"need a two-qubit pure state, got {psi.labels}")
    keep = keep_label or psi.labels[0]
    marginal = states.partial_trace(states.density_of(psi), (keep,))
    return states.von_neumann_entropy(marginal)


_SY_SY = np.kron(
    np.array([[0.0, -1.0j], [1.0j, 0.0]]), np.array([[0.0, -1.0j], [1.0j, 0.0]])
)


def concurrence(rho: DensityMatrix) -> float:
    """Two-qubit concurrence from the spin-flipped spectrum."""
    if rho.n_qubits != 2:
        raise DimensionMismatch(f"need a two-qubit state, got labels {rho.labels}")
    m = rho.matrix
    flipped = _SY_SY @ m.conj() @ _SY_SY
    mu = np.linalg.eigvals(m @ flipped)
    # abs() guards tiny negative / imaginary parts from rounding
    roots = np.sqrt(np.sort(np.abs(np.real(mu)))[::-1])
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def binary_entropy(p: float) -> float:
    """h(p) in bits with h(0) = h(1) = 0."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p))


def eof(rho: DensityMatrix) -> float:
    """Entanglement of formation in bits; upper-bounds the REE for two qubits."""
    c = concurrence(rho)
    return binary_entropy((1.0 + math.sqrt(1.0 - c**2)) / 2.0)


def ree_random_search(rho: DensityMatrix, samples: int, seed: int) -> float:
    """Sampling upper bound: best S(rho || sigma) over random separable sigma.

    Candidates are 16-atom ensembles of Haar-like random product states
    with random simplex weights; after a blind warm-up phase the search
    perturbs the incumbent with a decaying step (localized random
    search). Shares no machinery with the Frank-Wolfe path, so it serves
    as an independent upper-bound oracle. Deterministic given the seed;
    ``samples`` counts objective evaluations.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if rho.n_qubits != 2:
        raise DimensionMismatch(f"need a two-qubit state, got labels {rho.labels}")
    rng = np.random.default_rng(seed)
    r = rho.matrix
    const_nats = _tr_rho_ln_rho(r)

    def evaluate(w, a, b):
        prod = np.einsum("wi,wj->wij", a, b).reshape(16, 4)
        sigma = np.einsum("w,wi,wj->ij", w, prod, prod.conj())
        return const_nats + _neg_tr_rho_ln(r, sigma)

    best = math.inf
    best_w = best_a = best_b = None
    n_blind = max(1, samples // 4)
    for _ in range(n_blind):
        a = rng.normal(size=(16, 2)) + 1j * rng.normal(size=(16, 2))
        b = rng.normal(size=(16, 2)) + 1j * rng.normal(size=(16, 2))
        a /= np.linalg.norm(a, axis=1)[:, None]
        b /= np.linalg.norm(b, axis=1)[:, None]
        w = rng.dirichlet(np.ones(16))
        val = evaluate(w, a, b)
        if val < best:
            best, best_w, best_a, best_b = val, w, a, b

    n_local = samples - n_blind
    for k in range(n_local):
        scale = 0.5 * (1.0 - k / n_local) + 0.01
        a = best_a + scale * (rng.normal(size=(16, 2)) + 1j * rng.normal(size=(16, 2)))
        b = best_b + scale * (rng.normal(size=(16, 2)) + 1j * rng.normal(size=(16, 2)))
        a /= np.linalg.norm(a, axis=1)[:, None]
        b /= np.linalg.norm(b, axis=1)[:, None]
        w = rng.dirichlet(1.0 + best_w * (8.0 / scale))
        val = evaluate(w, a, b)
        if val < best:
            best, best_w, best_a, best_b = val, w, a, b
    return best / LN2
