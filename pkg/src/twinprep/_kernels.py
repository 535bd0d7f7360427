"""Hot numeric kernels for the separability solver.

Written in explicit-loop style so numba can jit them; when numba is not
importable the same functions run interpreted (slower, same results).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def _top2(p, q, r):
    """Top eigenpair of Hermitian [[p, q], [conj(q), r]]; returns (v0, v1, lam)."""
    half = (p - r) / 2.0
    qsq = q.real * q.real + q.imag * q.imag
    disc = np.sqrt(half * half + qsq)
    lam = (p + r) / 2.0 + disc
    n1sq = qsq + (lam - p) * (lam - p)
    n2sq = (lam - r) * (lam - r) + qsq
    if n2sq >= n1sq:
        v0 = complex(lam - r, 0.0)
        v1 = q.conjugate()
        nsq = n2sq
    else:
        v0 = q
        v1 = complex(lam - p, 0.0)
        nsq = n1sq
    if nsq < 1e-28:  # fully degenerate: any unit vector is an eigenvector
        return complex(1.0, 0.0), complex(0.0, 0.0), lam
    inv = 1.0 / np.sqrt(nsq)
    return v0 * inv, v1 * inv, lam


@njit(cache=True)
def lmo_alternating(g_b_first, g_a_first, b_starts, tol_scaled, max_sweeps):
    """Alternating ascent of <a (x) b|G|a (x) b> from each start in b_starts.

    g_b_first maps flattened (k,l) rows to (i,j) columns of the 4-index
    form G[i,k,j,l] and g_a_first the converse, so each half-sweep is a
    2x2 Hermitian top-eigenvector problem. Ascent is value-monotone; a
    restart stops once its per-sweep improvement drops below tol_scaled.

    Returns (values, A, B) with one row per restart.
    """
    restarts = b_starts.shape[0]
    values = np.empty(restarts)
    a_out = np.empty((restarts, 2), dtype=np.complex128)
    b_out = np.empty((restarts, 2), dtype=np.complex128)
    for rdx in range(restarts):
        b0 = b_starts[rdx, 0]
        b1 = b_starts[rdx, 1]
        a0 = complex(1.0, 0.0)
        a1 = complex(0.0, 0.0)
        prev = -np.inf
        val = 0.0
        for _ in range(max_sweeps):
            c00 = b0.conjugate() * b0
            c01 = b0.conjugate() * b1
            c10 = b1.conjugate() * b0
            c11 = b1.conjugate() * b1
            ma00 = (c00 * g_b_first[0, 0] + c01 * g_b_first[1, 0]
                    + c10 * g_b_first[2, 0] + c11 * g_b_first[3, 0]).real
            ma01 = (c00 * g_b_first[0, 1] + c01 * g_b_first[1, 1]
                    + c10 * g_b_first[2, 1] + c11 * g_b_first[3, 1])
            ma11 = (c00 * g_b_first[0, 3] + c01 * g_b_first[1, 3]
                    + c10 * g_b_first[2, 3] + c11 * g_b_first[3, 3]).real
            a0, a1, _ = _top2(ma00, ma01, ma11)
            d00 = a0.conjugate() * a0
            d01 = a0.conjugate() * a1
            d10 = a1.conjugate() * a0
            d11 = a1.conjugate() * a1
            mb00 = (d00 * g_a_first[0, 0] + d01 * g_a_first[1, 0]
                    + d10 * g_a_first[2, 0] + d11 * g_a_first[3, 0]).real
            mb01 = (d00 * g_a_first[0, 1] + d01 * g_a_first[1, 1]
                    + d10 * g_a_first[2, 1] + d11 * g_a_first[3, 1])
            mb11 = (d00 * g_a_first[0, 3] + d01 * g_a_first[1, 3]
                    + d10 * g_a_first[2, 3] + d11 * g_a_first[3, 3]).real
            b0, b1, val = _top2(mb00, mb01, mb11)
            if val - prev < tol_scaled:
                prev = val
                break
            prev = val
        values[rdx] = prev
        a_out[rdx, 0] = a0
        a_out[rdx, 1] = a1
        b_out[rdx, 0] = b0
        b_out[rdx, 1] = b1
    return values, a_out, b_out


@njit(cache=True)
def neg_tr_rho_ln(rho, sigma, support_eps):
    """-Tr rho ln sigma in nats; inf when rho leaks outside sigma's support."""
    n = sigma.shape[0]
    w, v = np.linalg.eigh(sigma)
    total = 0.0
    for k in range(n):
        weight = 0.0
        for i in range(n):
            acc = complex(0.0, 0.0)
            for j in range(n):
                acc += rho[i, j] * v[j, k]
            weight += (v[i, k].conjugate() * acc).real
        if w[k] <= support_eps:
            if weight > support_eps:
                return np.inf
        else:
            total -= weight * np.log(w[k])
    return total


@njit(cache=True)
def golden_section_mix(rho, sigma, omega, tol, support_eps):
    """argmin over t in [0,1] of -Tr rho ln((1-t) sigma + t omega), golden section."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    lo = 0.0
    hi = 1.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = neg_tr_rho_ln(rho, (1.0 - x1) * sigma + x1 * omega, support_eps)
    f2 = neg_tr_rho_ln(rho, (1.0 - x2) * sigma + x2 * omega, support_eps)
    while hi - lo > tol:
        if f1 <= f2:
            hi = x2
            x2 = x1
            f2 = f1
            x1 = hi - invphi * (hi - lo)
            f1 = neg_tr_rho_ln(rho, (1.0 - x1) * sigma + x1 * omega, support_eps)
        else:
            lo = x1
            x1 = x2
            f1 = f2
            x2 = lo + invphi * (hi - lo)
            f2 = neg_tr_rho_ln(rho, (1.0 - x2) * sigma + x2 * omega, support_eps)
    return (lo + hi) / 2.0
