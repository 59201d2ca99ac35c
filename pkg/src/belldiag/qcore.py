"""Dense complex linear algebra for small bipartite systems.

Everything here works on plain numpy arrays.  Bipartite operators carry
their factor dimensions as an explicit ``dims=(d_A, d_B)`` argument; when
``dims`` is omitted a square split ``d_A = d_B = sqrt(n)`` is inferred.
The joint basis ordering is row-major: ``|j> (x) |k>`` sits at slot
``j * d_B + k``.

All entropies are in bits.
"""

from __future__ import annotations

import numpy as np

# Default tolerances.  Assertions compare at ASSERT_TOL, vector/probability
# normalization at NORM_TOL, Hermiticity at HERM_TOL.
ASSERT_TOL = 1e-9
NORM_TOL = 1e-12
HERM_TOL = 1e-10

# Negative eigenvalue dust up to this magnitude is clipped to zero before
# entropy evaluation.
EIG_CLIP_TOL = 1e-10


def kron(a, b):
    """Kronecker product of two operators (realizes the tensor product)."""
    return np.kron(np.asarray(a), np.asarray(b))


def split_dims(op, dims=None):
    """Resolve the bipartite split ``(d_A, d_B)`` of a square operator.

    If ``dims`` is None the operator must act on a perfect-square
    dimension and the symmetric split is used.  Raises ValueError when no
    consistent split exists.
    """
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {op.shape}")
    n = op.shape[0]
    if dims is None:
        d = int(round(np.sqrt(n)))
        if d * d != n:
            raise ValueError(
                f"dimension {n} is not a perfect square; pass dims=(d_A, d_B)")
        return d, d
    da, db = int(dims[0]), int(dims[1])
    if da * db != n:
        raise ValueError(f"dims {dims} inconsistent with matrix size {n}")
    return da, db


def partial_trace(rho, keep="A", dims=None):
    """Trace out one factor of a bipartite operator, keeping `keep`.

    ``partial_trace(kron(A, B), keep="A") == tr(B) * A``.
    """
    rho = np.asarray(rho)
    da, db = split_dims(rho, dims)
    r = rho.reshape(da, db, da, db)
    side = str(keep).upper()
    if side == "A":
        return np.einsum("ijkj->ik", r)
    if side == "B":
        return np.einsum("ijil->jl", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(rho, side="B", dims=None):
    """Transpose one factor of a bipartite operator (involutive)."""
    rho = np.asarray(rho)
    da, db = split_dims(rho, dims)
    r = rho.reshape(da, db, da, db)
    s = str(side).upper()
    if s == "B":
        r = r.transpose(0, 3, 2, 1)
    elif s == "A":
        r = r.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return r.reshape(da * db, da * db)


def herm_eigvals(h, tol=HERM_TOL):
    """Real spectrum of a Hermitian matrix, ascending.

    Raises ValueError when the input fails the Hermiticity check
    ``max|H - H^dag| < tol``.
    """
    h = np.asarray(h)
    dev = np.abs(h - h.conj().T).max()
    if dev >= tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return np.linalg.eigvalsh(h)


def trace_distance(rho, sigma):
    """(1/2) * sum |eig(rho - sigma)| for Hermitian rho, sigma."""
    rho = np.asarray(rho)
    sigma = np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"shape mismatch: {rho.shape} vs {sigma.shape}")
    return 0.5 * float(np.abs(herm_eigvals(rho - sigma)).sum())


def entropy_bits(p):
    """Shannon entropy of a probability-like vector in bits, 0*log 0 = 0.

    Negative dust (down to -EIG_CLIP_TOL, e.g. from eigensolvers) is
    clipped at zero.
    """
    p = np.asarray(p, dtype=float)
    p = np.clip(p, 0.0, None)
    mask = p > 0
    if not mask.any():
        return 0.0
    q = p[mask]
    return float(-(q * np.log2(q)).sum())


def vn_entropy_bits(rho):
    """Von Neumann entropy of a density operator, in bits."""
    return entropy_bits(herm_eigvals(rho))


def prob_vector(lam, tol=ASSERT_TOL):
    """Validate and return a probability vector as a float array.

    Entries must be >= -NORM_TOL and the sum must equal 1 within `tol`.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise ValueError("probability vector must be a nonempty 1-d array")
    if lam.min() < -NORM_TOL:
        raise ValueError(f"negative entry {lam.min():.3e} in probability vector")
    s = lam.sum()
    if abs(s - 1.0) > tol:
        raise ValueError(f"probability vector sums to {s!r}, not 1")
    return np.clip(lam, 0.0, None)


def basis_ket(j, d):
    """Computational basis vector |j> in dimension d."""
    if not 0 <= j < d:
        raise ValueError(f"index {j} out of range for dimension {d}")
    v = np.zeros(d, dtype=complex)
    v[j] = 1.0
    return v


def random_state_vector(n, rng):
    """Haar-random unit vector in C^n."""
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return z / np.linalg.norm(z)


def random_density_matrix(n, rng):
    """Random full-rank density matrix (normalized Wishart)."""
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
