"""Symmetric bipartite qudit objects.

Shift-and-phase (Weyl) unitaries, the associated basis of maximally
entangled states, the Bell-diagonal family ``rho_lambda``, two twirl
channels, a measure-and-prepare (entanglement-breaking) map, tagged
quasi-pure mixtures, and the tensor factorization of the reversible
profiles.

Two labeling conventions for the distinguished one-parameter Bell family
are supported:

* ``"column"``: Psi_l = Psi_{0,l}  (pure phase twists of |00>+|11>+...)
* ``"row"``:    Psi_l = Psi_{l,0}  (index shifts, Psi_l = sum_j |j, j+l>/sqrt(d))

Operators produced here do not depend on the convention unless the
docstring says otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import qcore

COLUMN = "column"
ROW = "row"


def _check_convention(conv):
    c = str(conv).lower()
    if c not in (COLUMN, ROW):
        raise ValueError(f"convention must be 'column' or 'row', got {conv!r}")
    return c


def weyl_unitary(k, l, d):
    """Shift-and-phase unitary U_{kl} = sum_r eta^{rl} |k+r><r|, eta = exp(2 pi i / d).

    Index addition is modulo d.  U_{10} at d=2 is Pauli X, U_{01} is Pauli Z.
    """
    k, l = int(k) % d, int(l) % d
    eta = np.exp(2j * np.pi / d)
    u = np.zeros((d, d), dtype=complex)
    r = np.arange(d)
    u[(k + r) % d, r] = eta ** (r * l)
    return u


def bell_state(k, l, d):
    """Maximally entangled state |Psi_kl> = (1/sqrt d) sum_j |j> (x) U_kl |j>.

    The d^2 vectors form an orthonormal basis of C^d (x) C^d.
    """
    k, l = int(k) % d, int(l) % d
    eta = np.exp(2j * np.pi / d)
    v = np.zeros(d * d, dtype=complex)
    j = np.arange(d)
    v[j * d + (j + k) % d] = eta ** (j * l) / np.sqrt(d)
    return v


def bell_line_state(l, d, convention=COLUMN):
    """The l-th member of the distinguished Bell family, per convention."""
    conv = _check_convention(convention)
    if conv == COLUMN:
        return bell_state(0, l, d)
    return bell_state(l, 0, d)


def bell_basis_matrix(d, convention=COLUMN):
    """Isometry V with columns |Psi_l>, i.e. V|l> = |Psi_l>; V^dag V = I_d."""
    return np.column_stack([bell_line_state(l, d, convention) for l in range(d)])


def rho_lambda(lam, convention=COLUMN):
    """Bell-diagonal state sum_l lam_l |Psi_l><Psi_l|.

    `lam` must be a probability vector; its length sets d.  The rank of
    the output equals the support size of `lam`.
    """
    lam = qcore.prob_vector(lam)
    d = lam.size
    v = bell_basis_matrix(d, convention)
    return (v * lam) @ v.conj().T


def _group_elements(d):
    """The d^2 commuting local unitaries g = U_{k,l} (x) U_{k,-l}."""
    for k in range(d):
        for l in range(d):
            yield np.kron(weyl_unitary(k, l, d), weyl_unitary(k, -l, d))


def twirl_group(rho, convention=COLUMN):
    """Average rho over the d^2-element group {U_{k,l} (x) U_{k,-l}}.

    Exact group sum (never sampled).  The result is diagonal in the
    maximally entangled basis {Psi_kl}; the channel is an idempotent,
    trace-preserving projection.  The output does not depend on the
    convention argument (the group and its commutant are the same set);
    the parameter exists so call sites can state which family labeling
    they are working in.
    """
    _check_convention(convention)
    rho = np.asarray(rho, dtype=complex)
    n = rho.shape[0]
    d = int(round(np.sqrt(n)))
    if rho.ndim != 2 or rho.shape != (n, n) or d * d != n:
        raise ValueError(f"expected a d^2 x d^2 matrix, got shape {rho.shape}")
    out = np.zeros_like(rho)
    for g in _group_elements(d):
        out += g @ rho @ g.conj().T
    return out / (d * d)


def isotropic_state(f, d):
    """f |Psi_00><Psi_00| + (1-f)/(d^2-1) (I - |Psi_00><Psi_00|), 0 <= f <= 1."""
    f = float(f)
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {f}")
    psi = bell_state(0, 0, d)
    proj = np.outer(psi, psi.conj())
    return f * proj + (1.0 - f) / (d * d - 1) * (np.eye(d * d) - proj)


def twirl_isotropic(rho):
    """Project rho onto span{|Psi_00><Psi_00|, I} (the U (x) conj(U) average).

    For a density operator the output is isotropic_state(f, d) with
    f = <Psi_00| rho |Psi_00>.
    """
    rho = np.asarray(rho, dtype=complex)
    n = rho.shape[0]
    d = int(round(np.sqrt(n)))
    if rho.ndim != 2 or rho.shape != (n, n) or d * d != n:
        raise ValueError(f"expected a d^2 x d^2 matrix, got shape {rho.shape}")
    psi = bell_state(0, 0, d)
    proj = np.outer(psi, psi.conj())
    f = float(np.real(psi.conj() @ rho @ psi))
    rest = (np.trace(rho).real - f) / (d * d - 1)
    return f * proj + rest * (np.eye(d * d) - proj)


@dataclass
class EBMap:
    """A measure-and-prepare map M(X) = sum_j <phi_j|X|phi_j> |j><j|.

    Measurement basis phi_j = (1/sqrt d) sum_l eta^{-jl} |l> (the Fourier
    basis), preparations |j><j|.  The isometry V maps |l> to |Psi_l>
    (column family); on every input, tr_B(V X V^dag) = M(X).
    """
    d: int
    povm: list
    states: list
    isometry: np.ndarray


def eb_map(d):
    """Build the measure-and-prepare map for dimension d."""
    eta = np.exp(2j * np.pi / d)
    j = np.arange(d)
    povm = []
    states = []
    for m in range(d):
        phi = eta ** (-m * j) / np.sqrt(d)
        povm.append(np.outer(phi, phi.conj()))
        states.append(np.outer(qcore.basis_ket(m, d), qcore.basis_ket(m, d).conj()))
    return EBMap(d=d, povm=povm, states=states,
                 isometry=bell_basis_matrix(d, COLUMN))


def eb_apply(m: EBMap, x):
    """Apply the map: sum_j tr(F_j X) |j><j|."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (m.d, m.d):
        raise ValueError(f"expected a {m.d} x {m.d} matrix, got shape {x.shape}")
    out = np.zeros((m.d, m.d), dtype=complex)
    for f, s in zip(m.povm, m.states):
        out += np.trace(f @ x) * s
    return out


def eb_choi(m: EBMap):
    """Choi matrix (1/d) sum_{ij} |i><j| (x) M(|i><j|); PPT for this map."""
    d = m.d
    choi = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            choi += np.kron(unit, eb_apply(m, unit))
    return choi / d


def tagged_state(branches, dims, side="both"):
    """Mixture of pure states with locally readable tags.

    `branches` is a list of ``(p, phi, t)`` with probabilities p summing
    to 1, normalized bipartite vectors phi on ``dims = (d_A, d_B)``, and
    distinct integer tags t.  The output operator lives on
    A (x) B (x) tag factors, with the tag register(s) appended after the
    system; `side` in {"a", "b", "both"} records which lab holds a tag
    copy ("both" appends two copies).  Distinct tags keep the branches
    perfectly distinguishable by a local measurement, which is what makes
    the mixture behave like its pure parts: the preparation cost and the
    distillable yield coincide at sum_t p_t E(phi_t), returned alongside
    the operator.
    """
    da, db = int(dims[0]), int(dims[1])
    side = str(side).lower()
    if side not in ("a", "b", "both"):
        raise ValueError(f"side must be 'a', 'b' or 'both', got {side!r}")
    if not branches:
        raise ValueError("ensemble must contain at least one branch")
    probs = np.array([float(p) for p, _, _ in branches])
    tags = [int(t) for _, _, t in branches]
    if len(set(tags)) != len(tags):
        raise ValueError("tags must be distinct (orthogonal tag states)")
    if abs(probs.sum() - 1.0) > qcore.ASSERT_TOL:
        raise ValueError(f"branch probabilities sum to {probs.sum()!r}, not 1")
    ntag = max(tags) + 1
    value = 0.0
    copies = 2 if side == "both" else 1
    n = da * db * ntag ** copies
    tau = np.zeros((n, n), dtype=complex)
    for (p, phi, t) in branches:
        phi = np.asarray(phi, dtype=complex)
        if phi.shape != (da * db,):
            raise ValueError(f"branch vector has shape {phi.shape}, expected ({da * db},)")
        if abs(np.linalg.norm(phi) - 1.0) > qcore.ASSERT_TOL:
            raise ValueError("branch vectors must be normalized")
        tag = qcore.basis_ket(t, ntag)
        vec = np.kron(phi, tag)
        if copies == 2:
            vec = np.kron(vec, tag)
        tau += p * np.outer(vec, vec.conj())
        value += p * _schmidt_entropy(phi, da, db)
    return tau, value


def _schmidt_entropy(phi, da, db):
    """Entropy (bits) of the squared Schmidt coefficients of a pure state."""
    s = np.linalg.svd(np.asarray(phi, complex).reshape(da, db), compute_uv=False)
    return qcore.entropy_bits(s ** 2)


class ReversibleSplit(NamedTuple):
    lhs: np.ndarray
    rhs: np.ndarray
    permutation: np.ndarray
    split: str
    distance: float


def reversible_decomposition(d, d1, gamma=0, beta=0):
    """Factor the flat-on-a-subgroup Bell mixture into pure (x) separable parts.

    For d = d1 * d2 and the profile lam_l = (1/d2) * [ (l + gamma) mod d1 == 0 ]
    (row convention), the state rho_lambda factorizes under a relabeling
    of each local index as a pair (fine, coarse):

        lhs  ~  |Psi_00^(d1)><Psi_00^(d1)|  (x)  (1/d2) sum_k |Psi_k0^(d2)><Psi_k0^(d2)|

    Returns the two operators plus the joint-index permutation `perm`
    such that ``lhs == rhs[np.ix_(perm, perm)]`` within 1e-9 trace
    distance, and the name of the digit split that realized it.  The
    shift `gamma` is absorbed as a cyclic relabeling of the B index
    before the digit split (a local permutation unitary); `beta` phases
    the underlying amplitude vector only and cancels in the mixture, so
    it does not affect either side (accepted for interface symmetry with
    the minimal-uncertainty parametrization).
    """
    d, d1 = int(d), int(d1)
    if d1 <= 0 or d % d1 != 0:
        raise ValueError(f"{d1} does not divide {d}")
    del beta  # no effect on the state; see docstring
    d2 = d // d1
    gamma = int(gamma) % d1

    lam = np.zeros(d)
    for l in range(d):
        if (l + gamma) % d1 == 0:
            lam[l] = 1.0 / d2
    lhs = rho_lambda(lam, ROW)

    pure = np.outer(bell_state(0, 0, d1), bell_state(0, 0, d1).conj())
    mix = np.zeros((d2 * d2, d2 * d2), dtype=complex)
    for k in range(d2):
        psi = bell_state(k, 0, d2)
        mix += np.outer(psi, psi.conj()) / d2
    rhs = np.kron(pure, mix)

    def _perm(split):
        p = np.empty(d * d, dtype=int)
        for j in range(d):
            for k in range(d):
                kk = (k + gamma) % d
                if split == "mod-div":
                    j1, j2 = j % d1, j // d1
                    k1, k2 = kk % d1, kk // d1
                else:
                    j1, j2 = j // d2, j % d2
                    k1, k2 = kk // d2, kk % d2
                p[j * d + k] = (j1 * d1 + k1) * d2 * d2 + (j2 * d2 + k2)
        return p

    for split in ("mod-div", "div-mod"):
        perm = _perm(split)
        dist = qcore.trace_distance(lhs, rhs[np.ix_(perm, perm)])
        if dist < 1e-9:
            return ReversibleSplit(lhs, rhs, perm, split, dist)
    raise ArithmeticError(
        f"no digit split matched for d={d}, d1={d1}, gamma={gamma} (distance {dist:.3e})")
