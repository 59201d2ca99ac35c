"""Entanglement quantities for the Bell-diagonal family.

Units are bits throughout (log base 2).

* ``pure_entanglement``: reduced-state entropy of a bipartite pure state.
* ``ed_plus``: log2 d - S(lambda), the PPT-assisted distillation ceiling
  of ``rho_lambda``.
* ``epsilon_min``: min over phases of S(|dft(c)|^2) with |c_l|^2 = lam_l;
  the pure-preimage entanglement of the twirl.  Its lower convex envelope
  along the noisy one-parameter family is the preparation cost, so the
  envelope-minus-ceiling difference measures irreversibility.
* ``gap_sweep`` / ``phi_nu``: the one-parameter noisy family
  lam(nu) = {nu + (1-nu)/d, (1-nu)/d, ...} and its gap curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from . import qcore, symstates, uncertainty

CHAIN_TOL = 1e-6       # slack allowed in ed_plus <= epsilon comparisons
CERTIFY_TOL = 1e-12    # early-exit margin when epsilon hits its lower bound
ENVELOPE_ZERO = 1e-12  # below this the envelope is treated as exactly 0


def pure_entanglement(phi, dims=None):
    """Entropy (bits) of the reduced state of a normalized bipartite vector."""
    phi = np.asarray(phi, dtype=complex)
    nrm = np.linalg.norm(phi)
    if abs(nrm - 1.0) > qcore.ASSERT_TOL:
        raise ValueError(f"state vector is not normalized (norm {nrm!r})")
    rho = np.outer(phi, phi.conj())
    reduced = qcore.partial_trace(rho, keep="B", dims=dims)
    return qcore.vn_entropy_bits(reduced)


def ed_plus(lam):
    """log2 d - S(lambda): the PPT-assisted distillable entanglement of rho_lambda."""
    lam = qcore.prob_vector(lam)
    return float(np.log2(lam.size) - qcore.entropy_bits(lam))


@dataclass
class OptimizerConfig:
    """Settings for the multi-start phase search.

    The first restart always starts from all-zero phases (the symmetric
    candidate); the rest are drawn uniformly from the torus with a
    generator seeded by `seed`.
    """
    restarts: int = 32
    seed: int = 0
    max_iter: int = 4000
    xatol: float = 1e-10
    fatol: float = 1e-12

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass
class MeasureResult:
    value: float
    optimizer_phases: np.ndarray  # length d, first support phase pinned to 0
    restarts_used: int
    converged: bool


def _fourier_weights(c, w):
    chat = w @ c
    return (chat * chat.conj()).real


def epsilon_min(lam, cfg: Optional[OptimizerConfig] = None):
    """Minimize S(|dft(c)|^2) over phase choices c_l = sqrt(lam_l) e^{i theta_l}.

    theta is fixed to 0 on the first support index (a global phase is
    immaterial) and only support indices are optimized.  Deterministic
    for a fixed config: restarts use pre-drawn starting points and the
    best value is reduced by first-come strict minimum in restart order.
    When the running best reaches the analytic lower bound ed_plus(lam)
    within CERTIFY_TOL the search stops early -- the bound certifies
    global optimality.  The returned value is always an upper bound on
    the true minimum and never less than ed_plus(lam) - CHAIN_TOL.
    """
    lam = qcore.prob_vector(lam)
    if cfg is None:
        cfg = OptimizerConfig()
    d = lam.size
    root = np.sqrt(lam)
    support = np.flatnonzero(lam > 0)
    free = support[1:]  # phases that actually matter
    lower = ed_plus(lam)

    eta = np.exp(2j * np.pi / d)
    w = eta ** np.outer(np.arange(d), np.arange(d)) / np.sqrt(d)

    theta_full = np.zeros(d)

    def objective(theta_free):
        theta_full[free] = theta_free
        p = _fourier_weights(root * np.exp(1j * theta_full), w)
        mask = p > 0
        return float(-(p[mask] * np.log2(p[mask])).sum())

    if free.size == 0:
        # point mass (or d = 1): the objective is a constant
        value = objective(np.zeros(0))
        return MeasureResult(value=value, optimizer_phases=np.zeros(d),
                             restarts_used=0, converged=True)

    # the all-zero phase point certifies itself whenever it meets the
    # analytic lower bound -- no search needed then
    zero_val = objective(np.zeros(free.size))
    if zero_val <= lower + CERTIFY_TOL:
        return MeasureResult(value=zero_val, optimizer_phases=np.zeros(d),
                             restarts_used=0, converged=True)

    rng = np.random.default_rng(cfg.seed)
    starts = [np.zeros(free.size)]
    starts.extend(rng.uniform(0.0, 2.0 * np.pi, size=(cfg.restarts - 1, free.size)))

    best_val = math.inf
    best_theta = np.zeros(free.size)
    best_ok = False
    used = 0
    certified = False
    for start in starts:
        res = minimize(objective, start, method="Nelder-Mead",
                       options=dict(xatol=cfg.xatol, fatol=cfg.fatol,
                                    maxiter=cfg.max_iter))
        used += 1
        if res.fun < best_val:
            best_val = float(res.fun)
            best_theta = np.asarray(res.x, dtype=float)
            best_ok = bool(res.success)
        if best_val <= lower + CERTIFY_TOL:
            certified = True
            break

    if best_val < lower - CHAIN_TOL:
        raise AssertionError(
            f"optimizer value {best_val!r} undercuts the lower bound {lower!r}")

    phases = np.zeros(d)
    phases[free] = best_theta % (2.0 * np.pi)
    return MeasureResult(value=best_val, optimizer_phases=phases,
                         restarts_used=used, converged=certified or best_ok)


def epsilon_bruteforce(lam, grid_size):
    """Exhaustive phase-grid minimum of S(|dft(c)|^2); oracle for epsilon_min.

    Scans theta in {2 pi k / grid_size}^(d-1) with theta_0 = 0; only
    practical for d <= 5.
    """
    lam = qcore.prob_vector(lam)
    d = lam.size
    if d > 5:
        raise ValueError(f"grid search over {grid_size}^{d - 1} points is not practical")
    k = int(grid_size)
    if k < 1:
        raise ValueError("grid size must be >= 1")
    root = np.sqrt(lam)
    thetas = 2.0 * np.pi * np.arange(k) / k
    if d == 1:
        return qcore.entropy_bits(np.abs(uncertainty.dft(root)) ** 2)

    best = math.inf
    # enumerate the grid in chunks over the first free phase to bound memory
    rest = np.stack(np.meshgrid(*([thetas] * (d - 2)), indexing="ij"), axis=-1) \
        .reshape(-1, d - 2) if d > 2 else np.zeros((1, 0))
    for t1 in thetas:
        phases = np.concatenate(
            [np.zeros((rest.shape[0], 1)), np.full((rest.shape[0], 1), t1), rest],
            axis=1)
        c = root * np.exp(1j * phases)
        p = np.abs(uncertainty.dft(c)) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(p > 0, p * np.log2(p), 0.0)
        entropies = -terms.sum(axis=1)
        best = min(best, float(entropies.min()))
    return best


def convex_envelope_1d(points):
    """Lower convex envelope of samples (x, y), evaluated at the same x.

    x must be strictly increasing.  Built from the lower hull (monotone
    chain) and interpolated back onto the inputs; the result is pointwise
    <= y and convex as a sequence.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 2:
        raise ValueError("need at least two points")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if not np.all(np.diff(xs) > 0):
        raise ValueError("x values must be strictly increasing")

    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep only right turns: drop the middle point when it lies
            # on or above the segment joining its neighbours
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    hx = np.array([p[0] for p in hull])
    hy = np.array([p[1] for p in hull])
    env = np.interp(xs, hx, hy)
    env = np.minimum(env, ys)  # guard against interpolation round-off
    return list(zip(xs.tolist(), env.tolist()))


def lambda_nu(nu, d):
    """The noisy family profile {nu + (1-nu)/d, (1-nu)/d, ...}."""
    nu = float(nu)
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"nu must lie in [0, 1], got {nu}")
    lam = np.full(d, (1.0 - nu) / d)
    lam[0] += nu
    return lam


@dataclass
class GapPoint:
    """One sweep sample; all entropic quantities in bits.

    relative_gap = gap_bits / co_epsilon_bits, defined as 0 when the
    envelope vanishes.
    """
    nu: float
    f: float
    ed_plus_bits: float
    epsilon_bits: float
    co_epsilon_bits: float
    gap_bits: float
    relative_gap: float


def gap_sweep(d, nu_grid, cfg: Optional[OptimizerConfig] = None):
    """Gap curve of the noisy family over a strictly increasing nu grid.

    Per point: profile lam(nu), distillation ceiling ed_plus, phase
    minimum epsilon; then the lower convex envelope of epsilon over the
    whole grid, the gap co_epsilon - ed_plus and its relative version.
    Each grid point gets an independent child seed derived from
    cfg.seed, so results do not depend on evaluation order.
    """
    grid = np.asarray(nu_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("nu grid must be 1-d with at least two points")
    if grid.min() < -1e-12 or grid.max() > 1.0 + 1e-12:
        raise ValueError("nu grid must lie in [0, 1]")
    if not np.all(np.diff(grid) > 0):
        raise ValueError("nu grid must be strictly increasing")
    if cfg is None:
        cfg = OptimizerConfig()

    child_seeds = np.random.SeedSequence(cfg.seed).generate_state(grid.size)
    eds = np.empty(grid.size)
    eps = np.empty(grid.size)
    for i, nu in enumerate(grid):
        lam = lambda_nu(nu, d)
        eds[i] = ed_plus(lam)
        eps[i] = epsilon_min(lam, replace(cfg, seed=int(child_seeds[i]))).value

    env = np.array([y for _, y in convex_envelope_1d(zip(grid, eps))])
    points = []
    for i, nu in enumerate(grid):
        gap = env[i] - eds[i]
        rel = 0.0 if env[i] < ENVELOPE_ZERO else gap / env[i]
        points.append(GapPoint(nu=float(nu), f=float(nu + (1.0 - nu) / d),
                               ed_plus_bits=float(eds[i]), epsilon_bits=float(eps[i]),
                               co_epsilon_bits=float(env[i]), gap_bits=float(gap),
                               relative_gap=float(rel)))
    return points


@dataclass
class PhiNuReport:
    """A distinguished pure preimage of the noisy family and its bookkeeping.

    The raw combination sqrt(nu) Psi_00 + sqrt(1-nu) |00> is not
    normalized (the two terms overlap, <Psi_00|00> = 1/sqrt d); `state`
    is the normalized vector and `original_norm` records what was lost.
    `lambda_twirl` is the exact diagonal profile of the state's group
    twirl, which differs from the nominal `lambda_family` profile
    lam(nu); `max_discrepancy` surfaces that mismatch rather than hiding
    it.  `chain_ok` certifies epsilon_min(lam(nu)) <= entanglement of the
    state (within CHAIN_TOL), which sandwiches the family's preparation
    cost from above.
    """
    nu: float
    d: int
    state: np.ndarray
    original_norm: float
    lambda_twirl: np.ndarray
    lambda_family: np.ndarray
    max_discrepancy: float
    entanglement_bits: float
    epsilon_family_bits: float
    chain_ok: bool


def phi_nu(nu, d, cfg: Optional[OptimizerConfig] = None):
    """Build and analyze the pure state sqrt(nu) Psi_00 + sqrt(1-nu)|00>."""
    nu = float(nu)
    if not 0.0 <= nu <= 1.0:
        raise ValueError(f"nu must lie in [0, 1], got {nu}")
    raw = np.sqrt(nu) * symstates.bell_state(0, 0, d)
    raw[0] += np.sqrt(1.0 - nu)  # |00> is slot 0
    nrm = float(np.linalg.norm(raw))
    state = raw / nrm

    # the state lives in the span of the column family, so its twirl is
    # diagonal there with weights |<Psi_0l | state>|^2
    basis = symstates.bell_basis_matrix(d, symstates.COLUMN)
    lam_twirl = np.abs(basis.conj().T @ state) ** 2
    lam_family = lambda_nu(nu, d)

    ent = pure_entanglement(state, dims=(d, d))
    eps = epsilon_min(lam_family, cfg).value
    return PhiNuReport(
        nu=nu, d=d, state=state, original_norm=nrm,
        lambda_twirl=lam_twirl, lambda_family=lam_family,
        max_discrepancy=float(np.abs(lam_twirl - lam_family).max()),
        entanglement_bits=ent, epsilon_family_bits=eps,
        chain_ok=bool(eps <= ent + CHAIN_TOL))
