"""End-to-end acceptance checks.

Each test prints one ``ACCEPTANCE <id>`` line with the measured numbers;
``pytest -v`` therefore gives one pass/fail verdict per numbered check.
Two checks (08b, 08d) assert a relative-gap threshold of 0.9 at nu = 0.01;
the curves produced here peak near 0.83 at that point (the threshold is
crossed only around nu ~ 1.5e-4), so those two tests document the measured
values in their failure output.
"""

import time

import numpy as np
import pytest
from scipy.optimize import minimize

from belldiag import measures, qcore, symstates, uncertainty
from belldiag.measures import OptimizerConfig


def _unit_vectors(rng, n, d):
    c = rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d))
    return c / np.linalg.norm(c, axis=1, keepdims=True)


def _entropies_bits(p):
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(p), 0.0)
    return -terms.sum(axis=-1)


def test_acceptance_01_entropic_uncertainty_bound():
    # 10^3 random unit vectors per dimension 2..16, entropy sum >= log2 d
    start = time.perf_counter()
    rng = np.random.default_rng(2026)
    worst = np.inf
    for d in range(2, 17):
        c = _unit_vectors(rng, 1000, d)
        chat = uncertainty.dft(c)
        total = _entropies_bits(np.abs(c) ** 2) + _entropies_bits(np.abs(chat) ** 2)
        worst = min(worst, float((total - np.log2(d)).min()))
    elapsed = time.perf_counter() - start
    print(f"ACCEPTANCE 01 min entropy slack {worst:.3e} bits over 15000 samples, "
          f"{elapsed:.2f} s")
    assert worst >= -1e-9
    assert elapsed < 10.0


def test_acceptance_02_support_uncertainty_bound():
    # the same sample stream satisfies the support-size product bound exactly
    rng = np.random.default_rng(2026)
    worst = np.inf
    for d in range(2, 17):
        c = _unit_vectors(rng, 1000, d)
        chat = uncertainty.dft(c)
        sc = (np.abs(c) > uncertainty.SUPPORT_TOL).sum(axis=1)
        sf = (np.abs(chat) > uncertainty.SUPPORT_TOL).sum(axis=1)
        worst = min(worst, int((sc * sf).min()) - d)
    print(f"ACCEPTANCE 02 min support product slack {worst} over 15000 samples")
    assert worst >= 0


def _refine_to_minimal(c0):
    """Polish a near-minimal vector by direct search on its real/imag parts."""
    d = c0.size

    def deficit(x):
        c = x[:d] + 1j * x[d:]
        nrm = np.linalg.norm(c)
        if nrm < 1e-12:
            return 10.0
        c = c / nrm
        chat = uncertainty.dft(c)
        return float(_entropies_bits(np.abs(c) ** 2)
                     + _entropies_bits(np.abs(chat) ** 2) - np.log2(d))

    x0 = np.concatenate([c0.real, c0.imag])
    res = minimize(deficit, x0, method="Nelder-Mead",
                   options=dict(maxiter=5000, xatol=1e-10, fatol=1e-13))
    c = res.x[:d] + 1j * res.x[d:]
    return c / np.linalg.norm(c)


def test_acceptance_03_minimizer_completeness_and_soundness():
    rng = np.random.default_rng(99)
    worst_deficit = 0.0
    worst_profile_dist = 0.0
    n_hits = 0
    for d in range(2, 7):
        enumerated = uncertainty.enumerate_minimizers(d)
        profiles = np.array([np.abs(c) ** 2 for _, c in enumerated])
        # soundness: every tabulated vector is genuinely minimal
        for _, c in enumerated:
            rep = uncertainty.ur_report(c)
            worst_deficit = max(worst_deficit, rep.deficit)
            assert rep.support_c * rep.support_chat == d
        # completeness: a fine random search produces no hit whose polished
        # modulus profile strays from the tabulated set
        c = _unit_vectors(rng, 100_000, d)
        chat = uncertainty.dft(c)
        deficit = (_entropies_bits(np.abs(c) ** 2)
                   + _entropies_bits(np.abs(chat) ** 2) - np.log2(d))
        for idx in np.flatnonzero(deficit < 1e-3):
            refined = _refine_to_minimal(c[idx])
            dist = np.abs(profiles - np.abs(refined) ** 2).max(axis=1).min()
            worst_profile_dist = max(worst_profile_dist, float(dist))
            n_hits += 1
            assert dist < 1e-6
    print(f"ACCEPTANCE 03 max tabulated deficit {worst_deficit:.3e}; "
          f"{n_hits} search hits, max profile distance {worst_profile_dist:.3e}")
    assert worst_deficit < 1e-9


def test_acceptance_04_superposition_entanglement_identity():
    rng = np.random.default_rng(4)
    worst = 0.0
    for d in range(2, 9):
        basis = symstates.bell_basis_matrix(d)
        for _ in range(100):
            c = _unit_vectors(rng, 1, d)[0]
            ent = measures.pure_entanglement(basis @ c)
            target = qcore.entropy_bits(np.abs(uncertainty.dft(c)) ** 2)
            worst = max(worst, abs(ent - target))
    print(f"ACCEPTANCE 04 max |entanglement - partner entropy| = {worst:.3e} bits")
    assert worst < 1e-9


def test_acceptance_05_twirl_contract():
    rng = np.random.default_rng(5)
    worst = 0.0
    for d in range(2, 9):
        rho = qcore.random_density_matrix(d * d, rng)
        t = symstates.twirl_group(rho)
        worst = max(worst, abs(np.trace(t).real - 1.0))
        worst = max(worst, float(np.abs(symstates.twirl_group(t) - t).max()))
        for conv in (symstates.COLUMN, symstates.ROW):
            basis = symstates.bell_basis_matrix(d, conv)
            for _ in range(5):
                c = _unit_vectors(rng, 1, d)[0]
                v = basis @ c
                out = symstates.twirl_group(np.outer(v, v.conj()), conv)
                target = symstates.rho_lambda(np.abs(c) ** 2, conv)
                worst = max(worst, float(np.abs(out - target).max()))
    print(f"ACCEPTANCE 05 max twirl deviation {worst:.3e} (d up to 8)")
    assert worst < 1e-10


def test_acceptance_06_entanglement_breaking_map():
    worst = 0.0
    worst_pt = 0.0
    for d in range(2, 9):
        m = symstates.eb_map(d)
        v = m.isometry
        for i in range(d):
            for j in range(d):
                unit = np.zeros((d, d), dtype=complex)
                unit[i, j] = 1.0
                lhs = qcore.partial_trace(v @ unit @ v.conj().T, "B", (d, d))
                rhs = symstates.eb_apply(m, unit)
                worst = max(worst, float(np.abs(lhs - rhs).max()))
        pt = qcore.partial_transpose(symstates.eb_choi(m), "B", (d, d))
        worst_pt = min(worst_pt, float(qcore.herm_eigvals(pt).min()))
    print(f"ACCEPTANCE 06 max map deviation {worst:.3e}; "
          f"min Choi PT eigenvalue {worst_pt:.3e}")
    assert worst < 1e-10
    assert worst_pt > -1e-10


def test_acceptance_07_bound_chain():
    rng = np.random.default_rng(7)
    cfg = OptimizerConfig(restarts=4, seed=7)
    worst_chain = -np.inf
    for d in range(2, 6):
        for _ in range(200):
            lam = rng.dirichlet(np.ones(d))
            gap = measures.ed_plus(lam) - measures.epsilon_min(lam, cfg).value
            worst_chain = max(worst_chain, gap)
    assert worst_chain <= 1e-6

    # equality exactly on the minimal-uncertainty profiles
    worst_eq = 0.0
    for d in range(2, 6):
        for _, c in uncertainty.enumerate_minimizers(d):
            lam = np.abs(c) ** 2
            diff = abs(measures.epsilon_min(lam, cfg).value - measures.ed_plus(lam))
            worst_eq = max(worst_eq, diff)
    assert worst_eq < 1e-6

    # strict gap at designated non-minimal profiles, grid cross-check
    gaps = []
    for lam, grid in (([0.75, 0.25], 720), ([0.6, 0.3, 0.1], 120)):
        eps = measures.epsilon_min(lam, OptimizerConfig(restarts=16, seed=7)).value
        gap = eps - measures.ed_plus(lam)
        gaps.append(gap)
        assert gap > 1e-3
        assert abs(eps - measures.epsilon_bruteforce(lam, grid)) <= 1e-3
    print(f"ACCEPTANCE 07 max chain violation {worst_chain:.3e}; max equality "
          f"residual {worst_eq:.3e}; strict gaps {gaps[0]:.4f}/{gaps[1]:.4f} bits")


def _sweep_grid():
    return np.union1d(np.linspace(0.0, 1.0, 198), np.array([0.01, 0.99]))


def _run_timed_sweep(d):
    grid = _sweep_grid()
    assert grid.size == 200
    start = time.perf_counter()
    points = measures.gap_sweep(d, grid, OptimizerConfig(restarts=32, seed=0))
    elapsed = time.perf_counter() - start
    return grid, points, elapsed


@pytest.fixture(scope="module")
def sweep_d2():
    return _run_timed_sweep(2)


@pytest.fixture(scope="module")
def sweep_d10():
    return _run_timed_sweep(10)


def _point_at(grid, points, nu):
    idx = int(np.argmin(np.abs(grid - nu)))
    assert grid[idx] == nu
    return points[idx]


def test_acceptance_08a_qubit_sweep_runtime_and_endpoints(sweep_d2):
    grid, points, elapsed = sweep_d2
    p0, p1 = points[0], points[-1]
    p99 = _point_at(grid, points, 0.99)
    print(f"ACCEPTANCE 08a d=2 sweep of 200 points in {elapsed:.1f} s; "
          f"gap({{0,1}}) = {p0.gap_bits:.2e}/{p1.gap_bits:.2e}; "
          f"relative_gap(0.99) = {p99.relative_gap:.4f}")
    assert elapsed < 60.0
    assert abs(p1.gap_bits) < 1e-12
    assert abs(p0.gap_bits) < 1e-12
    assert p99.relative_gap < 0.1


def test_acceptance_08b_qubit_low_noise_relative_gap(sweep_d2):
    grid, points, _ = sweep_d2
    rel = _point_at(grid, points, 0.01).relative_gap
    print(f"ACCEPTANCE 08b d=2 relative_gap(nu=0.01) = {rel!r} (required > 0.9; "
          f"the curve reaches 0.9 only near nu ~ 1.5e-4)")
    assert rel > 0.9, f"relative_gap(0.01) = {rel!r} is not > 0.9"


def test_acceptance_08c_d10_sweep_runtime_and_endpoints(sweep_d10):
    grid, points, elapsed = sweep_d10
    p0, p1 = points[0], points[-1]
    p99 = _point_at(grid, points, 0.99)
    print(f"ACCEPTANCE 08c d=10 sweep of 200 points in {elapsed:.1f} s; "
          f"gap({{0,1}}) = {p0.gap_bits:.2e}/{p1.gap_bits:.2e}; "
          f"relative_gap(0.99) = {p99.relative_gap:.4f}")
    assert elapsed < 600.0
    assert abs(p1.gap_bits) < 1e-12
    assert abs(p0.gap_bits) < 1e-12
    assert p99.relative_gap < 0.1


def test_acceptance_08d_d10_low_noise_relative_gap(sweep_d10):
    grid, points, _ = sweep_d10
    rel = _point_at(grid, points, 0.01).relative_gap
    print(f"ACCEPTANCE 08d d=10 relative_gap(nu=0.01) = {rel!r} (required > 0.9; "
          f"the curve reaches 0.9 only below nu ~ 2e-4)")
    assert rel > 0.9, f"relative_gap(0.01) = {rel!r} is not > 0.9"


def test_acceptance_09_reversible_decomposition():
    worst = 0.0
    for d in (4, 6):
        for d1 in (k for k in range(1, d + 1) if d % k == 0):
            res = symstates.reversible_decomposition(d, d1)
            worst = max(worst, res.distance)
    print(f"ACCEPTANCE 09 max factorization trace distance {worst:.3e}")
    assert worst < 1e-9


def test_acceptance_10_noisy_family_consistency():
    cfg = OptimizerConfig(restarts=8, seed=10)
    worst_chain = -np.inf
    worst_iso = 0.0
    for d in (2, 3):
        for nu in np.linspace(0.0, 1.0, 50):
            rep = measures.phi_nu(nu, d, cfg)
            worst_chain = max(worst_chain,
                              rep.epsilon_family_bits - rep.entanglement_bits)
            lhs = symstates.twirl_isotropic(symstates.rho_lambda(measures.lambda_nu(nu, d)))
            rhs = symstates.isotropic_state(nu + (1.0 - nu) / d, d)
            worst_iso = max(worst_iso, float(np.abs(lhs - rhs).max()))
    print(f"ACCEPTANCE 10 max (epsilon - pure entanglement) {worst_chain:.3e} bits; "
          f"max isotropic-projection deviation {worst_iso:.3e}")
    assert worst_chain <= 1e-6
    assert worst_iso < 1e-10
