"""Self-contained invariant suite behind the `verify` CLI command.

Each check exercises one documented contract of the computational
modules at sizes configured by (d_max, samples, seed, tol) and returns a
named pass/fail row with a short witness string.  `tol` of None keeps
each check's own documented tolerance; passing an explicit value
substitutes it everywhere a tolerance is compared, which is how the
forced-failure path (e.g. --tol 1e-30) works.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import replace

import numpy as np

from . import measures, qcore, symstates, uncertainty

CheckResult = namedtuple("CheckResult", ["name", "passed", "detail"])


def _pick(tol, default):
    return default if tol is None else tol


def _rng(seed, tag):
    return np.random.default_rng([seed, tag])


def check_partial_trace_kron(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-10)
    rng = _rng(seed, 1)
    worst = 0.0
    for _ in range(max(3, samples // 20)):
        da, db = rng.integers(2, 5, size=2)
        a = rng.normal(size=(da, da)) + 1j * rng.normal(size=(da, da))
        b = rng.normal(size=(db, db)) + 1j * rng.normal(size=(db, db))
        big = qcore.kron(a, b)
        dev_a = np.abs(qcore.partial_trace(big, "A", (da, db)) - np.trace(b) * a).max()
        dev_b = np.abs(qcore.partial_trace(big, "B", (da, db)) - np.trace(a) * b).max()
        worst = max(worst, dev_a, dev_b)
    return CheckResult("qcore.partial_trace_of_kron", worst < eff,
                       f"max deviation {worst:.2e} (tol {eff:.1e})")


def check_density_spectra(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-10)
    rng = _rng(seed, 2)
    worst_neg, worst_sum = 0.0, 0.0
    for _ in range(max(3, samples // 20)):
        n = int(rng.integers(2, 9))
        ev = qcore.herm_eigvals(qcore.random_density_matrix(n, rng))
        worst_neg = max(worst_neg, -float(ev.min()))
        worst_sum = max(worst_sum, abs(float(ev.sum()) - 1.0))
    ok = worst_neg < eff and worst_sum < eff
    return CheckResult("qcore.density_spectra", ok,
                       f"min-eig dust {worst_neg:.2e}, trace dev {worst_sum:.2e}")


def check_partial_transpose(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-12)
    rng = _rng(seed, 3)
    worst = 0.0
    for _ in range(max(3, samples // 20)):
        d = int(rng.integers(2, 5))
        rho = qcore.random_density_matrix(d * d, rng)
        for side in ("A", "B"):
            pt = qcore.partial_transpose(rho, side, (d, d))
            worst = max(worst, np.abs(pt - pt.conj().T).max(),
                        abs(np.trace(pt).real - 1.0),
                        np.abs(qcore.partial_transpose(pt, side, (d, d)) - rho).max())
    return CheckResult("qcore.partial_transpose", worst < eff,
                       f"max herm/trace/involution deviation {worst:.2e}")


def check_group_commutes(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-10)
    rng = _rng(seed, 4)
    worst = 0.0
    for d in range(2, min(6, d_max) + 1):
        rho = symstates.rho_lambda(rng.dirichlet(np.ones(d)))
        for g in symstates._group_elements(d):
            worst = max(worst, np.abs(g @ rho - rho @ g).max())
    return CheckResult("symstates.group_commutes_with_family", worst < eff,
                       f"max commutator entry {worst:.2e}")


def check_twirl_superposition(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-10)
    rng = _rng(seed, 5)
    worst = 0.0
    for d in range(2, min(8, d_max) + 1):
        for conv in (symstates.COLUMN, symstates.ROW):
            c = qcore.random_state_vector(d, rng)
            basis = symstates.bell_basis_matrix(d, conv)
            phi = basis @ c
            img = symstates.twirl_group(np.outer(phi, phi.conj()), conv)
            ref = symstates.rho_lambda(np.abs(c) ** 2, conv)
            worst = max(worst, np.abs(img - ref).max())
    return CheckResult("symstates.twirl_maps_superpositions", worst < eff,
                       f"max deviation {worst:.2e}")


def check_twirl_channel(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-10)
    rng = _rng(seed, 6)
    worst_proj, worst_tr, worst_pos = 0.0, 0.0, 0.0
    for d in range(2, min(5, d_max) + 1):
        rho = qcore.random_density_matrix(d * d, rng)
        t1 = symstates.twirl_group(rho)
        t2 = symstates.twirl_group(t1)
        worst_proj = max(worst_proj, np.abs(t2 - t1).max())
        worst_tr = max(worst_tr, abs(np.trace(t1).real - 1.0))
        worst_pos = max(worst_pos, -float(qcore.herm_eigvals(t1).min()))
    ok = max(worst_proj, worst_tr, worst_pos) < eff
    return CheckResult("symstates.twirl_is_projection_channel", ok,
                       f"idempotence {worst_proj:.2e}, trace {worst_tr:.2e}, "
                       f"negativity {worst_pos:.2e}")


def check_family_npt(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-10)
    rng = _rng(seed, 7)
    worst_match, min_margin = 0.0, np.inf
    for d in range(2, min(6, d_max) + 1):
        for _ in range(max(3, samples // 25)):
            lam = rng.dirichlet(np.ones(d))
            rho = symstates.rho_lambda(lam)
            ev = qcore.herm_eigvals(qcore.partial_transpose(rho, "B", (d, d)))
            # spectrum prediction: most negative eigenvalue is
            # -max_{m != 0} |(1/d) sum_l lam_l eta^{ml}|
            overlap = np.fft.ifft(lam)
            pred = -float(np.abs(overlap[1:]).max())
            worst_match = max(worst_match, abs(float(ev.min()) - pred))
            min_margin = min(min_margin, -float(ev.min()))
    ok = worst_match < eff and min_margin > 0
    return CheckResult("symstates.family_is_npt_when_nonuniform", ok,
                       f"negativity >= {min_margin:.2e}, spectrum-formula dev {worst_match:.2e}")


def check_eb_support(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-10)
    rng = _rng(seed, 8)
    worst = 0.0
    for d in range(2, min(8, d_max) + 1):
        m = symstates.eb_map(d)
        v = m.isometry
        worst = max(worst, np.abs(v.conj().T @ v - np.eye(d)).max())
        proj = v @ v.conj().T
        rho = symstates.rho_lambda(rng.dirichlet(np.ones(d)))
        worst = max(worst, np.abs(proj @ rho @ proj - rho).max())
        total = sum(m.povm)
        worst = max(worst, np.abs(total - np.eye(d)).max())
    return CheckResult("symstates.eb_isometry_and_support", worst < eff,
                       f"max deviation {worst:.2e}")


def _random_unit_batch(rng, n, d):
    z = rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def check_entropic_ur(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-9)
    rng = _rng(seed, 9)
    worst = np.inf
    for d in range(2, min(16, max(d_max, 2)) + 1):
        z = _random_unit_batch(rng, max(samples, 10), d)
        p = np.abs(z) ** 2
        q = np.abs(uncertainty.dft(z)) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            s = -(np.where(p > 0, p * np.log2(p), 0.0).sum(axis=1)
                  + np.where(q > 0, q * np.log2(q), 0.0).sum(axis=1))
        worst = min(worst, float((s - np.log2(d)).min()))
    return CheckResult("uncertainty.entropy_sum_bound", worst > -eff,
                       f"min deficit {worst:.2e} (floor -{eff:.1e})")


def check_support_ur(d_max, samples, seed, tol):
    rng = _rng(seed, 10)
    ok = True
    witness = "all products >= d"
    for d in range(2, min(16, max(d_max, 2)) + 1):
        z = _random_unit_batch(rng, max(samples, 10), d)
        sc = (np.abs(z) > uncertainty.SUPPORT_TOL).sum(axis=1)
        sf = (np.abs(uncertainty.dft(z)) > uncertainty.SUPPORT_TOL).sum(axis=1)
        bad = np.flatnonzero(sc * sf < d)
        if bad.size:
            ok = False
            witness = f"d={d}, sample {bad[0]}: {sc[bad[0]]} * {sf[bad[0]]} < {d}"
            break
    return CheckResult("uncertainty.support_product_bound", ok, witness)


def check_minimizer_closure(d_max, samples, seed, tol):
    eff = _pick(tol, uncertainty.DEFICIT_TOL)
    worst = 0.0
    for d in range(2, min(8, d_max) + 1):
        for spec, c in uncertainty.enumerate_minimizers(d):
            rep = uncertainty.ur_report(uncertainty.dft(c))
            worst = max(worst, rep.deficit)
    return CheckResult("uncertainty.fourier_closure_of_minimizers", worst < eff,
                       f"max deficit of transformed minimizers {worst:.2e}")


def check_perturbation_rigidity(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-9)
    rng = _rng(seed, 11)
    least = np.inf
    for d in range(2, min(8, d_max) + 1):
        for spec, c in uncertainty.enumerate_minimizers(d):
            supp = np.flatnonzero(np.abs(c) > uncertainty.SUPPORT_TOL)
            if supp.size < 2:
                # a single-support vector has no relative phase to kick
                continue
            kick = c.copy()
            idx = supp[int(rng.integers(1, supp.size))]
            kick[idx] *= np.exp(1j * 1e-2)
            kick /= np.linalg.norm(kick)
            least = min(least, uncertainty.ur_report(kick).deficit)
    return CheckResult("uncertainty.minimizers_are_rigid", least > eff,
                       f"min deficit after phase kick {least:.2e} (floor {eff:.1e})")


def check_dedup_count(d_max, samples, seed, tol):
    for d in range(1, min(12, max(d_max, 2)) + 1):
        expected = sum(d for k in range(1, d + 1) if d % k == 0)
        got = len(uncertainty.enumerate_minimizers(d))
        if got != expected:
            return CheckResult("uncertainty.enumeration_count", False,
                               f"d={d}: {got} vectors, expected {expected}")
    return CheckResult("uncertainty.enumeration_count", True,
                       "d per divisor at every tested dimension")


def check_chain(d_max, samples, seed, tol):
    eff = _pick(tol, measures.CHAIN_TOL)
    rng = _rng(seed, 12)
    cfg = measures.OptimizerConfig(restarts=2, seed=seed)
    worst = -np.inf
    for d in range(2, min(5, d_max) + 1):
        for _ in range(max(3, samples // 4)):
            lam = rng.dirichlet(np.ones(d))
            gap = measures.ed_plus(lam) - measures.epsilon_min(lam, cfg).value
            worst = max(worst, gap)
    return CheckResult("measures.lower_bound_chain", worst < eff,
                       f"max ed_plus - epsilon = {worst:.2e} (tol {eff:.1e})")


def check_equality_at_minimizers(d_max, samples, seed, tol):
    eff = _pick(tol, measures.CHAIN_TOL)
    cfg = measures.OptimizerConfig(restarts=4, seed=seed)
    worst = 0.0
    for d in range(2, min(6, d_max) + 1):
        for spec, c in uncertainty.enumerate_minimizers(d):
            lam = np.abs(c) ** 2
            worst = max(worst, abs(measures.epsilon_min(lam, cfg).value
                                   - measures.ed_plus(lam)))
    return CheckResult("measures.equality_on_minimizer_profiles", worst < eff,
                       f"max |epsilon - ed_plus| {worst:.2e}")


STRICT_GAP_POINTS = [
    (np.array([0.75, 0.25]), 720),
    (np.array([0.6, 0.3, 0.1]), 120),
]


def check_strict_gap(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-3)
    cfg = measures.OptimizerConfig(seed=seed)
    least_gap, worst_dev = np.inf, 0.0
    for lam, grid in STRICT_GAP_POINTS:
        eps = measures.epsilon_min(lam, cfg).value
        least_gap = min(least_gap, eps - measures.ed_plus(lam))
        worst_dev = max(worst_dev, abs(eps - measures.epsilon_bruteforce(lam, grid)))
    ok = least_gap > eff and worst_dev < eff
    return CheckResult("measures.strict_gap_points", ok,
                       f"min gap {least_gap:.4e}, oracle deviation {worst_dev:.2e}")


def check_oracle_agreement(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-3)
    rng = _rng(seed, 13)
    cfg = measures.OptimizerConfig(restarts=16, seed=seed)
    grids = {2: 720, 3: 120, 4: 48}
    worst = 0.0
    for d in range(2, min(4, d_max) + 1):
        for _ in range(max(3, samples // 10)):
            lam = rng.dirichlet(np.ones(d))
            dev = abs(measures.epsilon_min(lam, cfg).value
                      - measures.epsilon_bruteforce(lam, grids[d]))
            worst = max(worst, dev)
    return CheckResult("measures.grid_oracle_agreement", worst < eff,
                       f"max |optimizer - grid| {worst:.2e} (tol {eff:.1e})")


def check_superposition_identity(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-9)
    rng = _rng(seed, 14)
    worst = 0.0
    for d in range(2, min(8, d_max) + 1):
        basis = symstates.bell_basis_matrix(d)
        for _ in range(max(3, samples // 10)):
            c = qcore.random_state_vector(d, rng)
            ent = measures.pure_entanglement(basis @ c, dims=(d, d))
            ref = qcore.entropy_bits(np.abs(uncertainty.dft(c)) ** 2)
            worst = max(worst, abs(ent - ref))
    return CheckResult("measures.superposition_entropy_identity", worst < eff,
                       f"max deviation {worst:.2e}")


def check_gap_point_sanity(d_max, samples, seed, tol):
    eff = _pick(tol, 1e-6)
    grid = np.linspace(0.0, 1.0, 17)
    pts = measures.gap_sweep(2, grid, measures.OptimizerConfig(restarts=4, seed=seed))
    bad_gap = min(p.gap_bits for p in pts)
    rels = [p.relative_gap for p in pts]
    ok = bad_gap > -eff and min(rels) >= 0.0 and max(rels) <= 1.0 + eff
    ok = ok and abs(pts[-1].gap_bits) < eff and abs(pts[0].co_epsilon_bits) < eff
    return CheckResult("measures.gap_point_sanity", ok,
                       f"min gap {bad_gap:.2e}, relative range "
                       f"[{min(rels):.3f}, {max(rels):.3f}]")


def check_sweep_determinism(d_max, samples, seed, tol):
    grid = np.linspace(0.0, 1.0, 9)
    cfg = measures.OptimizerConfig(restarts=4, seed=seed)
    runs = []
    for _ in range(2):
        pts = measures.gap_sweep(2, grid, replace(cfg))
        runs.append(tuple((p.nu, p.f, p.ed_plus_bits, p.epsilon_bits,
                           p.co_epsilon_bits, p.gap_bits, p.relative_gap)
                          for p in pts))
    ok = runs[0] == runs[1]
    return CheckResult("measures.sweep_determinism", ok,
                       "identical sweeps bitwise equal" if ok else "runs differ")


CHECKS = [
    check_partial_trace_kron,
    check_density_spectra,
    check_partial_transpose,
    check_group_commutes,
    check_twirl_superposition,
    check_twirl_channel,
    check_family_npt,
    check_eb_support,
    check_entropic_ur,
    check_support_ur,
    check_minimizer_closure,
    check_perturbation_rigidity,
    check_dedup_count,
    check_chain,
    check_equality_at_minimizers,
    check_strict_gap,
    check_oracle_agreement,
    check_superposition_identity,
    check_gap_point_sanity,
    check_sweep_determinism,
]


def run_all(d_max=8, samples=100, seed=0, tol=None):
    """Run every registered check; returns (all_passed, [CheckResult])."""
    if d_max < 2:
        raise ValueError("d_max must be >= 2")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    results = [chk(d_max, samples, seed, tol) for chk in CHECKS]
    return all(r.passed for r in results), results
