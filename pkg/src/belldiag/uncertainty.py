"""Discrete Fourier duality: support/entropy uncertainty and its minimizers.

For a normalized c in C^d with Fourier partner
``chat_k = (1/sqrt d) sum_l eta^{kl} c_l`` (eta = exp(2 pi i / d)) both

    |supp(c)| * |supp(chat)| >= d
    S(|c|^2) + S(|chat|^2)   >= log2 d        (entropies in bits)

hold, with equality exactly on the "picket fence" family

    c_l = (1/sqrt d2) * eta^{beta l} * [ (l + gamma) mod d1 == 0 ],

one family per divisor d1 of d (d2 = d/d1), beta mod d2, gamma mod d1.
This module evaluates the two functionals and enumerates the complete
equality family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qcore

SUPPORT_TOL = 1e-9   # modulus threshold when counting support
DEFICIT_TOL = 1e-9   # entropic-deficit threshold for minimality


def dft(c):
    """Unitary DFT with the plus-sign kernel: (1/sqrt d) sum_l eta^{kl} c_l.

    Vectorized over leading axes (the transform runs along the last one).
    """
    c = np.asarray(c, dtype=complex)
    d = c.shape[-1]
    return np.fft.ifft(c, axis=-1) * np.sqrt(d)


def support_size(c, tol=SUPPORT_TOL):
    """Number of entries with modulus above tol."""
    return int((np.abs(np.asarray(c)) > tol).sum())


@dataclass(frozen=True)
class MinimizerSpec:
    """Parameters (d1, d2, beta, gamma) of one picket-fence vector."""
    d1: int
    d2: int
    beta: int
    gamma: int

    @property
    def d(self):
        return self.d1 * self.d2


@dataclass
class URReport:
    """Support sizes, entropies (bits) and slack of both uncertainty bounds."""
    support_c: int
    support_chat: int
    entropy_c: float
    entropy_chat: float
    entropy_sum: float
    deficit: float  # entropy_sum - log2(d); zero iff minimal uncertainty


def ur_report(c, tol=SUPPORT_TOL):
    """Evaluate both uncertainty functionals for a normalized vector.

    Raises on non-normalized input and (defensively) if either bound is
    violated beyond numerical dust -- which no input can achieve.
    """
    c = np.asarray(c, dtype=complex)
    d = c.size
    if abs(np.linalg.norm(c) - 1.0) > qcore.ASSERT_TOL:
        raise ValueError(f"vector is not normalized (norm {np.linalg.norm(c)!r})")
    chat = dft(c)
    sc = support_size(c, tol)
    sf = support_size(chat, tol)
    hc = qcore.entropy_bits(np.abs(c) ** 2)
    hf = qcore.entropy_bits(np.abs(chat) ** 2)
    total = hc + hf
    deficit = total - np.log2(d)
    if sc * sf < d:
        raise AssertionError(f"support bound violated: {sc} * {sf} < {d}")
    if deficit < -DEFICIT_TOL:
        raise AssertionError(f"entropy bound violated: deficit {deficit:.3e}")
    return URReport(sc, sf, hc, hf, total, deficit)


def minimizer_vector(spec: MinimizerSpec):
    """Construct the normalized picket-fence vector for a spec."""
    d = spec.d
    eta = np.exp(2j * np.pi / d)
    l = np.arange(d)
    c = np.where((l + spec.gamma) % spec.d1 == 0, eta ** (spec.beta * l), 0.0)
    return c / np.sqrt(spec.d2)


def _divisors(d):
    return [k for k in range(1, d + 1) if d % k == 0]


def _dedup_key(c, tol=SUPPORT_TOL):
    """Global-phase-invariant fingerprint of a vector.

    Modulus profile rounded to 1e-10 plus the sequence of consecutive
    phase differences on the support, each taken mod 2 pi and rounded to
    1e-8 (with the wrap-around 2 pi - eps folded back to 0).
    """
    c = np.asarray(c, dtype=complex)
    mods = tuple(np.round(np.abs(c), 10))
    supp = np.flatnonzero(np.abs(c) > tol)
    angles = np.angle(c[supp])
    diffs = np.diff(angles) % (2 * np.pi)
    diffs[diffs > 2 * np.pi - 1e-8] = 0.0
    return mods, tuple(np.round(diffs, 8))


def enumerate_minimizers(d):
    """All minimal-uncertainty vectors of dimension d, up to global phase.

    Ordered lexicographically in (d1, gamma, beta) with d1 ascending;
    deduplicated by the modulus/phase-difference fingerprint.  The count
    is d per divisor of d.  Every emitted vector has entropic deficit
    below DEFICIT_TOL and support product exactly d.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    out = []
    seen = set()
    for d1 in _divisors(d):
        d2 = d // d1
        for gamma in range(d1):
            for beta in range(d2):
                spec = MinimizerSpec(d1=d1, d2=d2, beta=beta, gamma=gamma)
                c = minimizer_vector(spec)
                key = _dedup_key(c)
                if key in seen:
                    continue
                seen.add(key)
                out.append((spec, c))
    return out


def is_minimizer(c, tol=DEFICIT_TOL):
    """Decide minimal uncertainty; on success return the matching spec.

    True iff the entropic deficit is below tol.  The returned spec is
    located by modulus profile (within 1e-6) and then by the phase
    pattern; None when no tabulated vector matches (possible only for
    borderline inputs accepted by a loose tol).
    """
    c = np.asarray(c, dtype=complex)
    rep = ur_report(c)
    if rep.deficit >= tol:
        return False, None
    prof = np.abs(c) ** 2
    for spec, ref in enumerate_minimizers(c.size):
        if np.abs(np.abs(ref) ** 2 - prof).max() > 1e-6:
            continue
        supp = np.flatnonzero(np.abs(ref) > SUPPORT_TOL)
        ratio = c[supp] / ref[supp]
        # all ratios equal a common unit phase <=> same vector up to global phase
        if np.abs(ratio - ratio[0]).max() < 1e-6:
            return True, spec
    return True, None
