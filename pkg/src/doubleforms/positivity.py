"""Sampled pointwise positivity checks for curvature structures.

Every check draws seeded orthonormal frames, evaluates an algebraic margin
on each and keeps the smallest.  A report therefore says "no violation among
``samples`` frames", a lower bound on the true minimum, never a proof.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .algebra import DEFAULT_TOL, DoubleForm, batch_minors, to_tensor
from .errors import InvalidFrame, OutOfRange
from .invariants import _check_riemann, check_frame, gbw_curvature, pq_curvature_tensor, sectional
from .models import make_rng

DEFAULT_SAMPLES = 2000
CONDITIONS = ("p_curvature", "isotropic", "condition_A")

# relative size below which a Gram–Schmidt step counts as a dependent draw
_DEPENDENCE = 1e-6


def _orthonormalize(V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Modified Gram–Schmidt with one re-orthogonalization pass, batched over frames.

    Returns the frames and a mask of draws whose vectors were near-dependent.
    """
    Q = V.copy()
    count, k, _ = Q.shape
    bad = np.zeros(count, dtype=bool)
    for j in range(k):
        v = Q[:, j, :]
        start = np.linalg.norm(v, axis=1)
        for _ in range(2):
            for i in range(j):
                v = v - np.einsum("cn,cn->c", Q[:, i, :], v)[:, None] * Q[:, i, :]
        size = np.linalg.norm(v, axis=1)
        bad |= size <= _DEPENDENCE * np.maximum(start, 1e-300)
        Q[:, j, :] = v / np.where(size > 0, size, 1.0)[:, None]
    return Q, bad


def sample_frames(n: int, k: int, count: int, seed: int = 0) -> np.ndarray:
    """``count`` orthonormal k-frames in R^n, shape (count, k, n).

    The stream is prefix-stable: the first m frames do not depend on
    ``count``.  A near-dependent draw is replaced by one from a generator
    keyed on (seed, frame index), so replacements keep that property.
    """
    if not 0 <= k <= n:
        raise OutOfRange(f"cannot fit a {k}-frame in dimension {n}")
    count = int(count)
    if count < 0:
        raise OutOfRange("sample count must be non-negative")
    raw = make_rng(seed).standard_normal((count, k, n))
    frames, bad = _orthonormalize(raw)
    for idx in np.flatnonzero(bad):
        attempt = 0
        while True:
            attempt += 1
            sub = np.random.Generator(np.random.PCG64([int(seed), int(idx), attempt]))
            f, b = _orthonormalize(sub.standard_normal((1, k, n)))
            if not b[0]:
                frames[idx] = f[0]
                break
    return frames


@dataclass(frozen=True)
class PositivityReport:
    condition: str
    samples: int
    min_margin: float
    witness_frame: np.ndarray | None
    verdict: str
    params: dict | None = None

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "samples": self.samples,
            "min_margin": self.min_margin,
            "witness_frame": None if self.witness_frame is None else self.witness_frame.tolist(),
            "verdict": self.verdict,
            **({"params": self.params} if self.params else {}),
        }


def classify_margin(margin: float, tol: float) -> str:
    if margin > tol:
        return "positive"
    if margin >= -tol:
        return "nonnegative"
    return "indefinite"


def _threshold(R: DoubleForm, tol: float) -> float:
    return tol * max(1.0, R.norm())


def _report(name, R, margins, frames, tol, params=None) -> PositivityReport:
    if margins.size == 0:
        raise OutOfRange("at least one sample is required")
    at = int(np.argmin(margins))
    m = float(margins[at])
    return PositivityReport(name, int(margins.size), m, frames[at].copy(), classify_margin(m, _threshold(R, tol)), params)


def _p_curvature_margins(R: DoubleForm, p: int, frames: np.ndarray) -> np.ndarray:
    S = pq_curvature_tensor(R, p, 1).coeffs
    M = batch_minors(frames)
    return np.einsum("ci,ij,cj->c", M, S, M)


def min_p_curvature(R: DoubleForm, p: int, count: int = DEFAULT_SAMPLES, seed: int = 0,
                    tol: float = DEFAULT_TOL) -> PositivityReport:
    """Smallest p-curvature s_p over sampled p-planes (p = 1 is the Einstein curvature)."""
    _check_riemann(R)
    if not 0 <= p <= R.n - 2:
        raise OutOfRange(f"p-curvature needs 0 <= p <= n-2, got p={p}")
    frames = sample_frames(R.n, p, count, seed)
    return _report("p_curvature", R, _p_curvature_margins(R, p, frames), frames, tol, {"p": p})


def _plane_values(R: DoubleForm, frames: np.ndarray) -> dict:
    """R(e_a∧e_b, e_c∧e_d) for all index pairs of each frame, keyed by (a, b, c, d)."""
    k = frames.shape[1]
    pairs = list(combinations(range(k), 2))
    W = {ab: batch_minors(frames[:, list(ab), :]) for ab in pairs}
    RW = {ab: W[ab] @ R.coeffs for ab in pairs}
    return {ab + cd: np.einsum("ci,ci->c", RW[ab], W[cd]) for ab in pairs for cd in pairs}


def _isotropic_from(val) -> np.ndarray:
    K = lambda a, b: val[(a, b, a, b)]
    return K(0, 2) + K(0, 3) + K(1, 2) + K(1, 3) - 2.0 * np.abs(val[(0, 1, 2, 3)])


def _signed(val, a, b, c, d):
    s = 1.0
    if a > b:
        a, b, s = b, a, -s
    if c > d:
        c, d, s = d, c, -s
    return s * val[(a, b, c, d)]


def _condition_a_from(val, k: int) -> np.ndarray:
    K = lambda a, b: val[(min(a, b), max(a, b), min(a, b), max(a, b))]
    out = None
    if k == 3:
        roles = [(j, [x for x in range(3) if x != j]) for j in range(3)]
        terms = [K(j, r[0]) + K(j, r[1]) for j, r in roles]
    else:
        terms = []
        for i in range(4):
            for j in range(4):
                if i == j:
                    continue
                kk, ll = [x for x in range(4) if x not in (i, j)]
                terms.append(K(j, kk) + K(j, ll) - np.abs(_signed(val, i, j, kk, ll)))
    for t in terms:
        out = t if out is None else np.minimum(out, t)
    return out


def isotropic_check(R: DoubleForm, count: int = DEFAULT_SAMPLES, seed: int = 0,
                    tol: float = DEFAULT_TOL) -> PositivityReport:
    """min of K13 + K14 + K23 + K24 − 2|R1234| over sampled orthonormal 4-frames.

    The absolute value covers both orientations of the last pair.
    """
    _check_riemann(R)
    if R.n < 4:
        raise OutOfRange("the isotropic condition needs n >= 4")
    frames = sample_frames(R.n, 4, count, seed)
    return _report("isotropic", R, _isotropic_from(_plane_values(R, frames)), frames, tol)


def condition_A_check(R: DoubleForm, count: int = DEFAULT_SAMPLES, seed: int = 0,
                      tol: float = DEFAULT_TOL) -> PositivityReport:
    """min of K(e_j,e_k) + K(e_j,e_l) − |R(e_i,e_j,e_k,e_l)| over frames and role assignments.

    In dimension 3 there is no fourth frame vector, so the R-term is absent
    and the margin reduces to sums of two sectional curvatures.
    """
    _check_riemann(R)
    if R.n < 3:
        raise OutOfRange("condition (A) needs n >= 3")
    k = 4 if R.n >= 4 else 3
    frames = sample_frames(R.n, k, count, seed)
    return _report("condition_A", R, _condition_a_from(_plane_values(R, frames), k), frames, tol)


def h4_sign(R: DoubleForm, tol: float = DEFAULT_TOL) -> str:
    """'positive', 'zero' or 'negative' for h₄ (a pointwise scalar, no sampling)."""
    if R.n < 4:
        raise OutOfRange("h4 needs n >= 4")
    h4 = gbw_curvature(R, 2)
    thresh = _threshold(R, tol) * max(1.0, R.norm())
    if h4 > thresh:
        return "positive"
    if h4 < -thresh:
        return "negative"
    return "zero"


def replay(R: DoubleForm, report: PositivityReport, tol: float = 1e-9) -> float:
    """Re-evaluate a report's witness frame through the full-tensor route."""
    F = check_frame(report.witness_frame, R.n, tol)
    if report.condition == "p_curvature":
        p = report.params["p"]
        if F.shape[0] != p:
            raise InvalidFrame(f"witness has {F.shape[0]} vectors, expected {p}")
        return sectional(pq_curvature_tensor(R, p, 1), F, tol)
    T = np.einsum("abcd,ia,jb,kc,ld->ijkl", to_tensor(R), F, F, F, F)
    k = F.shape[0]
    val = {a + b: T[a + b] for a in combinations(range(k), 2) for b in combinations(range(k), 2)}
    if report.condition == "isotropic":
        return float(_isotropic_from(val))
    if report.condition == "condition_A":
        return float(_condition_a_from(val, k))
    raise OutOfRange(f"unknown condition {report.condition!r}")
