"""Acceptance criteria, one test each, at the stated tolerances.

Random inputs are rescaled to unit norm so that absolute thresholds such
as 1e-9 and 1e-10 measure rounding rather than the size of the draw.
Every test records a one-line verdict that is printed at the end of the run.
"""
from __future__ import annotations

import subprocess
import sys
import time
from math import factorial

import numpy as np

from doubleforms import algebra as alg
from doubleforms.algebra import CurvatureStructure, batch_minors
from doubleforms.decomposition import orthogonal_components, reconstruct
from doubleforms.invariants import (
    avez_h4q,
    einstein_lovelock,
    gbw_curvature,
    h4_component_formula,
    pq_curvature_tensor,
    weitzenboeck,
)
from doubleforms.models import (
    conformally_flat,
    constant_curvature,
    hypersurface,
    make_rng,
    random_curvature,
    random_double_form,
    random_einstein,
    random_symmetric,
)
from doubleforms.positivity import sample_frames

from conftest import ACCEPTANCE, esym, unit


def record(k: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[k] = (bool(ok), detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def unit_R(R) -> CurvatureStructure:
    return CurvatureStructure.certify(unit(R))


def rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def test_01_constant_curvature_table():
    start = time.perf_counter()
    worst = 0.0
    for n in (4, 5, 6, 7, 8):
        for lam in (-2.0, -1.0, 0.5, 1.0):
            R = constant_curvature(n, lam)
            for q in range(1, n // 2 + 1):
                exact = lam**q * factorial(n) / (2**q * factorial(n - 2 * q))
                worst = max(worst, rel(gbw_curvature(R, q), exact))
    elapsed = time.perf_counter() - start
    record(1, worst < 1e-9 and elapsed < 10, f"worst relative error {worst:.2e}, {elapsed:.2f} s")


def test_02_hypersurface_symmetric_functions():
    rng = np.random.default_rng(2002)
    worst = 0.0
    for t in range(50):
        n = 2 + t % 7
        lams = rng.uniform(-2.0, 2.0, size=n)
        R = hypersurface(lams)
        for q in range(1, n // 2 + 1):
            oracle = factorial(2 * q) / 2**q * esym(lams, 2 * q)
            worst = max(worst, abs(gbw_curvature(R, q) - oracle) / max(1.0, abs(oracle)))
    record(2, worst < 1e-8, f"50 vectors, n = 2..8, worst error {worst:.2e}")


def test_03_avez_equivalence():
    worst = 0.0
    for seed in range(200):
        R = unit_R(random_curvature(4, seed))
        by_trace = gbw_curvature(R, 2)
        by_norms = avez_h4q(R, 1)
        by_parts = h4_component_formula(R)
        worst = max(worst, abs(by_trace - by_norms), abs(by_trace - by_parts), abs(by_norms - by_parts))
    S4 = constant_curvature(4, 1.0)
    s4 = max(abs(v - 6.0) for v in (gbw_curvature(S4, 2), avez_h4q(S4, 1), h4_component_formula(S4)))
    record(3, worst < 1e-9 and s4 < 1e-12, f"200 inputs, worst pairwise gap {worst:.2e}; unit S^4 error {s4:.1e}")


def test_04_adjointness_and_hodge():
    rng = make_rng(4004)
    worst_adj = worst_hodge = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 7))
        p, q = int(rng.integers(0, n)), int(rng.integers(0, n))
        k = int(rng.integers(1, n - max(p, q) + 1))
        w = unit(random_double_form(n, p, q, rng))
        t = unit(random_double_form(n, p + k, q + k, rng))
        worst_adj = max(worst_adj, abs(alg.inner(alg.mul_g(w, k), t) - alg.inner(w, alg.contract(t, k))))
        # square forms carry no sign; mixed bidegrees pick up (−1)^{(p+q)(n+k+1)}
        s = unit(random_double_form(n, p, p, rng))
        worst_hodge = max(worst_hodge, alg.residual(alg.mul_g(s, k), alg.hodge(alg.contract(alg.hodge(s), k))))
        sign = (-1) ** ((p + q) * (n + k + 1))
        worst_hodge = max(worst_hodge, alg.residual(alg.mul_g(w, k), sign * alg.hodge(alg.contract(alg.hodge(w), k))))
    record(4, max(worst_adj, worst_hodge) < 1e-9,
           f"500 trials, adjointness {worst_adj:.2e}, g^k = *c^k* {worst_hodge:.2e}")


def _smallest_singular(n, p, q, k) -> float:
    M = alg.mul_g_matrix(n, p, q, k)
    norms = np.linalg.norm(M, axis=0)
    if np.any(norms == 0):
        return 0.0
    return float(np.linalg.svd(M / norms, compute_uv=False).min())


def test_05_injectivity_rank():
    smallest = np.inf
    cases = 0
    for n in range(1, 7):
        for p in range(n + 1):
            for q in range(n + 1):
                for k in range(1, n + 1):
                    if p + q + k < n + 1:
                        smallest = min(smallest, _smallest_singular(n, p, q, k))
                        cases += 1
    deficient = [(n, p, q, k) for n, p, q, k in [(4, 2, 2, 1), (5, 3, 2, 1), (6, 3, 3, 1), (3, 1, 1, 2)]
                 if _smallest_singular(n, p, q, k) < 1e-8]
    record(5, smallest > 1e-8 and len(deficient) > 0,
           f"{cases} cases inside the bound, min singular value {smallest:.3e}; rank deficit at {deficient[:2]}")


def test_06_decomposition_round_trip():
    rng = make_rng(6006)
    worst_rec = worst_tr = worst_ip = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 7))
        p = int(rng.integers(1, n // 2 + 1))
        w = unit(random_double_form(n, p, p, rng, symmetric=True))
        parts = orthogonal_components(w)
        worst_rec = max(worst_rec, (reconstruct(parts) - w).norm())
        for k in range(1, p + 1):
            worst_tr = max(worst_tr, alg.contract(parts[k]).norm())
        terms = parts.terms()
        for i in range(len(terms)):
            for j in range(i + 1, len(terms)):
                worst_ip = max(worst_ip, abs(alg.inner(terms[i], terms[j])))
    record(6, max(worst_rec, worst_tr, worst_ip) < 1e-10,
           f"200 forms, reconstruction {worst_rec:.2e}, trace {worst_tr:.2e}, cross inner {worst_ip:.2e}")


def test_07_einstein_sign_theorem():
    rng = make_rng(7007)
    lowest = np.inf
    small_with_large_norm = 0
    for t in range(200):
        n = 4 + t % 5
        E = random_einstein(n, int(rng.integers(2**31)))
        E = unit_R(E)
        h4 = gbw_curvature(E, 2)
        lowest = min(lowest, h4)
        if h4 < 1e-9 and E.norm() >= 1e-6:
            small_with_large_norm += 1
    # the equality case: the flat structure
    flat = gbw_curvature(constant_curvature(6, 0.0), 2)
    highest = -np.inf
    for t in range(200):
        n = 4 + t % 5
        h = random_symmetric(n, rng).coeffs
        h = h - np.trace(h) / n * np.eye(n)
        highest = max(highest, gbw_curvature(unit_R(conformally_flat(h)), 2))
    ok = lowest >= -1e-9 and small_with_large_norm == 0 and flat == 0.0 and highest <= 1e-9
    record(7, ok, f"Einstein min h4 {lowest:.3e} ({small_with_large_norm} near-zero), "
                  f"traceless conformally flat max h4 {highest:.3e}")


def test_08_weitzenboeck_suite():
    rng = make_rng(8008)
    worst = 0.0
    for t in range(200):
        n = 4 + t % 5
        R = unit_R(random_curvature(n, int(rng.integers(2**31))))
        c2 = alg.contract(R, 2).value
        frames = sample_frames(n, n, 50, int(rng.integers(2**31)))
        # K(e_j, e_k) for every pair of every frame
        K = np.zeros((50, n, n))
        for j in range(n):
            for k in range(j + 1, n):
                m = batch_minors(frames[:, [j, k], :])
                K[:, j, k] = K[:, k, j] = np.einsum("ci,ij,cj->c", m, R.coeffs, m)
        for p in range(2, n - 1):
            N = weitzenboeck(R, p)
            worst = max(worst, alg.residual(alg.hodge(N), weitzenboeck(R, n - p)))
            exact = p * factorial(n - 2) / factorial(n - p - 1) * c2
            worst = max(worst, abs(alg.contract(N, p).value - exact) / max(1.0, abs(exact)))
            m = batch_minors(frames[:, :p, :])
            lhs = np.einsum("ci,ij,cj->c", m, N.coeffs, m)
            split = K[:, :p, p:].sum(axis=(1, 2))
            worst = max(worst, float(np.abs(lhs - split).max()))
    record(8, worst < 1e-8, f"200 inputs, n = 4..8, worst residual {worst:.2e}")


def test_09_lovelock_degeneracy():
    worst = 0.0
    for n in (4, 6):
        for seed in range(20):
            R = unit_R(random_curvature(n, seed))
            worst = max(worst, einstein_lovelock(R, n // 2).norm())
    record(9, worst < 1e-9, f"n = 4, 6 with 20 inputs each, max |T_n| {worst:.2e}")


def _s(R, p, frames):
    m = batch_minors(frames)
    return np.einsum("ci,ij,cj->c", m, pq_curvature_tensor(R, p, 1).coeffs, m)


def test_10_p_curvature_characterizations():
    rng = make_rng(1010)
    spread = value_err = sum_err = 0.0
    for t in range(20):
        n = 4 + t % 5
        E = unit_R(random_einstein(n, int(rng.integers(2**31))))
        lam = float(rng.uniform(-2, 2))
        C = constant_curvature(n, lam)
        frames = sample_frames(n, n, 100, int(rng.integers(2**31)))
        for p in range(2, n - 1):
            diff = _s(E, p, frames[:, :p]) - _s(E, n - p, frames[:, p:])
            spread = max(spread, float(np.ptp(diff)))
            value_err = max(value_err, float(np.abs(diff - (n - 2 * p) / (2 * n) * alg.contract(E, 2).value).max()))
            total = _s(C, p, frames[:, :p]) + _s(C, n - p, frames[:, p:])
            quoted = (2 * p * (p - 1) + (n - 2 * p) * (n - 1)) / (2 * n * (n - 1)) * alg.contract(C, 2).value
            sum_err = max(sum_err, float(np.abs(total - quoted).max()) / max(1.0, abs(quoted)))
    record(10, spread < 1e-8 and value_err < 1e-8 and sum_err < 1e-9,
           f"Einstein spread {spread:.2e}, value error {value_err:.2e}; constant-curvature sum error {sum_err:.2e}")


def test_11_determinism(tmp_path):
    outs = [tmp_path / "a.json", tmp_path / "b.json"]
    start = time.perf_counter()
    for out in outs:
        res = subprocess.run([sys.executable, "-m", "doubleforms", "check", "--suite", "all", "--seed", "7",
                              "--out", str(out)], capture_output=True, text=True)
        assert res.returncode in (0, 1), res.stderr
    elapsed = (time.perf_counter() - start) / 2
    same = outs[0].read_bytes() == outs[1].read_bytes()
    record(11, same and elapsed < 300, f"byte-identical reports: {same}, {elapsed:.1f} s per run")
