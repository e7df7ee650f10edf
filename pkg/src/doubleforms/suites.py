"""Seeded randomized property suites over the whole package.

Each property draws its own inputs from a generator derived from the run
seed and the property name, and returns the worst residual it saw.  A
property passes when that residual is at most the configured tolerance,
so ``tol = 0`` documents that floating point never reaches exact equality.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass
from math import factorial
from typing import Callable

import numpy as np

from . import algebra as alg
from .decomposition import (
    curvature_components,
    hodge_via_components,
    hodge_via_contractions,
    orthogonal_components,
    reconstruct,
)
from .errors import ConfigError
from .invariants import (
    avez_h4q,
    einstein_lovelock,
    gbw_routes,
    h4_component_formula,
    p_curvature,
    sectional,
    weitzenboeck,
    weitzenboeck_components,
)
from .models import (
    conformally_flat,
    constant_curvature,
    direct_sum,
    hypersurface,
    random_bianchi,
    random_curvature,
    random_double_form,
    random_einstein,
    random_symmetric,
)
from .positivity import (
    condition_A_check,
    h4_sign,
    isotropic_check,
    min_p_curvature,
    replay,
    sample_frames,
)

SUITES = ("algebra", "decomposition", "invariants", "positivity")


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    tol: float = 1e-9
    samples: int = 200


@dataclass(frozen=True)
class PropertyResult:
    suite: str
    name: str
    worst: float
    trials: int
    passed: bool

    def to_dict(self) -> dict:
        return {"suite": self.suite, "name": self.name, "worst_residual": self.worst,
                "trials": self.trials, "passed": self.passed}


_REGISTRY: dict[str, list[tuple[str, Callable]]] = {s: [] for s in SUITES}


def prop(suite: str, name: str):
    def wrap(fn):
        _REGISTRY[suite].append((name, fn))
        return fn
    return wrap


def _rng(seed: int, name: str) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64([int(seed), zlib.crc32(name.encode())]))


def _unit(w: alg.DoubleForm) -> alg.DoubleForm:
    s = w.norm()
    return w / s if s > 0 else w


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------------------
# algebra


@prop("algebra", "product_graded_commutative")
def _commutative(rng, cfg):
    worst = 0.0
    for _ in range(60):
        n = int(rng.integers(2, 6))
        p, q, r, s = (int(x) for x in rng.integers(0, 3, size=4))
        a = random_double_form(n, p, q, rng)
        b = random_double_form(n, r, s, rng)
        sign = (-1) ** (p * r + q * s)
        worst = max(worst, alg.residual(a * b, sign * (b * a)))
    return worst, 60


@prop("algebra", "product_associative")
def _associative(rng, cfg):
    worst = 0.0
    for _ in range(40):
        n = int(rng.integers(2, 6))
        a, b, c = (random_double_form(n, *(int(x) for x in rng.integers(0, 2, size=2)), rng) for _ in range(3))
        worst = max(worst, alg.residual((a * b) * c, a * (b * c)))
    return worst, 40


@prop("algebra", "g_power_determinant")
def _gk_det(rng, cfg):
    worst = 0.0
    for _ in range(40):
        n = int(rng.integers(1, 6))
        k = int(rng.integers(0, n + 1))
        X = rng.standard_normal((k, n))
        Y = rng.standard_normal((k, n))
        gk = alg.power(alg.metric(n), k)
        worst = max(worst, alg.residual(gk, alg.g_power(n, k)))
        worst = max(worst, _rel(gk.evaluate(X, Y), factorial(k) * np.linalg.det(X @ Y.T) if k else 1.0))
    return worst, 40


def _adjoint_trial(rng):
    n = int(rng.integers(1, 7))
    p, q = int(rng.integers(0, n + 1)), int(rng.integers(0, n + 1))
    k = int(rng.integers(0, n - max(p, q) + 1))
    w = random_double_form(n, p, q, rng)
    t = random_double_form(n, p + k, q + k, rng)
    return abs(alg.inner(alg.mul_g(w, k), t) - alg.inner(w, alg.contract(t, k))) / max(1.0, w.norm() * t.norm())


@prop("algebra", "g_c_adjoint")
def _adjoint(rng, cfg):
    return max(_adjoint_trial(rng) for _ in range(150)), 150


def _hodge_trial(rng):
    # the sign is +1 on (p, p) forms and whenever p + q is even
    n = int(rng.integers(1, 7))
    p, q = int(rng.integers(0, n)), int(rng.integers(0, n))
    k = int(rng.integers(1, n - max(p, q) + 1))
    w = random_double_form(n, p, q, rng)
    sign = (-1) ** ((p + q) * (n + k + 1))
    return alg.residual(alg.mul_g(w, k), sign * alg.hodge(alg.contract(alg.hodge(w), k)))


@prop("algebra", "g_equals_star_c_star")
def _hodge_gc(rng, cfg):
    return max(_hodge_trial(rng) for _ in range(150)), 150


@prop("algebra", "double_star_sign")
def _double_star(rng, cfg):
    worst = 0.0
    for _ in range(60):
        n = int(rng.integers(1, 7))
        p, q = int(rng.integers(0, n + 1)), int(rng.integers(0, n + 1))
        w = random_double_form(n, p, q, rng)
        sign = (-1) ** ((p + q) * (n - p - q))
        worst = max(worst, alg.residual(alg.hodge(alg.hodge(w)), sign * w))
    return worst, 60


@prop("algebra", "bianchi_closed_under_product")
def _bianchi_product(rng, cfg):
    worst = 0.0
    for _ in range(30):
        n = int(rng.integers(3, 6))
        a = random_bianchi(n, 1, rng)
        b = random_bianchi(n, int(rng.integers(1, 3)), rng)
        worst = max(worst, alg.bianchi_residual(_unit(a * b)), alg.bianchi_residual(alg.metric(n) * _unit(b)))
    return worst, 30


@prop("algebra", "g_multiplication_injective")
def _injective(rng, cfg):
    # rank deficit below the bound p + q + k <= n, reported as a shortfall of the smallest singular value
    worst = 0.0
    trials = 0
    for n in range(1, 6):
        for p in range(n + 1):
            for q in range(n + 1):
                for k in range(1, n + 1):
                    if p + q + k > n or max(p, q) + k > n:
                        continue
                    M = alg.mul_g_matrix(n, p, q, k)
                    M = M / np.linalg.norm(M, axis=0)
                    smin = np.linalg.svd(M, compute_uv=False).min()
                    worst = max(worst, max(0.0, 1e-8 - smin))
                    trials += 1
    return worst, trials


# ---------------------------------------------------------------------------
# decomposition


def _random_pp(rng, n_max=6):
    n = int(rng.integers(1, n_max + 1))
    p = int(rng.integers(0, n // 2 + 1))
    return random_double_form(n, p, p, rng, symmetric=bool(rng.integers(0, 2)))


@prop("decomposition", "round_trip")
def _round_trip(rng, cfg):
    worst = 0.0
    for _ in range(80):
        w = _unit(_random_pp(rng))
        worst = max(worst, alg.residual(reconstruct(orthogonal_components(w)), w))
    return worst, 80


@prop("decomposition", "components_trace_free")
def _trace_free(rng, cfg):
    worst = 0.0
    for _ in range(80):
        w = _unit(_random_pp(rng))
        parts = orthogonal_components(w)
        for k in range(1, w.p + 1):
            worst = max(worst, alg.contract(parts[k]).norm())
    return worst, 80


@prop("decomposition", "components_orthogonal")
def _orthogonal(rng, cfg):
    worst = 0.0
    for _ in range(80):
        w = _unit(_random_pp(rng))
        terms = orthogonal_components(w).terms()
        for i in range(len(terms)):
            for j in range(i + 1, len(terms)):
                worst = max(worst, abs(alg.inner(terms[i], terms[j])))
    return worst, 80


@prop("decomposition", "hodge_closed_forms")
def _hodge_closed(rng, cfg):
    worst = 0.0
    for _ in range(40):
        n = int(rng.integers(2, 7))
        p = int(rng.integers(1, n + 1))
        w = _unit(random_bianchi(n, p, rng))
        star = alg.hodge(w)
        worst = max(worst, alg.residual(hodge_via_contractions(w), star))
        if 2 * p <= n:
            worst = max(worst, alg.residual(hodge_via_components(w), star))
    return worst, 40


@prop("decomposition", "dual_route_components")
def _dual_route(rng, cfg):
    worst = 0.0
    for _ in range(30):
        n = int(rng.integers(3, 7))
        p = int(rng.integers(n // 2 + 1, n + 1))
        w = _unit(random_bianchi(n, p, rng))
        parts = curvature_components(w)
        worst = max(worst, alg.residual(reconstruct(parts), w))
        for k in range(1, p + 1):
            worst = max(worst, alg.contract(parts[k]).norm())
    return worst, 30


# ---------------------------------------------------------------------------
# invariants


def _random_R(rng, n_lo=2, n_hi=8) -> alg.CurvatureStructure:
    n = int(rng.integers(n_lo, n_hi + 1))
    return alg.CurvatureStructure.certify(_unit(random_curvature(n, int(rng.integers(2**31)))))


@prop("invariants", "gbw_two_routes")
def _gbw(rng, cfg):
    worst = 0.0
    for _ in range(25):
        R = _random_R(rng)
        for q in range(1, R.n // 2 + 1):
            worst = max(worst, gbw_routes(R, q)[2])
    return worst, 25


@prop("invariants", "constant_curvature_values")
def _const(rng, cfg):
    worst = 0.0
    for n in range(2, 9):
        lam = float(rng.uniform(-2, 2))
        R = constant_curvature(n, lam)
        for q in range(1, n // 2 + 1):
            exact = lam**q * factorial(n) / (2**q * factorial(n - 2 * q))
            worst = max(worst, _rel(gbw_routes(R, q)[0], exact))
    return worst, 7


@prop("invariants", "hypersurface_symmetric_functions")
def _hyper(rng, cfg):
    worst = 0.0
    for _ in range(15):
        n = int(rng.integers(2, 9))
        lams = rng.uniform(-1.5, 1.5, size=n)
        R = hypersurface(lams)
        coeffs = np.poly(lams)  # coefficients of Π(x − λ_i) carry the elementary symmetric functions
        for q in range(1, n // 2 + 1):
            e2q = coeffs[2 * q]
            worst = max(worst, _rel(gbw_routes(R, q)[0], factorial(2 * q) / 2**q * e2q))
    return worst, 15


@prop("invariants", "avez_formulas")
def _avez(rng, cfg):
    worst = 0.0
    for _ in range(25):
        R = _random_R(rng, 4, 8)
        h4 = gbw_routes(R, 2)[0]
        worst = max(worst, _rel(h4_component_formula(R), h4))
        if R.n in (4, 8):
            hn = gbw_routes(R, R.n // 2)[0]
            worst = max(worst, _rel(avez_h4q(R, R.n // 4), hn))
    return worst, 25


@prop("invariants", "einstein_h4_nonnegative")
def _einstein_sign(rng, cfg):
    worst = 0.0
    for _ in range(25):
        n = int(rng.integers(4, 9))
        E = random_einstein(n, int(rng.integers(2**31)))
        E = _unit(E)
        worst = max(worst, max(0.0, -gbw_routes(alg.CurvatureStructure.certify(E), 2)[0]))
    return worst, 25


@prop("invariants", "traceless_conformally_flat_h4_nonpositive")
def _cf_sign(rng, cfg):
    worst = 0.0
    for _ in range(25):
        n = int(rng.integers(4, 9))
        h = random_symmetric(n, rng).coeffs
        h = h - np.trace(h) / n * np.eye(n)
        R = alg.CurvatureStructure.certify(_unit(conformally_flat(h)))
        worst = max(worst, max(0.0, gbw_routes(R, 2)[0]))
    return worst, 25


@prop("invariants", "lovelock_top_degree_vanishes")
def _lovelock(rng, cfg):
    worst = 0.0
    for n in (2, 4, 6, 8):
        R = _random_R(rng, n, n)
        worst = max(worst, einstein_lovelock(R, n // 2).norm())
    return worst, 4


@prop("invariants", "weitzenboeck_identities")
def _weitz(rng, cfg):
    worst = 0.0
    for _ in range(12):
        R = _random_R(rng, 4, 8)
        n = R.n
        c2 = alg.contract(R, 2).value
        frames = sample_frames(n, n, 10, int(rng.integers(2**31)))
        for p in range(2, n - 1):
            N = weitzenboeck(R, p)
            worst = max(worst, alg.residual(alg.hodge(N), weitzenboeck(R, n - p)))
            exact = p * factorial(n - 2) / factorial(n - p - 1) * c2
            worst = max(worst, _rel(alg.contract(N, p).value, exact))
            worst = max(worst, weitzenboeck_components(R, p).residual)
            for F in frames:
                split = sum(sectional(R, F[[j, k]]) for j in range(p) for k in range(p, n))
                worst = max(worst, _rel(sectional(N, F[:p]), split))
    return worst, 12


@prop("invariants", "p_curvature_theorem")
def _pcurv(rng, cfg):
    worst = 0.0
    trials = 0
    for _ in range(8):
        n = int(rng.integers(4, 9))
        E = alg.CurvatureStructure.certify(_unit(random_einstein(n, int(rng.integers(2**31)))))
        lam = float(rng.uniform(-2, 2))
        C = constant_curvature(n, lam)
        frames = sample_frames(n, n, 10, int(rng.integers(2**31)))
        for p in range(2, n - 1):
            ce, cc = alg.contract(E, 2).value, alg.contract(C, 2).value
            diff = (n - 2 * p) / (2 * n) * ce
            total = (2 * p * (p - 1) + (n - 2 * p) * (n - 1)) / (2 * n * (n - 1)) * cc
            for F in frames:
                worst = max(worst, _rel(p_curvature(E, p, F[:p]) - p_curvature(E, n - p, F[p:]), diff))
                worst = max(worst, _rel(p_curvature(C, p, F[:p]) + p_curvature(C, n - p, F[p:]), total))
                trials += 1
    return worst, trials


@prop("invariants", "conformally_flat_half_dimension")
def _cf_half(rng, cfg):
    worst = 0.0
    for p in (2, 3, 4):
        n = 2 * p
        h = random_symmetric(n, rng).coeffs
        R = alg.CurvatureStructure.certify(conformally_flat(h))
        const = (n - 2) / (4 * (n - 1)) * alg.contract(R, 2).value
        for F in sample_frames(n, n, 10, int(rng.integers(2**31))):
            worst = max(worst, _rel(p_curvature(R, p, F[:p]) + p_curvature(R, p, F[p:]), const))
    return worst, 3


# ---------------------------------------------------------------------------
# positivity


@prop("positivity", "frames_orthonormal")
def _frames(rng, cfg):
    worst = 0.0
    for n in range(1, 9):
        for k in (1, n // 2, n):
            F = sample_frames(n, k, 50, int(rng.integers(2**31)))
            worst = max(worst, float(np.abs(F @ F.transpose(0, 2, 1) - np.eye(k)).max(initial=0.0)))
    return worst, 24


def _zoo(rng):
    seed = int(rng.integers(2**31))
    yield constant_curvature(5, 1.0)
    yield constant_curvature(5, -0.5)
    yield hypersurface(rng.uniform(0.2, 1.5, size=5))
    yield direct_sum(constant_curvature(2, 1.0), constant_curvature(3, 1.0))
    yield conformally_flat(random_symmetric(5, rng).coeffs)
    yield random_curvature(5, seed)
    yield random_einstein(6, seed)


@prop("positivity", "witness_replay")
def _replay(rng, cfg):
    worst = 0.0
    count = max(1, cfg.samples)
    trials = 0
    for R in _zoo(rng):
        seed = int(rng.integers(2**31))
        for rep in (min_p_curvature(R, 2, count, seed), isotropic_check(R, count, seed), condition_A_check(R, count, seed)):
            worst = max(worst, abs(replay(R, rep) - rep.min_margin) / max(1.0, R.norm()))
            trials += 1
    return worst, trials


@prop("positivity", "monotone_refinement")
def _monotone(rng, cfg):
    worst = 0.0
    count = max(1, cfg.samples // 2)
    trials = 0
    for R in _zoo(rng):
        seed = int(rng.integers(2**31))
        for check in (isotropic_check, condition_A_check):
            a = check(R, count, seed).min_margin
            b = check(R, 2 * count, seed).min_margin
            worst = max(worst, max(0.0, b - a))
            trials += 1
    return worst, trials


@prop("positivity", "nonnegative_p_curvature_implies_h4")
def _implication(rng, cfg):
    # one-directional filter: only models passing the sampled hypothesis are examined
    violations = 0
    count = max(1, cfg.samples)
    trials = 0
    for R in _zoo(rng):
        n = R.n
        seed = int(rng.integers(2**31))
        for p in range((n + 1) // 2, n - 1):
            if min_p_curvature(R, p, count, seed).verdict != "indefinite":
                trials += 1
                violations += h4_sign(R) == "negative"
    return float(violations), trials


@prop("positivity", "constant_curvature_margins")
def _const_margins(rng, cfg):
    worst = 0.0
    for n in (4, 5, 6):
        lam = float(rng.uniform(0.1, 2.0))
        C = constant_curvature(n, lam)
        seed = int(rng.integers(2**31))
        count = max(1, cfg.samples // 4)
        worst = max(worst, _rel(isotropic_check(C, count, seed).min_margin, 4 * lam))
        worst = max(worst, _rel(condition_A_check(C, count, seed).min_margin, 2 * lam))
        for p in range(0, n - 1):
            exact = lam * (n - p) * (n - p - 1) / 2
            worst = max(worst, _rel(min_p_curvature(C, p, count, seed).min_margin, exact))
    return worst, 3


# ---------------------------------------------------------------------------


def suite_names(selector: str) -> list[str]:
    if selector == "all":
        return list(SUITES)
    if selector not in SUITES:
        raise ConfigError(f"unknown suite {selector!r}; expected one of {SUITES + ('all',)}")
    return [selector]


def run_suite(selector: str, cfg: SuiteConfig = SuiteConfig()) -> list[PropertyResult]:
    if cfg.tol < 0:
        raise ConfigError("tolerance must be non-negative")
    out = []
    for suite in suite_names(selector):
        for name, fn in _REGISTRY[suite]:
            worst, trials = fn(_rng(cfg.seed, f"{suite}.{name}"), cfg)
            worst = float(worst)
            out.append(PropertyResult(suite, name, worst, int(trials), worst <= cfg.tol))
    return out


def properties(selector: str = "all") -> list[tuple[str, str]]:
    return [(s, name) for s in suite_names(selector) for name, _ in _REGISTRY[s]]


__all__ = ["SUITES", "SuiteConfig", "PropertyResult", "run_suite", "suite_names", "properties"]
