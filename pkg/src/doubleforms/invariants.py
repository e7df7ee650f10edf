"""Curvature invariants built from a Riemann-type structure R ∈ C_1^2.

Gauss–Kronecker powers R^q, Gauss–Bonnet–Weyl curvatures h_{2q},
Einstein–Lovelock tensors T_{2q}, (p,q)-curvature tensors, Weitzenböck
operators, Avez-type formulas for h_{4q}, and Einstein / conformal-class
classifiers.  Sectional curvatures use ω(e_P, e_P) with no normalising
denominator, so a constant-curvature R gives K = λ.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    CurvatureStructure,
    DoubleForm,
    contract,
    g_power,
    hodge,
    inner,
    kn_product,
    metric,
    minors,
    power,
    require_bianchi,
)
from .decomposition import ComponentList, curvature_components, orthogonal_components, reconstruct
from .errors import DegreeError, InvalidFrame, OutOfRange


def _check_riemann(R: DoubleForm, tol: float = DEFAULT_TOL) -> None:
    if R.bidegree != (2, 2):
        raise DegreeError(f"expected a (2, 2) curvature structure, got {R.bidegree}")
    require_bianchi(R, tol)


def _rel(num: float, scale: float) -> float:
    return num / max(1.0, abs(scale))


def gauss_kronecker(R: DoubleForm, q: int) -> CurvatureStructure:
    """R^q, the q-fold Kulkarni–Nomizu power of R."""
    _check_riemann(R)
    if not 0 <= 2 * q <= R.n:
        raise OutOfRange(f"R^{q} needs 2q <= n = {R.n}")
    return CurvatureStructure.certify(power(R, q))


def gbw_routes(R: DoubleForm, q: int) -> tuple[float, float, float]:
    """h_{2q} by full contraction and by the Hodge dual, plus their relative gap."""
    Rq = gauss_kronecker(R, q)
    n = R.n
    by_trace = contract(Rq, 2 * q).value / factorial(2 * q)
    by_dual = hodge(kn_product(g_power(n, n - 2 * q), Rq)).value / factorial(n - 2 * q)
    return by_trace, by_dual, _rel(abs(by_trace - by_dual), max(abs(by_trace), abs(by_dual)))


def gbw_curvature(R: DoubleForm, q: int) -> float:
    """h_{2q} = c^{2q} R^q / (2q)!."""
    return gbw_routes(R, q)[0]


def einstein_lovelock(R: DoubleForm, q: int) -> DoubleForm:
    """T_{2q} = h_{2q} g − c^{2q-1} R^q / (2q-1)!."""
    if q < 1:
        raise OutOfRange("Einstein–Lovelock tensors start at q = 1")
    Rq = gauss_kronecker(R, q)
    h = contract(Rq, 2 * q).value / factorial(2 * q)
    return h * metric(R.n) - contract(Rq, 2 * q - 1) / factorial(2 * q - 1)


def pq_curvature_tensor(R: DoubleForm, p: int, q: int) -> CurvatureStructure:
    """R_(p,q) = *(g^{n-2q-p} R^q) / (n-2q-p)!."""
    n = R.n
    if not (1 <= q and 2 * q <= n and 0 <= p <= n - 2 * q):
        raise OutOfRange(f"(p,q)=({p},{q}) outside 1 <= q <= n/2, 0 <= p <= n-2q for n={n}")
    m = n - 2 * q - p
    Rq = gauss_kronecker(R, q)
    return CurvatureStructure.certify(hodge(kn_product(g_power(n, m), Rq)) / factorial(m))


def check_frame(frame, n: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    F = np.asarray(frame, dtype=float)
    if F.size == 0:
        return F.reshape(0, n)
    F = np.atleast_2d(F)
    if F.shape[1] != n:
        raise InvalidFrame(f"frame vectors have length {F.shape[1]}, expected {n}")
    if np.abs(F @ F.T - np.eye(F.shape[0])).max() > tol:
        raise InvalidFrame("frame is not orthonormal")
    return F


def sectional(w: DoubleForm, frame, tol: float = DEFAULT_TOL) -> float:
    """ω(e_1∧…∧e_p, e_1∧…∧e_p) at an orthonormal p-frame (rows of ``frame``)."""
    if w.p != w.q:
        raise DegreeError(f"sectional curvature needs a (p, p) form, got {w.bidegree}")
    F = check_frame(frame, w.n, tol)
    if F.shape[0] != w.p:
        raise InvalidFrame(f"a D^({w.p},{w.p}) form needs a {w.p}-frame, got {F.shape[0]} vectors")
    m = minors(F)
    return float(m @ w.coeffs @ m)


def p_curvature(R: DoubleForm, p: int, plane) -> float:
    """s_p(P), the sectional curvature of R_(p,1) at the p-plane P."""
    if not 0 <= p <= R.n - 2:
        raise OutOfRange(f"p-curvature needs 0 <= p <= n-2, got p={p}")
    return sectional(pq_curvature_tensor(R, p, 1), plane)


def weitzenboeck(R: DoubleForm, p: int) -> CurvatureStructure:
    """Curvature term N_p = {g cR/(p-1) − 2R} g^{p-2}/(p-2)! on p-forms (cR when p = 1)."""
    _check_riemann(R)
    n = R.n
    if p == 1:
        return CurvatureStructure.certify(contract(R, 1))
    if not 2 <= p <= n - 2:
        raise OutOfRange(f"Weitzenböck operator needs 1 <= p <= n-2, got p={p}")
    inner_part = kn_product(metric(n), contract(R, 1)) / (p - 1) - 2 * R
    return CurvatureStructure.certify(kn_product(inner_part, g_power(n, p - 2)) / factorial(p - 2))


def weitzenboeck_components(R: DoubleForm, p: int) -> ComponentList:
    """N_p = 2/(p−2)! · {−g^{p-2}ω₂ + g^{p-1}·(n−2p)/(2(p−1))·ω₁ + g^p·(n−p)/(p−1)·ω₀}.

    The overall 2/(p−2)! is what expanding the closed form of
    :func:`weitzenboeck` over R = ω₂ + gω₁ + g²ω₀ produces.  The
    ``residual`` field holds the relative gap to :func:`weitzenboeck`.
    """
    n = R.n
    if not 2 <= p <= n - 2:
        raise OutOfRange(f"needs 2 <= p <= n-2, got p={p}")
    parts = orthogonal_components(R)
    scale = 2.0 / factorial(p - 2)
    coeff = {2: -scale, 1: scale * (n - 2 * p) / (2 * (p - 1)), 0: scale * (n - p) / (p - 1)}
    comps = [coeff[k] * parts[k] if k <= 2 else DoubleForm.zeros(n, k, k) for k in range(p, -1, -1)]
    out = ComponentList(n, p, comps)
    direct = weitzenboeck(R, p)
    gap = (reconstruct(out) - direct).norm() / max(1.0, direct.norm())
    return ComponentList(n, p, comps, residual=gap)


def weitzenboeck_conformally_flat(R: DoubleForm, p: int) -> DoubleForm:
    """N_{(n+p)/2} rebuilt from the p-curvature tensor of a conformally flat R.

    N_{(n+p)/2} = p! / ((n−p−1) ((n+p)/2 − 1)!) · g^{(n−p)/2} R_(p,1).
    """
    n = R.n
    if (n - p) % 2 or p < 0 or p > n - 2:
        raise OutOfRange(f"needs n − p even and 0 <= p <= n − 2 (n={n}, p={p})")
    top = (n + p) // 2
    if not 2 <= top <= n - 2:
        raise OutOfRange(f"N_{top} is outside 2 <= p <= n − 2 for n={n}")
    coef = factorial(p) / ((n - p - 1) * factorial(top - 1))
    return coef * kn_product(g_power(n, (n - p) // 2), pq_curvature_tensor(R, p, 1))


def avez_h4q(R: DoubleForm, q: int) -> float:
    """h_{4q} = Σ_{r=0}^{2q} (−1)^r/(r!)² ‖c^r R^q‖², valid when n = 4q."""
    if R.n != 4 * q:
        raise OutOfRange(f"the alternating norm formula needs n = 4q (n={R.n}, q={q})")
    Rq = gauss_kronecker(R, q)
    total = 0.0
    for r in range(2 * q + 1):
        c = contract(Rq, r)
        total += (-1) ** r / factorial(r) ** 2 * inner(c, c)
    return total


def h4q_component_formula(R: DoubleForm, q: int) -> float:
    """h_{4q} = 1/(n−4q)! Σ_i (−1)^i (n−2i)! ‖(R^q)_i‖² for n ≥ 4q."""
    n = R.n
    if q < 1 or n < 4 * q:
        raise OutOfRange(f"needs n >= 4q (n={n}, q={q})")
    parts = orthogonal_components(gauss_kronecker(R, q))
    total = sum((-1) ** i * factorial(n - 2 * i) * inner(parts[i], parts[i]) for i in range(2 * q + 1))
    return total / factorial(n - 4 * q)


def h4_component_formula(R: DoubleForm) -> float:
    """(n−4)! h₄ = n!‖ω₀‖² − (n−2)!‖ω₁‖² + (n−4)!‖ω₂‖²."""
    if R.n < 4:
        raise OutOfRange("the h4 component formula needs n >= 4")
    return h4q_component_formula(R, 1)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a classifier: ``holds`` plus the residuals behind it."""

    name: str
    holds: bool
    residual: float
    tol: float
    details: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.tol - self.residual


def _relative_norm(x: DoubleForm, scale: float) -> float:
    return 0.0 if scale == 0.0 else x.norm() / scale


def classify_einstein(R: DoubleForm, p: int, q: int, tol: float = 1e-8) -> Verdict:
    """Whether c^{2q−p}(R^q) is proportional to g^p.

    Route one fits λ by least squares; route two checks that the components
    ω_i of R^q vanish for 1 ≤ i ≤ min(p, n−p).
    """
    n = R.n
    if not 1 <= p < 2 * q <= n:
        raise OutOfRange(f"needs 1 <= p < 2q <= n (p={p}, q={q}, n={n})")
    Rq = gauss_kronecker(R, q)
    X = contract(Rq, 2 * q - p)
    gp = g_power(n, p)
    lam = inner(X, gp) / inner(gp, gp)
    fit = _relative_norm(X - lam * gp, X.norm())

    parts = curvature_components(Rq)
    scale = Rq.norm()
    comp = max((_relative_norm(kn_product(g_power(n, 2 * q - i), parts[i]), scale)
                for i in range(1, min(p, n - p) + 1)), default=0.0)
    by_fit, by_comp = fit <= tol, comp <= tol
    return Verdict(
        name=f"einstein(p={p},q={q})",
        holds=by_fit,
        residual=fit,
        tol=tol,
        details={"lambda": lam, "component_residual": comp, "agree": by_fit == by_comp},
    )


def classify_conformal_class(R: DoubleForm, p: int, q: int, tol: float = 1e-8) -> Verdict:
    """Class C(p, q): R^q divisible by g^p, i.e. ω_i(R^q) = 0 for 2q−p < i ≤ 2q."""
    n = R.n
    if not (1 <= q and 2 * q <= n and 1 <= p <= 2 * q):
        raise OutOfRange(f"needs 1 <= p <= 2q <= n (p={p}, q={q}, n={n})")
    Rq = gauss_kronecker(R, q)
    parts = curvature_components(Rq)
    scale = Rq.norm()
    res = max((_relative_norm(kn_product(g_power(n, 2 * q - i), parts[i]), scale)
               for i in range(2 * q - p + 1, 2 * q + 1)), default=0.0)
    return Verdict(name=f"conformal_class(p={p},q={q})", holds=res <= tol, residual=res, tol=tol)


@dataclass
class InvariantReport:
    n: int
    h: dict[int, float]
    h_dual_residual: float
    lovelock: dict[int, tuple[float, float]]
    avez_residual: float | None
    classifiers: dict[str, Verdict]
    tol: float

    @property
    def passed(self) -> bool:
        checks = [self.h_dual_residual]
        if self.avez_residual is not None:
            checks.append(self.avez_residual)
        return all(c <= self.tol for c in checks)


def avez_residual(R: DoubleForm) -> float | None:
    """Largest relative gap between h₄ (or h_n at n = 4q) and its norm formulas."""
    n = R.n
    gaps = []
    if n >= 4:
        h4 = gbw_curvature(R, 2)
        gaps.append(_rel(abs(h4_component_formula(R) - h4), h4))
    if n % 4 == 0 and n >= 4:
        hn = gbw_curvature(R, n // 2)
        gaps.append(_rel(abs(avez_h4q(R, n // 4) - hn), hn))
    return max(gaps) if gaps else None


def invariant_report(R: DoubleForm, q_max: int | None = None, p_list=(1,), tol: float = DEFAULT_TOL) -> InvariantReport:
    _check_riemann(R, tol=max(tol, DEFAULT_TOL))
    n = R.n
    q_max = n // 2 if q_max is None else int(q_max)
    if not 1 <= q_max <= n // 2:
        raise OutOfRange(f"q_max={q_max} outside 1..{n // 2}")
    h, gaps, lovelock = {}, [], {}
    for q in range(1, q_max + 1):
        trace, _, gap = gbw_routes(R, q)
        h[2 * q] = trace
        gaps.append(gap)
        eig = np.linalg.eigvalsh(einstein_lovelock(R, q).coeffs)
        lovelock[2 * q] = (float(eig[0]), float(eig[-1]))
    classifiers = {}
    for q in range(1, q_max + 1):
        for p in p_list:
            if 1 <= p < 2 * q <= n:
                v = classify_einstein(R, p, q)
                classifiers[v.name] = v
            if 1 <= p <= 2 * q <= n:
                v = classify_conformal_class(R, p, q)
                classifiers[v.name] = v
    return InvariantReport(n, h, max(gaps), lovelock, avez_residual(R), classifiers, tol)
