"""Orthogonal decomposition D^{p,p} = E^{p,p} ⊕ g E^{p-1,p-1} ⊕ … ⊕ g^p E^{0,0}.

The components are produced by closed formulas in iterated contractions
rather than by projection, so each ω_k costs a handful of products.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial, prod

from .algebra import (
    DEFAULT_TOL,
    DoubleForm,
    contract,
    g_power,
    kn_product,
    hodge,
    mul_g,
    require_bianchi,
)
from .errors import DegreeError, OutOfRange


@dataclass(frozen=True)
class ComponentList:
    """Components [ω_p, ω_{p-1}, …, ω_0] with ω = Σ_k g^{p-k} ω_k, ω_k ∈ E^{k,k}."""

    n: int
    p: int
    components: tuple[DoubleForm, ...]
    residual: float | None = None

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != self.p + 1:
            raise DegreeError(f"expected {self.p + 1} components, got {len(comps)}")
        for k, w in zip(range(self.p, -1, -1), comps):
            if w.n != self.n or w.bidegree != (k, k):
                raise DegreeError(f"component for k={k} has bidegree {w.bidegree} in dimension {w.n}")

    def __getitem__(self, k: int) -> DoubleForm:
        """ω_k, the component of bidegree (k, k)."""
        if not 0 <= k <= self.p:
            raise IndexError(k)
        return self.components[self.p - k]

    def __iter__(self):
        return iter(self.components)

    def terms(self) -> list[DoubleForm]:
        """The summands g^{p-k} ω_k, ordered like ``components``."""
        return [mul_g(self[k], self.p - k) for k in range(self.p, -1, -1)]


def _check_square(w: DoubleForm):
    if w.p != w.q:
        raise DegreeError(f"expected a (p, p) form, got {w.bidegree}")


def orthogonal_components(w: DoubleForm) -> ComponentList:
    _check_square(w)
    n, p = w.n, w.p
    if 2 * p > n:
        raise OutOfRange(f"decomposition needs 2p <= n (p={p}, n={n})")
    traces = [contract(w, j) for j in range(p + 1)]
    comps = []
    for k in range(p, -1, -1):
        acc = traces[p - k]
        for r in range(1, k + 1):
            coef = (-1) ** r / prod(n - 2 * k + 2 + i for i in range(r)) / factorial(r)
            acc = acc + coef * mul_g(traces[p - k + r], r)
        scale = factorial(n - p - k) / (factorial(p - k) * factorial(n - 2 * k))
        comps.append(scale * acc)
    return ComponentList(n, p, comps)


def reconstruct(parts: ComponentList) -> DoubleForm:
    total = DoubleForm.zeros(parts.n, parts.p, parts.p)
    for term in parts.terms():
        total = total + term
    return total


def conformal_component(w: DoubleForm) -> DoubleForm:
    """Trace-free top component ω_p (the Weyl tensor when ω = R)."""
    return orthogonal_components(w)[w.p]


def curvature_components(w: DoubleForm, tol: float = DEFAULT_TOL) -> ComponentList:
    """Components of a Bianchi form of any degree p ≤ n.

    For 2p > n the components are read off the decomposition of the dual
    *ω ∈ C_1^{n-p}; components of degree above n - p vanish.
    """
    _check_square(w)
    n, p = w.n, w.p
    if 2 * p <= n:
        return orthogonal_components(w)
    require_bianchi(w, tol)
    dual = orthogonal_components(hodge(w))
    comps = []
    for i in range(p, -1, -1):
        if i > n - p:
            comps.append(DoubleForm.zeros(n, i, i))
        else:
            comps.append((-1) ** i * factorial(n - p - i) / factorial(p - i) * dual[i])
    return ComponentList(n, p, comps)


def hodge_via_contractions(w: DoubleForm, tol: float = DEFAULT_TOL) -> DoubleForm:
    """*ω = Σ_{r ≥ max(0, 2p-n)}^{p} (-1)^{r+p}/r! · g^{n-2p+r}/(n-2p+r)! · c^r ω on C_1^p."""
    _check_square(w)
    n, p = w.n, w.p
    if not 1 <= p <= n:
        raise OutOfRange(f"needs 1 <= p <= n, got p={p}")
    require_bianchi(w, tol)
    total = DoubleForm.zeros(n, n - p, n - p)
    for r in range(max(0, 2 * p - n), p + 1):
        m = n - 2 * p + r
        coef = (-1) ** (r + p) / (factorial(r) * factorial(m))
        total = total + coef * kn_product(g_power(n, m), contract(w, r))
    return total


def hodge_via_components(w: DoubleForm, tol: float = DEFAULT_TOL) -> DoubleForm:
    """*ω = Σ_i (p-i)! (-1)^i / (n-p-i)! · g^{n-p-i} ω_i for ω ∈ C_1^p, 2p ≤ n."""
    require_bianchi(w, tol)
    parts = orthogonal_components(w)
    n, p = w.n, w.p
    total = DoubleForm.zeros(n, n - p, n - p)
    for i in range(0, min(p, n - p) + 1):
        coef = factorial(p - i) * (-1) ** i / factorial(n - p - i)
        total = total + coef * mul_g(parts[i], n - p - i)
    return total
