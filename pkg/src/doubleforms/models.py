"""Curvature structures with closed-form invariants, used as test anchors."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import multiindex as mi
from .algebra import (
    DEFAULT_TOL,
    CurvatureStructure,
    DoubleForm,
    g_power,
    kn_product,
    metric,
)
from .decomposition import orthogonal_components
from .errors import DimensionExceeded, InvalidParameters

KINDS = ("constant", "hypersurface", "conformally_flat", "product", "random", "random_einstein")


def make_rng(seed: int) -> np.random.Generator:
    """The package-wide seeded generator (PCG64, portable across platforms)."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def symmetric_form(matrix) -> DoubleForm:
    """A (1, 1) double form from a symmetric n×n table."""
    h = np.asarray(matrix, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InvalidParameters(f"expected a square table, got shape {h.shape}")
    scale = max(1.0, float(np.abs(h).max(initial=0.0)))
    if np.abs(h - h.T).max(initial=0.0) > DEFAULT_TOL * scale:
        raise InvalidParameters("the (1,1) table must be symmetric")
    return DoubleForm(h.shape[0], 1, 1, h)


def _certified(form: DoubleForm) -> CurvatureStructure:
    return CurvatureStructure.certify(form)


def constant_curvature(n: int, lam: float) -> CurvatureStructure:
    """R = (λ/2) g², sectional curvature λ on every plane."""
    if n < 2:
        raise InvalidParameters("constant curvature needs n >= 2")
    return _certified(0.5 * float(lam) * g_power(n, 2))


def hypersurface(principal_curvatures) -> CurvatureStructure:
    """Gauss equation R = ½ B·B for the diagonal second fundamental form B."""
    lams = np.asarray(principal_curvatures, dtype=float).ravel()
    n = lams.size
    if n < 2:
        raise InvalidParameters("a hypersurface needs at least two principal curvatures")
    B = DoubleForm(n, 1, 1, np.diag(lams))
    return _certified(0.5 * kn_product(B, B))


def conformally_flat(h) -> CurvatureStructure:
    """R = g·h for a symmetric (1, 1) table h (the Schouten-type tensor)."""
    hf = h if isinstance(h, DoubleForm) else symmetric_form(h)
    if hf.bidegree != (1, 1) or not hf.is_symmetric():
        raise InvalidParameters("h must be a symmetric (1, 1) form")
    return _certified(kn_product(metric(hf.n), hf))


def direct_sum(a: DoubleForm, b: DoubleForm) -> CurvatureStructure:
    """Block sum of two (2, 2) structures on R^{n_a} ⊕ R^{n_b}; mixed planes are flat."""
    n = a.n + b.n
    if n > mi.MAX_DIM:
        raise DimensionExceeded(f"product dimension {n} exceeds the cap {mi.MAX_DIM}")
    out = np.zeros((mi.dim(n, 2), mi.dim(n, 2)))
    rk = mi.rank_map(n, 2)
    for factor, shift in ((a, 0), (b, a.n)):
        pos = np.array([rk[(i + shift, j + shift)] for i, j in mi.basis(factor.n, 2)], dtype=np.intp)
        if pos.size:
            out[np.ix_(pos, pos)] = factor.coeffs
    return _certified(DoubleForm(n, 2, 2, out))


def random_symmetric(n: int, rng: np.random.Generator) -> DoubleForm:
    A = rng.standard_normal((n, n))
    return DoubleForm(n, 1, 1, 0.5 * (A + A.T))


def random_double_form(n: int, p: int, q: int, rng: np.random.Generator, symmetric: bool = False) -> DoubleForm:
    """Gaussian coefficients on the increasing basis, optionally symmetrized."""
    A = rng.standard_normal((mi.dim(n, p), mi.dim(n, q)))
    if symmetric:
        if p != q:
            raise InvalidParameters("only (p, p) forms can be symmetric")
        A = 0.5 * (A + A.T)
    return DoubleForm(n, p, q, A)


def random_bianchi(n: int, p: int, rng: np.random.Generator, terms: int = 3) -> CurvatureStructure:
    """Σ_t h_{t,1}···h_{t,p} of random symmetric (1, 1) forms: a (p, p) form satisfying Bianchi."""
    total = DoubleForm.zeros(n, p, p) if p else DoubleForm.scalar(n, rng.standard_normal())
    for _ in range(terms if p else 0):
        term = DoubleForm.scalar(n, 1.0)
        for _ in range(p):
            term = kn_product(term, random_symmetric(n, rng))
        total = total + term
    return _certified(total)


def random_curvature(n: int, seed: int = 0, terms: int | None = None) -> CurvatureStructure:
    """R = Σ_t h_t·h_t with seeded random symmetric h_t; defaults to n terms."""
    if n < 2:
        raise InvalidParameters("random curvature needs n >= 2")
    rng = make_rng(seed)
    R = DoubleForm.zeros(n, 2, 2)
    for _ in range(n if terms is None else int(terms)):
        h = random_symmetric(n, rng)
        R = R + kn_product(h, h)
    return _certified(R)


def remove_ricci_part(R: DoubleForm) -> CurvatureStructure:
    """Drop the g·ω₁ component, leaving an Einstein-type structure."""
    parts = orthogonal_components(R)
    return _certified(R - kn_product(metric(R.n), parts[1]))


def random_einstein(n: int, seed: int = 0) -> CurvatureStructure:
    if n < 4:
        raise InvalidParameters("random Einstein structures need n >= 4")
    return remove_ricci_part(random_curvature(n, seed))


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of a model space, serialisable to the CLI schema."""

    kind: str
    n: int
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameters(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        if int(self.n) > mi.MAX_DIM:
            raise DimensionExceeded(f"dimension {self.n} exceeds the cap {mi.MAX_DIM}")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelSpec":
        doc = dict(doc)
        try:
            kind = doc.pop("model")
        except KeyError:
            raise InvalidParameters("model spec without a 'model' key") from None
        if kind == "product":
            factors = doc.get("factors")
            if not isinstance(factors, list) or len(factors) != 2:
                raise InvalidParameters("a product needs exactly two 'factors'")
            subs = [cls.from_dict(f) for f in factors]
            n = doc.pop("n", sum(s.n for s in subs))
            return cls(kind, n, {"factors": subs})
        if kind == "hypersurface" and "n" not in doc:
            doc["n"] = len(doc.get("principal_curvatures", []))
        if "n" not in doc:
            raise InvalidParameters("model spec without 'n'")
        n = doc.pop("n")
        return cls(kind, n, doc)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"model": self.kind, "n": self.n}
        for key, value in self.params.items():
            if key == "factors":
                out[key] = [f.to_dict() for f in value]
            else:
                out[key] = value
        return out

    def build(self) -> CurvatureStructure:
        p, n = self.params, self.n
        try:
            if self.kind == "constant":
                return constant_curvature(n, float(p["lambda"]))
            if self.kind == "hypersurface":
                lams = p["principal_curvatures"]
                if len(lams) != n:
                    raise InvalidParameters(f"{len(lams)} principal curvatures for n={n}")
                return hypersurface(lams)
            if self.kind == "conformally_flat":
                h = np.asarray(p["h"], dtype=float)
                if h.shape != (n, n):
                    raise InvalidParameters(f"h has shape {h.shape}, expected ({n}, {n})")
                return conformally_flat(h)
            if self.kind == "product":
                a, b = p["factors"]
                if a.n + b.n != n:
                    raise InvalidParameters(f"factor dimensions {a.n}+{b.n} != {n}")
                return direct_sum(a.build(), b.build())
            if self.kind == "random":
                return random_curvature(n, int(p.get("seed", 0)), p.get("terms"))
            return random_einstein(n, int(p.get("seed", 0)))
        except KeyError as exc:
            raise InvalidParameters(f"model {self.kind!r} is missing parameter {exc}") from None


def product_space(a: ModelSpec, b: ModelSpec) -> CurvatureStructure:
    return direct_sum(a.build(), b.build())
