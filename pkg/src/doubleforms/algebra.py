"""Double forms over an oriented Euclidean space and their ring operations.

A double form of bidegree (p, q) is stored densely on pairs of increasing
index tuples, ``coeffs[a, b] = ω(e_{I_a}, e_{J_b})``, in a fixed orthonormal
frame so that the metric is the identity matrix.  The product on the
algebra is the Kulkarni–Nomizu product, evaluated as a signed double sum
over shuffles.
"""
from __future__ import annotations

from itertools import permutations
from math import factorial
from numbers import Real
from typing import Iterable, Mapping

import numpy as np

from . import multiindex as mi
from .errors import (
    BianchiViolation,
    DegreeError,
    DimensionMismatch,
    InvalidParameters,
    OutOfRange,
)

DEFAULT_TOL = 1e-9


class DoubleForm:
    """Element of Λ^p V* ⊗ Λ^q V* with V = R^n in an orthonormal frame."""

    __slots__ = ("n", "p", "q", "coeffs")

    def __init__(self, n: int, p: int, q: int, coeffs=None):
        n = mi.check_dim(n)
        p, q = int(p), int(q)
        if p < 0 or q < 0:
            raise DegreeError(f"negative bidegree ({p}, {q})")
        shape = (mi.dim(n, p), mi.dim(n, q))
        if coeffs is None:
            arr = np.zeros(shape)
        else:
            arr = np.array(coeffs, dtype=float)
            if arr.ndim == 0 and shape == (1, 1):
                arr = arr.reshape(1, 1)
            if arr.shape != shape:
                raise DegreeError(f"coefficients of shape {arr.shape}, expected {shape} for D^({p},{q}) in dimension {n}")
        arr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, n: int, p: int, q: int) -> "DoubleForm":
        return cls(n, p, q)

    @classmethod
    def scalar(cls, n: int, value: float) -> "DoubleForm":
        return cls(n, 0, 0, [[float(value)]])

    @classmethod
    def from_entries(cls, n: int, p: int, q: int, entries: Mapping) -> "DoubleForm":
        """Build from ``{(I, J): value}`` with 1-based, possibly unsorted tuples.

        Entries on the same basis pair are added after sign normalisation.
        """
        out = np.zeros((mi.dim(n, p), mi.dim(n, q)))
        rp, rq = mi.rank_map(n, p), mi.rank_map(n, q)
        for (I, J), value in entries.items():
            I, J = tuple(I), tuple(J)
            if len(I) != p or len(J) != q:
                raise DegreeError(f"entry {(I, J)} does not have bidegree ({p}, {q})")
            for i in I + J:
                if not 1 <= i <= n:
                    raise mi.InvalidIndex(f"index {i} outside [1, {n}]")
            s = mi.permutation_sign(I) * mi.permutation_sign(J)
            if s == 0:
                continue
            a = rp[tuple(sorted(i - 1 for i in I))]
            b = rq[tuple(sorted(j - 1 for j in J))]
            out[a, b] += s * value
        return cls(n, p, q, out)

    # -- basic properties ---------------------------------------------------

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.p, self.q

    @property
    def value(self) -> float:
        if (self.p, self.q) != (0, 0):
            raise DegreeError(f"a D^({self.p},{self.q}) form is not a scalar")
        return float(self.coeffs[0, 0])

    def __float__(self) -> float:
        return self.value

    def entry(self, I: Iterable[int], J: Iterable[int]) -> float:
        """Value on e_I ⊗ e_J for arbitrary 1-based tuples (antisymmetric extension)."""
        I, J = tuple(I), tuple(J)
        if len(I) != self.p or len(J) != self.q:
            raise DegreeError(f"expected index tuples of lengths ({self.p}, {self.q})")
        s = mi.permutation_sign(I) * mi.permutation_sign(J)
        if s == 0:
            return 0.0
        a = mi.MultiIndex(tuple(sorted(I)), self.n).position
        b = mi.MultiIndex(tuple(sorted(J)), self.n).position
        return s * float(self.coeffs[a, b])

    def evaluate(self, xs, ys) -> float:
        """ω(x_1∧…∧x_p, y_1∧…∧y_q) for vectors given as rows of ``xs`` and ``ys``."""
        X = np.asarray(xs, dtype=float).reshape(self.p, self.n)
        Y = np.asarray(ys, dtype=float).reshape(self.q, self.n)
        return float(minors(X) @ self.coeffs @ minors(Y))

    def transpose(self) -> "DoubleForm":
        return DoubleForm(self.n, self.q, self.p, self.coeffs.T)

    def is_symmetric(self, tol: float = DEFAULT_TOL) -> bool:
        if self.p != self.q:
            return False
        scale = max(1.0, float(np.abs(self.coeffs).max(initial=0.0)))
        return bool(np.abs(self.coeffs - self.coeffs.T).max(initial=0.0) <= tol * scale)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def allclose(self, other: "DoubleForm", tol: float = DEFAULT_TOL) -> bool:
        return residual(self, other) <= tol

    # -- arithmetic ---------------------------------------------------------

    def _check_same(self, other: "DoubleForm"):
        if not isinstance(other, DoubleForm):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"dimensions {self.n} and {other.n} differ")
        if other.bidegree != self.bidegree:
            raise DegreeError(f"cannot add D^{self.bidegree} and D^{other.bidegree}")
        return None

    def __add__(self, other):
        if isinstance(other, Real) and self.bidegree == (0, 0):
            return DoubleForm.scalar(self.n, self.value + float(other))
        bad = self._check_same(other)
        if bad is NotImplemented:
            return bad
        return DoubleForm(self.n, self.p, self.q, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return DoubleForm(self.n, self.p, self.q, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, DoubleForm):
            return kn_product(self, other)
        if isinstance(other, Real):
            return DoubleForm(self.n, self.p, self.q, float(other) * self.coeffs)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return DoubleForm(self.n, self.p, self.q, float(other) * self.coeffs)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Real):
            return DoubleForm(self.n, self.p, self.q, self.coeffs / float(other))
        return NotImplemented

    def __pow__(self, k: int) -> "DoubleForm":
        return power(self, k)

    # -- operations as methods ------------------------------------------------

    def contract(self, k: int = 1) -> "DoubleForm":
        return contract(self, k)

    def hodge(self) -> "DoubleForm":
        return hodge(self)

    def __repr__(self) -> str:
        return f"DoubleForm(n={self.n}, bidegree=({self.p}, {self.q}), norm={self.norm():.6g})"


class CurvatureStructure(DoubleForm):
    """Symmetric (p, p) double form, optionally certified to satisfy first Bianchi."""

    __slots__ = ("bianchi_certified",)

    def __init__(self, form: DoubleForm, bianchi_certified: bool = False, *, tol: float = DEFAULT_TOL):
        if form.p != form.q:
            raise DegreeError(f"a curvature structure needs p = q, got {form.bidegree}")
        if not form.is_symmetric(tol):
            raise InvalidParameters("curvature structures must be symmetric")
        super().__init__(form.n, form.p, form.q, form.coeffs)
        object.__setattr__(self, "bianchi_certified", bool(bianchi_certified))

    @classmethod
    def certify(cls, form: DoubleForm, tol: float = DEFAULT_TOL) -> "CurvatureStructure":
        """Wrap ``form``, setting the Bianchi flag from a measured residual."""
        return cls(form, bianchi_residual(form) <= tol, tol=tol)

    @property
    def form(self) -> DoubleForm:
        return DoubleForm(self.n, self.p, self.q, self.coeffs)

    def __repr__(self) -> str:
        return (f"CurvatureStructure(n={self.n}, p={self.p}, "
                f"bianchi_certified={self.bianchi_certified}, norm={self.norm():.6g})")


# ---------------------------------------------------------------------------
# helpers


def residual(a: DoubleForm, b: DoubleForm) -> float:
    """‖a − b‖ relative to max(1, ‖a‖, ‖b‖)."""
    return (a - b).norm() / max(1.0, a.norm(), b.norm())


def minors(X: np.ndarray) -> np.ndarray:
    """Coordinates of x_1∧…∧x_k in the increasing basis of Λ^k (rows of X)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    k, n = X.shape
    if k == 0:
        return np.ones(1)
    cols = np.array(mi.basis(n, k), dtype=np.intp)
    return np.linalg.det(X[:, cols].transpose(1, 0, 2))


def batch_minors(frames: np.ndarray) -> np.ndarray:
    """:func:`minors` for a stack of (k, n) frames; returns (count, C(n, k))."""
    frames = np.asarray(frames, dtype=float)
    count, k, n = frames.shape
    if k == 0:
        return np.ones((count, 1))
    cols = np.array(mi.basis(n, k), dtype=np.intp)
    return np.linalg.det(frames[:, :, cols].transpose(0, 2, 1, 3))


def _same_dim(a: DoubleForm, b: DoubleForm) -> int:
    if a.n != b.n:
        raise DimensionMismatch(f"dimensions {a.n} and {b.n} differ")
    return a.n


# ---------------------------------------------------------------------------
# ring operations


def g_power(n: int, k: int) -> DoubleForm:
    """g^k, with g^k(e_I, e_J) = k! δ_IJ on increasing multi-indices."""
    n = mi.check_dim(n)
    if not 0 <= k <= n:
        raise OutOfRange(f"g^{k} needs 0 <= k <= n = {n}")
    return DoubleForm(n, k, k, factorial(k) * np.eye(mi.dim(n, k)))


def metric(n: int) -> DoubleForm:
    return g_power(n, 1)


def _product_coeffs(A: np.ndarray, B: np.ndarray, n: int, pa: int, pb: int, qa: int, qb: int) -> np.ndarray:
    i1, i2, s = mi.shuffle_table(n, pa, pb)
    j1, j2, t = mi.shuffle_table(n, qa, qb)
    out = np.zeros((i1.shape[0], j1.shape[0]))
    for k in range(i1.shape[1]):
        Ak = A[i1[:, k]]
        Bk = B[i2[:, k]]
        terms = np.einsum("ijk,ijk,jk->ij", Ak[:, j1], Bk[:, j2], t)
        out += s[:, k, None] * terms
    return out


def kn_product(a: DoubleForm, b: DoubleForm) -> DoubleForm:
    """Kulkarni–Nomizu product a·b ∈ D^{p_a+p_b, q_a+q_b}."""
    n = _same_dim(a, b)
    p, q = a.p + b.p, a.q + b.q
    if p > n or q > n:
        return DoubleForm.zeros(n, p, q)
    ka = mi.dim(p, a.p)
    kb = mi.dim(q, a.q)
    # the loop runs over left shuffles; transposing swaps the roles
    if ka > kb:
        out = _product_coeffs(a.coeffs.T, b.coeffs.T, n, a.q, b.q, a.p, b.p).T
    else:
        out = _product_coeffs(a.coeffs, b.coeffs, n, a.p, b.p, a.q, b.q)
    return DoubleForm(n, p, q, out)


def power(a: DoubleForm, k: int) -> DoubleForm:
    """k-fold Kulkarni–Nomizu power; a^0 is the scalar 1."""
    if k < 0:
        raise OutOfRange("negative powers are undefined")
    out = DoubleForm.scalar(a.n, 1.0)
    for _ in range(k):
        out = kn_product(out, a)
    return out


def _contract_once(a: DoubleForm) -> DoubleForm:
    n = a.n
    if a.p == 0 or a.q == 0:
        return DoubleForm.zeros(n, max(a.p - 1, 0), max(a.q - 1, 0))
    pi, si = mi.insertion_table(n, a.p - 1)
    pj, sj = mi.insertion_table(n, a.q - 1)
    out = np.zeros((pi.shape[0], pj.shape[0]))
    for m in range(n):
        out += np.outer(si[:, m], sj[:, m]) * a.coeffs[np.ix_(pi[:, m], pj[:, m])]
    return DoubleForm(n, a.p - 1, a.q - 1, out)


def contract(a: DoubleForm, k: int = 1) -> DoubleForm:
    """k-fold contraction c^k; (cω)(I, J) = Σ_m ω(m⌢I, m⌢J)."""
    if k < 0:
        raise OutOfRange("negative contraction order")
    out = a
    for _ in range(k):
        out = _contract_once(out)
    return out


def mul_g(a: DoubleForm, k: int = 1) -> DoubleForm:
    """Multiplication by g^k."""
    if a.p + k > a.n or a.q + k > a.n:
        raise OutOfRange(f"g^{k}·D^({a.p},{a.q}) exceeds dimension {a.n}")
    return kn_product(g_power(a.n, k), a)


def mul_g_matrix(n: int, p: int, q: int, k: int) -> np.ndarray:
    """Matrix of ω ↦ g^k ω from D^{p,q} to D^{p+k,q+k} (columns = basis images)."""
    cols = []
    dp, dq = mi.dim(n, p), mi.dim(n, q)
    for a in range(dp):
        for b in range(dq):
            e = np.zeros((dp, dq))
            e[a, b] = 1.0
            cols.append(mul_g(DoubleForm(n, p, q, e), k).coeffs.ravel())
    return np.array(cols).T


def inner(a: DoubleForm, b: DoubleForm) -> float:
    """Inner product declaring the increasing basis e_I ⊗ e_J orthonormal."""
    _same_dim(a, b)
    if a.bidegree != b.bidegree:
        return 0.0
    return float(np.sum(a.coeffs * b.coeffs))


def hodge(a: DoubleForm) -> DoubleForm:
    """Generalized Hodge star *: D^{p,q} → D^{n-p,n-q}, acting on both factors."""
    n = a.n
    if a.p > n or a.q > n:
        raise DegreeError(f"no Hodge dual for D^({a.p},{a.q}) in dimension {n}")
    ci, si = mi.complement_table(n, a.p)
    cj, sj = mi.complement_table(n, a.q)
    out = np.zeros((mi.dim(n, n - a.p), mi.dim(n, n - a.q)))
    out[np.ix_(ci, cj)] = np.outer(si, sj) * a.coeffs
    return DoubleForm(n, n - a.p, n - a.q, out)


def hodge_left(a: DoubleForm) -> DoubleForm:
    """Star on the first factor only: D^{p,q} → D^{n-p,q}."""
    ci, si = mi.complement_table(a.n, a.p)
    out = np.zeros((mi.dim(a.n, a.n - a.p), mi.dim(a.n, a.q)))
    out[ci, :] = si[:, None] * a.coeffs
    return DoubleForm(a.n, a.n - a.p, a.q, out)


def hodge_right(a: DoubleForm) -> DoubleForm:
    """Star on the second factor only: D^{p,q} → D^{p,n-q}."""
    cj, sj = mi.complement_table(a.n, a.q)
    out = np.zeros((mi.dim(a.n, a.p), mi.dim(a.n, a.n - a.q)))
    out[:, cj] = a.coeffs * sj[None, :]
    return DoubleForm(a.n, a.p, a.n - a.q, out)


def first_bianchi(a: DoubleForm) -> DoubleForm:
    """First Bianchi sum B: D^{p,q} → D^{p+1,q-1}.

    (Bω)(x_1..x_{p+1}; y_2..y_q) = Σ_i (-1)^i ω(x_1..x̂_i..x_{p+1}; x_i∧y_2..y_q).
    """
    n = a.n
    if a.q == 0:
        raise DegreeError("the first Bianchi sum needs q >= 1")
    if a.p + 1 > n:
        return DoubleForm.zeros(n, a.p + 1, a.q - 1)
    dpos, removed = mi.deletion_table(n, a.p + 1)
    ipos, isign = mi.insertion_table(n, a.q - 1)
    out = np.zeros((dpos.shape[0], ipos.shape[0]))
    for i in range(a.p + 1):
        ms = removed[:, i]
        cols = ipos[:, ms].T
        signs = isign[:, ms].T
        term = a.coeffs[dpos[:, i][:, None], cols] * signs
        out += term if i % 2 else -term
    return DoubleForm(n, a.p + 1, a.q - 1, out)


def bianchi_residual(a: DoubleForm) -> float:
    """‖Bω‖ / max(1, ‖ω‖); zero for q = 0 where the sum is vacuous."""
    if a.q == 0:
        return 0.0
    return first_bianchi(a).norm() / max(1.0, a.norm())


def require_bianchi(a: DoubleForm, tol: float = DEFAULT_TOL) -> None:
    if isinstance(a, CurvatureStructure) and a.bianchi_certified:
        return
    res = bianchi_residual(a)
    if res > tol:
        raise BianchiViolation(f"first Bianchi residual {res:.3e} exceeds {tol:g}")


def to_tensor(a: DoubleForm) -> np.ndarray:
    """Full antisymmetric array with p + q axes of length n (small degrees only)."""
    n = a.n
    full = np.zeros((n,) * (a.p + a.q))
    for ia, I in enumerate(mi.basis(n, a.p)):
        perms_i = [(P, mi.permutation_sign(P)) for P in permutations(I)]
        for jb, J in enumerate(mi.basis(n, a.q)):
            v = a.coeffs[ia, jb]
            if v == 0.0:
                continue
            for P, sp in perms_i:
                for Q in permutations(J):
                    full[P + Q] = sp * mi.permutation_sign(Q) * v
    return full
