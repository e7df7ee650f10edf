"""Slow independent oracles shared by the test modules."""
from __future__ import annotations

from itertools import combinations, permutations
from math import factorial, prod

import numpy as np
import pytest

from doubleforms import multiindex as mi
from doubleforms.algebra import DoubleForm, contract, mul_g_matrix, to_tensor

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign


def brute_product(a: DoubleForm, b: DoubleForm) -> DoubleForm:
    """The permutation-sum definition of the product, factorials included."""
    n = a.n
    P, Q = a.p + b.p, a.q + b.q
    Ta, Tb = to_tensor(a), to_tensor(b)
    norm = factorial(a.p) * factorial(b.p) * factorial(a.q) * factorial(b.q)
    rows = list(combinations(range(n), P))
    cols = list(combinations(range(n), Q))
    perms_x = [(s, perm_sign(s)) for s in permutations(range(P))]
    perms_y = [(r, perm_sign(r)) for r in permutations(range(Q))]
    out = np.zeros((len(rows), len(cols)))
    for ia, I in enumerate(rows):
        for jb, J in enumerate(cols):
            total = 0.0
            for s, es in perms_x:
                x = [I[k] for k in s]
                for r, er in perms_y:
                    y = [J[k] for k in r]
                    total += es * er * Ta[tuple(x[:a.p] + y[:a.q])] * Tb[tuple(x[a.p:] + y[a.q:])]
            out[ia, jb] = total / norm
    return DoubleForm(n, P, Q, out)


def brute_contract(a: DoubleForm) -> DoubleForm:
    """(cω)(I, J) = Σ_m ω(m⌢I, m⌢J) through the full antisymmetric tensor."""
    n = a.n
    T = to_tensor(a)
    rows = list(combinations(range(n), a.p - 1))
    cols = list(combinations(range(n), a.q - 1))
    out = np.zeros((len(rows), len(cols)))
    for ia, I in enumerate(rows):
        for jb, J in enumerate(cols):
            out[ia, jb] = sum(T[(m,) + I + (m,) + J] for m in range(n))
    return DoubleForm(n, a.p - 1, a.q - 1, out)


def esym(values, k: int) -> float:
    """k-th elementary symmetric polynomial by direct enumeration."""
    return float(sum(prod(c) for c in combinations(values, k)))


def projection_components(w: DoubleForm) -> list[DoubleForm]:
    """ω_k by orthogonal projection onto g^{p-k} ker(c), independent of the closed formula.

    Returns [ω_p, ..., ω_0].
    """
    n, p = w.n, w.p
    out = []
    for k in range(p, -1, -1):
        d = mi.dim(n, k)
        if k == 0:
            kernel = np.eye(1)
        else:
            C = np.column_stack([
                contract(DoubleForm(n, k, k, np.eye(d * d)[i].reshape(d, d))).coeffs.ravel() for i in range(d * d)
            ])
            _, s, vt = np.linalg.svd(C)
            rank = int((s > 1e-10 * s.max()).sum()) if s.size else 0
            kernel = vt[rank:].T
        G = mul_g_matrix(n, k, k, p - k) @ kernel
        coef, *_ = np.linalg.lstsq(G, w.coeffs.ravel(), rcond=None)
        out.append(DoubleForm(n, k, k, (kernel @ coef).reshape(d, d)))
    return out


def unit(w):
    s = w.norm()
    return w / s if s else w


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
