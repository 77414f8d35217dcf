"""Batched GF(p) kernels for exhaustive searches.

Each kernel tests many structure tensors (or matrices, or forms) at once
and returns a boolean mask.  There are two implementations of each:

* ``*_numba``: explicit loops under ``numba.njit`` with early exit per item;
* ``*_numpy``: vectorized contractions over the whole batch.

The public names dispatch on :data:`USE_NUMBA`, which is on when numba
imports and ``HOMNOVIKOV_NUMBA`` is not ``0``.  Inputs are int64 arrays with
entries already reduced mod ``p``.  These kernels only prefilter searches;
every hit is re-checked by :func:`homnovikov.identities.validate`.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("HOMNOVIKOV_NUMBA", "1") != "0"

_CHUNK = 1 << 14


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


# ---------------------------------------------------------------------------
# numba implementations


@_njit
def _prod(c, x, y, n, p, out):
    for k in range(n):
        out[k] = 0
    for i in range(n):
        if x[i] == 0:
            continue
        for j in range(n):
            if y[j] == 0:
                continue
            xy = x[i] * y[j] % p
            for k in range(n):
                out[k] = (out[k] + xy * c[i, j, k]) % p


@_njit
def _is_morphism(c, m, n, p):
    # alpha(e_i e_j) == alpha(e_i) alpha(e_j)
    lhs = np.zeros(n, np.int64)
    rhs = np.zeros(n, np.int64)
    for i in range(n):
        for j in range(n):
            for l in range(n):
                s = 0
                for k in range(n):
                    s += m[l, k] * c[i, j, k]
                lhs[l] = s % p
            _prod(c, m[:, i], m[:, j], n, p, rhs)
            for l in range(n):
                if lhs[l] != rhs[l]:
                    return False
    return True


@_njit
def _morphism_mask_numba(mats, c, p):
    N = mats.shape[0]
    n = c.shape[0]
    out = np.zeros(N, np.bool_)
    for t in range(N):
        out[t] = _is_morphism(c, mats[t], n, p)
    return out


@_njit
def _is_hom_novikov(c, m, n, p, require_morphism):
    if require_morphism and not _is_morphism(c, m, n, p):
        return False
    # xy, alpha(e_k), and products against alpha(e_k)
    xy = np.zeros((n, n, n), np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                xy[i, j, k] = c[i, j, k]
    a = np.zeros((n, n), np.int64)
    for k in range(n):
        for l in range(n):
            a[k, l] = m[l, k]
    t1 = np.zeros(n, np.int64)
    t2 = np.zeros(n, np.int64)
    t3 = np.zeros(n, np.int64)
    t4 = np.zeros(n, np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                # (xy)a(z) == (xz)a(y)
                _prod(c, xy[i, j], a[k], n, p, t1)
                _prod(c, xy[i, k], a[j], n, p, t2)
                for l in range(n):
                    if t1[l] != t2[l]:
                        return False
                # (xy)a(z) - a(x)(yz) == (yx)a(z) - a(y)(xz)
                _prod(c, a[i], xy[j, k], n, p, t2)
                _prod(c, xy[j, i], a[k], n, p, t3)
                _prod(c, a[j], xy[i, k], n, p, t4)
                for l in range(n):
                    if (t1[l] - t2[l] - t3[l] + t4[l]) % p != 0:
                        return False
    return True


@_njit
def _hom_novikov_mask_numba(cs, m, p, require_morphism):
    N = cs.shape[0]
    n = m.shape[0]
    out = np.zeros(N, np.bool_)
    for t in range(N):
        out[t] = _is_hom_novikov(cs[t], m, n, p, require_morphism)
    return out


@_njit
def _is_comm_assoc(c, n, p):
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if c[i, j, k] != c[j, i, k]:
                    return False
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    s = 0
                    for m in range(n):
                        s += c[i, j, m] * c[m, k, l] - c[j, k, m] * c[i, m, l]
                    if s % p != 0:
                        return False
    return True


@_njit
def _comm_assoc_mask_numba(cs, p):
    N = cs.shape[0]
    n = cs.shape[1]
    out = np.zeros(N, np.bool_)
    for t in range(N):
        out[t] = _is_comm_assoc(cs[t], n, p)
    return out


@_njit
def _form_mask_numba(c, m, forms, p):
    # symmetric, B(xy, a z) == B(a x, yz), B(a x, y) == B(x, a y)
    F = forms.shape[0]
    n = m.shape[0]
    out = np.zeros(F, np.bool_)
    for f in range(F):
        b = forms[f]
        ok = True
        for i in range(n):
            for j in range(n):
                if b[i, j] != b[j, i]:
                    ok = False
        if ok:
            # B(m e_i, e_j) = sum_l m[l,i] b[l,j]
            for i in range(n):
                for j in range(n):
                    s1 = 0
                    s2 = 0
                    for l in range(n):
                        s1 += m[l, i] * b[l, j]
                        s2 += b[i, l] * m[l, j]
                    if (s1 - s2) % p != 0:
                        ok = False
        if ok:
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        s1 = 0
                        s2 = 0
                        for u in range(n):
                            for v in range(n):
                                s1 += c[i, j, u] * b[u, v] * m[v, k]
                                s2 += m[u, i] * b[u, v] * c[j, k, v]
                        if (s1 - s2) % p != 0:
                            ok = False
        out[f] = ok
    return out


# ---------------------------------------------------------------------------
# numpy implementations


def _morphism_mask_numpy(mats, c, p):
    out = np.empty(len(mats), dtype=bool)
    for s in range(0, len(mats), _CHUNK):
        M = mats[s : s + _CHUNK]
        lhs = np.einsum("blk,ijk->bijl", M, c) % p
        A = M.transpose(0, 2, 1)  # rows alpha(e_i)
        T = np.einsum("bir,rsl->bisl", A, c) % p
        rhs = np.einsum("bisl,bjs->bijl", T, A) % p
        out[s : s + _CHUNK] = (lhs == rhs).reshape(len(M), -1).all(axis=1)
    return out


def _hom_novikov_mask_numpy(cs, m, p, require_morphism):
    N = len(cs)
    out = np.empty(N, dtype=bool)
    A = m.T
    for s in range(0, N, _CHUNK):
        C = cs[s : s + _CHUNK]
        B = len(C)
        ok = np.ones(B, dtype=bool)
        if require_morphism:
            lhs = np.einsum("lk,bijk->bijl", m, C) % p
            T = np.einsum("ir,brsl->bisl", A, C) % p
            rhs = np.einsum("bisl,js->bijl", T, A) % p
            ok &= (lhs == rhs).reshape(B, -1).all(axis=1)
        # L[b,i,j,k] = (e_i e_j) a(e_k)
        CA = np.einsum("bmrl,kr->bmkl", C, A) % p
        L = np.einsum("bijm,bmkl->bijkl", C, CA) % p
        ok &= (L == L.transpose(0, 1, 3, 2, 4)).reshape(B, -1).all(axis=1)
        # R[b,i,j,k] = a(e_i)(e_j e_k)
        AC = np.einsum("ir,brml->biml", A, C) % p
        R = np.einsum("bjkm,biml->bijkl", C, AC) % p
        D = (L - R) % p
        ok &= (D == D.transpose(0, 2, 1, 3, 4)).reshape(B, -1).all(axis=1)
        out[s : s + _CHUNK] = ok
    return out


def _comm_assoc_mask_numpy(cs, p):
    N = len(cs)
    out = np.empty(N, dtype=bool)
    for s in range(0, N, _CHUNK):
        C = cs[s : s + _CHUNK]
        B = len(C)
        ok = (C == C.transpose(0, 2, 1, 3)).reshape(B, -1).all(axis=1)
        L = np.einsum("bijm,bmkl->bijkl", C, C) % p
        R = np.einsum("bjkm,biml->bijkl", C, C) % p
        ok &= (L == R).reshape(B, -1).all(axis=1)
        out[s : s + _CHUNK] = ok
    return out


def _form_mask_numpy(c, m, forms, p):
    B = len(forms)
    if B == 0:
        return np.zeros(0, dtype=bool)
    ok = (forms == forms.transpose(0, 2, 1)).reshape(B, -1).all(axis=1)
    s1 = np.einsum("li,blj->bij", m, forms) % p
    s2 = np.einsum("bil,lj->bij", forms, m) % p
    ok &= (s1 == s2).reshape(B, -1).all(axis=1)
    cb = np.einsum("iju,buv->bijv", c, forms) % p
    h1 = np.einsum("bijv,vk->bijk", cb, m) % p
    mb = np.einsum("ui,buv->biv", m, forms) % p
    h2 = np.einsum("biv,jkv->bijk", mb, c) % p
    ok &= (h1 == h2).reshape(B, -1).all(axis=1)
    return ok


# ---------------------------------------------------------------------------
# dispatch


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def morphism_mask(mats, c, p: int, use_numba: bool | None = None) -> np.ndarray:
    """Which matrices in ``mats`` (N, n, n) are endomorphisms of ``c``."""
    mats, c = _i64(mats), _i64(c)
    if USE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA):
        return _morphism_mask_numba(mats, c, p)
    return _morphism_mask_numpy(mats, c, p)


def hom_novikov_mask(cs, m, p: int, require_morphism: bool = True, use_numba: bool | None = None) -> np.ndarray:
    """Which tensors in ``cs`` (N, n, n, n) are Hom-Novikov with twist ``m``.

    With ``m`` the identity and ``require_morphism=False`` this is the
    Novikov test.
    """
    cs, m = _i64(cs), _i64(m)
    if USE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA):
        return _hom_novikov_mask_numba(cs, m, p, require_morphism)
    return _hom_novikov_mask_numpy(cs, m, p, require_morphism)


def comm_assoc_mask(cs, p: int, use_numba: bool | None = None) -> np.ndarray:
    cs = _i64(cs)
    if USE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA):
        return _comm_assoc_mask_numba(cs, p)
    return _comm_assoc_mask_numpy(cs, p)


def form_mask(c, m, forms, p: int, use_numba: bool | None = None) -> np.ndarray:
    """Forms that are symmetric, alpha-self-adjoint and Hom-invariant for ``(c, m)``.

    Nondegeneracy is not tested here.
    """
    c, m, forms = _i64(c), _i64(m), _i64(forms)
    if USE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA):
        return _form_mask_numba(c, m, forms, p)
    return _form_mask_numpy(c, m, forms, p)
