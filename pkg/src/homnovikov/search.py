"""Random sampling and exhaustive enumeration over GF(p).

The heavy filters run through :mod:`homnovikov._kernels`; every structure
that survives a kernel is re-validated with the exact engine before it is
returned, so kernel bugs can only lose hits, never invent them.
"""
from __future__ import annotations

from typing import Iterator, NamedTuple

import numpy as np

from . import _kernels
from .core import Algebra, BilinearForm, LinearOperator, StructureBundle
from .errors import GuardError
from .fields import GF, Field
from .identities import Identity, check_identity, validate


def _require_prime(field: Field) -> int:
    if not field.is_prime_field:
        raise GuardError("search needs a prime field")
    return field.p


def _digits(idx: np.ndarray, p: int, width: int) -> np.ndarray:
    powers = p ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers) % p


def all_tensors(p: int, n: int, chunk: int = 1 << 15) -> Iterator[np.ndarray]:
    """Every ``n x n x n`` tensor over GF(p) in lexicographic order, in chunks."""
    total = p ** (n**3)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        yield _digits(idx, p, n**3).reshape(-1, n, n, n)


def all_matrices(p: int, n: int) -> np.ndarray:
    total = p ** (n * n)
    if total > 10**6:
        raise GuardError(f"{total} matrices exceeds guard")
    return _digits(np.arange(total, dtype=np.int64), p, n * n).reshape(-1, n, n)


def _det_mod(mats: np.ndarray, p: int) -> np.ndarray:
    n = mats.shape[1]
    if n == 1:
        return mats[:, 0, 0] % p
    if n == 2:
        return (mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]) % p
    from . import linalg

    f = GF(p)
    return np.array([linalg.det(f, m) for m in mats], dtype=np.int64)


def general_linear(p: int, n: int) -> np.ndarray:
    """All invertible ``n x n`` matrices over GF(p), lexicographic."""
    mats = all_matrices(p, n)
    return mats[_det_mod(mats, p) != 0]


def symmetric_nondegenerate_forms(p: int, n: int) -> np.ndarray:
    mats = all_matrices(p, n)
    sym = (mats == mats.transpose(0, 2, 1)).reshape(len(mats), -1).all(axis=1)
    mats = mats[sym]
    return mats[_det_mod(mats, p) != 0]


# ---------------------------------------------------------------------------
# random bundles


def random_tensor(field: Field, n: int, rng: np.random.Generator, density: float = 1.0) -> np.ndarray:
    p = _require_prime(field)
    vals = rng.integers(0, p, size=(n, n, n), dtype=np.int64)
    return vals * (rng.random((n, n, n)) < density)


def _random_operator(field: Field, n: int, rng: np.random.Generator) -> np.ndarray:
    p = field.p
    kind = rng.integers(0, 4)
    if kind == 0:
        return field.eye(n)
    if kind == 1:
        return field.zeros((n, n))
    if kind == 2:
        return np.diag(rng.integers(0, p, size=n, dtype=np.int64))
    return rng.integers(0, p, size=(n, n), dtype=np.int64)


def random_bundle(field: Field, n: int, rng: np.random.Generator) -> StructureBundle:
    """A bundle with every role filled, skewed toward sparse and special
    structures so that some identities actually hold."""
    density = float(rng.choice([0.0, 0.15, 0.35, 1.0]))
    dot = random_tensor(field, n, rng, density)
    if rng.random() < 0.5:
        dot = field.reduce(dot + dot.transpose(1, 0, 2))
    star = random_tensor(field, n, rng, float(rng.choice([0.0, 0.15, 0.35, 1.0])))
    b = rng.integers(0, field.p, size=(n, n), dtype=np.int64)
    if rng.random() < 0.5:
        b = field.reduce(b + b.T)
    return StructureBundle(
        dot=Algebra(field, dot, "dot"),
        star=Algebra(field, star, "star"),
        alpha=LinearOperator(field, _random_operator(field, n, rng), "alpha"),
        partial=LinearOperator(field, _random_operator(field, n, rng), "del"),
        form=BilinearForm(field, b, "B"),
    )


def _sample(mask_fn, field: Field, n: int, count: int, rng, symmetric: bool, batch: int, max_batches: int):
    p = _require_prime(field)
    found: list[np.ndarray] = []
    seen: set[bytes] = set()
    for _ in range(max_batches):
        cs = rng.integers(0, p, size=(batch, n, n, n), dtype=np.int64)
        if symmetric:
            # commutative candidates only: mirror the strict upper triangle
            iu = np.triu_indices(n, 1)
            cs[:, iu[1], iu[0]] = cs[:, iu[0], iu[1]]
        for c in cs[mask_fn(cs, p)]:
            key = c.tobytes()
            if key not in seen:
                seen.add(key)
                found.append(c)
                if len(found) == count:
                    return [Algebra(field, c, f"sample{i}") for i, c in enumerate(found)]
    raise GuardError(f"only {len(found)} of {count} samples found")


def sample_commutative_associative(field: Field, n: int, count: int, rng, batch: int = 4096, max_batches: int = 200):
    """Distinct commutative associative tensors by batched rejection sampling."""
    return _sample(_kernels.comm_assoc_mask, field, n, count, rng, True, batch, max_batches)


def sample_novikov(field: Field, n: int, count: int, rng, batch: int = 4096, max_batches: int = 200):
    eye = np.eye(n, dtype=np.int64)

    def mask(cs, p):
        return _kernels.hom_novikov_mask(cs, eye, p, require_morphism=False)

    return _sample(mask, field, n, count, rng, False, batch, max_batches)


# ---------------------------------------------------------------------------
# exhaustive quadratic search


class QuadraticHit(NamedTuple):
    bundle: StructureBundle
    report: object  # quadratic.NilpotencyReport


def quadratic_hom_novikov_search(p: int = 3, n: int = 2, use_numba: bool | None = None) -> tuple[list[QuadraticHit], dict]:
    """All ``(mu, alpha, B)`` over GF(p) in dimension ``n`` with ``alpha``
    invertible, ``(mu, alpha)`` Hom-Novikov, ``B`` symmetric nondegenerate,
    Hom-invariant and alpha-self-adjoint, each with its nilpotency report."""
    from .quadratic import nilpotency_report

    field = GF(p)
    if p ** (n**3) > 10**6:
        raise GuardError("tensor space too large")
    tensors = np.concatenate(list(all_tensors(p, n)))
    forms = symmetric_nondegenerate_forms(p, n)
    hits: list[QuadraticHit] = []
    stats = {"tensors": len(tensors), "automorphisms": 0, "forms": len(forms), "hom_novikov_pairs": 0, "triples": 0}
    for m in general_linear(p, n):
        stats["automorphisms"] += 1
        hn = tensors[_kernels.hom_novikov_mask(tensors, m, p, True, use_numba)]
        stats["hom_novikov_pairs"] += len(hn)
        alpha = LinearOperator(field, m, "alpha")
        for c in hn:
            good = forms[_kernels.form_mask(c, m, forms, p, use_numba)]
            for b in good:
                bundle = StructureBundle(star=Algebra(field, c, "mu"), alpha=alpha, form=BilinearForm(field, b, "B"))
                if not validate(bundle, "quadratic-hom-novikov").passed:
                    raise AssertionError("kernel hit rejected by exact validator")
                if not check_identity(bundle, Identity.FORM_ALPHA_COMPAT).holds:
                    raise AssertionError("kernel hit fails form-alpha-compat")
                hits.append(QuadraticHit(bundle, nilpotency_report(bundle)))
                stats["triples"] += 1
    return hits, stats
