"""Constructions that turn one algebraic structure into another.

Each function checks its hypotheses first and raises
:class:`~homnovikov.errors.PreconditionError` (carrying the failing report
or witness) instead of returning a partial result.
"""
from __future__ import annotations

import numpy as np

from . import _kernels, linalg
from .core import Algebra, LinearOperator, StructureBundle, map_properties, twist_tensor
from .errors import DimensionError, GuardError, PreconditionError
from .fields import Field
from .identities import Identity, Report, check_identity, validate

ENUMERATION_GUARD = 10**6


def _require(report: Report, what: str) -> None:
    if not report.passed:
        first = report.failures()[0]
        raise PreconditionError(
            f"{what}: {first.check} fails at {first.verdict.witness.tuple}",
            report=report,
            witness=first.verdict.witness,
        )


def _require_identity(bundle, ident, what, product=None):
    v = check_identity(bundle, ident, product)
    if not v.holds:
        raise PreconditionError(f"{what}: {ident.value} fails at {v.witness.tuple}", witness=v.witness)


def _same_dim(A: Algebra, op: LinearOperator) -> None:
    if A.dim != op.dim:
        raise DimensionError(f"operator dim {op.dim} vs algebra dim {A.dim}")
    A.field.require_same(op.field)


def _twisted(A: Algebra, op: LinearOperator, label: str) -> Algebra:
    return Algebra(A.field, twist_tensor(A.field, A.c, op.m), label)


def yau_twist(A: Algebra, alpha: LinearOperator) -> StructureBundle:
    """``(A, alpha o mu, alpha)``; Hom-Novikov whenever ``A`` is Novikov."""
    _same_dim(A, alpha)
    _require_identity(StructureBundle(star=A, alpha=alpha), Identity.MORPHISM, "alpha is not an endomorphism")
    return StructureBundle(star=_twisted(A, alpha, f"{alpha.label}*{A.label}"), alpha=alpha)


def power_twist(A: Algebra, alpha: LinearOperator, n: int, require_automorphism: bool = False) -> StructureBundle:
    """``(A, alpha^n o mu, alpha^(n+1))``."""
    if n < 1:
        raise ValueError("n must be positive")
    _same_dim(A, alpha)
    props = map_properties(A, alpha)
    if not props.endomorphism:
        _require_identity(StructureBundle(star=A, alpha=alpha), Identity.MORPHISM, "alpha is not an endomorphism")
    if require_automorphism and not props.automorphism:
        raise PreconditionError("alpha is not invertible")
    return StructureBundle(star=_twisted(A, alpha.power(n), f"{alpha.label}^{n}*{A.label}"), alpha=alpha.power(n + 1))


def commutator_bracket(A: Algebra, alpha: LinearOperator | None = None) -> StructureBundle:
    """``[x, y] = xy - yx`` with the twist passed through."""
    if alpha is not None:
        _same_dim(A, alpha)
    return StructureBundle(star=Algebra(A.field, A.opposite_commutator(), f"[{A.label}]"), alpha=alpha)


def _hom_novikov_precondition(bundle: StructureBundle, what: str) -> None:
    _require(validate(bundle, "hom-novikov"), what)


def _involution_witness(alpha: LinearOperator):
    sq = alpha.compose(alpha).m
    eye = alpha.field.eye(alpha.dim)
    for j in range(alpha.dim):
        if np.any(sq[:, j] != eye[:, j]):
            return j
    return None


def involutive_untwist(bundle: StructureBundle) -> Algebra:
    """``(A, alpha o mu)`` for an involutive Hom-Novikov algebra; Novikov by construction."""
    alpha = bundle.get("alpha")
    bad = _involution_witness(alpha)
    if bad is not None:
        raise PreconditionError(f"alpha is not an involution: alpha^2(e_{bad}) != e_{bad}", witness=(bad,))
    _hom_novikov_precondition(bundle, "input is not Hom-Novikov")
    A = bundle.product
    return _twisted(A, alpha, f"{alpha.label}*{A.label}")


def alpha_inverse_bracket(bundle: StructureBundle) -> Algebra:
    """Lie bracket ``alpha^-1 o [., .]`` of a regular Hom-Novikov algebra."""
    alpha = bundle.get("alpha")
    if alpha.det() == 0:
        raise PreconditionError("alpha is singular")
    _hom_novikov_precondition(bundle, "input is not Hom-Novikov")
    A = bundle.product
    inv = alpha.inverse()
    return Algebra(A.field, twist_tensor(A.field, A.opposite_commutator(), inv.m), f"{inv.label}[{A.label}]")


def gd_lambda_product(A: Algebra, D: LinearOperator, lam=0) -> Algebra:
    """``x * y = x D(y) + lam x y`` on a commutative associative algebra with derivation ``D``.

    ``lam`` may be a scalar, or (experimental) a vector of ``A`` in which
    case ``x * y = x D(y) + lam (x y)``.
    """
    _same_dim(A, D)
    f = A.field
    _require(validate(StructureBundle(dot=A), "commutative-associative"), "A is not commutative-associative")
    _require_identity(StructureBundle(dot=A, partial=D), Identity.DERIVATION, "D is not a derivation")
    # x D(e_j): c'[i, j, k] = sum_m D[m, j] c[i, m, k]
    c = f.einsum("mj,imk->ijk", D.m, A.c)
    if isinstance(lam, (list, tuple, np.ndarray)):
        lam_vec = f.array(list(lam))
        if lam_vec.shape != (A.dim,):
            raise DimensionError("lambda vector has wrong length")
        left = f.einsum("r,rmk->mk", lam_vec, A.c)  # lam * e_m
        c = f.reduce(c + f.einsum("ijm,mk->ijk", A.c, left))
        label = f"gd({D.label}, vec)"
    else:
        c = f.reduce(c + A.c * f(lam))
        label = f"gd({D.label}, {f.format(f(lam))})"
    return Algebra(f, c, label)


def partial_star_product(bundle: StructureBundle) -> StructureBundle:
    """``x * y = x . d(y)`` for a commutative Hom-associative ``dot`` and a map ``d``
    with ``d(x d(y)) = d(x) d(y)`` commuting with ``alpha`` (``d`` need not be a derivation)."""
    dot = bundle.get("dot")
    d = bundle.get("partial")
    alpha = bundle.alpha_or_identity()
    base = StructureBundle(dot=dot, alpha=alpha, partial=d)
    _require(validate(base, "hom-associative-commutative"), "dot is not commutative Hom-associative")
    _require_identity(base, Identity.GD2, "partial violates d(x d(y)) = d(x) d(y)")
    _require_identity(base, Identity.COMMUTE_MAPS, "partial does not commute with alpha")
    f = dot.field
    star = Algebra(f, f.einsum("mj,imk->ijk", d.m, dot.c), f"{dot.label}.{d.label}")
    return StructureBundle(dot=dot, star=star, alpha=alpha, partial=d)


def derivation_np_product(bundle: StructureBundle) -> StructureBundle:
    """``(dot, x . d(y), alpha)`` from a commutative Hom-associative ``dot`` and a
    derivation ``d`` commuting with ``alpha``; Hom-Novikov-Poisson."""
    dot = bundle.get("dot")
    d = bundle.get("partial")
    alpha = bundle.alpha_or_identity()
    base = StructureBundle(dot=dot, alpha=alpha, partial=d)
    _require(validate(base, "hom-associative-commutative"), "dot is not commutative Hom-associative")
    _require_identity(base, Identity.DERIVATION, "partial is not a derivation")
    _require_identity(base, Identity.COMMUTE_MAPS, "partial does not commute with alpha")
    f = dot.field
    star = Algebra(f, f.einsum("mj,imk->ijk", d.m, dot.c), f"{dot.label}.{d.label}")
    return StructureBundle(dot=dot, star=star, alpha=alpha, partial=d)


def np_yau_twist(bundle: StructureBundle, alpha: LinearOperator) -> StructureBundle:
    """``(alpha o dot, alpha o star, alpha)`` of a Novikov-Poisson algebra."""
    dot, star = bundle.get("dot"), bundle.get("star")
    _same_dim(dot, alpha)
    _require(validate(StructureBundle(dot=dot, star=star), "novikov-poisson"), "input is not Novikov-Poisson")
    for role, A in (("dot", dot), ("star", star)):
        _require_identity(StructureBundle(star=A, alpha=alpha), Identity.MORPHISM, f"alpha does not preserve {role}")
    return StructureBundle(
        dot=_twisted(dot, alpha, f"{alpha.label}*{dot.label}"),
        star=_twisted(star, alpha, f"{alpha.label}*{star.label}"),
        alpha=alpha,
    )


def tensor_algebra_product(A1: Algebra, A2: Algebra) -> np.ndarray:
    """``(e_i1 (x) e_i2)(e_j1 (x) e_j2) = e_i1 e_j1 (x) e_i2 e_j2`` flattened as ``i1 * n2 + i2``."""
    A1.field.require_same(A2.field)
    n = A1.dim * A2.dim
    t = A1.field.einsum("abc,xyz->axbycz", A1.c, A2.c)
    return t.reshape(n, n, n)


def kron(a1: LinearOperator, a2: LinearOperator) -> LinearOperator:
    a1.field.require_same(a2.field)
    return LinearOperator(a1.field, a1.field.reduce(np.kron(a1.m, a2.m)), f"{a1.label}(x){a2.label}")


def tensor_products(dot1, star1, dot2, star2) -> tuple[Algebra, Algebra]:
    """The two tensor-product operations: ``dot1 (x) dot2`` and ``star1 (x) dot2 + dot1 (x) star2``."""
    f = dot1.field
    dot = Algebra(f, tensor_algebra_product(dot1, dot2), f"{dot1.label}(x){dot2.label}")
    star_c = f.reduce(tensor_algebra_product(star1, dot2) + tensor_algebra_product(dot1, star2))
    return dot, Algebra(f, star_c, f"{star1.label}(x){star2.label}")


def tensor_np(b1: StructureBundle, b2: StructureBundle) -> StructureBundle:
    """Tensor product of two Novikov-Poisson algebras.

    If both bundles carry twists, each is first checked to preserve both of
    its products; the output then uses the twisted products and the twist
    ``alpha1 (x) alpha2`` and is Hom-Novikov-Poisson.
    """
    b1.field.require_same(b2.field)
    for i, b in enumerate((b1, b2), 1):
        plain = StructureBundle(dot=b.get("dot"), star=b.get("star"))
        _require(validate(plain, "novikov-poisson"), f"factor {i} is not Novikov-Poisson")
    if (b1.alpha is None) != (b2.alpha is None):
        raise PreconditionError("give twists for both factors or for neither")
    if b1.alpha is None:
        dot, star = tensor_products(b1.dot, b1.star, b2.dot, b2.star)
        return StructureBundle(dot=dot, star=star)
    twisted = []
    for i, b in enumerate((b1, b2), 1):
        for role in ("dot", "star"):
            _require_identity(
                StructureBundle(star=b.get(role), alpha=b.alpha),
                Identity.MORPHISM,
                f"twist of factor {i} does not preserve {role}",
            )
        twisted.append((_twisted(b.dot, b.alpha, b.dot.label), _twisted(b.star, b.alpha, b.star.label)))
    (d1, s1), (d2, s2) = twisted
    dot, star = tensor_products(d1, s1, d2, s2)
    return StructureBundle(dot=dot, star=star, alpha=kron(b1.alpha, b2.alpha))


def find_unity(A: Algebra):
    """The unit element of ``A`` (solving ``u e_i = e_i u = e_i``), or ``None``."""
    f = A.field
    n = A.dim
    # rows (side, i, k), unknown u_j: sum_j u_j c[j, i, k] = delta_ik, likewise c[i, j, k]
    left = A.c.transpose(1, 2, 0).reshape(n * n, n)
    right = A.c.transpose(0, 2, 1).reshape(n * n, n)
    rhs = f.eye(n).reshape(n * n)
    system = np.concatenate([left, right]).astype(object)
    return linalg.solve(f, system, np.concatenate([rhs, rhs]).astype(object))


def unity_derivation(bundle: StructureBundle) -> LinearOperator:
    """``d(x) = 1 * x - (1 * 1) . x`` for a unital Novikov-Poisson algebra."""
    dot, star = bundle.get("dot"), bundle.get("star")
    _require(validate(StructureBundle(dot=dot, star=star), "novikov-poisson"), "input is not Novikov-Poisson")
    u = find_unity(dot)
    if u is None:
        raise PreconditionError("dot has no unity")
    f = dot.field
    # column j: 1 * e_j - (1 * 1) . e_j
    left_star = f.einsum("i,ijk->kj", u, star.c)
    uu = f.einsum("i,ik->k", u, f.einsum("j,ijk->ik", u, star.c))
    left_dot = f.einsum("i,ijk->kj", uu, dot.c)
    return LinearOperator(f, f.reduce(left_star - left_dot), "d_unity")


def _all_matrices(p: int, n: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    powers = p ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] // powers) % p).reshape(-1, n, n)


def enumerate_endomorphisms(A: Algebra, use_numba: bool | None = None) -> list[LinearOperator]:
    """All endomorphisms of ``A`` over GF(p), in lexicographic (row-major) order."""
    f: Field = A.field
    if not f.is_prime_field:
        raise GuardError("endomorphism enumeration needs a prime field")
    n, p = A.dim, f.p
    total = p ** (n * n)
    if total > ENUMERATION_GUARD:
        raise GuardError(f"{p}^{n * n} = {total} matrices exceeds guard {ENUMERATION_GUARD}")
    found = []
    chunk = 1 << 16
    for start in range(0, total, chunk):
        mats = _all_matrices(p, n, start, min(total, start + chunk))
        mask = _kernels.morphism_mask(mats, A.c, p, use_numba)
        found.extend(LinearOperator(f, m, "endo") for m in mats[mask])
    return found
