"""Bilinear forms on algebras: invariance checks, form twists, and the
center / lower-central-series analysis of quadratic Hom-Novikov algebras."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import linalg
from .constructions import _require, _require_identity, _twisted
from .core import Algebra, BilinearForm, LinearOperator, StructureBundle
from .errors import DimensionError, PreconditionError
from .identities import Identity, Report, ReportEntry, Verdict, check_identity, validate
from .linalg import Subspace

FORM_IDENTITIES = (
    Identity.FORM_ASSOC,
    Identity.FORM_LIE_INVARIANCE,
    Identity.FORM_HOM_INVARIANCE,
    Identity.FORM_ALPHA_COMPAT,
    Identity.FORM_SYMMETRY,
)


class FormProperties(NamedTuple):
    symmetric: bool
    nondegenerate: bool


def form_properties(B: BilinearForm) -> FormProperties:
    sym = bool(np.all(B.b == B.b.T))
    return FormProperties(sym, linalg.det(B.field, B.b) != 0)


def check_form_identity(bundle: StructureBundle, ident) -> Verdict:
    ident = Identity(ident)
    if ident not in FORM_IDENTITIES:
        raise ValueError(f"{ident.value} is not a form identity")
    return check_identity(bundle, ident)


def twist_form(B: BilinearForm, alpha: LinearOperator, k: int = 1) -> BilinearForm:
    """``B_{alpha^k}(x, y) = B(alpha^k x, y)``, matrix ``(m^k)^T b``."""
    if k < 1:
        raise ValueError("k must be positive")
    if B.dim != alpha.dim:
        raise DimensionError(f"form dim {B.dim} vs operator dim {alpha.dim}")
    B.field.require_same(alpha.field)
    mk = linalg.matrix_power(B.field, alpha.m, k)
    return BilinearForm(B.field, B.field.matmul(mk.T, B.b), f"{B.label}_{alpha.label}^{k}")


def _require_automorphism(bundle: StructureBundle) -> None:
    if bundle.get("alpha").det() == 0:
        raise PreconditionError("alpha is not invertible")
    # morphism is part of the hom-novikov suites; quadratic-novikov callers check it here
    _require_identity(bundle, Identity.MORPHISM, "alpha is not an endomorphism")


def _compat(bundle: StructureBundle) -> None:
    _require_identity(bundle, Identity.FORM_ALPHA_COMPAT, "B(alpha x, y) != B(x, alpha y)")


def derive_quadratic_homlie(bundle: StructureBundle, mode: str = "from-hom-novikov") -> StructureBundle:
    """Quadratic Hom-Lie structure ``(bracket, alpha, B_alpha)``.

    ``from-hom-novikov``: the input is quadratic Hom-Novikov and the bracket is
    the commutator.  ``from-novikov-with-automorphism``: the input is quadratic
    Novikov (``alpha`` only twists) and the bracket is ``alpha o [., .]``.
    """
    alpha = bundle.get("alpha")
    B = bundle.get("form")
    A = bundle.product
    if mode == "from-hom-novikov":
        _require(validate(bundle, "quadratic-hom-novikov"), "input is not quadratic Hom-Novikov")
        _require_automorphism(bundle)
        _compat(bundle)
        bracket = A.opposite_commutator()
    elif mode == "from-novikov-with-automorphism":
        _require(validate(bundle, "quadratic-novikov"), "input is not quadratic Novikov")
        _require_automorphism(bundle)
        _compat(bundle)
        bracket = A.field.einsum("ijm,lm->ijl", A.opposite_commutator(), alpha.m)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    L = Algebra(A.field, bracket, f"[{A.label}]")
    return StructureBundle(star=L, alpha=alpha, form=twist_form(B, alpha, 1))


def quadratic_novikov_from_involutive(bundle: StructureBundle) -> StructureBundle:
    """``(alpha o mu, B)`` from a quadratic Hom-Novikov algebra with an involutive, B-self-adjoint twist."""
    alpha = bundle.get("alpha")
    if not alpha.compose(alpha).is_identity():
        raise PreconditionError("alpha is not an involution")
    _require(validate(bundle, "quadratic-hom-novikov"), "input is not quadratic Hom-Novikov")
    _compat(bundle)
    A = bundle.product
    return StructureBundle(star=_twisted(A, alpha, f"{alpha.label}*{A.label}"), form=bundle.form)


def quadratic_power_twist(bundle: StructureBundle, n: int = 1) -> StructureBundle:
    """``(alpha^n o mu, alpha^(n+1), B_{alpha^(n+1)})``.

    For odd ``n`` the result is again quadratic Hom-Novikov.  For even ``n``
    the twisted form can lose Hom-invariance (``e0 e0 = e1``, ``e1 e1 = e0``,
    ``alpha`` the swap, ``B`` the identity, ``n = 2``), so validate the output.
    """
    if n < 1:
        raise ValueError("n must be positive")
    alpha = bundle.get("alpha")
    _require(validate(bundle, "quadratic-hom-novikov"), "input is not quadratic Hom-Novikov")
    _require_automorphism(bundle)
    _compat(bundle)
    A = bundle.product
    return StructureBundle(
        star=_twisted(A, alpha.power(n), f"{alpha.label}^{n}*{A.label}"),
        alpha=alpha.power(n + 1),
        form=twist_form(bundle.form, alpha, n + 1),
    )


def center(A: Algebra) -> Subspace:
    """``{x : x y = y x = 0 for all y}`` in canonical echelon form."""
    f, n = A.field, A.dim
    if n == 0:
        return Subspace(f, 0)
    # unknown x (length n); rows: (x e_j)_k = sum_i x_i c[i, j, k], (e_j x)_k = sum_i x_i c[j, i, k]
    left = A.c.transpose(1, 2, 0).reshape(n * n, n)
    right = A.c.transpose(0, 2, 1).reshape(n * n, n)
    system = np.concatenate([left, right]).astype(object)
    return Subspace(f, n, linalg.nullspace(f, system))


def _bracket_span(L: Algebra, sub: Subspace) -> Subspace:
    f, n = L.field, L.dim
    if sub.dim == 0:
        return Subspace(f, n)
    # [e_i, v] for basis v of sub
    vecs = f.einsum("vj,ijk->ivk", sub.basis, L.c).reshape(-1, n)
    return Subspace(f, n, vecs)


def lower_central_series(L: Algebra, max_steps: int = 64) -> list[Subspace]:
    """``[G^1, G^2, ...]`` with ``G^(i+1) = [G, G^i]``.

    Stops once a term is zero, repeats the previous one, or after
    ``max_steps`` brackets.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    f, n = L.field, L.dim
    series = [Subspace(f, n, f.eye(n))]
    for _ in range(max_steps):
        if series[-1].dim == 0:
            break
        nxt = _bracket_span(L, series[-1])
        series.append(nxt)
        if nxt == series[-2]:
            break
    return series


class NilpotencyReport(NamedTuple):
    derived_in_center: bool
    two_step: bool
    lcs_dims: list
    alpha_compat: bool
    counterexample: bool


def derived_subspace(L: Algebra) -> Subspace:
    return Subspace(L.field, L.dim, L.c.reshape(-1, L.dim)) if L.dim else Subspace(L.field, 0)


def nilpotency_report(bundle: StructureBundle, require_alpha_compat: bool = True) -> NilpotencyReport:
    """Compare the commutator Hom-Lie algebra of a quadratic Hom-Novikov
    algebra against the center of the algebra itself.

    With a valid input (automorphic twist) the expected outcome is
    ``derived_in_center`` and ``two_step`` both true; anything else is
    reported with ``counterexample=True`` rather than raised.
    ``require_alpha_compat=False`` accepts twists that are not
    B-self-adjoint and records that in ``alpha_compat``.
    """
    _require(validate(bundle, "quadratic-hom-novikov"), "input is not quadratic Hom-Novikov")
    if bundle.get("alpha").det() == 0:
        raise PreconditionError("alpha is not invertible")
    compat = check_identity(bundle, Identity.FORM_ALPHA_COMPAT)
    if require_alpha_compat and not compat.holds:
        raise PreconditionError("B(alpha x, y) != B(x, alpha y)", witness=compat.witness)
    A = bundle.product
    L = Algebra(A.field, A.opposite_commutator(), f"HLie({A.label})")
    in_center = derived_subspace(L).issubspace(center(A))
    lcs = lower_central_series(L)
    two_step = any(s.dim == 0 for s in lcs[:3])
    return NilpotencyReport(in_center, two_step, [s.dim for s in lcs], compat.holds, not (in_center and two_step))


def precondition_report(bundle: StructureBundle) -> Report:
    """``quadratic-hom-novikov`` plus the twist-compatibility check, as one report."""
    rep = validate(bundle, "quadratic-hom-novikov")
    extra = ReportEntry(Identity.FORM_ALPHA_COMPAT.value, None, check_identity(bundle, Identity.FORM_ALPHA_COMPAT))
    return Report("quadratic-hom-novikov+form-alpha-compat", rep.entries + [extra])


__all__ = [
    "FormProperties", "NilpotencyReport", "center", "check_form_identity", "derive_quadratic_homlie",
    "derived_subspace", "form_properties", "lower_central_series", "nilpotency_report",
    "precondition_report", "quadratic_novikov_from_involutive", "quadratic_power_twist", "twist_form",
]
