from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homnovikov import (
    FamilySpec,
    GradedIndex,
    NotClosedError,
    RestrictionError,
    SparseElement,
    alpha_inverse_bracket,
    associator,
    check_identity,
    commutator_bracket,
    embed_window,
    family_map,
    family_product,
    np_yau_twist,
    unity_derivation,
    validate,
    window_verify,
)
from homnovikov.families import window_validate

LAURENT = FamilySpec("laurent")
LAURENT_HALF = FamilySpec("laurent", c="1/2")
INDEXED = FamilySpec("indexed", q=1, s=1, beta=2)


def t(n, coeff=1):
    return SparseElement.basis(n, 0, coeff)


def th(n, coeff=1):
    return SparseElement.basis(n, 1, coeff)


def x(a, coeff=1):
    return SparseElement.basis(a, 0, coeff)


def binomial_shift(c, n):
    """(t + c)^n expanded by repeated multiplication, as an oracle."""
    out = t(0)
    for _ in range(n):
        out = family_product(LAURENT, "dot", out, t(1) + t(0, c))
    return out


class TestSparseElement:
    def test_zero_coefficients_dropped(self):
        assert t(2) - t(2) == SparseElement.zero()
        assert not (t(2) - t(2))

    def test_canonical_order(self):
        e = th(1) + t(3) + t(-1)
        assert e.support == [GradedIndex(-1, 0), GradedIndex(1, 1), GradedIndex(3, 0)]

    def test_arithmetic(self):
        e = (t(1) + th(2)) * Fraction(1, 2)
        assert dict(e.items()) == {GradedIndex(1, 0): Fraction(1, 2), GradedIndex(2, 1): Fraction(1, 2)}
        assert -e + e == SparseElement.zero()

    def test_names(self):
        assert GradedIndex(0, 0).name("laurent") == "1"
        assert GradedIndex(1, 0).name("laurent") == "t"
        assert GradedIndex(-2, 0).name("laurent") == "t^-2"
        assert GradedIndex(0, 1).name("laurent") == "theta"
        assert GradedIndex(3, 1).name("laurent") == "theta*t^3"
        assert GradedIndex(-1, 0).name("indexed") == "x_-1"

    def test_hashable(self):
        assert len({t(1), t(1), th(1)}) == 2


class TestFamilySpec:
    def test_parses_strings(self):
        assert LAURENT_HALF.c == Fraction(1, 2)

    @pytest.mark.parametrize("kw", [{"s": 0}, {"beta": 0}])
    def test_rejects_zero_parameters(self, kw):
        with pytest.raises(ValueError):
            FamilySpec("indexed", **kw)

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            FamilySpec("fibonacci")


class TestLaurentProducts:
    def test_star1_kills_theta_on_the_right(self):
        assert family_product(LAURENT, "star1", t(2), th(3)) == SparseElement.zero()
        assert family_product(LAURENT, "star1", th(3), t(2)) == th(5)

    def test_star1_negative_grades(self):
        assert family_product(LAURENT, "star1", t(-4), t(1)) == t(-3)

    def test_star2_binomial(self):
        out = family_product(LAURENT_HALF, "star2", t(1), t(1))
        assert out == t(2) + t(1) + t(0, Fraction(1, 4))

    @pytest.mark.parametrize("n1, n2", [(0, 0), (1, 2), (3, 3), (0, 5)])
    def test_bullet_matches_multiplied_out_oracle(self, n1, n2):
        c = Fraction(-2, 3)
        spec = FamilySpec("laurent", c=c)
        out = family_product(spec, "bullet", t(n1), t(n2))
        assert out == binomial_shift(c, n1 + n2)

    def test_theta_squared_is_zero(self):
        assert family_product(LAURENT, "dot", th(1), th(2)) == SparseElement.zero()
        assert family_product(LAURENT, "dot", th(1), t(2)) == th(3)

    def test_restriction(self):
        with pytest.raises(RestrictionError):
            family_product(LAURENT_HALF, "star2", t(-1), t(2))

    def test_unknown_product(self):
        with pytest.raises(KeyError):
            family_product(LAURENT, "star", t(1), t(1))


class TestIndexedProducts:
    def test_star(self):
        assert family_product(INDEXED, "star", x(2), x(3)) == x(6, 4)

    def test_dot(self):
        assert family_product(INDEXED, "dot56", x(2), x(3)) == x(6)
        assert family_product(INDEXED, "dot", x(-1), x(4)) == x(4)

    def test_twisted_star(self):
        # beta^(a+b+2q) f(b+q) x_(a+b+q)
        assert family_product(INDEXED, "hstar", x(1), x(2)) == x(4, 2**5 * 3)
        assert family_product(INDEXED, "hstar", x(-3), x(0)) == x(-2, Fraction(1, 2))


class TestMaps:
    def test_laurent_del(self):
        assert family_map(LAURENT, "del", t(3) + th(5)) == t(3)

    def test_laurent_alpha_kills_theta(self):
        assert family_map(LAURENT_HALF, "alpha", th(2)) == SparseElement.zero()
        assert family_map(LAURENT_HALF, "alpha", t(2)) == t(2) + t(1) + t(0, Fraction(1, 4))

    def test_laurent_alpha_restriction(self):
        with pytest.raises(RestrictionError):
            family_map(LAURENT_HALF, "alpha", t(-1))

    def test_indexed_del2(self):
        assert family_map(INDEXED, "del2", x(3)) == x(3, 4)

    def test_indexed_alpha_negative_exponent(self):
        assert family_map(INDEXED, "alpha", x(-3)) == x(-3, Fraction(1, 4))

    def test_unknown_map(self):
        with pytest.raises(KeyError):
            family_map(LAURENT, "del2", t(1))


# ---------------------------------------------------------------------------
# properties


small = st.integers(-6, 6)
nonneg = st.integers(0, 5)
rationals = st.fractions(-4, 4, max_denominator=5).filter(lambda v: v != 0)


@settings(max_examples=60, deadline=None)
@given(small, small, st.integers(-3, 3), rationals)
def test_indexed_grade_additivity(a, b, q, s):
    spec = FamilySpec("indexed", q=q, s=s, beta=3)
    for name in ("dot56", "star", "hstar"):
        out = family_product(spec, name, x(a), x(b))
        assert all(g.grade == a + b + q for g in out.support)


@settings(max_examples=60, deadline=None)
@given(small, small)
def test_laurent_grade_additivity(n1, n2):
    for name in ("dot", "star1"):
        out = family_product(LAURENT, name, t(n1), t(n2))
        assert out.support == [GradedIndex(n1 + n2, 0)]


@settings(max_examples=60, deadline=None)
@given(small, st.integers(-3, 3), rationals)
def test_del2_equals_del(a, q, s):
    spec = FamilySpec("indexed", q=q, s=s, beta=2)
    assert family_map(spec, "del2", x(a)) == family_map(spec, "del", x(a)) == x(a, s * (a + q))


@settings(max_examples=60, deadline=None)
@given(small, small, st.integers(-3, 3), rationals)
def test_indexed_alpha_multiplicative(a, b, q, beta):
    spec = FamilySpec("indexed", q=q, s=1, beta=beta)
    lhs = family_map(spec, "alpha", family_product(spec, "dot56", x(a), x(b)))
    rhs = family_product(spec, "dot56", family_map(spec, "alpha", x(a)), family_map(spec, "alpha", x(b)))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(nonneg, nonneg, st.fractions(-3, 3, max_denominator=4))
def test_laurent_alpha_multiplicative(n1, n2, c):
    spec = FamilySpec("laurent", c=c)
    lhs = family_map(spec, "alpha", family_product(spec, "dot", t(n1), t(n2)))
    rhs = family_product(spec, "dot", family_map(spec, "alpha", t(n1)), family_map(spec, "alpha", t(n2)))
    assert lhs == rhs


def test_del_fails_leibniz():
    # d(t t) = t^2, d(t) t + t d(t) = 2 t^2
    lhs = family_map(LAURENT, "del", family_product(LAURENT, "dot", t(1), t(1)))
    rhs = family_product(LAURENT, "dot", family_map(LAURENT, "del", t(1)), t(1)) * 2
    assert lhs == t(2) and rhs == t(2, 2)


# ---------------------------------------------------------------------------
# window verification


class TestWindowVerify:
    def test_star1_left_symmetry(self):
        assert window_verify(LAURENT, "left-symmetry", {"star": "star1"}, (-6, 6)).holds

    def test_star2_hom_right_commute(self):
        v = window_verify(LAURENT_HALF, "hom-right-commute", {"star": "star2", "alpha": "alpha"}, (0, 6))
        assert v.holds

    def test_indexed_full_suite(self):
        roles = {"dot": "bullet", "star": "hstar", "alpha": "alpha"}
        rep = window_validate(INDEXED, "hom-novikov-poisson", roles, (-5, 5))
        assert rep.passed and len(rep.entries) == 8

    def test_indexed_np(self):
        rep = window_validate(INDEXED, "novikov-poisson", {"dot": "dot56", "star": "star"}, (-5, 5))
        assert rep.passed

    def test_derivation_witness(self):
        v = window_verify(LAURENT, "derivation", {"dot": "dot", "del": "del"}, (1, 6))
        assert not v.holds
        assert v.witness.tuple == (GradedIndex(1, 0), GradedIndex(1, 0))
        assert v.witness.lhs == t(2) and v.witness.rhs == t(2, 2)

    def test_gd2_holds(self):
        assert window_verify(LAURENT, "gd2", {"dot": "dot", "del": "del"}, (-6, 6)).holds

    def test_gd2_holds_for_bullet_with_alpha(self):
        roles = {"dot": "bullet", "del": "del", "alpha": "alpha"}
        assert window_verify(LAURENT_HALF, "gd2", roles, (0, 6)).holds
        assert window_verify(LAURENT_HALF, "commute-maps", roles, (0, 6)).holds
        assert window_verify(LAURENT_HALF, "hom-associativity", roles, (0, 6)).holds

    def test_restriction_surfaces(self):
        with pytest.raises(RestrictionError):
            window_verify(LAURENT_HALF, "hom-right-commute", {"star": "star2", "alpha": "alpha"}, (-3, 3))

    def test_star2_is_bullet_composed_with_del(self):
        for n1 in range(0, 5):
            for n2 in range(0, 5):
                for p2 in (0, 1):
                    y = SparseElement.basis(n2, p2)
                    lhs = family_product(LAURENT_HALF, "star2", t(n1), y)
                    rhs = family_product(LAURENT_HALF, "bullet", t(n1), family_map(LAURENT_HALF, "del", y))
                    assert lhs == rhs


class TestEmbedding:
    def test_indexed_truncation(self):
        spec = FamilySpec("indexed", q=0, s=1, beta=2)
        b = embed_window(spec, {"dot": "dot56"}, (0, 3), quotient=True)
        assert b.dim == 4 and b.basis == ("x_0", "x_1", "x_2", "x_3")
        assert validate(b, "commutative-associative").passed
        assert b.dot.c[1, 2].tolist() == [0, 0, 0, 1]
        assert b.dot.c[2, 2].tolist() == [0, 0, 0, 0]

    def test_not_closed(self):
        with pytest.raises(NotClosedError):
            embed_window(LAURENT, {"star": "star1"}, (0, 2))

    def test_laurent_dot_quotient_dimension(self):
        assert embed_window(LAURENT, {"dot": "dot"}, (0, 3), quotient=True).dim == 8

    def test_alpha_with_shift_is_not_a_closed_quotient(self):
        with pytest.raises(NotClosedError):
            embed_window(LAURENT_HALF, {"dot": "bullet", "alpha": "alpha"}, (0, 3), quotient=True)

    def test_star1_embedding(self):
        b = embed_window(LAURENT, {"star": "star1"}, (0, 1), quotient=True)
        assert b.dim == 4
        assert check_identity(b, "left-symmetry").holds
        assert validate(b, "novikov").passed
        es = b.field.eye(4)
        for i in range(4):
            for j in range(4):
                for k in range(4):
                    assert associator(b.star, es[i], es[j], es[k]).tolist() == associator(b.star, es[j], es[i], es[k]).tolist()

    def test_star1_bracket(self):
        # [t^n, theta t^m] = -theta t^(m+n)
        for n in range(-3, 4):
            for m in range(-3, 4):
                lhs = family_product(LAURENT, "star1", t(n), th(m)) - family_product(LAURENT, "star1", th(m), t(n))
                assert lhs == th(m + n, -1)
        b = embed_window(LAURENT, {"star": "star1"}, (0, 1), quotient=True)
        br = commutator_bracket(b.star).star
        i, j = b.basis.index("t"), b.basis.index("theta")
        assert br.c[i, j].tolist() == [0, 0, 0, -1]

    def test_alpha_inverse_bracket_on_indexed_window(self):
        b = embed_window(INDEXED, {"star": "hstar", "alpha": "alpha"}, (-1, 3), quotient=True)
        assert b.dim == 5 and validate(b, "hom-novikov").passed
        assert b.alpha.inverse().m.diagonal().tolist() == [Fraction(1, 2 ** (a + 1)) for a in range(-1, 4)]
        L = alpha_inverse_bracket(b)
        from homnovikov import LinearOperator, QQ, StructureBundle

        assert validate(StructureBundle(star=L, alpha=LinearOperator.identity(QQ, 5)), "hom-lie").passed

    def test_np_yau_twist_on_indexed_window(self):
        b = embed_window(INDEXED, {"dot": "dot56", "star": "star", "alpha": "alpha"}, (-1, 3), quotient=True)
        out = np_yau_twist(b.with_(alpha=None), b.alpha)
        assert validate(out, "hom-novikov-poisson").passed
        # x_a * x_b = 2^(a+b+2) (b+1) x_(a+b+1)
        i = {name: k for k, name in enumerate(b.basis)}
        assert out.star.c[i["x_0"], i["x_1"], i["x_2"]] == 2**3 * 2
        full = embed_window(INDEXED, {"star": "hstar"}, (-1, 3), quotient=True)
        assert out.star == full.star.relabel(out.star.label)

    def test_unity_on_indexed_window(self):
        b = embed_window(INDEXED, {"dot": "dot56", "star": "star", "del": "del"}, (-1, 3), quotient=True)
        d = unity_derivation(b.with_(partial=None))
        assert d.m.diagonal().tolist() == [a + 1 for a in range(-1, 4)]
        assert d.m.tolist() == b.partial.m.tolist()

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2), st.integers(1, 4), st.sampled_from(["novikov", "commutative-associative"]))
    def test_window_verify_agrees_with_embedding(self, lo, width, kind):
        spec = FamilySpec("indexed", q=0, s=1, beta=2)
        roles = {"star": "star"} if kind == "novikov" else {"dot": "dot56"}
        window = (lo, lo + width)
        b = embed_window(spec, roles, window, quotient=True)
        assert validate(b, kind).passed == window_validate(spec, kind, roles, window).passed
