from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from logeuler.errors import ContextMismatch, InputError, ParseError
from logeuler.polyring import Poly, RatFunc, VarContext, format_poly, parse_expr, parse_poly

CTX = VarContext(["x", "y", "z"])
x, y, z = CTX.gens()


def P(text, ctx=CTX):
    return parse_poly(text, ctx)


class TestParser:
    def test_parabola(self):
        assert P("y - x*(1-x)") == y - x + x ** 2

    def test_zero(self):
        p = P("0")
        assert p.is_zero() and not p.terms

    def test_cube(self):
        assert P("(x+1)^3") == x ** 3 + 3 * x ** 2 + 3 * x + 1

    def test_rationals_and_precedence(self):
        assert P("-x^2 + 3/4*y") == -(x ** 2) + Fraction(3, 4) * y
        assert P("2^3*x") == 8 * x
        assert P("x**2") == x ** 2
        assert P("-x^2") == -(x ** 2)
        assert P("x/2") == Fraction(1, 2) * x

    def test_rational_function(self):
        r = parse_expr("x/(x-1)", CTX)
        assert isinstance(r, RatFunc)
        assert r == RatFunc(x, x - 1)

    def test_poly_division_collapses(self):
        assert parse_expr("(x^2-1)/(x-1)", CTX) == RatFunc(x + 1, CTX.one)

    @pytest.mark.parametrize("text", ["x +", "(x", "x ^^ 2", "3 x", "x^y", ")"])
    def test_syntax_errors(self, text):
        with pytest.raises(ParseError) as err:
            P(text)
        assert "position" in str(err.value)

    def test_unknown_variable(self):
        with pytest.raises(InputError, match="unknown variable"):
            P("w + 1")

    def test_division_by_zero(self):
        with pytest.raises(InputError):
            parse_expr("x/(y-y)", CTX)

    def test_poly_required(self):
        with pytest.raises(InputError):
            parse_poly("1/x", CTX)


class TestArithmetic:
    def test_difference_of_squares(self):
        assert (x + y) * (x - y) == x ** 2 - y ** 2

    def test_absorbing(self):
        assert ((x + 1) * CTX.zero).is_zero()

    def test_context_mismatch(self):
        other = VarContext(["x", "w"])
        with pytest.raises(ContextMismatch):
            x + other.var("w")

    def test_partial(self):
        assert P("y - x + x^2").partial("x") == P("-1 + 2*x")

    @pytest.mark.parametrize("n", [0, 1, 2, 5])
    def test_log_derive_monomial(self, n):
        assert (x ** n).log_derive("x") == (x ** n) * n

    def test_log_derive_constant(self):
        assert CTX.const(7).log_derive("x").is_zero()

    def test_unknown_derivative_variable(self):
        with pytest.raises(InputError):
            x.partial("w")

    def test_strip_factor(self):
        q, k = (x ** 3 * (y + 1)).strip_factor(x)
        assert k == 3 and q == y + 1

    def test_subs_rational(self):
        r = (x * y + 1).subs_rational({"x": RatFunc(CTX.one, z)}, CTX)
        assert r == RatFunc(y + z, z)

    def test_ratfunc_arithmetic(self):
        a = RatFunc(x, y)
        b = RatFunc(CTX.one, x)
        assert a * b == RatFunc(CTX.one, y)
        assert a + b == RatFunc(x * x + y, x * y)
        assert (a / a) == RatFunc(CTX.one, CTX.one)
        assert a.partial("y") == RatFunc(-x, y * y)


# -- properties ----------------------------------------------------------------

coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(exps, coeff, max_size=5).map(lambda d: Poly(CTX, d))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert p - p == CTX.zero


@settings(max_examples=60, deadline=None)
@given(polys, polys, st.sampled_from(["x", "y", "z"]))
def test_leibniz(p, q, v):
    assert (p * q).partial(v) == p.partial(v) * q + p * q.partial(v)
    assert (p * q).log_derive(v) == p.log_derive(v) * q + p * q.log_derive(v)


@settings(max_examples=80, deadline=None)
@given(polys)
def test_print_parse_roundtrip(p):
    assert parse_poly(format_poly(p), CTX) == p


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_exact_division(p, q):
    if q.is_zero():
        return
    assert (p * q).divide_exact(q) == p
