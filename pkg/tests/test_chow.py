from itertools import product

import pytest
import sympy

from logeuler.chow import (ChowClass, Component, Space, chern_cotangent, chern_log_cotangent, deg,
                           euler_open, euler_open_direct, mul)
from logeuler.errors import InputError


def h(dims, i=0):
    return ChowClass.hyperplane(dims, i)


class TestRing:
    def test_line_self_intersection(self):
        a = mul(h([2]), h([2]))
        assert a == h([2]) ** 2 and deg(a) == 1

    def test_truncation(self):
        assert (h([2]) ** 2 * h([2])) == ChowClass([2])

    def test_p1xp1(self):
        s = h([1, 1], 0) + h([1, 1], 1)
        sq = s * s
        assert sq == h([1, 1], 0) * h([1, 1], 1) * 2
        assert deg(sq) == 2

    def test_inverse_product(self):
        one = ChowClass.one([2])
        a = one - h([2]) * 3 + h([2]) ** 2 * 3
        b = one + h([2]) * 3 + h([2]) ** 2 * 6
        assert a * b == one
        assert a.inverse() == b

    def test_deg_requires_top_degree(self):
        with pytest.raises(InputError):
            deg(h([2]))


class TestChern:
    def test_toric_p2(self):
        X = Space.parse("p2", "toric")
        assert str(chern_log_cotangent(X)) == "1"
        assert euler_open(X) == 0

    def test_empty_p2(self):
        X = Space.parse("p2", "none")
        assert str(chern_log_cotangent(X)) == "1 - 3*h + 3*h^2"
        assert euler_open(X) == 3

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
    def test_p1_points(self, m):
        pts = ["0", "inf", "1", "2", "3"][:m]
        X = Space.parse("p1", ",".join(pts))
        c = chern_log_cotangent(X)
        assert c == ChowClass.one([1]) + h([1]) * (m - 2)
        assert euler_open(X) == 2 - m

    def test_sympy_oracle_p2(self):
        t = sympy.symbols("h")
        for mask in product([0, 1], repeat=3):
            X = Space([2], [Component(0, index=i) for i in range(3) if mask[i]])
            expr = sympy.series((1 - t) ** 3 / (1 - t) ** sum(mask), t, 0, 3).removeO()
            coeffs = [int(sympy.Poly(expr, t).coeff_monomial(t ** k)) for k in range(3)]
            c = chern_log_cotangent(X)
            assert [c.part(k).terms.get((k,), 0) for k in range(3)] == coeffs

    @pytest.mark.parametrize("factors", [[1], [2], [3], [1, 1], [1, 2], [2, 2], [1, 1, 1]])
    def test_empty_boundary_product(self, factors):
        X = Space(factors)
        expect = 1
        for n in factors:
            expect *= n + 1
        assert euler_open(X) == expect
        assert deg(chern_cotangent(X).part(X.dim)) * (-1) ** X.dim == expect

    @pytest.mark.parametrize("factors", [[1], [2], [3], [1, 1], [1, 2], [2, 1, 1]])
    def test_toric_trivial(self, factors):
        X = Space.toric(factors)
        assert chern_log_cotangent(X) == ChowClass.one(factors)
        assert euler_open(X) == 0

    def test_puncturing_p1_factor(self):
        for m1, m2 in product(range(0, 4), range(0, 4)):
            pts = ["0", "inf", "1", "2"]
            comps = ",".join([f"pt@0:{p}" if p not in ("0", "inf") else ("X" if p == "0" else "Z")
                              for p in pts[:m1]] +
                             [f"pt@1:{p}" if p not in ("0", "inf") else ("Y" if p == "0" else "W")
                              for p in pts[:m2]])
            X = Space.parse("p1xp1", comps or "none")
            assert euler_open(X) == (2 - m1) * (2 - m2)
            assert euler_open_direct(X) == euler_open(X)

    @pytest.mark.parametrize("space,div", [("p2", "X"), ("p2", "X,Y"), ("p1xp1", "X,Y"),
                                           ("p1", "0,1,inf"), ("p3", "toric"), ("p3", "X,Y")])
    def test_direct_oracle(self, space, div):
        X = Space.parse(space, div)
        assert euler_open(X) == euler_open_direct(X)


class TestSpaceParsing:
    def test_bad_space(self):
        with pytest.raises(InputError):
            Space.parse("q2", "toric")

    def test_bad_divisor(self):
        with pytest.raises(InputError):
            Space.parse("p2", "1/2")

    def test_duplicates(self):
        with pytest.raises(InputError):
            Space.parse("p1", "0,X")

    def test_labels(self):
        X = Space.parse("p1", "0,inf,1")
        assert [X.component_label(k) for k in range(3)] == ["X=0", "Z=0", "x=1"]
