from fractions import Fraction

import pytest
import sympy

from logeuler.chow import Space, euler_open
from logeuler.elimination import Ideal, quotient_dim
from logeuler.errors import InputError, NonTransverseError
from logeuler.polyring import RatFunc, parse_poly
from logeuler.sscycle import (CountReport, LogFunction, LogSection, chart_by_id, chart_list, conormal_cycle,
                              euler_char, gamma_dlogf, intersect_count, is_conic, raw_cycle, sharp_family,
                              strata, transport_ideal, zero_section)

P2 = Space.parse("p2", "toric")
PARABOLA = "y - x*(1-x)"


def ideal(chart, *texts):
    return Ideal([parse_poly(t, chart.full_ctx) for t in texts], chart.full_ctx)


class TestCharts:
    @pytest.mark.parametrize("space,div", [("p2", "toric"), ("p1", "0,inf,1"), ("p1xp1", "toric"),
                                           ("p2", "X"), ("p1xp1", "X,Z,pt@0:1,Y")])
    def test_frame(self, space, div):
        X = Space.parse(space, div)
        for ch in chart_list(X):
            assert len(ch.boundary) + len(ch.free) == X.dim
            for c, k in ch.boundary.items():
                assert ch.pullbacks[k] == ch.ctx.var(c)
            for k, g in ch.pullbacks.items():
                assert g.is_constant() or any(k == kk for kk in ch.boundary.values()) \
                    or any(k == kk for kk, _ in ch.noncoordinate)

    def test_strata_partition_p2(self):
        labels = {(s.label, s.chart.id) for s in strata(P2)}
        assert labels == {("open", "Z"), ("X=0", "Z"), ("Y=0", "Z"), ("Z=0", "X"), ("X=0,Y=0", "Z"),
                          ("X=0,Z=0", "Y"), ("Y=0,Z=0", "X")}

    def test_strata_extra_points(self):
        X = Space.parse("p1", "0,inf,1")
        assert [s.label for s in strata(X)] == ["open", "X=0", "Z=0", "x=1"]

    def test_rotation_keeps_labels(self):
        for r in range(3):
            assert sorted(s.label for s in strata(P2, r)) == sorted(s.label for s in strata(P2))

    def test_chart_lookup(self):
        assert chart_by_id(P2, "Y").coords == ("x_y", "z_y")
        assert chart_by_id(P2, 0).id == "Z"
        with pytest.raises(InputError):
            chart_by_id(P2, "Q")


class TestSections:
    def test_worked_example_chart(self):
        s = gamma_dlogf(P2, "X/Y")
        v = s.values(chart_by_id(P2, "Z"))
        assert v["eta_x"] == 1 and v["eta_y"] == -1

    def test_chart_y(self):
        v = gamma_dlogf(P2, "X/Y").values(chart_by_id(P2, "Y"))
        assert v["eta_x_y"] == 1 and v["eta_z_y"] == 0

    def test_affine_and_homogeneous_agree(self):
        assert gamma_dlogf(P2, "x/y").function.exponents == gamma_dlogf(P2, "X/Y").function.exponents
        assert gamma_dlogf(P2, "x^2*y").function.exponents == (2, 1, -3)

    def test_scale_zero(self):
        s = gamma_dlogf(P2, "X/Y", 0)
        assert s.is_zero
        assert all(r.is_zero() for r in s.values(chart_by_id(P2, "Z")).values())

    def test_extra_point_section(self):
        X = Space.parse("p1", "0,inf,1")
        s = gamma_dlogf(X, "x/(x-1)")
        ch = chart_by_id(X, "X")
        w = ch.ctx.var("z_x")
        assert s.values(ch)["eta_z_x"] == RatFunc(w, 1 - w)

    def test_matches_sympy_on_open_part(self):
        x, y = sympy.symbols("x y")
        f = x ** 2 / y
        s = gamma_dlogf(P2, "x^2/y", Fraction(3, 2))
        v = s.values(chart_by_id(P2, "Z"))
        assert sympy.simplify(Fraction(3, 2) * x * sympy.diff(sympy.log(f), x) - 3) == 0
        assert v["eta_x"] == 3 and v["eta_y"] == Fraction(-3, 2)

    @pytest.mark.parametrize("text", ["x + 1", "X + Y", "0", "x*Y"])
    def test_rejected(self, text):
        with pytest.raises(InputError):
            gamma_dlogf(P2, text)


class TestCycles:
    def test_parabola_conormal(self):
        Z = chart_by_id(P2, "Z")
        I = conormal_cycle(P2, PARABOLA).components[0].ideal(Z)
        assert I.contains(parse_poly("y - x + x^2", Z.full_ctx))
        assert I.contains(parse_poly("(1-x)*eta_x - (-1+2*x)*eta_y", Z.full_ctx))

    def test_horizontal_line(self):
        Z = chart_by_id(P2, "Z")
        I = conormal_cycle(P2, "y - 1").components[0].ideal(Z)
        assert I.same_as(ideal(Z, "y - 1", "eta_x"))

    def test_zero_section(self):
        for ch in chart_list(P2):
            assert zero_section(P2).components[0].ideal(ch).same_as(ideal(ch, *ch.fiber_names))

    def test_singular(self):
        with pytest.raises(InputError, match="singular"):
            conormal_cycle(P2, "(y-1)^2 - (x-1)^3")

    def test_boundary_singularity_allowed(self):
        conormal_cycle(P2, "y^2 - x^3")

    def test_vanishing(self):
        with pytest.raises(InputError):
            conormal_cycle(P2, "x - x")
        with pytest.raises(InputError):
            conormal_cycle(P2, "x^2*y")

    @pytest.mark.parametrize("space,div,eq", [("p2", "toric", PARABOLA), ("p2", "toric", "y - 2*x - 3"),
                                              ("p2", "X,Y", "x*y - x - 1"), ("p1xp1", "toric", "x*y - x - y - 3"),
                                              ("p1", "0,inf,1", "x + 2")])
    def test_transport_agrees_with_direct(self, space, div, eq):
        X = Space.parse(space, div)
        comp = conormal_cycle(X, eq).components[0]
        A = chart_list(X)[0]
        for B in chart_list(X):
            T = transport_ideal(comp.ideal(A), A, B)
            assert T.same_as(comp.ideal(B)), B.id
            assert is_conic(comp.ideal(B), B)

    def test_raw_matches_conormal(self):
        raw = raw_cycle(P2, "Z", ["x^2 - x + y", "(1-x)*eta_x - (2*x-1)*eta_y", "y*eta_x - x*eta_y + 2*y*eta_y"])
        con = conormal_cycle(P2, PARABOLA)
        for ch in chart_list(P2):
            assert raw.components[0].ideal(ch).same_as(con.components[0].ideal(ch))

    def test_raw_rejects_non_conic(self):
        with pytest.raises(InputError):
            raw_cycle(P2, "Z", ["eta_x - 1"])


class TestCounts:
    def test_worked_example(self):
        r = intersect_count(conormal_cycle(P2, PARABOLA), gamma_dlogf(P2, "X/Y"))
        assert r.total == 1
        assert r.points() == [("Z", "X=0,Y=0", {"x": "0", "y": "0", "eta_x": "1", "eta_y": "-1"})]

    def test_line(self):
        r = intersect_count(conormal_cycle(P2, "y - 2*x - 3"), gamma_dlogf(P2, "X/Y"))
        assert r.total == 1
        [(chart, label, pt)] = r.points()
        assert (chart, label, pt["y_x"], pt["z_x"]) == ("X", "Z=0", "2", "0")

    @pytest.mark.parametrize("div,f,count", [("0,inf,1", "x/(x-1)", 1), ("0,inf,1,2", "x/(x-1)", 2),
                                             ("0,inf", "x", 0), ("0,inf,1,2", "x^2/((x-1)*(x-2))", 2)])
    def test_p1(self, div, f, count):
        X = Space.parse("p1", div)
        assert intersect_count(zero_section(X), gamma_dlogf(X, f)).total == count == -euler_open(X)

    def test_p1_point_at_infinity(self):
        X = Space.parse("p1", "0,inf,1")
        r = intersect_count(zero_section(X), gamma_dlogf(X, "x/(x-1)"))
        assert r.points() == [("X", "Z=0", {"z_x": "0", "eta_z_x": "0"})]

    @pytest.mark.parametrize("case", ["parabola", "line", "p1"])
    @pytest.mark.parametrize("scale", [1, 2, Fraction(-1, 3)])
    def test_scale_invariance(self, case, scale):
        if case == "p1":
            X = Space.parse("p1", "0,inf,1")
            cyc, f = zero_section(X), "x/(x-1)"
        else:
            X = P2
            cyc, f = conormal_cycle(P2, PARABOLA if case == "parabola" else "y - 2*x - 3"), "X/Y"
        assert intersect_count(cyc, gamma_dlogf(X, f, scale)).total == 1

    @pytest.mark.parametrize("rotation", [0, 1, 2])
    def test_rotation(self, rotation):
        for eq in (PARABOLA, "y - 2*x - 3", "x*y - x - 1"):
            cyc = conormal_cycle(P2, eq)
            base = intersect_count(cyc, gamma_dlogf(P2, "X/Y")).total
            assert intersect_count(cyc, gamma_dlogf(P2, "X/Y"), rotation=rotation).total == base

    def test_positivity(self):
        cyc = conormal_cycle(P2, PARABOLA)
        sec = gamma_dlogf(P2, "X/Y")
        r = intersect_count(cyc, sec)
        from logeuler.sscycle.counting import _specialize
        for st, sc in zip(strata(P2), r.components[0].strata):
            assert sc.count >= 0
            J = _specialize(cyc.components[0], sec, st, 10 ** 6)
            K = J + Ideal([st.chart.ctx.var(z) for z in st.zero], st.chart.ctx)
            assert (sc.count >= 1) == (not K.is_unit())

    def test_non_transverse(self):
        with pytest.raises(NonTransverseError):
            intersect_count(conormal_cycle(P2, "x - y"), gamma_dlogf(P2, "X/Y"))

    def test_multiplicities_and_multiple_components(self):
        cyc = 2 * conormal_cycle(P2, PARABOLA) + zero_section(P2)
        assert intersect_count(cyc, gamma_dlogf(P2, "X/Y")).total == 2

    def test_non_reduced_warning(self):
        X = Space.parse("p1", "0,inf,1")
        raw = raw_cycle(X, "Z", ["eta_x^2"])
        r = intersect_count(raw, gamma_dlogf(X, "x/(x-1)"))
        assert r.total == 2 and r.warnings

    def test_json_roundtrip(self):
        r = intersect_count(conormal_cycle(P2, PARABOLA), gamma_dlogf(P2, "X/Y"))
        back = CountReport.from_json(r.to_json())
        assert back.to_dict() == r.to_dict()
        assert r.to_dict()["schema"] == 1


def _sympy_critical_count(eq, fexpr):
    """Critical points of log f on the smooth affine curve eq = 0 inside the torus."""
    x, y = sympy.symbols("x y")
    g = sympy.sympify(eq)
    f = sympy.sympify(fexpr)
    lf = sympy.diff(sympy.log(f), x) * sympy.diff(g, y) - sympy.diff(sympy.log(f), y) * sympy.diff(g, x)
    num = sympy.numer(sympy.together(lf))
    sols = sympy.solve([g, num], [x, y], dict=True)
    return sum(1 for s in sols if s[x] != 0 and s[y] != 0 and f.subs(s) != 0)


@pytest.mark.parametrize("eq", ["y - 2*x - 3", "x*y - x - 1", "x + y - 1", "x*y - 2*x + y"])
def test_interior_count_equals_total(eq):
    # X^2/(YZ) has nonzero residues on every boundary stratum, and these
    # curves cross the boundary transversally
    f = "X^2/(Y*Z)"
    r = intersect_count(conormal_cycle(P2, eq), gamma_dlogf(P2, f))
    open_count = sum(s.count for s in r.components[0].strata if s.stratum == "open")
    assert r.total == open_count
    assert open_count == _sympy_critical_count(eq.replace("^", "**"), "x**2/y")


def test_tangency_to_boundary_contributes():
    # y = x^2 + 1 is tangent to Z=0 at [0:1:0]; f has no critical point on S ∩ U,
    # so the whole count -chi(P^1 minus 4 points) = 2 sits over the boundary
    r = intersect_count(conormal_cycle(P2, "y - x^2 - 1"), gamma_dlogf(P2, "X^2/(Y*Z)"))
    assert _sympy_critical_count("y - x**2 - 1", "x**2/y") == 0
    assert r.total == 2
    assert {s.stratum: s.count for s in r.components[0].strata if s.count} == {"X=0,Z=0": 2}


@pytest.mark.parametrize("eq,chi_top", [(PARABOLA, -1), ("y - 2*x - 3", -1), ("x + y - 1", -1),
                                        ("x*y - x - 1", -1), ("y - x^2 - 1", -2)])
def test_euler_char_matches_topology(eq, chi_top):
    # the curve's complement of the boundary has chi_top; chi(C_S[1]) = -chi_top
    assert euler_char(P2, [(conormal_cycle(P2, eq), 1)], "X/Y") == -chi_top


class TestSharp:
    def test_zero_section_family(self):
        fam = sharp_family(zero_section(P2), "X/Y")
        Z = chart_by_id(P2, "Z")
        assert fam.ideal(0, Z).same_as(Ideal([parse_poly(t, fam.context(Z)) for t in
                                              ("eta_x - s", "eta_y + s")], fam.context(Z)))

    @pytest.mark.parametrize("eq", [PARABOLA, "y - 2*x - 3"])
    def test_fiber_zero(self, eq):
        cyc = conormal_cycle(P2, eq)
        fam = sharp_family(cyc, "X/Y")
        for ch in chart_list(P2):
            assert fam.fiber(0, 0, ch).same_as(cyc.components[0].ideal(ch))

    def test_fiber_one_meets_zero_section(self):
        cyc = conormal_cycle(P2, PARABOLA)
        fam = sharp_family(cyc, "X/Y")
        assert intersect_count(fam.fiber_cycle(1), LogSection.zero(P2)).total == \
            intersect_count(cyc, gamma_dlogf(P2, "X/Y")).total == 1

    def test_multi_parameter(self):
        cyc = conormal_cycle(P2, PARABOLA)
        fam = sharp_family(cyc, ["X/Y", "X/Z"])
        assert fam.params == ("s1", "s2")
        assert fam.fiber([0, 0]).same_as(cyc.components[0].ideal(0))
        with pytest.raises(InputError):
            fam.fiber(1)
