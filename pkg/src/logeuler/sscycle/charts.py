"""Affine log charts of a :class:`~logeuler.chow.Space` and its stratification.

Every factor ``P^n`` is covered by the coordinate charts ``X_c != 0``; a
``P^1`` factor with extra boundary points also gets one chart centred at each
such point (coordinate ``t = x - q``), so that every boundary component is a
coordinate hyperplane in some chart.  A product chart is a tuple of factor
charts.  In a chart, a coordinate is *boundary* when some component pulls
back to it; it then carries the log fibre coordinate ``eta_<u>`` (dual to
``du/u``), otherwise the ordinary ``xi_<u>`` (dual to ``du``).

Strata partition ``X`` into torus orbits of every factor (refined by the
extra points).  Each stratum is attached to exactly one canonical chart: the
first chart, in a fixed and optionally rotated enumeration, that contains it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, List, Optional, Tuple

from ..chow import Space
from ..errors import InputError
from ..polyring import Poly, RatFunc, VarContext


@dataclass(frozen=True)
class FactorChart:
    factor: int
    chart_id: str
    coords: Tuple[str, ...]
    param: Tuple[Poly, ...]                # homogeneous coordinates in chart coords
    coord_forms: Tuple[Tuple[Poly, Poly], ...]  # chart coords as ratios of linear forms
    toric_index: Optional[int] = None


def _factor_charts(X: Space, i: int) -> List[FactorChart]:
    n = X.factors[i]
    H = X.homog_names(i)
    hctx = VarContext(H)
    out = []
    for c in [n] + list(range(n)):
        if c == n:
            coords = tuple(X.affine_names(i))
        else:
            coords = tuple(f"{H[j].lower()}_{H[c].lower()}" for j in range(n + 1) if j != c)
        ctx = VarContext(coords)
        param, k = [], 0
        forms = []
        for j in range(n + 1):
            if j == c:
                param.append(ctx.one)
            else:
                param.append(ctx.var(coords[k]))
                forms.append((hctx.var(H[j]), hctx.var(H[c])))
                k += 1
        out.append(FactorChart(i, H[c], coords, tuple(param), tuple(forms), toric_index=c))
    if n == 1:
        x = X.affine_names(i)[0]
        pts = [comp.point for comp in X.components if comp.factor == i and not comp.is_coordinate]
        for k, q in enumerate(pts, start=1):
            t = f"t{k}_{x}"
            ctx = VarContext([t])
            param = (ctx.var(t) + q, ctx.one)
            form = (hctx.var(H[0]) - hctx.var(H[1]) * q, hctx.var(H[1]))
            out.append(FactorChart(i, f"at({q})", (t,), param, (form,)))
    return out


def component_form(X: Space, k: int) -> Poly:
    """Linear form (in the factor's homogeneous coordinates) cutting out component ``k``."""
    comp = X.components[k]
    H = X.homog_names(comp.factor)
    hctx = VarContext(H)
    if comp.is_coordinate:
        return hctx.var(H[comp.index])
    return hctx.var(H[0]) - hctx.var(H[1]) * comp.point


class LogChart:
    """A product chart with its log frame."""

    def __init__(self, X: Space, factor_charts: Tuple[FactorChart, ...]):
        self.space = X
        self.factor_charts = factor_charts
        self.id = "|".join(fc.chart_id for fc in factor_charts)
        self.coords: Tuple[str, ...] = tuple(c for fc in factor_charts for c in fc.coords)
        self.ctx = VarContext(self.coords)
        # homogeneous coordinate name -> image polynomial in chart coords
        self.homog_images: Dict[str, Poly] = {}
        for fc in factor_charts:
            for h, p in zip(X.homog_names(fc.factor), fc.param):
                self.homog_images[h] = p.embed(self.ctx)
        self.pullbacks: Dict[int, Poly] = {}
        self.boundary: Dict[str, int] = {}      # coordinate -> component index
        self.noncoordinate: List[Tuple[int, Poly]] = []
        for k in range(len(X.components)):
            g = self.pull(component_form(X, k))
            self.pullbacks[k] = g
            if g.is_constant():
                continue
            if len(g.terms) == 1 and g.total_degree() == 1:
                self.boundary[g.variables()[0]] = k
            else:
                self.noncoordinate.append((k, g))
        self.free = tuple(c for c in self.coords if c not in self.boundary)
        self.fiber: Dict[str, str] = {
            c: (f"eta_{c}" if c in self.boundary else f"xi_{c}") for c in self.coords}
        self.fiber_names: Tuple[str, ...] = tuple(self.fiber[c] for c in self.coords)
        self.full_ctx = VarContext(self.coords + self.fiber_names)

    def __repr__(self):
        return f"LogChart({self.id}: {', '.join(self.coords)})"

    def is_log(self, coord: str) -> bool:
        return coord in self.boundary

    def pull(self, form: Poly) -> Poly:
        """Pull a homogeneous polynomial back to chart coordinates."""
        return form.subs({h: self.homog_images[h] for h in form.ctx.names if h in self.homog_images},
                         ctx=self.ctx) if form.ctx.names else self.ctx.const(form.constant_value())

    def boundary_polys(self) -> List[Poly]:
        """All visible boundary equations (coordinates and non-coordinate ones)."""
        return [g for g in self.pullbacks.values() if not g.is_constant()]

    def coords_of(self, other: "LogChart") -> Dict[str, RatFunc]:
        """``other``'s coordinates written as rational functions on this chart."""
        out = {}
        for fc in other.factor_charts:
            for c, (num, den) in zip(fc.coords, fc.coord_forms):
                out[c] = RatFunc(self.pull(num), self.pull(den))
        return out


@lru_cache(maxsize=64)
def _all_factor_charts(X: Space):
    return tuple(tuple(_factor_charts(X, i)) for i in range(len(X.factors)))


def chart_list(X: Space, rotation: int = 0) -> List[LogChart]:
    """All product charts in enumeration order.

    ``rotation`` cyclically shifts each factor's coordinate-chart order; the
    set of charts (and their ids) is unchanged.
    """
    per = []
    for fcs in _all_factor_charts(X):
        toric = [fc for fc in fcs if fc.toric_index is not None]
        extra = [fc for fc in fcs if fc.toric_index is None]
        r = rotation % len(toric)
        per.append(toric[r:] + toric[:r] + extra)
    return [_chart(X, combo) for combo in product(*per)]


@lru_cache(maxsize=512)
def _chart(X: Space, combo) -> LogChart:
    return LogChart(X, combo)


def chart_by_id(X: Space, chart_id) -> LogChart:
    charts = chart_list(X)
    if isinstance(chart_id, int) or (isinstance(chart_id, str) and chart_id.isdigit()):
        idx = int(chart_id)
        if not 0 <= idx < len(charts):
            raise InputError(f"chart index {idx} out of range (0..{len(charts) - 1})")
        return charts[idx]
    for ch in charts:
        if ch.id == chart_id:
            return ch
    raise InputError(f"unknown chart {chart_id!r}; charts are {', '.join(c.id for c in charts)}")


def base_chart(X: Space) -> LogChart:
    """The chart whose coordinates are the affine base coordinates."""
    return chart_list(X)[0]


@dataclass
class Stratum:
    chart: LogChart
    zero: Tuple[str, ...]          # coordinates set to zero
    nonzero: Tuple[Poly, ...]      # polynomials required to be invertible
    label: str
    components: Tuple[int, ...]    # boundary components containing the stratum

    @property
    def in_boundary(self) -> bool:
        return bool(self.components)


def _factor_strata(X: Space, i: int, order: List[FactorChart]):
    n = X.factors[i]
    H = X.homog_names(i)
    comps = {}
    for k, comp in enumerate(X.components):
        if comp.factor == i:
            comps[("c", comp.index) if comp.is_coordinate else ("p", comp.point)] = k
    toric = [fc for fc in order if fc.toric_index is not None]
    out = []
    for size in range(n + 1):
        for K in combinations(range(n + 1), size):
            fc = next(fc for fc in toric if fc.toric_index not in K)
            c = fc.toric_index
            names = {}
            k = 0
            for j in range(n + 1):
                if j != c:
                    names[j] = fc.coords[k]
                    k += 1
            zero = tuple(names[j] for j in K)
            label = ",".join(f"{H[j]}=0" for j in K) or "open"
            inside = tuple(sorted(comps[("c", j)] for j in K if ("c", j) in comps))
            nonzero = [names[j] for j in range(n + 1) if j != c and j not in K]
            out.append((fc, zero, nonzero, label, inside))
    for fc in order:
        if fc.toric_index is None:
            k = comps[("p", _point_of(fc))]
            out.append((fc, fc.coords, [], f"{X.affine_names(i)[0]}={_point_of(fc)}", (k,)))
    return out


def _point_of(fc: FactorChart) -> Fraction:
    return Fraction(fc.chart_id[3:-1])


def strata(X: Space, rotation: int = 0) -> List[Stratum]:
    """Canonical partition of ``X`` into strata, each with its chart."""
    charts = {c.id: c for c in chart_list(X, rotation)}
    per = []
    for i, fcs in enumerate(_all_factor_charts(X)):
        toric = [fc for fc in fcs if fc.toric_index is not None]
        extra = [fc for fc in fcs if fc.toric_index is None]
        r = rotation % len(toric)
        per.append(_factor_strata(X, i, toric[r:] + toric[:r] + extra))
    out = []
    for combo in product(*per):
        chart = charts["|".join(fc.chart_id for fc, *_ in combo)]
        zero = tuple(z for _, zs, _, _, _ in combo for z in zs)
        nonzero = [chart.ctx.var(v) for _, _, nz, _, _ in combo for v in nz]
        nonzero += [g for _, g in chart.noncoordinate]
        labels = [lab for _, _, _, lab, _ in combo]
        label = labels[0] if len(labels) == 1 else " & ".join(labels)
        inside = tuple(sorted(k for *_, ins in combo for k in ins))
        out.append(Stratum(chart, zero, tuple(nonzero), label, inside))
    return out
