"""Conic Lagrangian cycles in the log cotangent bundle, one ideal per chart.

A component is always the closure of its part over ``U``: every chart ideal
is saturated by the chart's boundary equations.  Ideals are produced lazily
and cached, so only the charts actually needed for counting are computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..chow import Space
from ..elimination import DEFAULT_BUDGET, Ideal, saturate_many
from ..errors import InputError
from ..polyring import Poly, RatFunc, parse_poly
from .charts import LogChart, base_chart, chart_by_id, chart_list


def _strip_all(p: Poly, factors: Iterable[Poly]) -> Poly:
    for q in factors:
        if not q.is_constant():
            p, _ = p.strip_factor(q)
    return p


@dataclass
class CycleComponent:
    """``n_v * closure(Lambda_v)`` with a per-chart ideal builder."""

    space: Space
    label: str
    multiplicity: int
    builder: Callable[[LogChart, int], Ideal]
    conic: bool = True
    _ideals: Dict[str, Ideal] = field(default_factory=dict, repr=False)

    def ideal(self, chart: Union[LogChart, str, int], budget: int = DEFAULT_BUDGET) -> Ideal:
        """The component's ideal in ``chart.full_ctx``."""
        if not isinstance(chart, LogChart):
            chart = chart_by_id(self.space, chart)
        if chart.id not in self._ideals:
            self._ideals[chart.id] = self.builder(chart, budget)
        return self._ideals[chart.id]

    def scaled(self, multiplicity: int) -> "CycleComponent":
        c = CycleComponent(self.space, self.label, multiplicity, self.builder, self.conic)
        c._ideals = self._ideals
        return c


class LagCycle:
    """Formal sum of closed conic Lagrangian components."""

    def __init__(self, space: Space, components: Sequence[CycleComponent] = ()):
        self.space = space
        self.components: List[CycleComponent] = list(components)
        for c in self.components:
            if c.space is not space:
                raise InputError("cycle components live on different spaces")

    def __add__(self, other: "LagCycle") -> "LagCycle":
        if other.space is not self.space:
            raise InputError("cannot add cycles on different spaces")
        return LagCycle(self.space, self.components + other.components)

    def __rmul__(self, k: int) -> "LagCycle":
        return LagCycle(self.space, [c.scaled(k * c.multiplicity) for c in self.components])

    def __repr__(self):
        parts = [f"{c.multiplicity}*[{c.label}]" for c in self.components]
        return f"LagCycle({' + '.join(parts) or '0'})"


def zero_section(X: Space, multiplicity: int = 1) -> LagCycle:
    """The zero section, i.e. the cycle of the constant sheaf on ``U``."""
    def build(chart: LogChart, budget: int) -> Ideal:
        ctx = chart.full_ctx
        return Ideal([ctx.var(v) for v in chart.fiber_names], ctx)
    return LagCycle(X, [CycleComponent(X, "zero", multiplicity, build)])


def _log_gradient(chart: LogChart, P: Poly, ctx) -> List[Poly]:
    return [(P.log_derive(c) if chart.is_log(c) else P.partial(c)).embed(ctx) for c in chart.coords]


def _pull_hypersurface(P: Poly, source: LogChart, target: LogChart) -> Poly:
    """Equation of the closure of ``{P = 0} ∩ U`` in the target chart."""
    if source.id == target.id:
        Q = P
    else:
        r = P.subs_rational(target.coords_of(source), target.ctx)
        dens = [d.den for d in target.coords_of(source).values()]
        Q = _strip_all(r.num, dens)
    return _strip_all(Q, target.boundary_polys())


def _conormal_ideal(chart: LogChart, Q: Poly, budget: int) -> Ideal:
    ctx = chart.full_ctx
    if Q.is_constant():
        return Ideal([ctx.one], ctx)
    fib = [ctx.var(v) for v in chart.fiber_names]
    grad = _log_gradient(chart, Q, ctx)
    gens = [Q.embed(ctx)]
    for i, j in combinations(range(len(fib)), 2):
        m = fib[i] * grad[j] - fib[j] * grad[i]
        if m:
            gens.append(m)
    I = Ideal(gens, ctx)
    return saturate_many(I, [g.embed(ctx) for g in chart.boundary_polys()], budget)


def _check_smooth(chart: LogChart, Q: Poly, budget: int):
    if Q.is_constant():
        return
    ctx = chart.ctx
    J = Ideal([Q] + [Q.partial(c) for c in chart.coords], ctx)
    J = saturate_many(J, chart.boundary_polys(), budget)
    if not J.is_unit(budget):
        raise InputError(f"hypersurface {Q} is singular inside U (chart {chart.id})")


def conormal_cycle(X: Space, f_S: Union[Poly, str], chart: Union[LogChart, str, int, None] = None,
                   multiplicity: int = 1, label: Optional[str] = None,
                   budget: int = DEFAULT_BUDGET) -> LagCycle:
    """Closure of the conormal bundle of the smooth hypersurface ``{f_S = 0} ∩ U``.

    ``f_S`` is read in the coordinates of ``chart`` (the base chart by default).
    """
    src = base_chart(X) if chart is None else (chart if isinstance(chart, LogChart) else chart_by_id(X, chart))
    P = parse_poly(f_S, src.ctx) if isinstance(f_S, str) else f_S.embed(src.ctx)
    if not P:
        raise InputError("f_S vanishes identically")
    if _strip_all(P, src.boundary_polys()).is_constant():
        raise InputError(f"{P} = 0 does not meet U")
    for ch in chart_list(X):
        _check_smooth(ch, _pull_hypersurface(P, src, ch), budget)

    def build(target: LogChart, b: int) -> Ideal:
        return _conormal_ideal(target, _pull_hypersurface(P, src, target), b)

    lab = label or f"conormal({P})"
    return LagCycle(X, [CycleComponent(X, lab, multiplicity, build)])


def transport_ideal(I: Ideal, source: LogChart, target: LogChart,
                    budget: int = DEFAULT_BUDGET) -> Ideal:
    """Move a fibre-conic ideal from ``source`` to ``target`` by the log Jacobian.

    The result is the closure, in the target chart, of the part of ``V(I)``
    lying over the common open set ``U``.
    """
    if source.id == target.id:
        return saturate_many(I.embed(source.full_ctx),
                             [g.embed(source.full_ctx) for g in source.boundary_polys()], budget)
    tctx = target.full_ctx
    phi = {c: RatFunc(r.num.embed(tctx), r.den.embed(tctx)) for c, r in target.coords_of(source).items()}
    psi = source.coords_of(target)
    # plain covector coefficients in the target frame
    cB = {}
    for c in target.coords:
        f = tctx.var(target.fiber[c])
        cB[c] = RatFunc(f, tctx.var(c)) if target.is_log(c) else RatFunc.of(f)
    mapping: Dict[str, RatFunc] = dict(phi)
    dens = [r.den for r in phi.values()]
    for a in source.coords:
        total = RatFunc.of(tctx.zero)
        for b in target.coords:
            d = psi[b].partial(a)
            if d.is_zero():
                continue
            dB = d.num.subs_rational(phi, tctx) / d.den.subs_rational(phi, tctx)
            total = total + cB[b] * dB
        if source.is_log(a):
            total = total * phi[a]
        mapping[source.fiber[a]] = total
        dens.append(total.den)
    base = [d for d in dens if not d.is_constant()] + [g.embed(tctx) for g in target.boundary_polys()]
    gens = []
    for g in I.gens:
        r = g.embed(source.full_ctx).subs_rational(mapping, tctx)
        dens.append(r.den)
        gens.append(_strip_all(r.num, base))
    sat = list(base)
    for d in dens:
        rest = _strip_all(d, base)
        if not rest.is_constant():
            sat.append(rest)
    return saturate_many(Ideal(gens, tctx), sat, budget)


def raw_cycle(X: Space, chart: Union[LogChart, str, int], gens: Sequence[Union[Poly, str]],
              multiplicity: int = 1, label: Optional[str] = None,
              budget: int = DEFAULT_BUDGET) -> LagCycle:
    """A user-supplied component given by generators in one chart's ``(u, eta, xi)``.

    The generators must be homogeneous in the fibre variables.  Other charts
    are obtained by :func:`transport_ideal`.
    """
    src = chart if isinstance(chart, LogChart) else chart_by_id(X, chart)
    ctx = src.full_ctx
    polys = [parse_poly(g, ctx) if isinstance(g, str) else g.embed(ctx) for g in gens]
    polys = [p for p in polys if p]
    if not polys:
        raise InputError("a raw cycle needs at least one nonzero generator")
    fibre = src.fiber_names
    for p in polys:
        if not _fibre_homogeneous(p, ctx, fibre):
            raise InputError(f"generator {p} is not homogeneous in the fibre variables")
    I = Ideal(polys, ctx)

    def build(target: LogChart, b: int) -> Ideal:
        return transport_ideal(I, src, target, b)

    lab = label or f"raw[{src.id}]({', '.join(str(p) for p in polys)})"
    return LagCycle(X, [CycleComponent(X, lab, multiplicity, build)])


def _fibre_homogeneous(p: Poly, ctx, fibre: Sequence[str]) -> bool:
    idx = [ctx.index(f) for f in fibre]
    degs = {sum(e[i] for i in idx) for e in p.terms}
    return len(degs) <= 1


def is_conic(I: Ideal, chart: LogChart, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether ``I`` is homogeneous in the fibre variables (via its reduced basis)."""
    ctx = chart.full_ctx
    return all(_fibre_homogeneous(g, ctx, chart.fiber_names) for g in I.groebner(budget=budget))
