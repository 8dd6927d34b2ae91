"""The sharp family ``Lambda^sharp_f``: the shear ``eta -> eta - s * dlog f``."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Union

from ..elimination import DEFAULT_BUDGET, Ideal, saturate_many
from ..errors import InputError
from ..polyring import RatFunc, VarContext
from .charts import LogChart, chart_by_id
from .cycles import CycleComponent, LagCycle
from .sections import LogFunction, gamma_dlogf


class SharpFamily:
    """One-parameter (or multi-parameter) deformation of a cycle.

    Parameters are named ``s`` for a single function and ``s1, s2, ...``
    otherwise; per-chart ideals live in ``chart.full_ctx`` extended by them.
    """

    def __init__(self, cycle: LagCycle, fs: Union[str, LogFunction, Sequence[Union[str, LogFunction]]],
                 budget: int = DEFAULT_BUDGET):
        if isinstance(fs, (str, LogFunction)):
            fs = [fs]
        if not fs:
            raise InputError("the sharp family needs at least one function")
        self.cycle = cycle
        self.space = cycle.space
        self.sections = [gamma_dlogf(self.space, f, 1) for f in fs]
        self.params = ("s",) if len(fs) == 1 else tuple(f"s{i + 1}" for i in range(len(fs)))
        self.budget = budget
        self._cache: Dict[tuple, Ideal] = {}

    def context(self, chart: LogChart) -> VarContext:
        return chart.full_ctx.extend(*self.params)

    def _denominators(self, chart: LogChart, ctx):
        return [d.embed(ctx) for sec in self.sections for d in sec.denominators(chart)
                if not d.is_constant()]

    def ideal(self, component: int, chart: Union[LogChart, str, int]) -> Ideal:
        if not isinstance(chart, LogChart):
            chart = chart_by_id(self.space, chart)
        key = (component, chart.id)
        if key not in self._cache:
            comp = self.cycle.components[component]
            base = comp.ideal(chart, self.budget)
            ctx = self.context(chart)
            mapping = {}
            for fname in chart.fiber_names:
                r = RatFunc.of(ctx.var(fname))
                for p, sec in zip(self.params, self.sections):
                    g = sec.values(chart)[fname]
                    r = r - RatFunc(g.num.embed(ctx) * ctx.var(p), g.den.embed(ctx))
                mapping[fname] = r
            gens = [g.embed(ctx).subs_rational(mapping, ctx).num for g in base.gens]
            self._cache[key] = saturate_many(Ideal(gens, ctx), self._denominators(chart, ctx), self.budget)
        return self._cache[key]

    def fiber(self, values: Union[int, Fraction, Sequence], component: int = 0,
              chart: Union[LogChart, str, int] = 0) -> Ideal:
        """Specialize the parameters; the result lives in ``chart.full_ctx``."""
        if not isinstance(values, (list, tuple)):
            values = [values]
        if len(values) != len(self.params):
            raise InputError(f"expected {len(self.params)} parameter value(s)")
        if not isinstance(chart, LogChart):
            chart = chart_by_id(self.space, chart)
        I = self.ideal(component, chart)
        ctx = chart.full_ctx
        sub = {p: Fraction(v) for p, v in zip(self.params, values)}
        gens = [g.subs(sub, ctx) for g in I.gens]
        dens = self._denominators(chart, ctx)
        return saturate_many(Ideal(gens, ctx), dens, self.budget)

    def fiber_cycle(self, values) -> LagCycle:
        """The specialized family as a cycle (all components)."""
        comps = []
        for i, comp in enumerate(self.cycle.components):
            def build(chart, budget, i=i):
                return self.fiber(values, i, chart)
            comps.append(CycleComponent(self.space, f"{comp.label}#s={values}", comp.multiplicity, build))
        return LagCycle(self.space, comps)


def sharp_family(cycle: LagCycle, f, budget: int = DEFAULT_BUDGET) -> SharpFamily:
    return SharpFamily(cycle, f, budget)
