"""Stratified intersection counts of log cycles with ``Gamma_{s dlog f}``."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..chow import Space
from ..elimination import (DEFAULT_BUDGET, INFINITE, Ideal, quotient_dim, radical_zero_dim,
                           rational_points, saturate_many)
from ..errors import InputError, NonTransverseError
from ..polyring import RatFunc
from .charts import Stratum, strata
from .cycles import CycleComponent, LagCycle
from .sections import LogFunction, LogSection, gamma_dlogf

SCHEMA_VERSION = 1


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass
class StratumCount:
    chart: str
    stratum: str
    count: int
    points: Optional[List[Dict[str, str]]] = None

    def to_dict(self):
        d = {"chart": self.chart, "stratum": self.stratum, "count": self.count}
        if self.points is not None:
            d["points"] = self.points
        return d


@dataclass
class ComponentCount:
    label: str
    n_v: int
    strata: List[StratumCount] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return sum(s.count for s in self.strata)

    def to_dict(self):
        return {"label": self.label, "n_v": self.n_v, "degree": self.degree,
                "strata": [s.to_dict() for s in self.strata]}


@dataclass
class CountReport:
    total: int
    components: List[ComponentCount]
    warnings: List[str] = field(default_factory=list)

    def points(self) -> List[Tuple[str, str, Dict[str, str]]]:
        """All reported points as ``(chart, stratum, coordinates)``."""
        return [(s.chart, s.stratum, p) for c in self.components for s in c.strata
                for p in (s.points or [])]

    def to_dict(self):
        return {"schema": SCHEMA_VERSION, "total": self.total,
                "components": [c.to_dict() for c in self.components],
                "warnings": list(self.warnings)}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d) -> "CountReport":
        if d.get("schema") != SCHEMA_VERSION:
            raise InputError(f"unsupported report schema {d.get('schema')!r}")
        comps = []
        for c in d["components"]:
            sts = [StratumCount(s["chart"], s["stratum"], int(s["count"]), s.get("points"))
                   for s in c["strata"]]
            comps.append(ComponentCount(c["label"], int(c["n_v"]), sts))
        return cls(int(d["total"]), comps, list(d.get("warnings", [])))

    @classmethod
    def from_json(cls, text: str) -> "CountReport":
        return cls.from_dict(json.loads(text))


def _specialize(comp: CycleComponent, section: LogSection, st: Stratum, budget: int) -> Ideal:
    """Component ideal restricted to the graph of the section, near the stratum."""
    chart = st.chart
    ctx = chart.ctx
    vals = section.values(chart)
    I = comp.ideal(chart, budget)
    gens = []
    for g in I.gens:
        r = g.subs_rational(vals, ctx)
        if r.num:
            gens.append(r.num)
    if not gens:
        gens = [ctx.zero]
    sat = list(st.nonzero) + [d for d in section.denominators(chart) if not d.is_constant()]
    return saturate_many(Ideal(gens, ctx), sat, budget)


def _count_stratum(comp, section, st, budget, warnings) -> StratumCount:
    chart = st.chart
    ctx = chart.ctx
    J = _specialize(comp, section, st, budget)
    L = quotient_dim(J, budget)
    if L == INFINITE:
        raise NonTransverseError(
            f"intersection of {comp.label} with the section is positive-dimensional near "
            f"stratum {st.label} (chart {chart.id}); try a different f")
    if L == 0:
        return StratumCount(chart.id, st.label, 0, [])
    if st.zero:
        K = J + Ideal([ctx.var(z) ** L for z in st.zero], ctx)
        count = quotient_dim(K, budget)
    else:
        K = J
        count = L
    pts = None
    if count:
        rad = radical_zero_dim(K, budget)
        distinct = quotient_dim(rad, budget)
        if count > distinct:
            warnings.append(
                f"non-reduced intersection of {comp.label} on stratum {st.label} "
                f"(chart {chart.id}): length {count} at {distinct} point(s)")
        found = rational_points(rad, budget)
        if found is not None:
            pts = []
            vals = section.values(chart)
            for p in found:
                entry = {c: _fmt(p[c]) for c in chart.coords}
                for fname, r in vals.items():
                    entry[fname] = _fmt(r.evaluate(p))
                pts.append(entry)
    else:
        pts = []
    return StratumCount(chart.id, st.label, int(count), pts)


def intersect_count(cycle: LagCycle, section: LogSection, rotation: int = 0,
                    budget: int = DEFAULT_BUDGET) -> CountReport:
    """Count ``cycle . Gamma`` stratum by stratum, with multiplicities.

    Each stratum is examined only in its canonical chart.  Local lengths are
    isolated by adding high powers of the stratum's vanishing coordinates.
    """
    if section.space is not cycle.space:
        raise InputError("cycle and section live on different spaces")
    warnings: List[str] = []
    comps = []
    total = 0
    strat = strata(cycle.space, rotation)
    for comp in cycle.components:
        cc = ComponentCount(comp.label, comp.multiplicity)
        for st in strat:
            cc.strata.append(_count_stratum(comp, section, st, budget, warnings))
        total += comp.multiplicity * cc.degree
        comps.append(cc)
    return CountReport(total, comps, warnings)


def euler_char(X: Space, cycles: Sequence[Tuple[LagCycle, int]], f: Union[str, LogFunction],
               scale=1, budget: int = DEFAULT_BUDGET) -> int:
    """``chi(U, F)`` as ``sum n_v * gdeg(closure Lambda_v)`` for ``SS F = sum n_v Lambda_v``."""
    section = gamma_dlogf(X, f, scale)
    if section.is_zero:
        raise InputError("f must be non-constant for the log Euler formula")
    total = 0
    for cyc, mult in cycles:
        total += mult * intersect_count(cyc, section, budget=budget).total
    return total
