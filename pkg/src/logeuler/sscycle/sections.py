"""Log differentials ``s * dlog f`` as sections of the log cotangent bundle."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..chow import Space
from ..errors import InputError
from ..polyring import Poly, RatFunc, VarContext, parse_expr
from .charts import LogChart, component_form


def _homogenize(p: Poly, X: Space, hctx: VarContext):
    """Per-factor homogenization of an affine polynomial; returns (poly, degrees)."""
    factors = []
    pos = 0
    for i, n in enumerate(X.factors):
        factors.append(list(range(pos, pos + n)))
        pos += n
    degs = [max((sum(e[j] for j in idx) for e in p.terms), default=0) for idx in factors]
    t = {}
    names = hctx.names
    for e, c in p.terms.items():
        h = [0] * len(names)
        for i, idx in enumerate(factors):
            H = X.homog_names(i)
            for j, a in zip(idx, (e[j] for j in idx)):
                h[names.index(H[j - idx[0]])] = a
            h[names.index(H[-1])] = degs[i] - sum(e[j] for j in idx)
        t[tuple(h)] = c
    return Poly(hctx, t), degs


class LogFunction:
    """A rational function whose divisor is supported on the boundary.

    Stored as ``constant * prod_k L_k ** exponents[k]`` over the boundary
    forms ``L_k``; only such functions are accepted.
    """

    def __init__(self, space: Space, exponents: Sequence[int], constant=1, text: str = ""):
        if len(exponents) != len(space.components):
            raise InputError("one exponent per boundary component is required")
        self.space = space
        self.exponents = tuple(int(a) for a in exponents)
        self.constant = Fraction(constant)
        if not self.constant:
            raise InputError("f must not vanish identically")
        for i, n in enumerate(space.factors):
            total = sum(a for a, c in zip(self.exponents, space.components) if c.factor == i)
            if total:
                raise InputError(f"f is not homogeneous of degree 0 in factor {i}")
        self.text = text or self._describe()

    def _describe(self):
        parts = []
        for k, a in enumerate(self.exponents):
            if a:
                form = str(component_form(self.space, k))
                form = form if len(form) == 1 else f"({form})"
                parts.append(form if a == 1 else f"{form}^{a}")
        return "*".join(parts) or "1"

    def __repr__(self):
        return f"LogFunction({self.text})"

    @property
    def is_constant(self):
        return not any(self.exponents)

    @classmethod
    def parse(cls, space: Space, text: str) -> "LogFunction":
        """Read ``f`` in homogeneous or affine base coordinates.

        The numerator and denominator must factor into boundary forms; this
        is checked by exact division, so no factorization is needed.
        """
        H = space.all_homog_names()
        A = space.all_affine_names()
        ctx = VarContext(H + A)
        r = RatFunc.of(parse_expr(text, ctx))
        if r.is_zero():
            raise InputError("f must not vanish identically")
        used = set(r.num.variables()) | set(r.den.variables())
        hctx = VarContext(H)
        if used & set(A) and used & set(H):
            raise InputError("f mixes homogeneous and affine coordinates")
        if used & set(A):
            actx = VarContext(A)
            num, dn = _homogenize(r.num.embed(actx), space, hctx)
            den, dd = _homogenize(r.den.embed(actx), space, hctx)
            for i in range(len(space.factors)):
                Zi = hctx.var(space.homog_names(i)[-1])
                if dd[i] > dn[i]:
                    num = num * Zi ** (dd[i] - dn[i])
                elif dn[i] > dd[i]:
                    den = den * Zi ** (dn[i] - dd[i])
        else:
            num, den = r.num.embed(hctx), r.den.embed(hctx)
        exps = [0] * len(space.components)
        consts = []
        for sign, p in ((1, num), (-1, den)):
            for k in range(len(space.components)):
                p, m = p.strip_factor(component_form(space, k).embed(hctx))
                exps[k] += sign * m
            if not p.is_constant():
                raise InputError(
                    f"divisor of f is not supported on D: leftover factor {p} "
                    "(f must be a ratio of products of boundary forms)")
            consts.append(p.constant_value())
        return cls(space, exps, consts[0] / consts[1], text=text)

    def log_differential(self, chart: LogChart) -> Tuple[Dict[str, RatFunc], List[Poly]]:
        """Components of ``dlog f`` in the chart's log frame, and their denominators.

        Coordinate boundary factors contribute integer constants to their own
        ``eta``; the others contribute ``a * op(g)/g`` with ``op`` the Euler
        operator on log coordinates and the plain derivative on free ones.
        """
        ctx = chart.ctx
        const_part = {c: Fraction(0) for c in chart.coords}
        rational: List[Tuple[int, Poly]] = []
        for k, a in enumerate(self.exponents):
            if not a:
                continue
            g = chart.pullbacks[k]
            if g.is_constant():
                continue
            if k in chart.boundary.values() and len(g.terms) == 1:
                const_part[g.variables()[0]] += a
            else:
                rational.append((a, g))
        den = ctx.one
        for _, g in rational:
            den = den * g
        values = {}
        for c in chart.coords:
            num = den * const_part[c]
            for idx, (a, g) in enumerate(rational):
                op = g.log_derive(c) if chart.is_log(c) else g.partial(c)
                if not op:
                    continue
                rest = ctx.one
                for jdx, (_, h) in enumerate(rational):
                    if jdx != idx:
                        rest = rest * h
                num = num + op * rest * a
            values[chart.fiber[c]] = RatFunc(num, den)
        return values, [g for _, g in rational]


class LogSection:
    """The section ``scale * dlog f`` (or the zero section when ``f`` is None)."""

    def __init__(self, space: Space, function: Optional[LogFunction], scale=1):
        self.space = space
        self.function = function
        self.scale = Fraction(scale)
        self._cache = {}

    @classmethod
    def zero(cls, space: Space) -> "LogSection":
        return cls(space, None, 0)

    @property
    def is_zero(self):
        return self.function is None or not self.scale or self.function.is_constant

    def values(self, chart: LogChart) -> Dict[str, RatFunc]:
        return self._data(chart)[0]

    def denominators(self, chart: LogChart) -> List[Poly]:
        return self._data(chart)[1]

    def _data(self, chart):
        if chart.id not in self._cache:
            if self.is_zero:
                vals = {f: RatFunc.of(chart.ctx.zero) for f in chart.fiber_names}
                dens = []
            else:
                raw, dens = self.function.log_differential(chart)
                vals = {f: RatFunc(r.num * self.scale, r.den) for f, r in raw.items()}
            self._cache[chart.id] = (vals, dens)
        return self._cache[chart.id]

    def __repr__(self):
        if self.is_zero:
            return "LogSection(zero)"
        return f"LogSection({self.scale}*dlog({self.function.text}))"


def gamma_dlogf(X: Space, f: Union[str, LogFunction], scale=1) -> LogSection:
    """Graph of ``scale * dlog f`` in the log cotangent bundle."""
    if isinstance(f, str):
        f = LogFunction.parse(X, f)
    if f.space is not X:
        raise InputError("f belongs to another space")
    return LogSection(X, f, scale)
