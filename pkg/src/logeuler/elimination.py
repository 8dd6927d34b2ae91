"""Buchberger Gröbner bases and the ideal operations built on them.

Everything is exact over Q.  The only supported orders are graded reverse
lexicographic, lexicographic and two-block elimination orders (grevlex on
each block, first block dominant); variables are ordered as in the context.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ContextMismatch, InputError, ResourceError
from .polyring import Exp, Poly, VarContext

INFINITE = math.inf
DEFAULT_BUDGET = 10 ** 6


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "grevlex"
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise InputError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and self.split < 0:
            raise InputError("block split index must be non-negative")

    def key(self, e: Exp):
        return _order_key(self.kind, self.split, e)

    def __str__(self):
        return f"block({self.split})" if self.kind == "block" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block(split: int) -> MonomialOrder:
    return MonomialOrder("block", split)


def _grevlex(e):
    return (sum(e), tuple(-a for a in reversed(e)))


@lru_cache(maxsize=1 << 18)
def _order_key(kind, split, e):
    if kind == "grevlex":
        return _grevlex(e)
    if kind == "lex":
        return e
    return (_grevlex(e[:split]), _grevlex(e[split:]))


def _divides(a: Exp, b: Exp) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(x if x > y else y for x, y in zip(a, b))


class _Basis:
    """Working polynomial: dict terms plus cached leading data."""

    __slots__ = ("terms", "lm", "lc")

    def __init__(self, terms, key):
        self.terms = terms
        self.lm = max(terms, key=key)
        self.lc = terms[self.lm]


class _Counter:
    __slots__ = ("steps", "budget")

    def __init__(self, budget):
        self.steps = 0
        self.budget = budget

    def tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise ResourceError(f"Gröbner step budget of {self.budget} reductions exhausted")


def _normal_form(p: Dict[Exp, Fraction], G: Sequence[_Basis], key, full=True, counter=None):
    p = dict(p)
    rem: Dict[Exp, Fraction] = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for g in G:
            if _divides(g.lm, m):
                if counter is not None:
                    counter.tick()
                q = tuple(x - y for x, y in zip(m, g.lm))
                f = c / g.lc
                for e, cg in g.terms.items():
                    ee = tuple(x + y for x, y in zip(e, q))
                    v = p.get(ee, 0) - f * cg
                    if v:
                        p[ee] = v
                    else:
                        p.pop(ee, None)
                break
        else:
            rem[m] = p.pop(m)
            if not full:
                rem.update(p)
                return rem
    return rem


def _spoly(f: _Basis, g: _Basis):
    l = _lcm(f.lm, g.lm)
    qf = tuple(x - y for x, y in zip(l, f.lm))
    qg = tuple(x - y for x, y in zip(l, g.lm))
    out: Dict[Exp, Fraction] = {}
    for e, c in f.terms.items():
        out[tuple(x + y for x, y in zip(e, qf))] = c / f.lc
    for e, c in g.terms.items():
        ee = tuple(x + y for x, y in zip(e, qg))
        v = out.get(ee, 0) - c / g.lc
        if v:
            out[ee] = v
        else:
            out.pop(ee, None)
    return out


def _buchberger(polys: List[Dict[Exp, Fraction]], order: MonomialOrder, budget: int):
    key = order.key
    counter = _Counter(budget)
    G: List[_Basis] = []
    pairs = set()

    def coprime(a, b):
        return all(not (x and y) for x, y in zip(a, b))

    def add(h: Dict[Exp, Fraction]):
        # Gebauer-Moeller update
        hb = _Basis(h, key)
        t = len(G)
        cand = [(i, _lcm(g.lm, hb.lm)) for i, g in enumerate(G)]
        kept = []
        while cand:
            i, l = cand.pop()
            if coprime(G[i].lm, hb.lm) or not (
                    any(_divides(l2, l) for _, l2 in cand)
                    or any(_divides(l2, l) for _, l2 in kept)):
                kept.append((i, l))
        fresh = [(i, t) for i, l in kept if not coprime(G[i].lm, hb.lm)]
        for (i, j) in list(pairs):
            lij = _lcm(G[i].lm, G[j].lm)
            if (_divides(hb.lm, lij) and _lcm(G[i].lm, hb.lm) != lij
                    and _lcm(G[j].lm, hb.lm) != lij):
                pairs.discard((i, j))
        G.append(hb)
        pairs.update(fresh)

    for p in polys:
        r = _normal_form(p, G, key, counter=counter)
        if r:
            add(r)
    while pairs:
        i, j = min(pairs, key=lambda ij: key(_lcm(G[ij[0]].lm, G[ij[1]].lm)))
        pairs.discard((i, j))
        s = _spoly(G[i], G[j])
        counter.tick()
        r = _normal_form(s, G, key, counter=counter)
        if r:
            if len(r) == 1 and not any(next(iter(r))):
                return [{next(iter(r)): Fraction(1)}]
            add(r)

    live = G
    # minimal basis, then interreduction
    minimal = []
    for g in sorted(live, key=lambda b: key(b.lm)):
        if not any(_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        tail = dict(g.terms)
        lead = tail.pop(g.lm)
        r = _normal_form(tail, others, key) if tail else {}
        r[g.lm] = lead
        lc = lead
        reduced.append({e: c / lc for e, c in r.items()})
    reduced.sort(key=lambda t: key(max(t, key=key)), reverse=True)
    return reduced


class Ideal:
    """Finitely generated ideal with write-once Gröbner basis caches."""

    def __init__(self, gens: Iterable[Poly], ctx: VarContext | None = None):
        gens = list(gens)
        if ctx is None:
            if not gens:
                raise InputError("an empty ideal needs an explicit context")
            ctx = gens[0].ctx
        for g in gens:
            if g.ctx != ctx:
                raise ContextMismatch(f"generator {g} is not in {ctx!r}")
        self.ctx = ctx
        self.gens = tuple(g for g in gens if g)
        self._cache: Dict[MonomialOrder, Tuple[Poly, ...]] = {}

    def __repr__(self):
        return f"Ideal([{', '.join(map(str, self.gens))}])"

    def _set_cache(self, order, basis):
        if order not in self._cache:
            self._cache[order] = tuple(basis)

    def groebner(self, order: MonomialOrder = GREVLEX, budget: int = DEFAULT_BUDGET) -> Tuple[Poly, ...]:
        if order not in self._cache:
            raw = _buchberger([g.terms for g in self.gens], order, budget)
            self._set_cache(order, [Poly._raw(self.ctx, t) for t in raw])
        return self._cache[order]

    def basis_ideal(self, order: MonomialOrder = GREVLEX, budget: int = DEFAULT_BUDGET) -> "Ideal":
        gb = self.groebner(order, budget)
        out = Ideal(gb, self.ctx)
        out._set_cache(order, gb)
        return out

    def is_unit(self, budget: int = DEFAULT_BUDGET) -> bool:
        gb = self.groebner(GREVLEX, budget)
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.gens

    def contains(self, p: Poly, budget: int = DEFAULT_BUDGET) -> bool:
        return reduce(p, self, GREVLEX, budget).is_zero()

    def contains_ideal(self, other: "Ideal", budget: int = DEFAULT_BUDGET) -> bool:
        return all(self.contains(g, budget) for g in other.gens)

    def same_as(self, other: "Ideal", budget: int = DEFAULT_BUDGET) -> bool:
        """Ideal equality via reduced grevlex bases."""
        if self.ctx != other.ctx:
            raise ContextMismatch("ideals live in different contexts")
        return self.groebner(GREVLEX, budget) == other.groebner(GREVLEX, budget)

    def __add__(self, other):
        if isinstance(other, Ideal):
            return Ideal(self.gens + other.gens, self.ctx)
        return Ideal(self.gens + tuple(other), self.ctx)

    def embed(self, ctx: VarContext) -> "Ideal":
        return Ideal([g.embed(ctx) for g in self.gens], ctx)


def groebner(I: Ideal, order: MonomialOrder = GREVLEX, budget: int = DEFAULT_BUDGET) -> Ideal:
    """Reduced Gröbner basis of ``I`` as an Ideal with its cache filled."""
    return I.basis_ideal(order, budget)


def reduce(p: Poly, I: Ideal, order: MonomialOrder = GREVLEX, budget: int = DEFAULT_BUDGET) -> Poly:
    """Normal form of ``p`` modulo ``I``; zero iff ``p`` lies in ``I``."""
    if p.ctx != I.ctx:
        raise ContextMismatch("polynomial and ideal contexts differ")
    key = order.key
    G = [_Basis(g.terms, key) for g in I.groebner(order, budget)]
    return Poly._raw(I.ctx, _normal_form(p.terms, G, key))


def _reorder(polys, src: VarContext, dst: VarContext):
    return [p.embed(dst) for p in polys]


def eliminate(I: Ideal, keep: Iterable[str], budget: int = DEFAULT_BUDGET) -> Ideal:
    """Generators of the intersection of ``I`` with the subring in ``keep``.

    The returned ideal stays in ``I.ctx``; its generators form a reduced
    grevlex basis of the elimination ideal (restriction of a block basis).
    """
    keep = set(keep)
    for n in keep:
        I.ctx.index(n)
    keep = [n for n in I.ctx.names if n in keep]
    drop = [n for n in I.ctx.names if n not in set(keep)]
    if not drop:
        return I
    work = VarContext(drop + keep)
    J = Ideal(_reorder(I.gens, I.ctx, work), work)
    gb = J.groebner(block(len(drop)), budget)
    k = len(drop)
    sub = [g for g in gb if not any(any(e[:k]) for e in g.terms)]
    out = Ideal([g.embed(I.ctx) for g in sub], I.ctx)
    full_order_gb = [g.embed(I.ctx) for g in sub]
    # In I.ctx the kept variables keep their relative order, and each element
    # only involves them, so the restricted grevlex basis is a grevlex basis.
    out._set_cache(GREVLEX, _sorted_basis(full_order_gb, GREVLEX))
    return out


def _sorted_basis(polys, order):
    key = order.key
    return sorted(polys, key=lambda p: key(max(p.terms, key=key)), reverse=True)


def _fresh_name(ctx: VarContext, stem="_w"):
    name, i = stem, 0
    while name in ctx:
        i += 1
        name = f"{stem}{i}"
    return name


def saturate(I: Ideal, g: Poly, budget: int = DEFAULT_BUDGET) -> Ideal:
    """``I : g^oo`` via an auxiliary variable ``w`` with ``w*g - 1``."""
    if g.ctx != I.ctx:
        raise ContextMismatch("saturating polynomial is in another context")
    if not g:
        raise InputError("cannot saturate by the zero polynomial")
    if g.is_constant():
        return I
    w = _fresh_name(I.ctx)
    work = VarContext((w,) + I.ctx.names)
    wv = work.var(w)
    gens = [p.embed(work) for p in I.gens] + [wv * g.embed(work) - 1]
    J = Ideal(gens, work)
    gb = J.groebner(block(1), budget)
    sub = [p for p in gb if not any(e[0] for e in p.terms)]
    polys = [p.embed(I.ctx) for p in sub]
    out = Ideal(polys, I.ctx)
    out._set_cache(GREVLEX, _sorted_basis(polys, GREVLEX))
    return out


def saturate_many(I: Ideal, gs: Iterable[Poly], budget: int = DEFAULT_BUDGET) -> Ideal:
    """Saturate by the product of the distinct (up to scalars) nonconstant ``gs``."""
    seen = []
    for h in gs:
        if not h.is_constant():
            h = h.monic()
            if h not in seen:
                seen.append(h)
    g = I.ctx.one
    for h in seen:
        g = g * h
    return saturate(I, g, budget)


def _standard_monomials(lms: List[Exp], nvars: int) -> Optional[List[Exp]]:
    bounds = [None] * nvars
    for m in lms:
        nz = [i for i, a in enumerate(m) if a]
        if len(nz) == 1:
            i = nz[0]
            if bounds[i] is None or m[i] < bounds[i]:
                bounds[i] = m[i]
    if any(b is None for b in bounds):
        return None
    out = []
    for e in product(*[range(b) for b in bounds]):
        if not any(_divides(m, e) for m in lms):
            out.append(e)
    return out


def standard_monomials(I: Ideal, order: MonomialOrder = GREVLEX, budget: int = DEFAULT_BUDGET):
    """Monomials outside the initial ideal, or None if infinitely many."""
    gb = I.groebner(order, budget)
    key = order.key
    if any(g.is_constant() for g in gb):
        return []
    if len(I.ctx) == 0:
        return [()]
    return _standard_monomials([max(g.terms, key=key) for g in gb], len(I.ctx))


def quotient_dim(I: Ideal, budget: int = DEFAULT_BUDGET):
    """Dimension of ``Q[x]/I`` over Q, or ``INFINITE`` if not zero-dimensional."""
    sm = standard_monomials(I, GREVLEX, budget)
    return INFINITE if sm is None else len(sm)


def is_zero_dimensional(I: Ideal, budget: int = DEFAULT_BUDGET) -> bool:
    return quotient_dim(I, budget) != INFINITE


# ---------------------------------------------------------------------------
# univariate helpers (used for radicals and point extraction only)

def _univariate(p: Poly, i: int) -> List[Fraction]:
    deg = max((e[i] for e in p.terms), default=-1)
    coeffs = [Fraction(0)] * (deg + 1)
    for e, c in p.terms.items():
        coeffs[e[i]] += c
    return coeffs


def _from_univariate(coeffs, ctx, i) -> Poly:
    t = {}
    n = len(ctx)
    for k, c in enumerate(coeffs):
        if c:
            e = [0] * n
            e[i] = k
            t[tuple(e)] = Fraction(c)
    return Poly._raw(ctx, t)


def _trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _udivmod(a, b):
    a, b = _trim(a), _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        s = len(a) - len(b)
        q[s] = f
        for k, c in enumerate(b):
            a[s + k] -= f * c
        a = _trim(a)
    return q, a


def _ugcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _udivmod(a, b)
        a, b = b, r
    return [c / a[-1] for c in a] if a else a


def squarefree_part(p: Poly, var: str) -> Poly:
    """Squarefree part of a polynomial in the single variable ``var``."""
    i = p.ctx.index(var)
    if set(p.variables()) - {var}:
        raise InputError(f"{p} is not univariate in {var}")
    a = _univariate(p, i)
    da = [k * c for k, c in enumerate(a)][1:]
    g = _ugcd(a, da)
    q, _ = _udivmod(a, g)
    return _from_univariate(q, p.ctx, i).monic()


def univariate_eliminant(I: Ideal, var: str, budget: int = DEFAULT_BUDGET) -> Optional[Poly]:
    E = eliminate(I, [var], budget)
    gb = E.groebner(GREVLEX, budget)
    if not gb:
        return None
    return gb[0]


def radical_zero_dim(I: Ideal, budget: int = DEFAULT_BUDGET) -> Ideal:
    """Radical of a zero-dimensional ideal (Seidenberg: add squarefree eliminants)."""
    if quotient_dim(I, budget) == INFINITE:
        raise InputError("radical_zero_dim needs a zero-dimensional ideal")
    extra = []
    for n in I.ctx.names:
        u = univariate_eliminant(I, n, budget)
        if u is not None and not u.is_constant():
            extra.append(squarefree_part(u, n))
    return Ideal(list(I.gens) + extra, I.ctx)


def _divisors(n: int, cap=10 ** 12):
    n = abs(n)
    if n > cap:
        return None
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(coeffs: List[Fraction]) -> Optional[List[Fraction]]:
    """Distinct rational roots of a univariate polynomial (ascending powers)."""
    a = _trim(coeffs)
    if len(a) <= 1:
        return []
    roots = []
    k = 0
    while not a[k]:
        k += 1
    if k:
        roots.append(Fraction(0))
        a = a[k:]
    if len(a) <= 1:
        return roots
    den = 1
    for c in a:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    p0 = _divisors(ints[0])
    qn = _divisors(ints[-1])
    if p0 is None or qn is None:
        return None
    seen = set()
    for p in p0:
        for q in qn:
            for r in (Fraction(p, q), Fraction(-p, q)):
                if r in seen:
                    continue
                seen.add(r)
                v = Fraction(0)
                for c in reversed(a):
                    v = v * r + c
                if not v:
                    roots.append(r)
    return sorted(set(roots))


def rational_points(I: Ideal, budget: int = DEFAULT_BUDGET) -> Optional[List[Dict[str, Fraction]]]:
    """All points of a zero-dimensional ideal if every one is rational.

    Triangular back-substitution; returns None when some solution is not
    rational (or root search is out of range).
    """
    n_total = quotient_dim(radical_zero_dim(I, budget), budget)
    pts = _points_rec(I, budget)
    if pts is None or len(pts) != n_total:
        return None
    return pts


def _points_rec(I: Ideal, budget):
    if I.is_unit(budget):
        return []
    if len(I.ctx) == 0:
        return [{}]
    var = I.ctx.names[-1]
    u = univariate_eliminant(I, var, budget)
    if u is None:
        return None
    roots = rational_roots(_univariate(u, I.ctx.index(var)))
    if roots is None:
        return None
    rest = VarContext(I.ctx.names[:-1])
    pts = []
    for r in roots:
        J = Ideal([g.subs({var: r}).embed(rest) for g in I.gens], rest)
        sub = _points_rec(J, budget)
        if sub is None:
            return None
        for s in sub:
            d = dict(s)
            d[var] = r
            pts.append(d)
    return pts
