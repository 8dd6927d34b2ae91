"""Exact sparse multivariate polynomials over the rationals.

A :class:`Poly` maps exponent tuples to nonzero :class:`fractions.Fraction`
coefficients inside a fixed :class:`VarContext`.  Rational functions are kept
as unreduced numerator/denominator pairs (:class:`RatFunc`); nothing here
computes a GCD.

Expression grammar accepted by :func:`parse_expr`::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("+" | "-") unary | power
    power   := atom [("^" | "**") exponent]
    exponent:= ["-"] INTEGER | "(" ["-"] INTEGER ")"
    atom    := NUMBER | IDENT | "(" expr ")"

``NUMBER`` is an integer or a decimal literal (read exactly); rationals are
written as quotients, e.g. ``3/4*x``.  ``-x^2`` means ``-(x^2)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Mapping, Tuple, Union

from .errors import ContextMismatch, InputError, ParseError

Exp = Tuple[int, ...]
Scalar = Union[int, Fraction]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class VarContext:
    """An ordered tuple of distinct variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for n in names:
            if not isinstance(n, str) or not _IDENT.match(n):
                raise InputError(f"invalid variable name {n!r}")
        if len(set(names)) != len(names):
            raise InputError(f"duplicate variable names in {names}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def __iter__(self):
        return iter(self.names)

    def __eq__(self, other):
        return isinstance(other, VarContext) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarContext({', '.join(self.names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"unknown variable {name!r} (context: {', '.join(self.names)})") from None

    def extend(self, *names: str) -> "VarContext":
        return VarContext(self.names + tuple(names))

    def var(self, name: str) -> "Poly":
        e = [0] * len(self.names)
        e[self.index(name)] = 1
        return Poly._raw(self, {tuple(e): Fraction(1)})

    def gens(self):
        return [self.var(n) for n in self.names]

    def const(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly._raw(self, {})
        return Poly._raw(self, {(0,) * len(self.names): c})

    @property
    def zero(self) -> "Poly":
        return Poly._raw(self, {})

    @property
    def one(self) -> "Poly":
        return self.const(1)

    def parse(self, text: str):
        return parse_expr(text, self)


def _glex_key(e: Exp):
    return (sum(e), e)


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: VarContext, terms: Mapping[Exp, Scalar] | None = None):
        clean: Dict[Exp, Fraction] = {}
        n = len(ctx)
        for e, c in (terms or {}).items():
            e = tuple(int(a) for a in e)
            if len(e) != n or any(a < 0 for a in e):
                raise InputError(f"bad exponent vector {e} for {ctx!r}")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.ctx = ctx
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ctx, terms):
        p = object.__new__(cls)
        p.ctx = ctx
        p.terms = terms
        p._hash = None
        return p

    # -- basic queries -------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise InputError(f"{self} is not constant")
        return self.terms.get((0,) * len(self.ctx), Fraction(0))

    def coeff(self, e: Exp) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: str) -> int:
        i = self.ctx.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return [self.ctx.names[i] for i in sorted(used)]

    def is_homogeneous_in(self, names: Iterable[str]) -> bool:
        idx = [self.ctx.index(n) for n in names]
        degs = {sum(e[i] for i in idx) for e in self.terms}
        return len(degs) <= 1

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"context mismatch: {self.ctx!r} vs {other.ctx!r}")
            return other
        if isinstance(other, (int, Rational)):
            return self.ctx.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Poly._raw(self.ctx, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Poly):
            c0 = Fraction(other)
            if not c0:
                return self.ctx.zero
            return Poly._raw(self.ctx, {e: c * c0 for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t: Dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return Poly._raw(self.ctx, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise InputError("polynomial powers need a non-negative integer exponent")
        result, base = self.ctx.one, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Poly):
            if not other:
                raise InputError("division by zero")
            return self * (1 / Fraction(other))
        return RatFunc(self, self._coerce(other))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self.terms.items())))
        return self._hash

    # -- calculus ------------------------------------------------------
    def partial(self, var: str) -> "Poly":
        i = self.ctx.index(var)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
                t[e2] = c * e[i]
        return Poly._raw(self.ctx, t)

    def log_derive(self, var: str) -> "Poly":
        """Euler operator ``var * d/dvar`` applied to the polynomial."""
        i = self.ctx.index(var)
        return Poly._raw(self.ctx, {e: c * e[i] for e, c in self.terms.items() if e[i]})

    # -- substitution and embedding -------------------------------------
    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        vals = [Fraction(values[n]) for n in self.ctx.names]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, a in zip(vals, e):
                if a:
                    term *= v ** a
            total += term
        return total

    def embed(self, ctx: VarContext) -> "Poly":
        """Re-express in ``ctx``; every used variable must exist there by name."""
        if ctx == self.ctx:
            return self
        pos = [ctx.index(n) if n in ctx else None for n in self.ctx.names]
        t = {}
        for e, c in self.terms.items():
            e2 = [0] * len(ctx)
            for i, a in enumerate(e):
                if a:
                    if pos[i] is None:
                        raise ContextMismatch(f"variable {self.ctx.names[i]} missing from {ctx!r}")
                    e2[pos[i]] = a
            t[tuple(e2)] = c
        return Poly._raw(ctx, t)

    def subs(self, mapping: Mapping[str, Union["Poly", Scalar]], ctx: VarContext | None = None) -> "Poly":
        """Substitute polynomials for variables; result lives in ``ctx``.

        Unmapped variables are carried over by name.
        """
        ctx = ctx or self.ctx
        images = []
        for n in self.ctx.names:
            if n in mapping:
                v = mapping[n]
                images.append(v.embed(ctx) if isinstance(v, Poly) else ctx.const(v))
            else:
                images.append(ctx.var(n))
        powers = [dict() for _ in images]
        result = ctx.zero
        for e, c in self.terms.items():
            term = ctx.const(c)
            for i, a in enumerate(e):
                if a:
                    if a not in powers[i]:
                        powers[i][a] = images[i] ** a
                    term = term * powers[i][a]
            result = result + term
        return result

    def subs_rational(self, mapping: Mapping[str, "RatFunc"], ctx: VarContext) -> "RatFunc":
        """Substitute rational functions, keeping one common denominator.

        For each substituted variable with denominator ``D`` and maximal
        degree ``d`` the result denominator gets the factor ``D**d``.
        """
        images = {}
        for n in self.ctx.names:
            if n in mapping:
                r = mapping[n]
                if isinstance(r, Poly):
                    r = RatFunc(r.embed(ctx), ctx.one)
                elif not isinstance(r, RatFunc):
                    r = RatFunc(ctx.const(r), ctx.one)
                images[n] = (r.num.embed(ctx), r.den.embed(ctx))
            else:
                images[n] = (ctx.var(n), ctx.one)
        names = self.ctx.names
        maxdeg = [max((e[i] for e in self.terms), default=0) for i in range(len(names))]
        cache = {}

        def pw(i, which, k):
            key = (i, which, k)
            if key not in cache:
                cache[key] = images[names[i]][which] ** k
            return cache[key]

        num = ctx.zero
        for e, c in self.terms.items():
            term = ctx.const(c)
            for i, a in enumerate(e):
                if maxdeg[i]:
                    if a:
                        term = term * pw(i, 0, a)
                    if maxdeg[i] - a and not images[names[i]][1].is_constant():
                        term = term * pw(i, 1, maxdeg[i] - a)
                    elif maxdeg[i] - a:
                        term = term * (images[names[i]][1].constant_value() ** (maxdeg[i] - a))
            num = num + term
        den = ctx.one
        for i, d in enumerate(maxdeg):
            if d:
                den = den * pw(i, 1, d)
        return RatFunc(num, den)

    # -- division ------------------------------------------------------
    def divide_exact(self, q: "Poly"):
        """Return ``self / q`` if ``q`` divides ``self`` exactly, else ``None``."""
        q = self._coerce(q)
        if not q:
            raise InputError("division by the zero polynomial")
        lq = max(q.terms, key=_glex_key)
        cq = q.terms[lq]
        r = dict(self.terms)
        quot: Dict[Exp, Fraction] = {}
        while r:
            m = max(r, key=_glex_key)
            if any(a < b for a, b in zip(m, lq)):
                return None
            s = tuple(a - b for a, b in zip(m, lq))
            f = r[m] / cq
            quot[s] = quot.get(s, 0) + f
            for e, c in q.terms.items():
                ee = tuple(a + b for a, b in zip(e, s))
                v = r.get(ee, 0) - f * c
                if v:
                    r[ee] = v
                else:
                    r.pop(ee, None)
        return Poly._raw(self.ctx, {e: c for e, c in quot.items() if c})

    def strip_factor(self, q: "Poly") -> Tuple["Poly", int]:
        """Divide out the largest power of ``q``; returns (cofactor, power)."""
        if q.is_constant() or not self:
            return self, 0
        p, k = self, 0
        while True:
            nxt = p.divide_exact(q)
            if nxt is None:
                return p, k
            p, k = nxt, k + 1

    def monic(self, key=_glex_key) -> "Poly":
        if not self:
            return self
        lc = self.terms[max(self.terms, key=key)]
        return self * (1 / lc)

    # -- printing ------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, {self.ctx.names})"


def _fmt_monomial(e: Exp, names) -> str:
    parts = []
    for n, a in zip(names, e):
        if a == 1:
            parts.append(n)
        elif a:
            parts.append(f"{n}^{a}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Canonical text: graded-lex descending terms, explicit ``*`` and ``^``."""
    if not p.terms:
        return "0"
    out = []
    for e in sorted(p.terms, key=_glex_key, reverse=True):
        c = p.terms[e]
        mono = _fmt_monomial(e, p.ctx.names)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


class RatFunc:
    """Unreduced quotient ``num / den`` of two polynomials in one context."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        if num.ctx != den.ctx:
            raise ContextMismatch("numerator and denominator contexts differ")
        if not den:
            raise InputError("division by the zero polynomial")
        self.num = num
        self.den = den

    @property
    def ctx(self):
        return self.num.ctx

    @classmethod
    def of(cls, p: Union[Poly, "RatFunc"]) -> "RatFunc":
        return p if isinstance(p, RatFunc) else cls(p, p.ctx.one)

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other, other.ctx.one)
        if isinstance(other, (int, Rational)):
            return RatFunc(self.ctx.const(other), self.ctx.one)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not o.num:
            raise InputError("division by the zero polynomial")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            if not self.num:
                raise InputError("division by the zero polynomial")
            return RatFunc(self.den, self.num) ** (-k)
        return RatFunc(self.num ** k, self.den ** k)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        raise TypeError("RatFunc is unhashable (unreduced representation)")

    def is_zero(self):
        return not self.num

    def is_polynomial(self):
        return self.den.is_constant()

    def to_poly(self) -> Poly:
        if self.den.is_constant():
            return self.num * (1 / self.den.constant_value())
        q = self.num.divide_exact(self.den)
        if q is None:
            raise InputError(f"({self.num})/({self.den}) is not a polynomial")
        return q

    def partial(self, var: str) -> "RatFunc":
        return RatFunc(self.num.partial(var) * self.den - self.num * self.den.partial(var), self.den * self.den)

    def evaluate(self, values) -> Fraction:
        d = self.den.evaluate(values)
        if not d:
            raise InputError("rational function evaluated at a pole")
        return self.num.evaluate(values) / d

    def __str__(self):
        if self.den == 1:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", m.group(1), start))
        elif m.group(2):
            toks.append(("id", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            toks.append(("op", op, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, ctx):
        self.text = text
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ParseError(f"expected {op!r}, found {t[1] or 'end of input'!r}", self.text, t[2])

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", self.text, 0)
        r = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected token {t[1]!r}", self.text, t[2])
        return r

    def expr(self):
        r = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            r = r + rhs if op == "+" else r - rhs
        return r

    def term(self):
        r = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                r = r * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by the zero polynomial", self.text, pos)
                r = r / rhs
        return r

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            v = self.unary()
            return -v if t[1] == "-" else v
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            k = self.exponent()
            if k < 0 and base.is_zero():
                raise ParseError("division by the zero polynomial", self.text, t[2])
            return base ** k
        return base

    def exponent(self):
        paren = False
        if self.peek()[:2] == ("op", "("):
            self.take()
            paren = True
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.take()
            sign = -1
        t = self.take()
        if t[0] != "num" or "." in t[1]:
            raise ParseError("exponent must be an integer literal", self.text, t[2])
        if paren:
            self.expect(")")
        return sign * int(t[1])

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            return RatFunc.of(self.ctx.const(Fraction(val)))
        if kind == "id":
            if val not in self.ctx:
                raise ParseError(f"unknown variable {val!r}", self.text, pos)
            return RatFunc.of(self.ctx.var(val))
        if kind == "op" and val == "(":
            r = self.expr()
            self.expect(")")
            return r
        raise ParseError(f"unexpected token {val or 'end of input'!r}", self.text, pos)


def parse_expr(text: str, ctx: VarContext) -> Union[Poly, RatFunc]:
    """Parse ``text``; returns a Poly unless a non-constant division remains."""
    r = _Parser(text, ctx).parse()
    if r.den.is_constant():
        return r.num * (1 / r.den.constant_value())
    return r


def parse_poly(text: str, ctx: VarContext) -> Poly:
    r = parse_expr(text, ctx)
    if isinstance(r, RatFunc):
        q = r.num.divide_exact(r.den)
        if q is None:
            raise InputError(f"{text!r} is not a polynomial")
        return q
    return r
