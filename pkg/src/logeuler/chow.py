"""Log pairs on products of projective spaces and their Chow-ring calculus.

A :class:`Space` is ``P^{n_1} x ... x P^{n_r}`` together with a boundary
divisor made of coordinate hyperplanes, plus (on ``P^1`` factors only) any
finite set of extra rational points.  Every component is a hyperplane of one
factor, so its Chow class is that factor's hyperplane class ``h_i``.

Naming: affine coordinates of the base chart are drawn in order from
``x, y, u, p, q, r, a, b, c``; homogeneous coordinates are their upper-case
forms followed by one dehomogenizing coordinate per factor (``Z``, ``W``,
``V``, ``T``).  So ``P^2`` has ``X, Y, Z`` with ``x = X/Z``, and ``P^1 x P^1``
has ``(X : Z)`` and ``(Y : W)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InputError

_AFFINE_POOL = ["x", "y", "u", "p", "q", "r", "a", "b", "c"]
_DEHOM_POOL = ["Z", "W", "V", "T"]


@dataclass(frozen=True)
class Component:
    """One boundary hyperplane: coordinate ``X_index = 0`` or a P^1 point."""

    factor: int
    index: Optional[int] = None
    point: Optional[Fraction] = None

    @property
    def is_coordinate(self):
        return self.point is None


class Space:
    def __init__(self, factors: Sequence[int], boundary: Sequence[Component] = ()):
        factors = tuple(int(n) for n in factors)
        if not factors or any(n < 1 for n in factors):
            raise InputError("a space needs at least one factor of positive dimension")
        if sum(factors) > len(_AFFINE_POOL) or len(factors) > len(_DEHOM_POOL):
            raise InputError("space too large for the supported naming scheme")
        self.factors = factors
        self._affine: List[List[str]] = []
        pos = 0
        for n in factors:
            self._affine.append(_AFFINE_POOL[pos:pos + n])
            pos += n
        seen = set()
        comps = []
        for c in boundary:
            if not 0 <= c.factor < len(factors):
                raise InputError(f"component on nonexistent factor {c.factor}")
            if c.is_coordinate:
                if not 0 <= c.index <= factors[c.factor]:
                    raise InputError(f"coordinate index {c.index} out of range")
                tag = (c.factor, "c", c.index)
            else:
                if factors[c.factor] != 1:
                    raise InputError("extra boundary points are only supported on P^1 factors")
                if c.point == 0:
                    c = Component(c.factor, index=0)
                    tag = (c.factor, "c", 0)
                else:
                    c = Component(c.factor, point=Fraction(c.point))
                    tag = (c.factor, "p", c.point)
            if tag in seen:
                raise InputError("boundary components must be distinct")
            seen.add(tag)
            comps.append(c)
        # canonical order: by factor, coordinates first, then points
        comps.sort(key=lambda c: (c.factor, 0 if c.is_coordinate else 1,
                                  c.index if c.is_coordinate else c.point))
        self.components: Tuple[Component, ...] = tuple(comps)

    # -- naming --------------------------------------------------------
    @property
    def dim(self) -> int:
        return sum(self.factors)

    def affine_names(self, i: int) -> List[str]:
        return list(self._affine[i])

    def homog_names(self, i: int) -> List[str]:
        return [a.upper() for a in self._affine[i]] + [_DEHOM_POOL[i]]

    def all_affine_names(self) -> List[str]:
        return [a for names in self._affine for a in names]

    def all_homog_names(self) -> List[str]:
        return [h for i in range(len(self.factors)) for h in self.homog_names(i)]

    def component_label(self, k: int) -> str:
        c = self.components[k]
        if c.is_coordinate:
            return f"{self.homog_names(c.factor)[c.index]}=0"
        x = self.affine_names(c.factor)[0]
        return f"{x}={c.point}"

    def __repr__(self):
        fs = "x".join(f"P{n}" for n in self.factors)
        comps = ", ".join(self.component_label(k) for k in range(len(self.components)))
        return f"Space({fs}; D: {comps or 'empty'})"

    # -- constructors --------------------------------------------------
    @classmethod
    def toric(cls, factors: Sequence[int]) -> "Space":
        comps = [Component(i, index=j) for i, n in enumerate(factors) for j in range(n + 1)]
        return cls(factors, comps)

    @classmethod
    def p1_points(cls, points: Sequence) -> "Space":
        """``P^1`` with boundary points given as affine values or ``'inf'``."""
        comps = []
        for p in points:
            if isinstance(p, str) and p.strip().lower() in ("inf", "oo", "infinity"):
                comps.append(Component(0, index=1))
            elif Fraction(p) == 0:
                comps.append(Component(0, index=0))
            else:
                comps.append(Component(0, point=Fraction(p)))
        return cls([1], comps)

    @classmethod
    def parse(cls, space: str, divisor: str = "toric") -> "Space":
        """Build from CLI strings, e.g. ``("p1xp1", "toric")`` or ``("p1", "0,inf,1")``.

        Divisor items: ``toric``, ``none``, a homogeneous coordinate name
        (its hyperplane), ``inf``/rational values on a single ``P^1``, or
        ``pt@i:q`` for the point ``q`` on factor ``i``.
        """
        factors = []
        for part in space.lower().replace("*", "x").split("x"):
            part = part.strip()
            if not part.startswith("p") or not part[1:].isdigit():
                raise InputError(f"cannot read space {space!r}; use e.g. p2, p1xp1")
            factors.append(int(part[1:]))
        probe = cls(factors)
        d = divisor.strip()
        if d.lower() == "toric":
            return cls.toric(factors)
        if d.lower() in ("", "none", "empty"):
            return probe
        homog = {}
        for i in range(len(factors)):
            for j, h in enumerate(probe.homog_names(i)):
                homog[h] = (i, j)
        comps = []
        for item in d.split(","):
            item = item.strip()
            if item in homog:
                comps.append(Component(homog[item][0], index=homog[item][1]))
            elif item.startswith("pt@"):
                try:
                    idx, val = item[3:].split(":", 1)
                    comps.append(Component(int(idx), point=Fraction(val)))
                except (ValueError, ZeroDivisionError):
                    raise InputError(f"bad divisor item {item!r}") from None
            else:
                if factors != [1]:
                    raise InputError(f"bad divisor item {item!r}; bare points need a single P^1")
                if item.lower() in ("inf", "oo", "infinity"):
                    comps.append(Component(0, index=1))
                else:
                    try:
                        v = Fraction(item)
                    except (ValueError, ZeroDivisionError):
                        raise InputError(f"bad divisor item {item!r}") from None
                    comps.append(Component(0, index=0) if v == 0 else Component(0, point=v))
        return cls(factors, comps)


# ---------------------------------------------------------------------------
# Chow ring of a product of projective spaces

class ChowClass:
    """Integer polynomial in ``h_1..h_r`` modulo ``h_i^{n_i+1}``."""

    __slots__ = ("dims", "terms")

    def __init__(self, dims: Sequence[int], terms: Dict[Tuple[int, ...], int] | None = None):
        self.dims = tuple(dims)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(self.dims):
                raise InputError("Chow exponent length mismatch")
            if c and all(a <= n for a, n in zip(e, self.dims)):
                clean[e] = clean.get(e, 0) + int(c)
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def one(cls, dims):
        return cls(dims, {(0,) * len(dims): 1})

    @classmethod
    def hyperplane(cls, dims, i):
        e = [0] * len(dims)
        e[i] = 1
        return cls(dims, {tuple(e): 1})

    def _check(self, other):
        if not isinstance(other, ChowClass) or other.dims != self.dims:
            raise InputError("Chow classes from different spaces")

    def __add__(self, other):
        if isinstance(other, int):
            other = ChowClass.one(self.dims) * other
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return ChowClass(self.dims, t)

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.dims, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return ChowClass(self.dims, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        t: Dict[Tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if all(a <= n for a, n in zip(e, self.dims)):
                    t[e] = t.get(e, 0) + c1 * c2
        return ChowClass(self.dims, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ChowClass.one(self.dims)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = ChowClass.one(self.dims) * other
        return isinstance(other, ChowClass) and self.dims == other.dims and self.terms == other.terms

    def part(self, k: int) -> "ChowClass":
        """Homogeneous component of codimension ``k``."""
        return ChowClass(self.dims, {e: c for e, c in self.terms.items() if sum(e) == k})

    def inverse(self) -> "ChowClass":
        """Multiplicative inverse; needs constant term +-1."""
        c0 = self.terms.get((0,) * len(self.dims), 0)
        if c0 not in (1, -1):
            raise InputError("only classes with constant term +-1 are invertible over Z")
        nil = ChowClass.one(self.dims) - self * c0
        out, powk = ChowClass.one(self.dims), ChowClass.one(self.dims)
        for _ in range(sum(self.dims)):
            powk = powk * nil
            out = out + powk
        return out * c0

    def __str__(self):
        if not self.terms:
            return "0"
        names = ["h"] if len(self.dims) == 1 else [f"h{i + 1}" for i in range(len(self.dims))]
        out = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-a for a in e))):
            c = self.terms[e]
            mono = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a)
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    __repr__ = __str__


def mul(a: ChowClass, b: ChowClass) -> ChowClass:
    return a * b


def deg(a: ChowClass) -> int:
    """Degree of a top-codimension class (coefficient of the point class)."""
    top = sum(a.dims)
    if any(sum(e) != top for e in a.terms):
        raise InputError(f"deg needs a pure top-degree class, got {a}")
    return a.terms.get(a.dims, 0)


def chern_cotangent(X: Space) -> ChowClass:
    """Total Chern class of the ordinary cotangent bundle (Euler sequence)."""
    c = ChowClass.one(X.factors)
    for i, n in enumerate(X.factors):
        c = c * (ChowClass.one(X.factors) - ChowClass.hyperplane(X.factors, i)) ** (n + 1)
    return c


def chern_log_cotangent(X: Space) -> ChowClass:
    """Total Chern class of the log cotangent bundle of ``(X, D)``.

    From the residue sequence, each boundary component ``D_l`` of class
    ``d`` multiplies the cotangent class by ``c(O_{D_l}) = 1/(1 - d)``.
    """
    c = chern_cotangent(X)
    for comp in X.components:
        d = ChowClass.hyperplane(X.factors, comp.factor)
        c = c * (ChowClass.one(X.factors) - d).inverse()
    return c


def euler_open(X: Space) -> int:
    """Topological Euler characteristic of ``U = X \\ D``."""
    n = X.dim
    return (-1) ** n * deg(chern_log_cotangent(X).part(n))


def euler_open_direct(X: Space) -> int:
    """Independent count of ``chi(U)`` from the torus-orbit decomposition.

    Per factor, only torus-fixed points have nonzero Euler characteristic,
    so ``chi`` of the complement of some coordinate hyperplanes is the number
    of fixed points off them.  The fixed point ``e_j`` avoids ``X_c = 0``
    only for ``c = j``.  Each extra P^1 point removes one more.
    """
    total = 1
    for i, n in enumerate(X.factors):
        coords = {c.index for c in X.components if c.factor == i and c.is_coordinate}
        npts = sum(1 for c in X.components if c.factor == i and not c.is_coordinate)
        fixed = sum(1 for j in range(n + 1) if coords <= {j})
        total *= fixed - npts
    return total
