"""Rank-one log de Rham stalks, b-functions and monomial generation checks.

Local model at a point where ``k`` boundary components ``x_1 ... x_k = 0``
meet, with ``n_free`` further coordinates ``y``: the lattice

    M = x^(lambda - a) * C[[x, y]]

with ``lambda_l`` in ``(-1, 0]`` and integer shifts ``a``.  The Euler
operator ``x_l d/dx_l`` acts on ``x^(m + lambda - a)`` by the scalar
``m_l + lambda_l - a_l``.  The log de Rham complex is the Koszul complex of
``(x_1 d_1, ..., x_k d_k, d_y1, ...)`` placed in degrees ``[-(k + n_free), 0]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import InputError, InvariantError, ParseError, ResourceError
from .polyring import Poly, VarContext, parse_poly

_S_CTX = VarContext(["s"])
DEFAULT_DEPTH = 10


class BudgetExhausted(ResourceError):
    """A span search ran out of depth before reaching a verdict."""


@dataclass(frozen=True)
class Rank1Data:
    lam: Tuple[Fraction, ...]
    a: Tuple[int, ...]
    n_free: int = 0

    def __init__(self, lam: Sequence, a: Sequence[int], n_free: int = 0):
        lam = tuple(Fraction(x) for x in lam)
        a = tuple(int(x) for x in a)
        if len(lam) != len(a):
            raise InputError("lambda and shift vectors must have the same length")
        for x in lam:
            if not (-1 < x <= 0):
                raise InputError(f"exponent {x} outside (-1, 0]")
        if n_free < 0:
            raise InputError("n_free must be non-negative")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "n_free", int(n_free))

    @property
    def k(self) -> int:
        return len(self.lam)

    @property
    def dim(self) -> int:
        return self.k + self.n_free

    def shifted(self, q: int) -> "Rank1Data":
        return Rank1Data(self.lam, [x + q for x in self.a], self.n_free)

    def permuted(self, perm: Sequence[int]) -> "Rank1Data":
        return Rank1Data([self.lam[i] for i in perm], [self.a[i] for i in perm], self.n_free)

    def eigenvalue(self, l: int, m: int) -> Fraction:
        return m + self.lam[l] - self.a[l]


@dataclass(frozen=True)
class StalkCohomology:
    """Dimensions ``dims[i]`` of the cohomology in degree ``start + i``."""

    start: int
    dims: Tuple[int, ...]

    def __post_init__(self):
        if any(d < 0 for d in self.dims):
            raise InvariantError(f"negative cohomology dimension in {self.dims}")

    def degree(self, j: int) -> int:
        i = j - self.start
        return self.dims[i] if 0 <= i < len(self.dims) else 0

    def as_dict(self) -> Dict[int, int]:
        return {self.start + i: d for i, d in enumerate(self.dims)}

    @property
    def euler(self) -> int:
        return sum((-1) ** (self.start + i) * d for i, d in enumerate(self.dims))

    @property
    def is_zero(self) -> bool:
        return not any(self.dims)

    def __str__(self):
        return " ".join(f"H^{j}={d}" for j, d in self.as_dict().items())


# -- exact linear algebra -------------------------------------------------

def _rank(rows: List[List[Fraction]]) -> int:
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, len(m)):
            if m[i][col]:
                f = m[i][col] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def _y_basis(n_free: int, bound: int) -> List[Tuple[int, ...]]:
    if bound < 0:
        return []
    return [e for e in product(range(bound + 1), repeat=n_free) if sum(e) <= bound]


def _koszul_dims(scalars: Sequence[Fraction], n_free: int, bound: int) -> List[int]:
    return list(_koszul_dims_cached(tuple(Fraction(c) for c in scalars), n_free, bound))


@lru_cache(maxsize=4096)
def _koszul_dims_cached(scalars: Tuple[Fraction, ...], n_free: int, bound: int) -> Tuple[int, ...]:
    """Cohomology of Kos(scalars; d_y) on an x-monomial times truncated C[y].

    The y-part in exterior degree ``S`` is truncated to total degree
    ``bound - |S ∩ y|`` so each ``d_y`` stays surjective with kernel the
    constants, exactly as on ``C[[y]]``.
    """
    k = len(scalars)
    N = k + n_free
    subsets = [[S for S in combinations(range(N), p)] for p in range(N + 1)]

    def space(S):
        return _y_basis(n_free, bound - sum(1 for j in S if j >= k))

    index = {}
    for p in range(N + 1):
        for S in subsets[p]:
            index[S] = {e: i for i, e in enumerate(space(S))}
    sizes = [sum(len(index[S]) for S in subsets[p]) for p in range(N + 1)]
    offsets = []
    for p in range(N + 1):
        off, acc = {}, 0
        for S in subsets[p]:
            off[S] = acc
            acc += len(index[S])
        offsets.append(off)
    ranks = []
    for p in range(N):
        rows = [[Fraction(0)] * sizes[p + 1] for _ in range(sizes[p])]
        for S in subsets[p]:
            for e, i in index[S].items():
                r = offsets[p][S] + i
                for j in range(N):
                    if j in S:
                        continue
                    T = tuple(sorted(S + (j,)))
                    sign = -1 if sum(1 for t in S if t < j) % 2 else 1
                    if j < k:
                        if scalars[j]:
                            rows[r][offsets[p + 1][T] + index[T][e]] += sign * scalars[j]
                    else:
                        t = j - k
                        if e[t]:
                            e2 = e[:t] + (e[t] - 1,) + e[t + 1:]
                            rows[r][offsets[p + 1][T] + index[T][e2]] += sign * e[t]
        ranks.append(_rank(rows))
    dims = []
    for p in range(N + 1):
        rin = ranks[p - 1] if p > 0 else 0
        rout = ranks[p] if p < N else 0
        dims.append(sizes[p] - rout - rin)
    return tuple(dims)


def _window_cohomology(data: Rank1Data, scalar_of, window: Sequence[Iterable[int]],
                       bound: int = 3) -> StalkCohomology:
    N = data.dim
    total = [0] * (N + 1)
    for m in product(*[list(w) for w in window]):
        scalars = [scalar_of(l, m[l]) for l in range(data.k)]
        for i, d in enumerate(_koszul_dims(scalars, data.n_free, bound)):
            total[i] += d
    return StalkCohomology(-N, tuple(total))


def stalk_dr(data: Rank1Data) -> StalkCohomology:
    """Stalk cohomology of the log de Rham complex of the twisted lattice.

    The x-part splits into one block per monomial.  A block whose exponent
    ``m_l`` exceeds ``max(0, a_l) + 1`` has an invertible Euler scalar and
    is acyclic, so only a finite window is assembled.
    """
    window = [range(0, max(0, a) + 2) for a in data.a]
    return _window_cohomology(data, data.eigenvalue, window)


def _check_pattern(data: Rank1Data, I: FrozenSet[int]):
    for l, a in enumerate(data.a):
        if l in I and a > -1:
            raise InputError(f"shift a_{l}={a} inconsistent with component {l} in I (need a <= -1)")
        if l not in I and a < 0:
            raise InputError(f"shift a_{l}={a} inconsistent with component {l} outside I (need a >= 0)")


def expected_stalk(data: Rank1Data, I: Iterable[int] = ()) -> StalkCohomology:
    """Topological prediction: the stalk of ``j^I_! Rj_* L[n]``.

    Zero when the point lies on a component of ``I`` or when the monodromy
    around some other component is non-trivial; otherwise the cohomology of
    a real ``k``-torus, shifted by ``n``.
    """
    I = frozenset(I)
    if any(not 0 <= l < data.k for l in I):
        raise InputError("I must be a subset of the boundary components at the point")
    _check_pattern(data, I)
    N = data.dim
    if I or any(data.lam):
        return StalkCohomology(-N, (0,) * (N + 1))
    dims = [0] * (N + 1)
    for j in range(data.k + 1):
        dims[j] = comb(data.k, j)
    return StalkCohomology(-N, tuple(dims))


def b_roots_shifted(data: Rank1Data, l: int) -> List[Fraction]:
    """Roots of the minimal ``b`` with ``b(x_l d_l) M ⊆ x_l M``.

    On ``M / x_l M`` the Euler operator is the scalar ``lambda_l - a_l``, so
    ``b(s) = s - lambda_l + a_l`` and the root lies in ``(-a_l - 1, -a_l]``.
    """
    if not 0 <= l < data.k:
        raise InputError(f"component {l} out of range")
    return [data.lam[l] - data.a[l]]


def b_polynomial(data: Rank1Data, l: int) -> Poly:
    s = _S_CTX.var("s")
    out = _S_CTX.one
    for r in b_roots_shifted(data, l):
        out = out * (s - r)
    return out


def quotient_cohomology(data: Rank1Data, q: int) -> StalkCohomology:
    """Stalk cohomology of DR of ``M(qD) / M((q-1)D)``.

    Basis: monomials ``x^(m + lambda - a - q)`` with some ``m_l = 0``.
    """
    N = data.dim
    if data.k == 0:
        return StalkCohomology(-N, (0,) * (N + 1))
    sh = data.shifted(q)
    top = max(0, max(sh.a)) + 2
    total = [0] * (N + 1)
    for m in product(range(top), repeat=data.k):
        if min(m) != 0:
            continue
        scalars = [sh.eigenvalue(l, m[l]) for l in range(data.k)]
        for i, d in enumerate(_koszul_dims(scalars, data.n_free, 3)):
            total[i] += d
    return StalkCohomology(-N, tuple(total))


def stabilization_threshold(data: Rank1Data) -> Tuple[int, List[int]]:
    """``(q0, jumps)``: the q where ``DR(M(qD)/M((q-1)D))`` is not acyclic.

    Jumps can only occur where a b-root translate crosses zero, i.e. at
    ``q = -a_l`` for components with ``lambda_l = 0``; each candidate (and a
    margin around the candidate range) is checked with the quotient complex.
    """
    if data.k == 0:
        return 1, []
    cands = [-a for a, lam in zip(data.a, data.lam) if lam == 0]
    lo = min(-a for a in data.a) - 2
    hi = max(-a for a in data.a) + 2
    jumps = [q for q in range(lo, hi + 1) if not quotient_cohomology(data, q).is_zero]
    if any(q not in cands for q in jumps):
        raise InvariantError(f"jump outside the b-root translates: {jumps} vs {cands}")
    q0 = max(1, 1 + max(jumps)) if jumps else 1
    return q0, jumps


# -- monomial generation on the affine line -------------------------------

@dataclass(frozen=True)
class GenerationResult:
    value: bool
    witness: str
    depth: int

    def __bool__(self):
        return self.value


def _span_search(start: int, target, depth: int) -> Optional[int]:
    """BFS over exponents reachable by ``y*`` and ``d/dy``; level where ``target`` holds."""
    seen = {start}
    frontier = {start}
    if target(start):
        return 0
    for level in range(1, depth + 1):
        nxt = set()
        for e in frontier:
            for f in (e + 1, e - 1 if e != 0 else None):
                if f is not None and f not in seen:
                    nxt.add(f)
        seen |= nxt
        frontier = nxt
        if any(target(e) for e in nxt):
            return level
    return None


def weyl_monomial_generation(v: int, mode: str, depth: int = DEFAULT_DEPTH) -> GenerationResult:
    """Decide ``D * y^(-v) = C[y, 1/y]`` (``star``) or ``D * y^v = C[y]`` (``shriekstar``).

    Monomials map to nonzero multiples of monomials (``d y^0 = 0`` aside),
    so spans are exponent sets.  ``star``: reaching ``y^-1`` suffices,
    since ``d^j y^-1`` and ``y^j y^-1`` then give every power; a start in
    ``C[y]`` certifies failure because ``C[y]`` is D-stable.  ``shriekstar``:
    reaching ``y^0`` suffices, and the span never leaves ``C[y]``.
    Raises :class:`BudgetExhausted` when the depth runs out undecided.
    """
    if v < 0:
        raise InputError("v must be non-negative")
    if depth < 0:
        raise InputError("depth must be non-negative")
    if mode == "star":
        start = -v
        if start >= 0:
            return GenerationResult(False, "start lies in C[y], which is D-stable and misses y^-1", 0)
        lvl = _span_search(start, lambda e: e == -1, depth)
        if lvl is None:
            raise BudgetExhausted(f"y^-1 not reached from y^{start} within depth {depth}")
        return GenerationResult(True, f"y^-1 reached at depth {lvl}", lvl)
    if mode == "shriekstar":
        lvl = _span_search(v, lambda e: e == 0, depth)
        if lvl is None:
            raise BudgetExhausted(f"y^0 not reached from y^{v} within depth {depth}")
        return GenerationResult(True, f"1 reached at depth {lvl}", lvl)
    raise InputError(f"unknown mode {mode!r} (expected 'star' or 'shriekstar')")


# -- b-function identities --------------------------------------------------

def parse_operator_word(word: str) -> List[Tuple[str, int]]:
    """Parse products like ``d^2``, ``y*d``, ``d*d`` into ``[(atom, power), ...]``."""
    text = word.replace(" ", "")
    if not text:
        raise ParseError("empty operator word", word, 0)
    out = []
    pos = 0
    for part in text.split("*"):
        if not part:
            raise ParseError("empty factor in operator word", word, pos)
        atom, _, exp = part.partition("^")
        if atom not in ("d", "y"):
            raise ParseError(f"unknown operator {atom!r} (expected d or y)", word, pos)
        if exp and not exp.isdigit():
            raise ParseError(f"bad exponent {exp!r}", word, pos + len(atom) + 1)
        out.append((atom, int(exp) if exp else 1))
        pos += len(part) + 1
    return out


def apply_word(word: Union[str, Sequence[Tuple[str, int]]], m) -> Tuple[Poly, int]:
    """Apply an operator word to ``y^(s + m)``; returns ``(coefficient(s), exponent shift)``."""
    ops = parse_operator_word(word) if isinstance(word, str) else list(word)
    s = _S_CTX.var("s")
    coeff = _S_CTX.one
    shift = m
    for atom, k in reversed(ops):
        for _ in range(k):
            if atom == "d":
                coeff = coeff * (s + shift)
                shift -= 1
            else:
                shift += 1
    return coeff, shift


def verify_b_identity(w: int, b: Union[Poly, str], P: str, base_shift: int = 0) -> bool:
    """Check ``P * y^(s + c + w) == b(s + c) * y^(s + c)`` for ``c = base_shift``."""
    if w < 1:
        raise InputError("w must be a positive integer")
    bp = parse_poly(b, _S_CTX) if isinstance(b, str) else b.embed(_S_CTX)
    coeff, shift = apply_word(P, base_shift + w)
    if shift != base_shift:
        return False
    return coeff == bp.subs({"s": _S_CTX.var("s") + base_shift})


def monomial_b_function(w: int) -> Tuple[Poly, str]:
    """The classical pair for ``h = y^w``: ``b = (s+1)...(s+w)`` with ``P = d^w``."""
    s = _S_CTX.var("s")
    b = _S_CTX.one
    for i in range(1, w + 1):
        b = b * (s + i)
    return b, "d" if w == 1 else f"d^{w}"
