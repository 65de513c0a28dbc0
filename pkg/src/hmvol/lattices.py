"""Integral lattices given by symmetric Gram matrices, with exact invariants.

A lattice here is a free Z-module of finite rank with an integer-valued
symmetric bilinear form.  Determinant and signature are computed exactly
(fraction-free elimination resp. rational congruence diagonalization); no
floating point enters anywhere.

Constructors also track whether a hyperbolic-plane direct summand is
syntactically present, which downstream code uses to justify the
one-class-per-genus assumption for index computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError

RANK_CAP = 64
ENTRY_CAP = 2**63

Gram = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Signature:
    positive: int
    negative: int

    def __iter__(self):
        return iter((self.positive, self.negative))

    def __repr__(self) -> str:
        return f"({self.positive},{self.negative})"


def _freeze(rows: Iterable[Sequence[int]]) -> Gram:
    return tuple(tuple(int(x) for x in row) for row in rows)


def _bareiss_det(rows: Gram) -> int:
    """Fraction-free (Bareiss) determinant; exact over Z."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _rational_signature(rows: Gram) -> Signature:
    """Sylvester signature by symmetric Gaussian reduction over Q.

    Pivot search: prefer a nonzero diagonal entry; if the remaining block has
    zero diagonal but a nonzero off-diagonal entry (i,j), the row/column
    operation R_i += R_j surfaces the nonzero diagonal value 2*a_ij.
    """
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    pos = neg = 0
    active = list(range(n))
    while active:
        pivot = next((i for i in active if m[i][i] != 0), None)
        if pivot is None:
            pair = next(
                ((i, j) for i in active for j in active if i != j and m[i][j] != 0),
                None,
            )
            if pair is None:
                raise PreconditionError("Gram matrix is singular")
            i, j = pair
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            pivot = i
        d = m[pivot][pivot]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(pivot)
        for i in active:
            f = m[i][pivot] / d
            if f == 0:
                continue
            for k in range(n):
                m[i][k] -= f * m[pivot][k]
            for k in range(n):
                m[k][i] -= f * m[k][pivot]
    return Signature(pos, neg)


class Lattice:
    """Nondegenerate integral lattice with cached rank/det/signature."""

    __slots__ = ("gram", "rank", "det", "signature", "has_hyperbolic_summand")

    def __init__(self, gram: Iterable[Sequence[int]], *, hyperbolic_summand: bool = False):
        g = _freeze(gram)
        n = len(g)
        if n == 0:
            raise PreconditionError("lattice must have positive rank")
        if n > RANK_CAP:
            raise PreconditionError(f"rank {n} exceeds cap {RANK_CAP}")
        if any(len(row) != n for row in g):
            raise PreconditionError("Gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if abs(g[i][j]) >= ENTRY_CAP:
                    raise PreconditionError(f"entry {g[i][j]} exceeds cap 2^63")
                if g[i][j] != g[j][i]:
                    raise PreconditionError(
                        f"Gram matrix is not symmetric at ({i},{j}): {g[i][j]} != {g[j][i]}"
                    )
        d = _bareiss_det(g)
        if d == 0:
            raise PreconditionError("Gram matrix is singular")
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "rank", n)
        object.__setattr__(self, "det", d)
        object.__setattr__(self, "signature", _rational_signature(g))
        object.__setattr__(self, "has_hyperbolic_summand", bool(hyperbolic_summand))

    def __setattr__(self, name, value):
        raise AttributeError("Lattice instances are immutable")

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_definite(self) -> bool:
        return self.signature.positive == 0 or self.signature.negative == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self) -> str:
        return f"Lattice(rank={self.rank}, det={self.det}, signature={self.signature})"


_E8_EDGES = ((1, 3), (3, 4), (2, 4), (4, 5), (5, 6), (6, 7), (7, 8))


def _e8_gram() -> Gram:
    m = [[0] * 8 for _ in range(8)]
    for i in range(8):
        m[i][i] = 2
    for a, b in _E8_EDGES:
        m[a - 1][b - 1] = m[b - 1][a - 1] = -1
    return _freeze(m)


def hyperbolic_plane(scale: int = 1) -> Lattice:
    """U(scale): Gram [[0, scale], [scale, 0]]; U(1) and U(-1) are hyperbolic planes."""
    if scale == 0:
        raise PreconditionError("scale must be nonzero")
    return Lattice(
        [[0, scale], [scale, 0]],
        hyperbolic_summand=scale in (1, -1),
    )


def e8(scale: int = 1) -> Lattice:
    """The E8 root lattice Gram (standard Cartan matrix), rescaled by `scale`."""
    if scale == 0:
        raise PreconditionError("scale must be nonzero")
    base = _e8_gram()
    return Lattice([[scale * x for x in row] for row in base])


def rank_one(k: int) -> Lattice:
    """<k>: the rank-1 lattice with Gram [k]."""
    if k == 0:
        raise PreconditionError("rank-1 Gram entry must be nonzero")
    return Lattice([[k]])


def from_gram(rows: Iterable[Sequence[int]]) -> Lattice:
    return Lattice(rows)


def rescale(lattice: Lattice, c: int) -> Lattice:
    """L(c): multiply every Gram entry by c."""
    if c == 0:
        raise PreconditionError("scale must be nonzero")
    return Lattice(
        [[c * x for x in row] for row in lattice.gram],
        hyperbolic_summand=lattice.has_hyperbolic_summand and c in (1, -1),
    )


def direct_sum(*lattices: Lattice) -> Lattice:
    """Orthogonal (block-diagonal) sum."""
    if not lattices:
        raise PreconditionError("direct_sum needs at least one summand")
    n = sum(l.rank for l in lattices)
    rows = [[0] * n for _ in range(n)]
    offset = 0
    for lat in lattices:
        for i in range(lat.rank):
            for j in range(lat.rank):
                rows[offset + i][offset + j] = lat.gram[i][j]
        offset += lat.rank
    return Lattice(rows, hyperbolic_summand=any(l.has_hyperbolic_summand for l in lattices))
