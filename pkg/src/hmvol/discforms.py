"""Discriminant quadratic forms, their isometry groups, and the projective
indices among the orthogonal-group variants of an even lattice of signature
(2, n).

The discriminant group A_L = L^/L of an even lattice carries a quadratic
form q with values in Q/2Z; the stable subgroups (the ones acting trivially
on (A_L, q)) sit inside the full groups with index N = |O(q)|, and the
plus/determinant conditions each contribute a further index 2.  The
projective index additionally depends on whether -id lies in the subgroup,
which happens exactly when -id acts trivially on A_L, i.e. when A_L has
exponent <= 2 (and, for the determinant-1 groups, when the rank is even).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from . import arith
from .errors import FeasibilityError, PreconditionError
from .lattices import Lattice

ISOMETRY_ENUM_CAP = 10**5


def factorize(n: int) -> tuple[int, ...]:
    """Prime factorization of n >= 1 as a sorted tuple with multiplicity."""
    if n < 1:
        raise PreconditionError("factorize expects a positive integer")
    out: list[int] = []
    for p, e in arith.factorize(n).items():
        out.extend([p] * e)
    return tuple(out)


def num_prime_divisors(d: int) -> int:
    """rho(d): number of distinct prime divisors; rho(1) = 0."""
    if d < 1:
        raise PreconditionError("expects a positive integer")
    return len(arith.factorize(d)) if d > 1 else 0


def _smith_normal_form(mat: list[list[int]]) -> tuple[list[int], list[list[int]]]:
    """Smith normal form with right transform: returns (diag, V) with
    U M V = diag(d_1 | d_2 | ...) for some unimodular U; only V is tracked."""
    n = len(mat)
    m = [row[:] for row in mat]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(j, k, f):  # C_j -= f * C_k
        for row in m:
            row[j] -= f * row[k]
        for row in v:
            row[j] -= f * row[k]

    def col_swap(j, k):
        for row in m:
            row[j], row[k] = row[k], row[j]
        for row in v:
            row[j], row[k] = row[k], row[j]

    def row_op(i, k, f):  # R_i -= f * R_k
        for j in range(n):
            m[i][j] -= f * m[k][j]

    def row_swap(i, k):
        m[i], m[k] = m[k], m[i]

    for t in range(n):
        while True:
            # move a minimal nonzero entry of the trailing block to (t, t)
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                raise PreconditionError("matrix is singular")
            bi, bj = best
            if bi != t:
                row_swap(bi, t)
            if bj != t:
                col_swap(bj, t)
            dirty = False
            for i in range(t + 1, n):
                f = m[i][t] // m[t][t]
                if f:
                    row_op(i, t, f)
                if m[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                f = m[t][j] // m[t][t]
                if f:
                    col_op(j, t, f)
                if m[t][j]:
                    dirty = True
            if dirty:
                continue
            # enforce divisibility d_t | trailing entries
            offender = None
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    if m[i][j] % m[t][t]:
                        offender = (i, j)
                        break
                if offender:
                    break
            if offender is None:
                break
            col_op(t, offender[1], -1)  # mixes the offending column into column t
    diag = [abs(m[i][i]) for i in range(n)]
    return diag, v


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """(A, q): generator orders d_1 | d_2 | ..., q-values in Q/2Z on the
    generators, and the bilinear values in Q/Z."""

    orders: tuple[int, ...]
    q_values: tuple[Fraction, ...]
    bilinear: tuple[tuple[Fraction, ...], ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.orders

    def element_order(self, x: tuple[int, ...]) -> int:
        out = 1
        for xi, di in zip(x, self.orders):
            out = lcm(out, di // gcd(di, xi))
        return out

    def q_of(self, x: tuple[int, ...]) -> Fraction:
        total = Fraction(0)
        k = len(self.orders)
        for i in range(k):
            total += x[i] * x[i] * self.q_values[i]
            for j in range(i + 1, k):
                total += 2 * x[i] * x[j] * self.bilinear[i][j]
        return total % 2

    def b_of(self, x: tuple[int, ...], y: tuple[int, ...]) -> Fraction:
        total = Fraction(0)
        k = len(self.orders)
        for i in range(k):
            for j in range(k):
                total += x[i] * y[j] * self.bilinear[i][j]
        return total % 1

    def elements(self):
        return itertools.product(*(range(d) for d in self.orders))


def discriminant_form(lattice: Lattice) -> FiniteQuadraticForm:
    """(A_L, q_L) for an even lattice, from the Smith normal form of the Gram
    matrix; q on generators comes from the dual pairing (inverse Gram)."""
    if not lattice.is_even:
        raise PreconditionError("discriminant form requires an even lattice")
    diag, v = _smith_normal_form([list(r) for r in lattice.gram])
    n = lattice.rank
    # M_q[i][j] = (g_i, g_j) for generators g_i = (V e_i)/d_i
    keep = [i for i in range(n) if diag[i] > 1]
    q_vals = []
    bil = [[Fraction(0)] * len(keep) for _ in keep]
    for a, i in enumerate(keep):
        vi = [v[r][i] for r in range(n)]
        gvi = [sum(lattice.gram[r][c] * vi[c] for c in range(n)) for r in range(n)]
        for b, j in enumerate(keep):
            vj = [v[r][j] for r in range(n)]
            pairing = Fraction(sum(gvi[r] * vj[r] for r in range(n)), diag[i] * diag[j])
            bil[a][b] = pairing % 1
            if a == b:
                q_vals.append(pairing % 2)
    form = FiniteQuadraticForm(tuple(diag[i] for i in keep), tuple(q_vals), tuple(map(tuple, bil)))
    if form.order != abs(lattice.det):
        raise PreconditionError("discriminant group order does not match |det|")
    return form


def _elementary_divisors(mat: list[list[int]]) -> list[int]:
    """Nonzero diagonal of an (uncanonicalized) Smith reduction of `mat`."""
    m = [row[:] for row in mat]
    nrows, ncols = len(m), len(m[0])
    t = 0
    out = []
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i0, j0 = best
        m[t], m[i0] = m[i0], m[t]
        for row in m:
            row[t], row[j0] = row[j0], row[t]
        dirty = False
        for i in range(t + 1, nrows):
            f = m[i][t] // m[t][t]
            if f:
                for j in range(t, ncols):
                    m[i][j] -= f * m[t][j]
            if m[i][t]:
                dirty = True
        for j in range(t + 1, ncols):
            f = m[t][j] // m[t][t]
            if f:
                for i in range(t, nrows):
                    m[i][j] -= f * m[i][t]
            if m[t][j]:
                dirty = True
        if not dirty:
            out.append(abs(m[t][t]))
            t += 1
    return out


def _is_automorphism(form: FiniteQuadraticForm, images: list[tuple[int, ...]]) -> bool:
    """Surjectivity of the endomorphism g_j -> images[j]: the images together
    with the relations d_i e_i must span Z^k over Z."""
    k = len(form.orders)
    mat = [
        [images[j][i] for j in range(k)]
        + [form.orders[i] if c == i else 0 for c in range(k)]
        for i in range(k)
    ]
    divisors = _elementary_divisors(mat)
    return len(divisors) == k and all(d == 1 for d in divisors)


def finite_isometry_order(form: FiniteQuadraticForm) -> int:
    """|O(A, q)| by brute-force enumeration of generator images.

    Candidates are pruned by element order and q-value, then by bilinear
    compatibility with previously chosen images; surviving assignments are
    filtered to automorphisms.
    """
    if form.is_trivial:
        return 1
    if form.order > ISOMETRY_ENUM_CAP:
        raise FeasibilityError(
            f"isometry enumeration guard: |A| = {form.order} exceeds {ISOMETRY_ENUM_CAP}"
        )
    k = len(form.orders)
    buckets: dict[tuple[int, Fraction], list[tuple[int, ...]]] = {}
    for x in form.elements():
        buckets.setdefault((form.element_order(x), form.q_of(x)), []).append(x)
    candidates = [buckets.get((form.orders[i], form.q_values[i]), []) for i in range(k)]

    count = 0
    chosen: list[tuple[int, ...]] = []

    def extend(i: int):
        nonlocal count
        if i == k:
            if _is_automorphism(form, chosen):
                count += 1
            return
        for cand in candidates[i]:
            ok = True
            for j in range(i):
                if form.b_of(cand, chosen[j]) != form.bilinear[i][j] % 1:
                    ok = False
                    break
            if ok:
                chosen.append(cand)
                extend(i + 1)
                chosen.pop()

    extend(0)
    return count


def minus_id_in_tilde(lattice: Lattice) -> bool:
    """Whether -id acts trivially on the discriminant group, i.e. lies in the
    stable orthogonal group: true exactly when A_L has exponent <= 2 (every
    generator order divides 2)."""
    form = discriminant_form(lattice)
    return all(d <= 2 for d in form.orders)


GROUP_TAGS = ("O", "O+", "SO+", "O~+", "SO~+")


def projective_index(lattice: Lattice, tag: str) -> int:
    """[PO(L) : P(Gamma_tag)] for the group diagram of an even signature-(2,n)
    lattice with a hyperbolic-plane direct summand.

    Vertical steps (plus condition, determinant condition) have index 2 and
    the horizontal step (stability) index N = |O(q_L)|; passing to projective
    groups doubles the index exactly when -id lies in the subgroup: -id is in
    O+ always (signature (2, n)), in the determinant-1 groups iff the rank is
    even, and in the stable groups iff A_L has exponent <= 2.
    """
    if tag not in GROUP_TAGS:
        raise PreconditionError(f"unknown group tag {tag!r}")
    sig = lattice.signature
    if sig.positive != 2 or sig.negative < 1:
        raise PreconditionError("projective indices are defined for signature (2, n), n >= 1")
    if tag == "O":
        return 1
    if tag == "O+":
        return 2
    rho = lattice.rank
    if tag == "SO+":
        return 4 if rho % 2 == 0 else 2
    if not lattice.is_even:
        raise PreconditionError(f"group tag {tag} needs the discriminant form of an even lattice")
    if not lattice.has_hyperbolic_summand:
        raise PreconditionError(
            "stable-group indices assume a hyperbolic-plane direct summand "
            "(one class per genus, surjectivity onto O(q))"
        )
    n_iso = finite_isometry_order(discriminant_form(lattice))
    exp_two = minus_id_in_tilde(lattice)
    if tag == "O~+":
        return 2 * n_iso if exp_two else n_iso
    # SO~+
    return 4 * n_iso if (exp_two and rho % 2 == 0) else 2 * n_iso


def minus_id_in_group(lattice: Lattice, tag: str) -> bool:
    """Whether -id lies in the subgroup named by `tag` (signature (2, n))."""
    if tag not in GROUP_TAGS:
        raise PreconditionError(f"unknown group tag {tag!r}")
    rho = lattice.rank
    if tag in ("O", "O+"):
        return True
    if tag == "SO+":
        return rho % 2 == 0
    stable = minus_id_in_tilde(lattice)
    if tag == "O~+":
        return stable
    return stable and rho % 2 == 0
