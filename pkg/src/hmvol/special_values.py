"""Exact special values: Bernoulli numbers, quadratic characters, zeta and
Dirichlet L values at integers, and the symbolic exact-real type that carries
them through volume computations.

A `SymbolicReal` is a value of the form

    coefficient * pi**(pi_half_exponent/2) * sqrt(radicand)

with an exact rational coefficient and a squarefree positive radicand.  The
volume pipeline only ever multiplies and divides such values, and every final
volume collapses to a plain rational (the pi powers and surds cancel), which
is asserted downstream.

L-values at positive integers are obtained from generalized Bernoulli numbers
through the completed functional equation; the even-character case follows
the classical display, the odd-character case uses the standard completed-L
normalization with the gamma shift s -> (s+1)/2 and is pinned by the numeric
consistency tests rather than trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import kronecker, squarefree_decompose
from .errors import PreconditionError

__all__ = [
    "SymbolicReal",
    "bernoulli",
    "bernoulli_polynomial",
    "kronecker",
    "fundamental_discriminant",
    "generalized_bernoulli",
    "zeta_closed",
    "zeta_negative",
    "l_closed",
    "gamma_half",
    "gamma_factor",
]

_BERNOULLI_CACHE_LIMIT = 64


@dataclass(frozen=True)
class SymbolicReal:
    """Exact value coefficient * pi^(pi_half_exponent/2) * sqrt(radicand)."""

    coefficient: Fraction
    pi_half_exponent: int = 0
    radicand: int = 1

    def __post_init__(self):
        coeff = Fraction(self.coefficient)
        rad = self.radicand
        if rad < 1:
            raise ValueError("radicand must be a positive integer")
        s, t = squarefree_decompose(rad)
        coeff *= t
        object.__setattr__(self, "coefficient", coeff)
        object.__setattr__(self, "radicand", s)
        if coeff == 0:
            object.__setattr__(self, "pi_half_exponent", 0)
            object.__setattr__(self, "radicand", 1)

    @property
    def is_rational(self) -> bool:
        return self.pi_half_exponent == 0 and self.radicand == 1

    def rational(self) -> Fraction:
        if not self.is_rational:
            raise PreconditionError(f"{self} is not rational")
        return self.coefficient

    def __mul__(self, other) -> "SymbolicReal":
        if isinstance(other, SymbolicReal):
            return SymbolicReal(
                self.coefficient * other.coefficient,
                self.pi_half_exponent + other.pi_half_exponent,
                self.radicand * other.radicand,
            )
        return SymbolicReal(self.coefficient * Fraction(other), self.pi_half_exponent, self.radicand)

    __rmul__ = __mul__

    def inverse(self) -> "SymbolicReal":
        if self.coefficient == 0:
            raise ZeroDivisionError("inverse of zero")
        # 1/sqrt(r) = sqrt(r)/r
        return SymbolicReal(
            1 / (self.coefficient * self.radicand), -self.pi_half_exponent, self.radicand
        )

    def __truediv__(self, other) -> "SymbolicReal":
        if isinstance(other, SymbolicReal):
            return self * other.inverse()
        return SymbolicReal(self.coefficient / Fraction(other), self.pi_half_exponent, self.radicand)

    def __rtruediv__(self, other) -> "SymbolicReal":
        return self.inverse() * other

    def __pow__(self, n: int) -> "SymbolicReal":
        if n < 0:
            return self.inverse() ** (-n)
        out = SymbolicReal(Fraction(1))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def evalf(self, dps: int = 50):
        """Numeric value as an mpmath mpf at the given working precision."""
        import mpmath

        with mpmath.workdps(dps + 10):
            val = mpmath.mpf(self.coefficient.numerator) / self.coefficient.denominator
            val *= mpmath.pi ** (mpmath.mpf(self.pi_half_exponent) / 2)
            val *= mpmath.sqrt(self.radicand)
            return +val

    def __repr__(self) -> str:
        parts = [str(self.coefficient)]
        if self.pi_half_exponent:
            parts.append(f"pi^({self.pi_half_exponent}/2)")
        if self.radicand != 1:
            parts.append(f"sqrt({self.radicand})")
        return " * ".join(parts)


@lru_cache(maxsize=_BERNOULLI_CACHE_LIMIT + 8)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (convention B_1 = -1/2).

    Computed from the defining recurrence sum_{k=0}^{n} C(n+1,k) B_k = 0.
    Odd n >= 3 gives 0; callers in the volume pipeline only use even n.
    """
    if n < 0:
        raise ValueError("Bernoulli index must be >= 0")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    acc = Fraction(0)
    for k in range(n):
        acc += math.comb(n + 1, k) * bernoulli(k)
    return -acc / (n + 1)


def bernoulli_polynomial(k: int, x: Fraction) -> Fraction:
    """B_k(x) = sum_i C(k,i) B_i x^(k-i), exact."""
    x = Fraction(x)
    return sum((math.comb(k, i) * bernoulli(i) * x ** (k - i) for i in range(k + 1)), Fraction(0))


def fundamental_discriminant(m: int) -> tuple[int, int]:
    """Discriminant D of Q(sqrt(m)) and the t with m = d0 * t**2, d0 squarefree.

    D = d0 when d0 = 1 mod 4, else 4*d0; works for negative m as well.
    m = 1 gives (1, 1), the trivial character.
    """
    if m == 0:
        raise PreconditionError("fundamental discriminant of 0 is undefined")
    d0, t = squarefree_decompose(m)
    disc = d0 if d0 % 4 == 1 else 4 * d0
    return disc, t


def generalized_bernoulli(k: int, disc: int) -> Fraction:
    """Generalized Bernoulli number B_{k,chi} for the Kronecker character of
    the fundamental discriminant `disc`.

    Finite-sum definition: B_{k,chi} = f^(k-1) sum_{a=1}^{f} chi(a) B_k(a/f)
    with f = |disc|.  For disc = 1 this returns the ordinary B_k.
    """
    if k < 1:
        raise ValueError("index must be >= 1")
    if disc == 1:
        return bernoulli(k)
    f = abs(disc)
    total = Fraction(0)
    for a in range(1, f + 1):
        chi = kronecker(disc, a)
        if chi:
            total += chi * bernoulli_polynomial(k, Fraction(a, f))
    return Fraction(f) ** (k - 1) * total


def zeta_closed(k2: int) -> SymbolicReal:
    """zeta(k2) for even k2 >= 2 as an exact multiple of pi^k2."""
    if k2 < 2 or k2 % 2:
        raise PreconditionError("closed zeta values exist at positive even integers only")
    k = k2 // 2
    coeff = Fraction((-1) ** (k + 1)) * bernoulli(k2) * 2 ** (k2 - 1) / math.factorial(k2)
    return SymbolicReal(coeff, 2 * k2)


def zeta_negative(n: int) -> Fraction:
    """zeta(n) for n = 1 - 2k < 0 odd: equals -B_{2k}/(2k)."""
    if n >= 0 or n % 2 == 0:
        raise PreconditionError("expects a negative odd integer")
    k2 = 1 - n
    return -bernoulli(k2) / k2


def gamma_half(j: int) -> SymbolicReal:
    """Gamma(j/2) as a SymbolicReal, for any j with j/2 not a nonpositive integer.

    Expands through Gamma(x+1) = x Gamma(x) down to Gamma(1) = 1 or
    Gamma(1/2) = sqrt(pi); half-integer arguments below 1/2 are reached by the
    reflection-free downward recursion Gamma(x) = Gamma(x+1)/x.
    """
    if j % 2 == 0:
        m = j // 2
        if m <= 0:
            raise PreconditionError(f"Gamma has a pole at {m}")
        return SymbolicReal(Fraction(math.factorial(m - 1)))
    coeff = Fraction(1)
    x = Fraction(j, 2)
    while x > Fraction(1, 2):
        x -= 1
        coeff *= x
    while x < Fraction(1, 2):
        coeff /= x
        x += 1
    return SymbolicReal(coeff, 1)


def gamma_factor(rank: int) -> SymbolicReal:
    """prod_{k=1}^{rank} pi^(-k/2) Gamma(k/2), exact."""
    if rank < 1:
        raise PreconditionError("rank must be >= 1")
    out = SymbolicReal(Fraction(1))
    for k in range(1, rank + 1):
        out = out * gamma_half(k) * SymbolicReal(Fraction(1), -k)
    return out


def l_closed(t_arg: int, disc: int) -> SymbolicReal:
    """L(t_arg, chi_disc) for a fundamental discriminant, in closed form.

    Requires the parity match chi_disc(-1) = (-1)^t_arg, i.e. disc > 0 for
    even t_arg and disc < 0 for odd t_arg; the value is then

        rational * pi^t_arg / sqrt(|disc|)

    obtained from B_{t_arg, chi} via the functional equation.  disc = 1
    delegates to the zeta closed form.
    """
    if t_arg < 1:
        raise PreconditionError("argument must be a positive integer")
    if disc == 1:
        return zeta_closed(t_arg)
    if (disc > 0) != (t_arg % 2 == 0):
        raise PreconditionError(
            f"parity mismatch: chi_{disc}(-1) != (-1)^{t_arg}, no closed form here"
        )
    t = t_arg
    b = generalized_bernoulli(t, disc)
    l_neg = SymbolicReal(Fraction(-b, t))  # L(1-t, chi)
    f = abs(disc)
    dpow = SymbolicReal(Fraction(1, f**t), 0, f)  # |disc|^(1/2 - t)
    if disc > 0:
        # pi^{-s/2} Gamma(s/2) D^s L(s) = pi^{-(1-s)/2} Gamma((1-s)/2) D^{1/2} L(1-s)
        gammas = gamma_half(1 - t) / gamma_half(t)
    else:
        # completed form (|D|/pi)^{(s+1)/2} Gamma((s+1)/2) L(s) invariant under s -> 1-s
        gammas = gamma_half(2 - t) / gamma_half(t + 1)
    return SymbolicReal(Fraction(1), 2 * t - 1) * gammas * dpow * l_neg


def euler_factor(disc: int, p: int, s: int) -> Fraction:
    """1 - chi_disc(p) p^(-s), the local Euler factor of chi_disc at p."""
    return 1 - Fraction(kronecker(disc, p), p**s)
