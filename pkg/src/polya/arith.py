"""Exact integer primitives and integer-valued polynomial utilities."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import config
from .errors import CRTError, InputError, ResourceLimitError

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# (bound, bases): Miller-Rabin with these bases is exact below the bound.
_WITNESS_TIERS = (
    (3_215_031_751, _SMALL_PRIMES[:4]),
    (341_550_071_728_321, _SMALL_PRIMES[:7]),
)


def _miller_rabin(n, base):
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Primality of |n|.

    Exact for |n| below ``config.DETERMINISTIC_PRIME_LIMIT``; above it a
    further ``config.PROBABILISTIC_ROUNDS`` rounds with bases drawn from a
    generator seeded by n, so a composite slips through with probability at
    most 4**-rounds and the answer is reproducible.
    """
    n = abs(n)
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    for bound, bases in _WITNESS_TIERS:
        if n < bound:
            return all(_miller_rabin(n, b) for b in bases)
    if not all(_miller_rabin(n, p) for p in _SMALL_PRIMES):
        return False
    if n < config.DETERMINISTIC_PRIME_LIMIT:
        return True
    rng = random.Random(n)
    return all(_miller_rabin(n, rng.randrange(2, n - 1))
               for _ in range(config.PROBABILISTIC_ROUNDS))


def next_prime(n):
    """Smallest prime strictly greater than n."""
    n = max(n, 1) + 1
    while not is_prime(n):
        n += 1
    return n


def primes_above(bound, residue=None, modulus=None):
    """Yield primes > bound in increasing order, optionally ≡ residue (mod modulus)."""
    p = bound
    while True:
        p = next_prime(p)
        if modulus is None or p % modulus == residue:
            yield p


@dataclass(frozen=True)
class Factorization:
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise InputError("factor primes must be strictly increasing")

    def value(self):
        return math.prod(p**e for p, e in self.factors)

    def primes(self):
        return [p for p, _ in self.factors]

    def exponent(self, p):
        return dict(self.factors).get(p, 0)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


def _rho(n):
    # Pollard-Brent; returns a nontrivial factor of composite odd n.
    for c in range(1, 64):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        steps = 0
        m = 128
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            steps += r
            if steps > config.RHO_ITERATION_CAP:
                raise ResourceLimitError(
                    f"rho exceeded {config.RHO_ITERATION_CAP} iterations factoring {n}")
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ResourceLimitError(f"rho found no factor of {n}")


def factor(n: int) -> Factorization:
    """Complete prime factorization of |n|.

    Trial division to ``config.TRIAL_DIVISION_BOUND``, then Pollard-Brent
    rho with an iteration cap; the cap raises ResourceLimitError.
    """
    if n == 0:
        raise InputError("cannot factor 0")
    n = abs(n)
    if len(str(n)) > config.FACTOR_DIGIT_LIMIT:
        raise ResourceLimitError(f"{n} exceeds the {config.FACTOR_DIGIT_LIMIT}-digit factoring limit")
    counts: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    # wheel mod 30
    p, gaps = 7, (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p <= config.TRIAL_DIVISION_BOUND and p * p <= n:
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
        p += gaps[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        g = _rho(m)
        stack += [g, m // g]
    return Factorization(tuple(sorted(counts.items())))


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1."""
    if n < 1 or n % 2 == 0:
        raise InputError(f"Jacobi symbol needs odd positive modulus, got {n}")
    a %= n
    sign = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def legendre_euler(a, p):
    """Legendre symbol by Euler's criterion; independent of :func:`jacobi`."""
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


@dataclass(frozen=True)
class Congruence:
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InputError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            object.__setattr__(self, "residue", self.residue % self.modulus)

    def holds(self, x):
        return (x - self.residue) % self.modulus == 0


def crt(system: Sequence[Congruence]) -> Congruence:
    """Combine pairwise-coprime congruences into one modulo their product."""
    system = list(system)
    if not system:
        raise InputError("empty congruence system")
    for i in range(len(system)):
        for j in range(i + 1, len(system)):
            g = math.gcd(system[i].modulus, system[j].modulus)
            if g != 1:
                raise CRTError(i, j, g)
    x, m = 0, 1
    for c in system:
        # x + m*t ≡ r (mod c.modulus)
        t = (c.residue - x) * pow(m, -1, c.modulus) % c.modulus
        x += m * t
        m *= c.modulus
    return Congruence(x % m, m)


def squarefree_part(n: int) -> int:
    """Squarefree s with n = s * t**2 and sign(s) = sign(n)."""
    if n == 0:
        raise InputError("squarefree part of 0 is undefined")
    s = math.prod(p for p, e in factor(n) if e % 2)
    return s if n > 0 else -s


def omega(n: int) -> int:
    """Number of distinct primes dividing n."""
    if n == 0:
        raise InputError("omega(0) is undefined")
    return len(factor(n))


def is_squarefree(n):
    return n != 0 and all(e == 1 for _, e in factor(n))


def is_cube_free(n):
    return n != 0 and all(e < 3 for _, e in factor(n))


def is_square(n):
    return n >= 0 and math.isqrt(n) ** 2 == n


class RationalPolynomial:
    """Polynomial over Q, coefficients in ascending degree."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable = ()):
        cs = [Fraction(c) for c in coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coefficients = tuple(cs)

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, RationalPolynomial) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"RationalPolynomial({[str(c) for c in self.coefficients]})"

    @classmethod
    def falling_binomial(cls, i):
        """X(X-1)...(X-i+1)/i!"""
        poly = [Fraction(1)]
        for k in range(i):
            # multiply by (X - k)
            nxt = [Fraction(0)] * (len(poly) + 1)
            for j, c in enumerate(poly):
                nxt[j + 1] += c
                nxt[j] -= k * c
            poly = nxt
        return cls(c / math.factorial(i) for c in poly)


def binomial_basis_coeffs(f: RationalPolynomial) -> list[Fraction]:
    """Coefficients c_i with f = sum c_i * binom(X, i), via finite differences at 0..deg f."""
    if f.degree < 0:
        return [Fraction(0)]
    values = [f(t) for t in range(f.degree + 1)]
    coeffs = []
    while values:
        coeffs.append(values[0])
        values = [b - a for a, b in zip(values, values[1:])]
    return coeffs


def is_integer_valued(f: RationalPolynomial) -> bool:
    """True iff f maps Z into Z."""
    return all(c.denominator == 1 for c in binomial_basis_coeffs(f))
