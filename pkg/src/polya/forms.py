"""Binary quadratic forms: reduction, composition, class groups, fundamental units.

This is the brute-force side of every quadratic-field computation. Class
groups are built by enumerating reduced forms, so results are exact and
independent of any closed formula, at the price of an |disc| bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import config
from .abelian import FiniteAbelianGroup
from .arith import factor, squarefree_part
from .errors import InputError, ResourceLimitError


@dataclass(frozen=True)
class QuadField:
    d: int
    disc: int
    is_real: bool

    def ramified_primes(self):
        return ramified_primes(self)


def field_from_d(d: int) -> QuadField:
    """Q(sqrt(d)) with d reduced to its squarefree part."""
    if d in (0, 1):
        raise InputError(f"d = {d} does not define a quadratic field")
    s = squarefree_part(d)
    if s == 1:
        raise InputError(f"d = {d} is a perfect square")
    disc = s if s % 4 == 1 else 4 * s
    return QuadField(s, disc, s > 0)


def ramified_primes(K: QuadField) -> list[int]:
    return factor(K.disc).primes()


@dataclass(frozen=True, order=True)
class Form:
    a: int
    b: int
    c: int

    @property
    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __repr__(self):
        return f"Form({self.a}, {self.b}, {self.c})"

    def is_primitive(self):
        return math.gcd(self.a, self.b, self.c) == 1

    @classmethod
    def from_ab(cls, a, b, disc):
        num = b * b - disc
        if a == 0 or num % (4 * a):
            raise InputError(f"no form ({a}, {b}, ·) of discriminant {disc}")
        return cls(a, b, num // (4 * a))


def principal_form(disc) -> Form:
    b = disc % 2
    return Form(1, b, (b - disc) // 4)


def opposite(f: Form) -> Form:
    """The inverse class: (a, -b, c)."""
    return Form(f.a, -f.b, f.c)


def _check_disc(disc):
    if disc % 4 not in (0, 1):
        raise InputError(f"{disc} is not a discriminant")
    if disc > 0 and math.isqrt(disc) ** 2 == disc:
        raise InputError(f"square discriminant {disc} not supported")


def _reduce_definite(a, b, c):
    disc = b * b - 4 * a * c
    while True:
        if not -a < b <= a:
            r = (a - b) // (2 * a)
            b += 2 * r * a
            c = (b * b - disc) // (4 * a)
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def _normalize_indefinite(a, b, disc, s):
    aa = abs(a)
    if aa <= s:
        # largest b' < sqrt(disc) congruent to b mod 2|a|
        b = s - (s - b) % (2 * aa)
    else:
        b %= 2 * aa
        if b > aa:
            b -= 2 * aa
    return a, b, (b * b - disc) // (4 * a)


def _is_reduced_indefinite(a, b, disc, s):
    aa = abs(a)
    return 0 < b <= s and 2 * aa - b <= s and (b + 2 * aa) ** 2 > disc


def _rho(a, b, c, disc, s):
    return _normalize_indefinite(c, -b, disc, s)


def is_reduced(f: Form) -> bool:
    disc = f.disc
    if disc < 0:
        return f.a > 0 and abs(f.b) <= f.a <= f.c and not (f.b < 0 and (f.b == -f.a or f.a == f.c))
    return _is_reduced_indefinite(f.a, f.b, disc, math.isqrt(disc))


def rho(f: Form) -> Form:
    """One step of the indefinite reduction operator."""
    disc = f.disc
    return Form(*_rho(f.a, f.b, f.c, disc, math.isqrt(disc)))


def reduce(f: Form) -> Form:
    """Reduced representative: unique for disc < 0, on the rho-cycle for disc > 0."""
    disc = f.disc
    _check_disc(disc)
    if not f.is_primitive():
        raise InputError(f"{f!r} is not primitive")
    if disc < 0:
        if f.a < 0:
            raise InputError(f"{f!r} is negative definite")
        return Form(*_reduce_definite(f.a, f.b, f.c))
    s = math.isqrt(disc)
    a, b, c = f
    if not _is_reduced_indefinite(a, b, disc, s):
        a, b, c = _normalize_indefinite(a, b, disc, s)
        while not _is_reduced_indefinite(a, b, disc, s):
            a, b, c = _rho(a, b, c, disc, s)
    return Form(a, b, c)


def cycle(f: Form) -> list[Form]:
    """The rho-cycle through reduce(f) (disc > 0)."""
    g = reduce(f)
    disc = g.disc
    if disc < 0:
        return [g]
    s = math.isqrt(disc)
    out = [g]
    cur = _rho(*g, disc, s)
    while cur != tuple(g):
        out.append(Form(*cur))
        cur = _rho(*cur, disc, s)
    return out


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _compose_raw(a1, b1, c1, a2, b2, c2, disc):
    beta = (b1 + b2) // 2
    g1, x1, y1 = _xgcd(a1, a2)
    g, x2, w = _xgcd(g1, beta)
    u, v = x1 * x2, y1 * x2
    a3 = a1 * a2 // (g * g)
    b3 = (u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + disc) // 2) // g
    b3 %= 2 * abs(a3)
    return a3, b3, (b3 * b3 - disc) // (4 * a3)


def compose(f: Form, g: Form) -> Form:
    """Gauss composition; the result is reduced."""
    disc = f.disc
    if g.disc != disc:
        raise InputError(f"discriminant mismatch: {disc} vs {g.disc}")
    if not (f.is_primitive() and g.is_primitive()):
        raise InputError("composition needs primitive forms")
    return reduce(Form(*_compose_raw(*f, *g, disc)))


def ramified_prime_class(K: QuadField, p: int) -> Form:
    """Form (p, B, (B^2 - disc)/4p) attached to the prime ideal above a ramified p.

    B is the unique residue in [0, 2p) with B ≡ disc (mod 2) and
    B^2 ≡ disc (mod 4p). For odd p this is B = 0 (disc even) or B = p
    (disc odd); for p = 2 it is B = 0 when disc ≡ 8 (mod 16) and B = 2
    when disc ≡ 12 (mod 16).
    """
    if K.disc % p:
        raise InputError(f"{p} does not divide the discriminant {K.disc}")
    for B in range(0, 2 * p):
        if (B - K.disc) % 2 == 0 and (B * B - K.disc) % (4 * p) == 0:
            return Form.from_ab(p, B, K.disc)
    raise InputError(f"{p} is not ramified in Q(sqrt({K.d}))")  # pragma: no cover


def is_principal(K: QuadField, f: Form) -> bool:
    """Triviality of f's class in the ordinary class group, by direct inspection."""
    if f.disc != K.disc:
        raise InputError(f"discriminant mismatch: {K.disc} vs {f.disc}")
    if K.disc < 0:
        return reduce(f) == principal_form(K.disc)
    return any(abs(g.a) == 1 for g in cycle(f))


def _enumerate_reduced(disc):
    """All reduced primitive forms of a discriminant (numpy sieve over (b, a))."""
    out = []
    if disc < 0:
        n = -disc
        amax = math.isqrt(n // 3)
        bs = np.arange(disc % 2, amax + 1, 2, dtype=np.int64)
        a = np.arange(1, amax + 1, dtype=np.int64)
        for lo in range(0, len(bs), 512):
            b = bs[lo:lo + 512, None]
            N = (b * b + n) // 4
            mask = (N % a == 0) & (a >= b) & (N // a >= a)
            for bi, ai in zip(*np.nonzero(mask)):
                bb, aa = int(b[bi, 0]), int(a[ai])
                cc = (bb * bb + n) // (4 * aa)
                if math.gcd(aa, bb, cc) != 1:
                    continue
                out.append(Form(aa, bb, cc))
                if 0 < bb < aa < cc:
                    out.append(Form(aa, -bb, cc))
        return out
    s = math.isqrt(disc)
    start = 2 - disc % 2
    bs = np.arange(start, s + 1, 2, dtype=np.int64)
    a = np.arange(1, s + 1, dtype=np.int64)
    for lo in range(0, len(bs), 256):
        b = bs[lo:lo + 256, None]
        N = (disc - b * b) // 4
        mask = (N % a == 0) & ((2 * a + b) ** 2 > disc) & (2 * a - b <= s)
        for bi, ai in zip(*np.nonzero(mask)):
            bb, aa = int(b[bi, 0]), int(a[ai])
            cc = -((disc - bb * bb) // (4 * aa))
            if math.gcd(aa, bb, cc) != 1:
                continue
            out.append(Form(aa, bb, cc))
            out.append(Form(-aa, bb, -cc))
    return out


@dataclass
class ClassGroupStructure:
    order: int
    elementary_divisors: list[int]
    generators: list[Form] = field(default_factory=list)

    @property
    def two_rank(self):
        return sum(1 for d in self.elementary_divisors if d % 2 == 0)


class FormClassGroup:
    """Narrow or ordinary class group of a discriminant, as explicit classes.

    Classes are indexed 0..h-1 with 0 the identity. The narrow group uses
    SL2-classes (rho-cycles when disc > 0); the ordinary group is its
    quotient by the class of the form (-1, b, c).
    """

    def __init__(self, disc, narrow=True, bound=None):
        _check_disc(disc)
        bound = config.default_oracle_bound() if bound is None else bound
        if abs(disc) > bound:
            raise ResourceLimitError(f"|disc| = {abs(disc)} exceeds the oracle bound {bound}")
        self.disc = disc
        self.narrow = narrow or disc < 0
        forms = _enumerate_reduced(disc)
        if disc < 0:
            classes = [[f] for f in forms]
        else:
            classes = self._cycles(forms)
        ident = principal_form(disc) if disc < 0 else reduce(principal_form(disc))
        classes.sort(key=lambda cl: (ident not in cl, min(cl)))
        self._narrow_index = {f: i for i, cl in enumerate(classes) for f in cl}
        self._narrow_reps = [min(cl) for cl in classes]
        self._narrow_h = len(classes)
        self._cache = {}
        if self.narrow:
            self._merge = list(range(self._narrow_h))
            self.reps = list(self._narrow_reps)
        else:
            neg = self._narrow_index[reduce(Form.from_ab(-1, disc % 2, disc))]
            merge = [None] * self._narrow_h
            reps = []
            for i in range(self._narrow_h):
                if merge[i] is not None:
                    continue
                j = self._narrow_mul(i, neg)
                merge[i] = merge[j] = len(reps)
                reps.append(min(self._narrow_reps[i], self._narrow_reps[j]))
            self._merge = merge
            self.reps = reps

    def _cycles(self, forms):
        disc = self.disc
        s = math.isqrt(disc)
        remaining = set(forms)
        out = []
        for f in forms:
            if f not in remaining:
                continue
            cyc = [f]
            remaining.discard(f)
            cur = Form(*_rho(*f, disc, s))
            while cur != f:
                remaining.discard(cur)
                cyc.append(cur)
                cur = Form(*_rho(*cur, disc, s))
            out.append(cyc)
        return out

    def _narrow_mul(self, i, j):
        ri, rj = self._narrow_reps[i], self._narrow_reps[j]
        return self._narrow_index[reduce(Form(*_compose_raw(*ri, *rj, self.disc)))]

    def __len__(self):
        return len(self.reps)

    def index(self, f: Form) -> int:
        if f.disc != self.disc:
            raise InputError(f"discriminant mismatch: {self.disc} vs {f.disc}")
        return self._merge[self._narrow_index[reduce(f)]]

    def mul(self, i, j):
        key = (i, j) if i <= j else (j, i)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.index(Form(*_compose_raw(*self.reps[i], *self.reps[j], self.disc)))
            self._cache[key] = hit
        return hit

    def group(self, elements=None):
        return FiniteAbelianGroup(range(len(self)) if elements is None else elements, self.mul, 0)

    def structure(self) -> ClassGroupStructure:
        divisors, gens = self.group().structure()
        return ClassGroupStructure(len(self), divisors, [self.reps[g] for g in gens])


@lru_cache(maxsize=256)
def form_class_group(disc, narrow=True, bound=None) -> FormClassGroup:
    return FormClassGroup(disc, narrow, bound)


def class_group(K: QuadField, narrow: bool, bound=None) -> ClassGroupStructure:
    return form_class_group(K.disc, narrow, bound).structure()


def class_number(K: QuadField, narrow=False, bound=None) -> int:
    return len(form_class_group(K.disc, narrow, bound))


@dataclass(frozen=True)
class UnitInfo:
    """Fundamental unit (x + y*sqrt(d)) / denominator, denominator in {1, 2}."""
    d: int
    x: int
    y: int
    denominator: int
    norm: int
    period: int

    def algebraic_norm(self):
        num = self.x * self.x - self.d * self.y * self.y
        assert num % (self.denominator**2) == 0
        return num // self.denominator**2


def _reduced_start(d):
    s = math.isqrt(d)
    if d % 4 == 1:
        return (s if s % 2 else s - 1), 2, s
    return s, 1, s


def fundamental_unit(d: int) -> UnitInfo:
    """Fundamental unit of the maximal order of Q(sqrt(d)), d > 1 squarefree.

    Expands the reduced surd (P0 + sqrt(d))/Q0 that generates the maximal
    order (Q0 = 2 when d ≡ 1 mod 4); one period of the purely periodic
    expansion yields the unit, whose norm is (-1)^period.
    """
    if d <= 1 or squarefree_part(d) != d:
        raise InputError(f"fundamental_unit needs squarefree d > 1, got {d}")
    P0, Q0, s = _reduced_start(d)
    P, Q = P0, Q0
    # convergent numerators/denominators, seeded at index -1 and -2
    h, h_prev = 1, 0
    k, k_prev = 0, 1
    period = 0
    while True:
        a = (P + s) // Q
        h, h_prev = a * h + h_prev, h
        k, k_prev = a * k + k_prev, k
        P = a * Q - P
        Q = (d - P * P) // Q
        period += 1
        if P == P0 and Q == Q0:
            break
    x = Q0 * h - P0 * k
    y = k
    denom = Q0
    if denom == 2 and x % 2 == 0 and y % 2 == 0:
        x, y, denom = x // 2, y // 2, 1
    unit = UnitInfo(d, x, y, denom, -1 if period % 2 else 1, period)
    if unit.algebraic_norm() != unit.norm:  # pragma: no cover - guards the expansion
        raise ArithmeticError(f"unit norm mismatch for d = {d}")
    return unit


@lru_cache(maxsize=65536)
def unit_norm(d: int) -> int:
    """Norm of the fundamental unit of Q(sqrt(d)) from the parity of the sqrt(d) period.

    Uses the palindromic symmetry of the expansion of sqrt(d): the first
    k with Q_k = Q_{k+1} signals an odd period, P_k = P_{k+1} an even one.
    Never touches convergents, so it is cheap for large d.
    """
    if d <= 1:
        raise InputError(f"unit_norm needs d > 1, got {d}")
    s = math.isqrt(d)
    if s * s == d:
        raise InputError(f"{d} is a square")
    P, Q = 0, 1
    while True:
        a = (P + s) // Q
        P1 = a * Q - P
        Q1 = (d - P1 * P1) // Q
        if Q1 == Q:
            return -1
        if P1 == P:
            return 1
        P, Q = P1, Q1
