from fractions import Fraction
import itertools
import math
import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from polya import config
from polya.arith import (
    Congruence, Factorization, RationalPolynomial, binomial_basis_coeffs, crt, factor, is_cube_free,
    is_integer_valued, is_prime, is_square, is_squarefree, jacobi, legendre_euler, next_prime, omega,
    primes_above, squarefree_part,
)
from polya.errors import CRTError, InputError, ResourceLimitError


@pytest.mark.parametrize("n, expected", [(2, True), (1, False), (71, True), (0, False), (-7, True),
                                         (561, False), (1105, False), (3215031751, False)])
def test_is_prime_examples(n, expected):
    assert is_prime(n) is expected


def test_is_prime_matches_sympy_below_20000():
    assert [n for n in range(20000) if is_prime(n)] == list(sympy.primerange(0, 20000))


def test_is_prime_above_deterministic_limit():
    big = 2**89 - 1  # Mersenne prime, above the deterministic witness range
    assert big > config.DETERMINISTIC_PRIME_LIMIT
    assert is_prime(big)
    assert not is_prime(big * (2**61 - 1))
    assert not is_prime((2**61 - 1) ** 2)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=2, max_value=10**30))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


def test_next_prime_and_stream():
    assert next_prime(7) == 11
    assert next_prime(-5) == 2
    stream = primes_above(2, 3, 4)
    assert [next(stream) for _ in range(4)] == [3, 7, 11, 19]


@pytest.mark.parametrize("n, fac", [(12, ((2, 2), (3, 1))), (7455, ((3, 1), (5, 1), (7, 1), (71, 1))),
                                     (1, ()), (-1775, ((5, 2), (71, 1)))])
def test_factor_examples(n, fac):
    assert factor(n).factors == fac


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=10**18))
def test_factor_matches_sympy_and_reconstructs(n):
    f = factor(n)
    assert dict(f.factors) == sympy.factorint(n)
    assert f.value() == n
    assert all(is_prime(p) for p in f.primes())


def test_factor_semiprime_needs_rho():
    p, q = 1_000_000_007, 998_244_353
    assert factor(p * q).factors == ((q, 1), (p, 1))


def test_factor_errors(monkeypatch):
    with pytest.raises(InputError):
        factor(0)
    with pytest.raises(ResourceLimitError):
        factor(10**60 + 1)
    monkeypatch.setattr(config, "RHO_ITERATION_CAP", 10)
    with pytest.raises(ResourceLimitError):
        factor(1_000_000_007 * 998_244_353)


def test_factorization_rejects_unsorted():
    with pytest.raises(InputError):
        Factorization(((3, 1), (2, 1)))


@pytest.mark.parametrize("a, n, value", [(1, 9, 1), (17, 41, -1), (5, 5, 0), (2, 15, 1), (-1, 7, -1)])
def test_jacobi_examples(a, n, value):
    assert jacobi(a, n) == value


def test_jacobi_17_41_two_ways():
    assert jacobi(17, 41) == legendre_euler(17, 41) == -1
    assert pow(17, 20, 41) == 40


@pytest.mark.parametrize("n", [0, -3, 4])
def test_jacobi_rejects_bad_modulus(n):
    with pytest.raises(InputError):
        jacobi(3, n)


@settings(max_examples=300, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(1, 10**6).map(lambda n: 2 * n + 1))
def test_jacobi_matches_sympy(a, n):
    assert jacobi(a, n) == sympy.jacobi_symbol(a, n)


_PRIMES = list(sympy.primerange(3, 10**4))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(_PRIMES), st.sampled_from(_PRIMES), st.integers(-10**5, 10**5),
       st.integers(-10**5, 10**5))
def test_jacobi_multiplicative_and_reciprocity(p, q, a, b):
    assert jacobi(a, p) * jacobi(b, p) == jacobi(a * b, p)
    assert jacobi(a, p) == legendre_euler(a % p, p)
    if p != q:
        sign = -1 if p % 4 == 3 and q % 4 == 3 else 1
        assert jacobi(p, q) * jacobi(q, p) == sign


def test_crt_golden():
    res = crt([Congruence(2, 9), Congruence(4, 25), Congruence(6, 49)])
    assert (res.residue, res.modulus) == (7454, 11025)
    for r, m in ((2, 9), (4, 25), (6, 49)):
        assert res.residue % m == r


def test_crt_singleton_and_normalization():
    assert crt([Congruence(-1, 7)]) == Congruence(6, 7)
    assert Congruence(13, 5).residue == 3


def test_crt_error_names_pair():
    with pytest.raises(CRTError) as exc:
        crt([Congruence(0, 4), Congruence(1, 9), Congruence(0, 6)])
    assert exc.value.pair == (0, 2)
    assert exc.value.gcd == 2
    with pytest.raises(InputError):
        crt([])
    with pytest.raises(InputError):
        Congruence(1, 0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(_PRIMES[:60]), min_size=1, max_size=6, unique=True),
       st.randoms(use_true_random=False), st.data())
def test_crt_satisfies_all_and_is_order_independent(primes, rnd, data):
    system = [Congruence(data.draw(st.integers(-10**6, 10**6)), p * p) for p in primes]
    res = crt(system)
    assert res.modulus == math.prod(p * p for p in primes)
    assert all(c.holds(res.residue) for c in system)
    shuffled = list(system)
    rnd.shuffle(shuffled)
    assert crt(shuffled) == res


@pytest.mark.parametrize("n, s", [(12, 3), (-45, -5), (7455, 7455), (1, 1), (-1, -1), (16, 1)])
def test_squarefree_part_examples(n, s):
    assert squarefree_part(n) == s


@given(st.integers(-10**12, 10**12).filter(bool))
def test_squarefree_part_property(n):
    s = squarefree_part(n)
    assert is_squarefree(s)
    assert n % s == 0 and is_square(n // s)


@pytest.mark.parametrize("n, w", [(1, 0), (1775, 2), (7455, 4), (-30, 3)])
def test_omega_examples(n, w):
    assert omega(n) == w


def test_small_predicates():
    assert is_cube_free(1775) and not is_cube_free(250)
    assert is_squarefree(7455) and not is_squarefree(12) and not is_squarefree(0)
    assert is_square(0) and is_square(49) and not is_square(-4) and not is_square(50)
    for bad in (lambda: squarefree_part(0), lambda: omega(0)):
        with pytest.raises(InputError):
            bad()


X = RationalPolynomial([0, 1])


def test_binomial_basis_examples():
    assert binomial_basis_coeffs(RationalPolynomial([0, Fraction(-1, 2), Fraction(1, 2)])) == [0, 0, 1]
    assert binomial_basis_coeffs(RationalPolynomial([1])) == [1]
    assert binomial_basis_coeffs(RationalPolynomial([0, 0, Fraction(1, 2)])) == [0, Fraction(1, 2), 1]
    assert binomial_basis_coeffs(RationalPolynomial([])) == [0]


def test_integer_valued_examples():
    assert is_integer_valued(RationalPolynomial.falling_binomial(3))
    assert RationalPolynomial.falling_binomial(3) == RationalPolynomial(
        [0, Fraction(1, 3), Fraction(-1, 2), Fraction(1, 6)])
    assert not is_integer_valued(RationalPolynomial([0, Fraction(1, 2)]))
    assert is_integer_valued(RationalPolynomial([3, -7, 0, 11]))


def test_polynomial_basics():
    f = RationalPolynomial([1, 2, 0, 0])
    assert f.degree == 1 and f(3) == 7
    assert RationalPolynomial([0, 0]).degree == -1
    assert f == RationalPolynomial([1, 2]) and hash(f) == hash(RationalPolynomial([1, 2]))


_fractions = st.fractions(max_denominator=12).filter(lambda q: abs(q) < 50)


@settings(max_examples=300, deadline=None)
@given(st.lists(_fractions, min_size=0, max_size=9))
def test_integer_valued_iff_integral_at_0_to_deg(coeffs):
    f = RationalPolynomial(coeffs)
    direct = all(f(t).denominator == 1 for t in range(max(f.degree, 0) + 1))
    assert is_integer_valued(f) == direct
    if direct:
        assert all(f(t).denominator == 1 for t in range(-20, 21))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=9))
def test_binomial_basis_reconstructs(ints):
    f = RationalPolynomial(ints)
    coeffs = binomial_basis_coeffs(f)
    for t in range(-5, 12):
        assert sum(c * RationalPolynomial.falling_binomial(i)(t) for i, c in enumerate(coeffs)) == f(t)
