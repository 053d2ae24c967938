import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from lambda_sieve import _kernels
from lambda_sieve.modmath import (
    MR_DETERMINISTIC_BOUND,
    PrimeRange,
    Residue,
    fermat_quotient,
    harmonic_mod,
    is_probable_prime,
    mod_pow,
    primitive_root,
    sieve_primes,
    teichmuller_lift,
    wilson_quotient,
)

PRIMES_200 = [int(p) for p in _kernels.primes_upto(200) if p > 2]

odd_primes = st.sampled_from(PRIMES_200)


class TestResidue:
    def test_canonicalizes(self):
        assert Residue(-1, 7).value == 6
        assert Residue(15, 7).value == 1

    def test_arithmetic(self):
        a = Residue(5, 13)
        b = Residue(9, 13)
        assert (a + b).value == 1
        assert (a - b).value == 9
        assert (a * b).value == 45 % 13
        assert int(a.inverse() * a) == 1
        assert int(-a) == 8

    def test_mixed_int_operands(self):
        a = Residue(5, 13)
        assert (a + 10).value == 2
        assert (3 * a).value == 2

    def test_modulus_mismatch_rejected(self):
        with pytest.raises(ValueError):
            Residue(1, 7) + Residue(1, 11)

    @given(st.integers(), st.integers(min_value=2, max_value=10**9))
    def test_int_round_trip(self, v, m):
        assert int(Residue(v, m)) == v % m


@given(
    st.integers(min_value=0, max_value=10**12),
    st.integers(min_value=0, max_value=10**6),
    st.integers(min_value=2, max_value=10**12),
)
def test_mod_pow_matches_builtin(base, e, m):
    assert int(mod_pow(Residue(base, m), e)) == pow(base, e, m)


class TestKernels:
    @given(
        st.integers(min_value=0, max_value=(1 << 61) - 1),
        st.integers(min_value=0, max_value=(1 << 61) - 1),
        st.integers(min_value=2, max_value=(1 << 61) - 1),
    )
    def test_mulmod_full_range(self, x, y, m):
        got = _kernels.mulmod(
            np.array([x % m], dtype=np.int64), np.array([y % m], dtype=np.int64), m
        )
        assert int(got[0]) == (x % m) * (y % m) % m

    @given(
        st.lists(st.integers(min_value=1, max_value=10**15), min_size=1, max_size=40),
        st.integers(min_value=2, max_value=10**15),
    )
    def test_prod_mod(self, vals, m):
        arr = np.array([v % m for v in vals], dtype=np.int64)
        assert _kernels.prod_mod(arr, m) == math.prod(v % m for v in vals) % m

    @given(
        st.lists(st.integers(min_value=1, max_value=10**12), min_size=1, max_size=50),
        st.integers(min_value=2, max_value=10**12),
    )
    def test_cumprod_mod(self, vals, m):
        arr = np.array([v % m for v in vals], dtype=np.int64)
        got = _kernels.cumprod_mod(arr, m)
        acc = 1
        for i, v in enumerate(vals):
            acc = acc * (v % m) % m
            assert int(got[i]) == acc

    def test_spf_table(self):
        spf = _kernels.spf_upto(10**4)
        for n in (2, 3, 49, 91, 9991):
            assert n % int(spf[n]) == 0
            assert sympy.isprime(int(spf[n]))
        assert [int(spf[p]) for p in (2, 97, 9973)] == [2, 97, 9973]

    def test_inverse_table(self):
        for p in (5, 101, 499):
            inv = _kernels.inverse_table(p - 1, p)
            for a in range(1, p):
                assert int(inv[a]) * a % p == 1


class TestPrimes:
    def test_counts(self):
        assert len(_kernels.primes_upto(10**4)) == 1229
        assert len(_kernels.primes_upto(10**5)) == 9592

    def test_range_matches_sympy(self):
        got = list(sieve_primes(PrimeRange(3, 10**4)))
        want = [p for p in sympy.primerange(3, 10**4 + 1)]
        assert got == want

    def test_residue_filter(self):
        got = list(sieve_primes(PrimeRange(3, 2000, (4, 1))))
        assert got == [p for p in sympy.primerange(3, 2001) if p % 4 == 1]

    @given(st.integers(min_value=3, max_value=3000), st.integers(min_value=0, max_value=3000))
    def test_segment_consistency(self, lo, width):
        sub = set(sieve_primes(PrimeRange(lo, lo + width)))
        full = set(sieve_primes(PrimeRange(3, lo + width)))
        assert sub == {p for p in full if p >= lo}

    def test_validation(self):
        with pytest.raises(ValueError):
            PrimeRange(2, 10)
        with pytest.raises(ValueError):
            PrimeRange(3, 2)
        with pytest.raises(ValueError):
            PrimeRange(3, 10, (4, 5))


class TestProbablePrime:
    def test_matches_sympy_small(self):
        for n in range(2, 5000):
            assert is_probable_prime(n) == sympy.isprime(n), n

    @given(st.integers(min_value=2, max_value=10**7))
    @settings(max_examples=300)
    def test_matches_sympy_sampled(self, n):
        assert is_probable_prime(n) == sympy.isprime(n)

    def test_pseudoprime_traps(self):
        # Carmichael and strong-pseudoprime classics
        for n in (561, 41041, 3215031751, 3474749660383, 341550071728321):
            assert not is_probable_prime(n)

    def test_large_known(self):
        assert is_probable_prime(2**61 - 1)
        assert is_probable_prime(2**89 - 1)
        assert not is_probable_prime((2**61 - 1) * (2**31 - 1))
        assert not is_probable_prime(10**30 + 1)

    def test_perfect_squares(self):
        # above the deterministic bound, squares must not fool the Lucas stage
        n = math.isqrt(MR_DETERMINISTIC_BOUND) + 1
        for k in range(n, n + 20):
            assert not is_probable_prime(k * k)


class TestQuotients:
    def test_fermat_quotient_known_table(self):
        # q_5(a) for a = 1..4
        assert [int(fermat_quotient(a, 5)) for a in (1, 2, 3, 4)] == [0, 3, 1, 1]

    def test_wieferich(self):
        # the only known primes with q_p(2) = 0 below 10**13
        assert int(fermat_quotient(2, 1093)) == 0
        assert int(fermat_quotient(2, 3511)) == 0
        others = [p for p in PRIMES_200 if int(fermat_quotient(2, p)) == 0]
        assert others == []

    @given(odd_primes, st.data())
    def test_product_rule(self, p, data):
        a = data.draw(st.integers(min_value=1, max_value=p - 1))
        b = data.draw(st.integers(min_value=1, max_value=p - 1))
        lhs = int(fermat_quotient(a * b, p))
        assert lhs == (int(fermat_quotient(a, p)) + int(fermat_quotient(b, p))) % p

    def test_wilson_quotient_factorial_definition(self):
        for p in PRIMES_200[:20]:
            assert int(wilson_quotient(p)) == (math.factorial(p - 1) + 1) // p % p

    def test_wilson_primes(self):
        # w_p = 0 mod p exactly at 5, 13, 563 in this range
        hits = [p for p in PRIMES_200 if int(wilson_quotient(p)) == 0]
        assert hits == [5, 13]
        assert int(wilson_quotient(563)) == 0

    @given(odd_primes, st.data())
    def test_harmonic_matches_fractions(self, p, data):
        n = data.draw(st.integers(min_value=1, max_value=p - 1))
        exact = sum(Fraction(1, i) for i in range(1, n + 1))
        want = exact.numerator * pow(exact.denominator, -1, p) % p
        assert int(harmonic_mod(n, p)) == want


class TestTeichmuller:
    @given(odd_primes, st.data())
    def test_fixed_point_mod_p2(self, p, data):
        a = data.draw(st.integers(min_value=1, max_value=p - 1))
        t = int(teichmuller_lift(a, p, 2))
        assert t % p == a
        assert pow(t, p, p * p) == t

    def test_depth_three(self):
        for p in (3, 5, 11, 31):
            for a in range(1, p):
                t = int(teichmuller_lift(a, p, 3))
                assert pow(t, p, p**3) == t

    def test_roots_of_unity(self):
        p = 13
        vals = {int(teichmuller_lift(a, p, 2)) for a in range(1, p)}
        for t in vals:
            assert pow(t, p - 1, p * p) == 1


def test_primitive_root_has_full_order():
    for p in PRIMES_200:
        g = primitive_root(p)
        seen = set()
        x = 1
        for _ in range(p - 1):
            x = x * g % p
            seen.add(x)
        assert len(seen) == p - 1
