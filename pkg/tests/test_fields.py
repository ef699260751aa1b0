import pickle
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from degseq.fields import QQ, PrimeField, Rationals, is_prime


def test_rationals_singleton_and_basics():
    assert Rationals() is QQ
    assert QQ.characteristic == 0
    assert QQ.zero == 0 and QQ.one == 1
    assert QQ.coerce(3) == Fraction(3)
    assert QQ.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert QQ.mul(Fraction(2, 3), Fraction(3, 2)) == 1
    assert QQ.inv(Fraction(-4, 7)) == Fraction(-7, 4)
    assert QQ.neg(Fraction(5)) == -5


def test_rationals_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        QQ.inv(Fraction(0))


def test_prime_field_basics():
    F7 = PrimeField(7)
    assert F7.characteristic == 7
    assert F7.coerce(10) == 3
    assert F7.coerce(-1) == 6
    assert F7.add(5, 4) == 2
    assert F7.mul(3, 5) == 1
    assert F7.inv(3) == 5
    assert F7.coerce(Fraction(1, 2)) == 4  # 2*4 = 1 mod 7


def test_prime_field_rejects_composites():
    for n in (1, 4, 561, 1_000_000):
        with pytest.raises(ValueError):
            PrimeField(n)


def test_is_prime_known_values():
    assert is_prime(2) and is_prime(3) and is_prime(10**9 + 7)
    assert not is_prime(1) and not is_prime(0)
    assert not is_prime(341) and not is_prime(561)  # Fermat pseudoprimes


def test_fields_pickle_round_trip():
    assert pickle.loads(pickle.dumps(QQ)) is QQ
    F5 = PrimeField(5)
    back = pickle.loads(pickle.dumps(F5))
    assert back.p == 5 and back.add(3, 4) == 2


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_prime_field_ring_axioms(a, b, c):
    F = PrimeField(13)
    a, b, c = F.coerce(a), F.coerce(b), F.coerce(c)
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == F.zero
    if a != F.zero:
        assert F.mul(a, F.inv(a)) == F.one
