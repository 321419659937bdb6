import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqprod.arith import is_prime
from sqprod.directcheck import ParityState, bigint_square_oracle, find_squares, parity_step
from sqprod.errors import ResourceLimitError


def run_states(l, n):
    state = ParityState(l)
    out = [state]
    for _ in range(n):
        state = parity_step(state)
        out.append(state)
    return out


def squarefree_part(x):
    out, d = 1, 2
    while d * d <= x:
        e = 0
        while x % d == 0:
            x //= d
            e += 1
        if e & 1:
            out *= d
        d += 1
    return out * x


def test_initial_state_is_square():
    s = ParityState(5)
    assert s.n == 0 and s.is_square and s.kernel() == 1


def test_parity_step_examples():
    s7 = run_states(7, 1)[1]
    assert s7.is_square and s7.n == 1
    s1 = run_states(1, 2)
    assert s1[1].odd_exponent_primes == {3}
    assert s1[2].odd_exponent_primes == {3}
    assert run_states(3, 1)[1].odd_exponent_primes == {5}


def test_find_squares_examples():
    assert find_squares(7, 5) == [1]
    assert find_squares(1, 2) == []
    assert find_squares(1, 500) == []
    assert find_squares(7, 5, include_zero=True) == [0, 1]


def test_find_squares_l1_against_oracle():
    assert all(not bigint_square_oracle(1, n) for n in range(1, 501))


def test_cap():
    with pytest.raises(ResourceLimitError):
        find_squares(1, 101, cap=100)


def test_cap_env(monkeypatch):
    monkeypatch.setenv("SQPROD_DIRECT_CAP", "50")
    with pytest.raises(ResourceLimitError):
        find_squares(1, 51)


def test_rejects_even_l():
    with pytest.raises(ValueError):
        find_squares(4, 10)


@pytest.mark.parametrize("l, n, expected", [(7, 1, True), (1, 3, False), (7, 2, False), (1, 1, False)])
def test_oracle_examples(l, n, expected):
    assert bigint_square_oracle(l, n) is expected


def test_oracle_arithmetic():
    assert 3 * 9 * 19 == 513 and 22**2 < 513 < 23**2


def test_two_never_in_state():
    for l in (1, 3, 7, 99):
        assert all(2 not in s.odd_exponent_primes for s in run_states(l, 60))


@given(l=st.integers(0, 49).map(lambda i: 2 * i + 1), n=st.integers(1, 100))
def test_kernel_is_squarefree_part(l, n):
    prod = math.prod(2 * k * k + l for k in range(1, n + 1))
    state = run_states(l, n)[-1]
    assert prod % state.kernel() == 0
    r = math.isqrt(prod // state.kernel())
    assert r * r == prod // state.kernel()
    assert all(is_prime(p) for p in state.odd_exponent_primes)


def test_kernel_small_products():
    for l in (1, 3, 7, 11):
        prod = 1
        for state in run_states(l, 12)[1:]:
            prod *= 2 * state.n ** 2 + l
            assert state.kernel() == squarefree_part(prod)


def test_no_squares_inside_witness_covers():
    from sqprod.witness import make_witness

    for l in range(1, 26, 2):
        squares = set(find_squares(l, 2000))
        for k in range(1, 40):
            q = 2 * k * k + l
            if q <= 10**5 and is_prime(q):
                w = make_witness(l, k)
                hi = min(w.cover_end, 2000)
                assert not squares & set(range(w.cover_start, hi + 1))
