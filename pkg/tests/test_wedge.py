import itertools
import random

from hypothesis import given, settings, strategies as st

from su2bundles.core import binom2, matmul, matvec, random_unimodular, transpose
from su2bundles.wedge import Pi7Wedge, compose_class, congruent_gram, gram_of, pushforward, stable_vector

from conftest import wedges


def test_single_sphere_rules():
    # (a iota) o nu = a^2 nu + C(a,2) nu'
    L = Pi7Wedge(1, (), (1,), (0,))
    for a in range(-6, 7):
        P = pushforward(((a,),), L)
        assert P.nu == (a * a,) and P.nu_prime == (binom2(a) % 12,)


def test_sum_rule():
    # (x + y) o nu = x o nu + y o nu + [x, y]
    P = pushforward(((1, 1),), Pi7Wedge(1, (), (1,), (0,)))
    assert P.whitehead == (1,) and P.nu == (1, 1) and P.nu_prime == (0, 0)


def test_whitehead_square():
    # [a', a'] = 2 nu + nu'
    P = pushforward(((1,), (1,)), Pi7Wedge(2, (1,), (0, 0), (0, 0)))
    assert P.nu == (2,) and P.nu_prime == (1,)


@given(wedges(), st.integers(0, 2**31))
@settings(max_examples=500, deadline=None)
def test_gram_congruence(L, seed):
    A = random_unimodular(L.k, seed, 8)
    assert gram_of(pushforward(A, L)) == congruent_gram(A, gram_of(L))


@given(wedges(), st.integers(0, 2**31))
@settings(max_examples=500, deadline=None)
def test_stable_linearity(L, seed):
    A = random_unimodular(L.k, seed, 8)
    expect = tuple(x % 24 for x in matvec(transpose(A), stable_vector(L)))
    assert stable_vector(pushforward(A, L)) == expect


@given(wedges(), st.integers(0, 2**31), st.integers(0, 2**31))
@settings(max_examples=500, deadline=None)
def test_functoriality(L, s1, s2):
    A = random_unimodular(L.k, s1, 6)
    B = random_unimodular(L.k, s2, 6)
    assert pushforward(matmul(A, B), L) == pushforward(B, pushforward(A, L))


def test_compose_class_exhaustive_small():
    rng = random.Random(11)
    for k in (1, 2, 3):
        L = Pi7Wedge(k, tuple(rng.randint(-5, 5) for _ in range(k * (k - 1) // 2)),
                     tuple(rng.randint(-5, 5) for _ in range(k)), tuple(rng.randrange(12) for _ in range(k)))
        for n in itertools.product(range(-23, 24), repeat=k):
            P = pushforward(tuple((x,) for x in n), L)
            assert compose_class(n, L) == (P.nu[0], P.nu_prime[0])


@given(wedges(max_k=4), st.lists(st.integers(-40, 40), min_size=4, max_size=4))
def test_square_minus_tau_is_twice_nu_prime(L, n):
    n = n[:L.k]
    nu, nup = compose_class(n, L)
    tau = sum(a * b for a, b in zip(n, stable_vector(L)))
    assert (nu - tau - 2 * nup) % 24 == 0
