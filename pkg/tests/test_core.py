import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from su2bundles.core import (ArithmeticOverflow, PreconditionError, Residue, as_matrix,
                             complete_primitive_to_basis, crt_pair, det, gcd_with_modulus,
                             identity, inverse_unimodular, is_unimodular, matmul,
                             random_unimodular, smith_normal_form)

int_matrix = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(int_matrix)
@settings(max_examples=300, deadline=None)
def test_snf_is_a_diagonal_factorisation(rows):
    M = as_matrix(rows)
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert is_unimodular(U) and is_unimodular(V)
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[:len(nz)] == nz  # zeros trail


@given(st.integers(1, 6).flatmap(lambda k: st.lists(st.lists(st.integers(-9, 9), min_size=k, max_size=k),
                                                    min_size=k, max_size=k)))
@settings(max_examples=200, deadline=None)
def test_det_matches_floating_point(rows):
    assert det(as_matrix(rows)) == round(np.linalg.det(np.array(rows, dtype=float)))


def test_snf_width_check():
    with pytest.raises(ArithmeticOverflow):
        smith_normal_form(((10**6, 3), (7, 10**6 + 1)), bits=8)


@given(st.integers(1, 6), st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_inverse_of_random_unimodular(k, seed):
    A = random_unimodular(k, seed, 15)
    assert matmul(A, inverse_unimodular(A)) == identity(k)


def test_completion_frozen():
    assert complete_primitive_to_basis((6, 10, 15)) == ((1, 1, 2), (2, 3, 5), (6, 10, 15))


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=6))
def test_completion_has_last_row_n(n):
    from math import gcd
    g = 0
    for x in n:
        g = gcd(g, x)
    if g != 1:
        with pytest.raises(PreconditionError):
            complete_primitive_to_basis(n)
        return
    A = complete_primitive_to_basis(n)
    assert is_unimodular(A) and list(A[-1]) == n


def test_residue_arithmetic():
    a = Residue(20, 24)
    assert (a + 7).value == 3 and (a * 5).value == 4 and (-a).value == 4
    with pytest.raises(PreconditionError):
        Residue(1, 5)
    with pytest.raises(PreconditionError):
        a + Residue(1, 8)


def test_gcd_with_modulus_and_crt():
    assert gcd_with_modulus([0, 0]) == 0
    assert gcd_with_modulus([6, 4]) == 2
    for x in range(24):
        assert crt_pair(x % 8, 8, x % 3, 3) == x
