import random
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from su2bundles.bundles import (AdaptationError, adapt_basis, admissibility, achievable_lambdas,
                                enumerate_admissible_direct, enumerate_admissible_residues,
                                epsilon_of, exists_bundle, h4_detail, h8_detail, is_admissible,
                                lambda_closed_form, lambda_from_adapted, lambda_of, perturb_adapted,
                                primitive_lift, UNKNOWN)
from su2bundles.core import PreconditionError, ResourceLimitError, inverse_unimodular, matvec, random_unimodular
from su2bundles.manifold import ManifoldPresentation, change_basis, sigma
from su2bundles.verify import random_presentation

from conftest import presentations


def _primitive(x):
    g = 0
    for y in x:
        g = gcd(g, y)
    return g == 1


def test_s4xs4(s4xs4):
    assert is_admissible(s4xs4, (1, 0))
    ab = adapt_basis(s4xs4, (1, 0))
    assert ab.case == "Case2" and lambda_from_adapted(ab) == 0 == lambda_of(s4xs4, (1, 0))
    assert epsilon_of(s4xs4, (1, 0)) == 0


def test_k2odd_has_no_class(k2odd):
    assert not exists_bundle(k2odd)
    assert enumerate_admissible_direct(k2odd) == set()


def test_admissibility_reasons(s4xs4, k2odd):
    assert admissibility(s4xs4, (2, 0)).reason == "not-primitive"
    assert admissibility(k2odd, (1, 0)).reason == "congruence-fails"
    assert admissibility(s4xs4, (1, 0)).reason == "admissible"


def test_odd_form_epsilon_unknown():
    M = ManifoldPresentation.from_gram(((1, 0, 0), (0, 1, 0), (0, 0, -1)), (0, 0, 0))
    psi = next(primitive_lift(r) for r in enumerate_admissible_residues(M))
    assert epsilon_of(M, psi) == UNKNOWN


@given(presentations(ks=(1, 2, 3)))
@settings(max_examples=60, deadline=None)
def test_crt_search_matches_direct_search(M):
    fast = {tuple(x % 24 for x in r) for r in enumerate_admissible_residues(M)}
    assert fast == enumerate_admissible_direct(M)


@given(presentations(), st.lists(st.integers(-40, 40), min_size=5, max_size=5), st.integers(0, 10**6))
@settings(max_examples=300, deadline=None)
def test_adapted_route_matches_closed_form(M, x, seed):
    x = x[:M.k]
    if not _primitive(x) or not is_admissible(M, x):
        return
    lam = lambda_closed_form(M, x)
    try:
        ab = adapt_basis(M, x)
    except AdaptationError:
        assert M.k == 2
        return
    assert lambda_from_adapted(ab) == lam
    assert lambda_from_adapted(perturb_adapted(M, ab, seed)) == lam


@given(presentations(), st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_lambda_invariant_under_basis_change(M, seed):
    rng = random.Random(seed)
    sols = enumerate_admissible_residues(M)
    if not sols:
        return
    r = next(iter(sols))
    psi = primitive_lift(r)
    A = random_unimodular(M.k, rng.randrange(10**6), 10)
    N = change_basis(M, A)
    assert lambda_of(N, matvec(inverse_unimodular(A), psi)) == lambda_of(M, psi)


def test_lambda_requires_admissible(k2odd, s4xs4):
    with pytest.raises(PreconditionError):
        lambda_of(k2odd, (1, 0))
    with pytest.raises(PreconditionError):
        lambda_of(s4xs4, (2, 0))


def test_primitive_lift():
    assert primitive_lift((0, 0)) is None
    assert primitive_lift((12, 18, 0)) is None  # every lift is divisible by 6
    x = primitive_lift((5, 0, 0))
    assert _primitive(x) and all(a % 24 == b for a, b in zip(x, (5, 0, 0)))


def test_budget_and_limit(s4xs4):
    with pytest.raises(ResourceLimitError):
        enumerate_admissible_residues(s4xs4, budget=5)
    with pytest.raises(ResourceLimitError):
        enumerate_admissible_residues(random_presentation(random.Random(0), 9, True))


def test_threads_do_not_change_results():
    M = random_presentation(random.Random(3), 6, True)
    a = enumerate_admissible_residues(M, threads=1)
    b = enumerate_admissible_residues(M, threads=4)
    assert (a.mod8 == b.mod8).all() and (a.mod3 == b.mod3).all()


def test_k7_sigma1_reaches_every_divisor():
    from su2bundles.verify import find_instance
    M = find_instance(0, 7, True, {1})
    res = achievable_lambdas(M)
    assert res.values == (0, 1, 2, 3, 4, 6, 8, 12)
    assert not res.box_misses and not res.group_mismatches and not res.mod24_dependence


@pytest.mark.parametrize("seed", range(12))
def test_hypotheses_match_search(seed):
    # (H8) and (H4) decide lambda = 0 and 4 mod 8 once k >= 5
    rng = random.Random(seed)
    M = random_presentation(rng, 6, False)
    s = sigma(M)
    if gcd(s or 24, 8) not in (2, 4):
        return
    vals = achievable_lambdas(M).values
    assert any(gcd(v, 8) == 8 for v in vals) == h8_detail(M).holds
    if gcd(s, 8) == 2:
        assert any(gcd(v, 8) == 4 for v in vals) == h4_detail(M).holds


def test_hypothesis_preconditions(k2odd):
    with pytest.raises(PreconditionError):
        h8_detail(k2odd)
    with pytest.raises(PreconditionError):
        h4_detail(k2odd)
