import json

import pytest
from hypothesis import given, settings, strategies as st

from su2bundles.core import PreconditionError, inverse_unimodular, matvec, random_unimodular
from su2bundles.manifold import (InputError, ManifoldPresentation, Parity, change_basis,
                                 is_stably_trivial, load_presentation, parity, presentation_from_dict,
                                 sigma, tau)

from conftest import presentations


def test_examples(s4xs4, k2odd):
    assert parity(s4xs4) == Parity.EVEN and sigma(s4xs4) == 0 and is_stably_trivial(s4xs4)
    assert parity(k2odd) == Parity.ODD and sigma(k2odd) == 3
    assert tau(k2odd, (1, 0)) == 21
    # the nu-attached complex, k = 1
    M = ManifoldPresentation.from_gram(((1,),), (0,))
    assert sigma(M) == 1 and parity(M) == Parity.ODD


def test_rejects_degenerate_form():
    with pytest.raises(PreconditionError):
        ManifoldPresentation.from_gram(((2, 0), (0, 1)), (0, 0))
    with pytest.raises(PreconditionError):
        ManifoldPresentation.from_gram(((0, 1), (2, 0)), (0, 0))


@given(presentations(), st.integers(0, 2**31), st.lists(st.integers(-30, 30), min_size=5, max_size=5))
@settings(max_examples=500, deadline=None)
def test_invariants_under_basis_change(M, seed, n):
    A = random_unimodular(M.k, seed, 10)
    N = change_basis(M, A)
    assert parity(N) == parity(M) and sigma(N) == sigma(M)
    n = n[:M.k]
    assert tau(N, matvec(inverse_unimodular(A), n)) == tau(M, n)


@pytest.mark.parametrize("data, field", [
    ({"G": [[1]], "l": [0]}, "'k'"),
    ({"k": 2, "G": [[1, 0]], "l": [0, 0]}, "'G'"),
    ({"k": 2, "G": [[1, 0], [0, 1]], "l": [0]}, "'l'"),
    ({"k": 2, "G": [[0, 1], [2, 0]], "l": [0, 0]}, "'G'"),
    ({"k": 2, "G": [[2, 1], [1, 2]], "l": [0, 0]}, "'G'"),
    ({"k": 2, "G": [[0, 1], [1, 0]], "l": [0, 0], "whitehead_override": [[0, 2], [2, 0]]},
     "'whitehead_override'"),
    ({"k": 2, "G": [[0, 1], [1, 0]], "l": [0, 0], "whitehead_override": [[0, 1], [0, 0]]},
     "'whitehead_override'"),
])
def test_input_errors_name_the_field(data, field):
    with pytest.raises(InputError, match=field):
        presentation_from_dict(data)


def test_load_roundtrip_and_syntax_error(tmp_path, s4xs4):
    p = tmp_path / "m.json"
    p.write_text(json.dumps(s4xs4.to_json()))
    assert load_presentation(str(p)) == s4xs4
    p.write_text('{"k": 2,\n "G": [')
    with pytest.raises(InputError, match="line 2"):
        load_presentation(str(p))
