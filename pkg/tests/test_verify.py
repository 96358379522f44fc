import random

from su2bundles.manifold import Parity, parity, sigma
from su2bundles.verify import (FAIL, PASS, SKIPPED, random_form, reports_json, render_table,
                               run_suite, sigma3_instance, stably_trivial_presentation,
                               two_part, verify_rank2_example, verify_theorem_A, verify_theorem_D)


def test_generators():
    rng = random.Random(1)
    for k in (2, 4, 6):
        M = stably_trivial_presentation(rng, k)
        assert sigma(M) == 0 and parity(M) == Parity.EVEN
    G = random_form(rng, 5, odd=True)
    assert any(G[i][i] % 2 for i in range(5))
    assert sigma(sigma3_instance(4, 7)) == 3


def test_two_part():
    assert [two_part(x) for x in (0, 1, 2, 3, 4, 6, 8, 12, 18)] == [8, 1, 2, 1, 4, 2, 8, 4, 2]


def test_theorem_A_small_and_deterministic():
    a = verify_theorem_A(samples=10, seed=3)
    assert all(r.status == PASS for r in a)
    assert a[-1].instance["id"] == "k2odd" and a[-1].observed is False
    b = verify_theorem_A(samples=10, seed=3)
    assert [r.instance for r in a] == [r.instance for r in b]


def test_rank2_observations():
    reps = {r.theorem: r for r in verify_rank2_example()}
    for item in ("rank2-nonexistence", "rank2-existence", "rank2-(1)", "rank2-(2)", "rank2-(3)"):
        assert reps[item].status == PASS, item
    four = reps["rank2-(4)"]
    assert four.status == FAIL and four.observed == {"cases": 72, "failures": 36}
    first = four.witness["counterexamples"][0]
    assert first["l"] == [0, 1] and first["psi"] == [1, 0]


def test_suite_D_statuses():
    reps = run_suite("D")
    assert not any(r.status == FAIL for r in reps)
    passed = {(r.instance["id"], r.theorem) for r in reps if r.status == PASS}
    assert ("odd-k7-sigma1", "D(1)") in passed and ("odd-k7-sigma1", "D(3)") in passed
    assert ("even-k6-sigma2", "D(4)") in passed and ("even-k6-sigma2", "D(5)") in passed
    assert all(r.reason for r in reps if r.status == SKIPPED)


def test_suite_D_resource_limit():
    from su2bundles.verify import find_instance
    reps = verify_theorem_D(find_instance(0, 5, True), budget=10)
    assert len(reps) == 1 and reps[0].status == SKIPPED


def test_sigma_suite_passes():
    assert not any(r.status == FAIL for r in run_suite("sigma"))


def test_report_rendering():
    reps = verify_theorem_A(samples=2, seed=0)
    assert render_table(reps).splitlines()[-1] == "5 reports, 0 failed"
    assert reports_json(reps) == reports_json(reps)
