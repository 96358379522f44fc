"""Desk-scale verification suites with pass/fail reports.

Every report carries the seed and the presentation it was run on, so a
failure can be rerun from the report alone.
"""
from __future__ import annotations

import json
import random
import time
from math import gcd
from dataclasses import asdict, dataclass, field
from typing import Any

from .bundles import (achievable_lambdas, enumerate_admissible_residues, exists_bundle,
                      h4_detail, h8_detail, is_admissible, lambda_of, primitive_lift)
from .core import DIVISORS_24, ResourceLimitError, crt_pair, as_matrix, matmul, random_unimodular, transpose
from .eclass import EPresentation, normal_form
from .manifold import ManifoldPresentation, Parity, parity, sigma

PASS, FAIL, SKIPPED = "Pass", "Fail", "Skipped"

HYPERBOLIC = ((0, 1), (1, 0))


@dataclass
class VerificationReport:
    theorem: str
    instance: dict
    claim: str
    observed: Any
    witness: dict = field(default_factory=dict)
    status: str = PASS
    reason: str = ""
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def render_table(reports: list[VerificationReport]) -> str:
    lines = [f"{'theorem':<10} {'status':<8} {'instance':<28} claim"]
    for r in reports:
        status = r.status if r.status != SKIPPED else f"Skipped({r.reason})"
        lines.append(f"{r.theorem:<10} {status:<8} {r.instance.get('id', ''):<28} {r.claim}")
    bad = sum(r.status == FAIL for r in reports)
    lines.append(f"{len(reports)} reports, {bad} failed")
    return "\n".join(lines)


def reports_json(reports: list[VerificationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# instance generation

def random_form(rng: random.Random, k: int, odd: bool, moves: int = 12) -> list[list[int]]:
    """Block sum of diag(+-1) and hyperbolic blocks, conjugated by a random unimodular matrix."""
    if not odd and k % 2:
        raise ValueError("even unimodular forms built from hyperbolic blocks need even rank")
    G = [[0] * k for _ in range(k)]
    i = 0
    while i < k:
        take_unit = odd and (i == 0 or k - i == 1 or rng.random() < 0.5)
        if take_unit:
            G[i][i] = rng.choice((1, -1))
            i += 1
        else:
            G[i][i + 1] = G[i + 1][i] = 1
            i += 2
    A = random_unimodular(k, rng.randrange(1 << 30), moves)
    return [list(r) for r in matmul(matmul(transpose(A), as_matrix(G)), A)]


def random_presentation(rng: random.Random, k: int, odd: bool) -> ManifoldPresentation:
    G = random_form(rng, k, odd)
    return ManifoldPresentation.from_gram(G, [rng.randrange(12) for _ in range(k)])


def stably_trivial_presentation(rng: random.Random, k: int) -> ManifoldPresentation:
    """An even form with l_i = G_ii / 2, so every stable coefficient vanishes."""
    G = random_form(rng, k, odd=False)
    return ManifoldPresentation.from_gram(G, [G[i][i] // 2 for i in range(k)])


def _instance(M: ManifoldPresentation, ident: str, seed: int | None = None) -> dict:
    out = {"id": ident, **M.to_json()}
    if seed is not None:
        out["seed"] = seed
    return out


K2ODD = ManifoldPresentation.from_gram(((1, 0), (0, 1)), (2, 2))
S4xS4 = ManifoldPresentation.from_gram(HYPERBOLIC, (0, 0))


def total_space_normal_form(M: ManifoldPresentation, lam: int):
    """Normal form of E(psi) when lambda(psi) = 0 on an even form.

    Then eps_s = 0 and the classification leaves a single shape of rank k-1;
    None in every other case, where (eps, delta) are not determined here.
    """
    if lam != 0 or parity(M) != Parity.EVEN:
        return None
    return normal_form(EPresentation(((0, 0, 0),) * (M.k - 1)))


# ---------------------------------------------------------------------------
# suites

def verify_theorem_A(samples: int = 100, seed: int = 0, budget: int | None = None) -> list[VerificationReport]:
    rng = random.Random(seed)
    out = []
    for k, odd in ((3, True), (4, False)):
        for n in range(samples):
            M = random_presentation(rng, k, odd)
            t = time.perf_counter()
            ok = exists_bundle(M, budget=budget)
            out.append(VerificationReport(
                "A", _instance(M, f"{'odd' if odd else 'even'}-k{k}-{n}", seed),
                "an admissible class exists", ok, {},
                PASS if ok else FAIL, seconds=time.perf_counter() - t))
    t = time.perf_counter()
    ok = exists_bundle(K2ODD)
    out.append(VerificationReport("A", _instance(K2ODD, "k2odd"), "no admissible class exists",
                                  ok, {}, FAIL if ok else PASS, seconds=time.perf_counter() - t))
    return out


def verify_theorem_B(samples: int = 50, seed: int = 0, budget: int | None = None) -> list[VerificationReport]:
    rng = random.Random(seed)
    out = []
    cases = [(S4xS4, "S4xS4")] + [
        (stably_trivial_presentation(rng, rng.choice((2, 4, 6))), f"stably-trivial-{n}")
        for n in range(samples)]
    for M, ident in cases:
        t = time.perf_counter()
        res = achievable_lambdas(M, budget=budget)
        nf = total_space_normal_form(M, 0)
        expect = EPresentation(((0, 0, 0),) * (M.k - 1))
        good = res.values == (0,) and not res.box_misses and nf == normal_form(expect)
        out.append(VerificationReport(
            "B", _instance(M, ident, seed), "every admissible class has lambda = 0",
            list(res.values), {"psi": {str(l): list(x) for l, x in res.witnesses.items()},
                               "normal_form": nf.describe() if nf else None},
            PASS if good else FAIL, seconds=time.perf_counter() - t))
    return out


def _multiples(s: int) -> set[int]:
    if s == 0:
        return {0}
    return {d for d in (0, *DIVISORS_24[:-1]) if d % s == 0} | {0}


def verify_theorem_D(M: ManifoldPresentation, ident: str = "instance", seed: int | None = None,
                     lift_radius: int = 24, budget: int | None = None) -> list[VerificationReport]:
    inst = _instance(M, ident, seed)
    k, s, par = M.k, sigma(M), parity(M)
    t = time.perf_counter()
    try:
        res = achievable_lambdas(M, lift_radius=lift_radius, budget=budget)
    except ResourceLimitError as exc:
        return [VerificationReport("D", inst, "search within budget", str(exc), {}, SKIPPED,
                                   "resource limit")]
    dt = time.perf_counter() - t
    vals = set(res.values)
    wit = {"lambda_witnesses": {str(l): list(x) for l, x in res.witnesses.items()},
           "box_misses": [list(x) for x in res.box_misses], "sigma": s, "parity": par.value}
    out = []

    def add(item, claim, observed, good, skip=None, extra=None):
        status = SKIPPED if skip else (PASS if good else FAIL)
        out.append(VerificationReport(item, inst, claim, observed, {**wit, **(extra or {})},
                                      status, skip or "", dt))

    mults = _multiples(s)
    add("D", "sigma divides every lambda", sorted(vals), vals <= mults)
    if par == Parity.ODD and k >= 7:
        box = "" if not res.box_misses else f"; {len(res.box_misses)} residue groups had no lift in the box"
        add("D(1)", "lambda values = multiples of sigma" + box, sorted(vals), vals == mults)
    else:
        add("D(1)", "lambda values = multiples of sigma", sorted(vals), True, "needs an odd form with k >= 7")
    add("D(2)", "eps_s even for even forms", None, True,
        "eps_s is not computed independently of the parity rule")
    if k >= 7:
        three = gcd24(3 * s)
        add("D(3)", "sigma and 3 sigma both occur", sorted(vals), gcd24(s) in vals and three in vals)
    else:
        add("D(3)", "sigma and 3 sigma both occur", sorted(vals), True, "needs k >= 7")
    s2 = two_part(s)
    if k >= 5 and s2 in (2, 4):
        h = h8_detail(M)
        achieved = any(two_part(v) == 8 for v in vals)
        add("D(4)", "some lambda = 0 mod 8 iff (H8)", {"achieved": achieved, "H8": h.holds},
            achieved == h.holds, extra={"H8_psi": list(h.witness)})
    else:
        add("D(4)", "some lambda = 0 mod 8 iff (H8)", None, True, "needs sigma = 2, 4 mod 8 and k >= 5")
    if k >= 5 and s2 == 2:
        h = h4_detail(M)
        achieved = any(two_part(v) == 4 for v in vals)
        add("D(5)", "some lambda = 4 mod 8 iff (H4)", {"achieved": achieved, "H4": h.holds},
            achieved == h.holds, extra={"H4_psi": list(h.witness)})
    else:
        add("D(5)", "some lambda = 4 mod 8 iff (H4)", None, True, "needs sigma = 2 mod 8 and k >= 5")
    return out


def two_part(x: int) -> int:
    """gcd(x, 8), with 0 read as 8.

    lambda is defined up to a unit of Z/24, so "lambda = j mod 8" is a
    statement about this 2-primary part (6 and 18 differ by the unit 7).
    """
    return gcd(x, 8) or 8


def gcd24(x: int) -> int:
    g = gcd(x, 24)
    return 0 if g == 24 else g


def find_instance(seed: int, k: int, odd: bool, want_sigma=None, tries: int = 500):
    """First seeded random presentation whose sigma is in ``want_sigma``."""
    rng = random.Random(seed)
    for _ in range(tries):
        M = random_presentation(rng, k, odd)
        if want_sigma is None or sigma(M) in want_sigma:
            return M
    raise ValueError(f"no instance with sigma in {want_sigma} after {tries} tries")


def sigma3_instance(seed: int, k: int) -> ManifoldPresentation:
    """Odd form with every stable coefficient divisible by 3 (so sigma = 3)."""
    rng = random.Random(seed)
    G = random_form(rng, k, odd=True)
    l = [crt_pair(rng.randrange(4), 4, (2 * G[i][i]) % 3, 3) for i in range(k)]
    return ManifoldPresentation.from_gram(G, l)


def default_D_instances(seed: int = 0) -> list[tuple[str, ManifoldPresentation]]:
    return [("odd-k7-sigma1", find_instance(seed, 7, True, {1})),
            ("even-k6-sigma2", find_instance(seed, 6, False, {2, 6})),
            ("even-k6-sigma4", find_instance(seed + 1, 6, False, {4, 12}))]


def verify_suite_D(seed: int = 0, lift_radius: int = 24, budget: int | None = None) -> list[VerificationReport]:
    out = []
    for ident, M in default_D_instances(seed):
        out.extend(verify_theorem_D(M, ident, seed, lift_radius, budget))
    return out


def verify_sigma_achievability(M: ManifoldPresentation, ident: str = "instance", seed: int | None = None,
                               lift_radius: int = 24, budget: int | None = None) -> list[VerificationReport]:
    inst = _instance(M, ident, seed)
    if M.k < 5:
        return [VerificationReport("sigma", inst, "k >= 5", M.k, {}, SKIPPED, "needs k >= 5")]
    if M.k > 7:
        return [VerificationReport("sigma", inst, "k <= 7", M.k, {}, SKIPPED, "resource limit")]
    t = time.perf_counter()
    res = achievable_lambdas(M, lift_radius=lift_radius, budget=budget)
    dt = time.perf_counter() - t
    s, vals = sigma(M), set(res.values)
    wit = {"lambda_witnesses": {str(l): list(x) for l, x in res.witnesses.items()}, "sigma": s}
    out = []

    def add(claim, good, skip=None):
        out.append(VerificationReport("sigma", inst, claim, sorted(vals), wit,
                                      SKIPPED if skip else (PASS if good else FAIL), skip or "", dt))

    add("some lambda = sigma mod 3", any(gcd(v, 3) == gcd(s, 3) for v in vals))
    if M.k >= 7:
        add("some lambda = sigma mod 8", any(two_part(v) == two_part(s) for v in vals))
    else:
        add("some lambda = sigma mod 8", True, "needs k >= 7")
    if s % 3 and M.k >= 7:
        add("lambda = 3 sigma occurs", gcd24(3 * s) in vals)
    else:
        add("lambda = 3 sigma occurs", True, "needs 3 not dividing sigma and k >= 7")
    if s % 2:
        for j in (0, 2, 4):
            add(f"some lambda = {j} mod 8", any(two_part(v) == (j or 8) for v in vals))
    else:
        add("some lambda = 0, 2, 4 mod 8", True, "needs odd sigma")
    return out


def verify_suite_sigma(seed: int = 0, lift_radius: int = 24, budget: int | None = None) -> list[VerificationReport]:
    cases = [("odd-k5", find_instance(seed, 5, True, {1, 3})),
             ("odd-k7", find_instance(seed + 2, 7, True, {1})),
             ("even-k6", find_instance(seed + 3, 6, False, {2, 4, 8})),
             ("odd-k7-sigma3", sigma3_instance(seed + 4, 7))]
    out = []
    for ident, M in cases:
        out.extend(verify_sigma_achievability(M, ident, seed, lift_radius, budget))
    return out


def rank2_lambda_sets() -> dict[tuple[int, int], set[int] | None]:
    """lambda over every admissible class of the hyperbolic form with l in (Z/12)^2."""
    out = {}
    for l1 in range(12):
        for l2 in range(12):
            M = ManifoldPresentation.from_gram(HYPERBOLIC, (l1, l2))
            if not enumerate_admissible_residues(M):
                out[(l1, l2)] = None
                continue
            out[(l1, l2)] = set(achievable_lambdas(M).values)
    return out


def _psi_for(l, lam) -> list[int] | None:
    M = ManifoldPresentation.from_gram(HYPERBOLIC, l)
    for r in enumerate_admissible_residues(M):
        x = primitive_lift(r)
        if x is not None and is_admissible(M, x) and lambda_of(M, x) == lam:
            return list(x)
    return None


def verify_rank2_example() -> list[VerificationReport]:
    """Observations on the hyperbolic rank-2 form.

    Observations (2) and (3) are read existentially (some admissible class);
    (1), (4) and the non-existence statement are read for every class.
    """
    t = time.perf_counter()
    sets = rank2_lambda_sets()
    dt = time.perf_counter() - t
    out = []

    def report(item, claim, cases, bad):
        wit = {"counterexamples": [{"l": list(l), "lambda": sorted(v) if v is not None else None,
                                    "psi": _psi_for(l, lam) if lam is not None else None}
                                   for l, v, lam in bad[:5]]}
        inst = {"id": "hyperbolic-rank2", "G": [list(r) for r in HYPERBOLIC], "cases": cases}
        out.append(VerificationReport(item, inst, claim, {"cases": cases, "failures": len(bad)},
                                      wit, FAIL if bad else PASS, seconds=dt))

    odd = [(l, v) for l, v in sets.items() if l[0] % 2 and l[1] % 2]
    report("rank2-nonexistence", "both l odd: no admissible class", len(odd),
           [(l, v, None) for l, v in odd if v is not None])
    exists = [(l, v) for l, v in sets.items() if not (l[0] % 2 and l[1] % 2)]
    report("rank2-existence", "some l even: an admissible class exists", len(exists),
           [(l, v, None) for l, v in exists if v is None])

    c1 = [(l, v) for l, v in sets.items() if v is not None and l[0] % 3 and l[1] % 3]
    report("rank2-(1)", "no l divisible by 3: every lambda = 0 mod 3", len(c1),
           [(l, v, next(x for x in v if x % 3)) for l, v in c1 if any(x % 3 for x in v)])

    c2 = [(l, v) for l, v in sets.items() if v is not None and (l[0] % 3 == 0) != (l[1] % 3 == 0)]
    report("rank2-(2)", "exactly one l divisible by 3: some lambda != 0 mod 3", len(c2),
           [(l, v, None) for l, v in c2 if all(x % 3 == 0 for x in v)])

    c3 = [(l, v) for l, v in sets.items()
          if v is not None and l[0] % 3 and l[1] % 3 and (l[0] * l[1]) % 8 == 0
          and two_part(sigma(ManifoldPresentation.from_gram(HYPERBOLIC, l))) == 4]
    report("rank2-(3)", "sigma = 4 mod 8, l1 l2 = 0 mod 8, no l divisible by 3: some lambda = 0 mod 8",
           len(c3), [(l, v, None) for l, v in c3 if not any(two_part(x) == 8 for x in v)])

    c4 = [(l, v) for l, v in sets.items()
          if v is not None and two_part(sigma(ManifoldPresentation.from_gram(HYPERBOLIC, l))) == 2]
    report("rank2-(4)", "sigma = 2 mod 8: no lambda = 0 or 4 mod 8", len(c4),
           [(l, v, next(x for x in sorted(v) if two_part(x) in (4, 8))) for l, v in c4
            if any(two_part(x) in (4, 8) for x in v)])
    return out


def verify_divisibility(pairs: int = 10_000, seed: int = 0) -> VerificationReport:
    """sigma | lambda and (even form => lambda even) over random (M, psi) pairs."""
    rng = random.Random(seed)
    t = time.perf_counter()
    seen, bad = 0, []
    while seen < pairs:
        k = rng.randint(2, 6)
        odd = k % 2 == 1 or rng.random() < 0.5
        M = random_presentation(rng, k, odd)
        sols = enumerate_admissible_residues(M)
        if not sols:
            continue
        residues = list(_sample(sols, rng, 25))
        s = sigma(M)
        for r in residues:
            x = primitive_lift(r)
            if x is None:
                continue
            lam = lambda_of(M, x)
            seen += 1
            ok = (lam % s == 0 if s else lam == 0) and (lam % 2 == 0 or parity(M) == Parity.ODD)
            if not ok:
                bad.append({"G": [list(g) for g in M.G], "l": list(M.l), "psi": list(x), "lambda": lam})
    return VerificationReport("divisibility", {"id": "random", "seed": seed, "pairs": seen},
                              "sigma | lambda; even form => lambda even", {"failures": len(bad)},
                              {"counterexamples": bad[:5]}, FAIL if bad else PASS,
                              seconds=time.perf_counter() - t)


def _sample(sols, rng: random.Random, n: int):
    if len(sols) <= n:
        return iter(sols)
    m8, m3 = sols.mod8, sols.mod3
    out = []
    for _ in range(n):
        a = m8[rng.randrange(len(m8))]
        b = m3[rng.randrange(len(m3))]
        out.append(tuple(crt_pair(int(x), 8, int(y), 3) for x, y in zip(a, b)))
    return iter(out)


SUITES = ("A", "B", "D", "rank2", "sigma")


def run_suite(name: str, seed: int = 0, samples: int | None = None, budget: int | None = None,
              lift_radius: int = 24) -> list[VerificationReport]:
    if name == "A":
        return verify_theorem_A(100 if samples is None else samples, seed, budget)
    if name == "B":
        return verify_theorem_B(50 if samples is None else samples, seed, budget)
    if name == "D":
        return verify_suite_D(seed, lift_radius, budget)
    if name == "rank2":
        return verify_rank2_example()
    if name == "sigma":
        return verify_suite_sigma(seed, lift_radius, budget)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
