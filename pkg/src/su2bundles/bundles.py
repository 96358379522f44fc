"""Principal SU(2)-bundles with 3-connected total space over a presentation M.

A class psi with coordinates n (in the dual basis) classifies such a bundle iff
n is primitive and psi^2 = tau(psi) mod 24.  Since psi^2 - tau(psi) is twice
the nu' coefficient of psi o L, this is the same as that coefficient
vanishing mod 12; both tests are run and must agree.
"""
from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .core import (Matrix, PreconditionError, ResourceLimitError, as_matrix, complete_primitive_to_basis,
                   crt_pair, gcd_with_modulus, identity, inverse_unimodular, matmul, matvec,
                   random_unimodular, smith_normal_form, transpose)
from .manifold import (CohomologyClass4, ManifoldPresentation, Parity, change_basis, parity,
                       self_intersection, sigma, tau)
from .wedge import compose_class, pushforward, stable_vector

DEFAULT_K_LIMIT = 8
UNKNOWN = "Unknown"


class AdaptationError(PreconditionError):
    """No adapted basis of the requested shape exists for this class."""


def _coords(psi) -> tuple[int, ...]:
    return psi.n if isinstance(psi, CohomologyClass4) else tuple(int(x) for x in psi)


def _content(n: Sequence[int]) -> int:
    g = 0
    for x in n:
        g = gcd(g, x)
    return g


def _as_divisor(g: int) -> int:
    g = gcd(g, 24)
    return 0 if g == 24 else g


def divisor_mod(value: int, modulus: int) -> int:
    """The residue of a divisor-of-24 value (0 meaning 24) modulo ``modulus``."""
    return (24 if value == 0 else value) % modulus


class Admissibility(NamedTuple):
    ok: bool
    reason: str  # "admissible", "not-primitive" or "congruence-fails"


@dataclass(frozen=True)
class AdmissibleClass:
    psi: CohomologyClass4
    tau_value: int
    self_intersection: int


def admissibility(M: ManifoldPresentation, psi) -> Admissibility:
    n = _coords(psi)
    if len(n) != M.k:
        raise PreconditionError("class length must equal k")
    quad = (self_intersection(M, n) - tau(M, n)) % 24 == 0
    _, nup = compose_class(n, M.L)
    if quad != (nup == 0):
        raise AssertionError(f"admissibility tests disagree at n={n}")
    if _content(n) != 1:
        return Admissibility(False, "not-primitive")
    return Admissibility(quad, "admissible" if quad else "congruence-fails")


def is_admissible(M: ManifoldPresentation, psi) -> bool:
    return admissibility(M, psi).ok


def admissible_class(M: ManifoldPresentation, psi) -> AdmissibleClass:
    n = _coords(psi)
    if not is_admissible(M, n):
        raise PreconditionError(f"class {n} is not admissible")
    return AdmissibleClass(CohomologyClass4(n), tau(M, n), self_intersection(M, n))


# ---------------------------------------------------------------------------
# residue search

def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("SU2B_THREADS", "1")))
    except ValueError:
        return 1


def _residue_block(G: np.ndarray, v: np.ndarray, mod: int, k: int, prefix: tuple[int, ...]) -> np.ndarray:
    """All n in (Z/mod)^k starting with ``prefix`` that solve the congruence mod ``mod``
    and are nonzero mod the prime dividing ``mod``."""
    free = k - len(prefix)
    tail = np.indices((mod,) * free, dtype=np.int64).reshape(free, -1).T if free else np.zeros((1, 0), np.int64)
    n = np.concatenate([np.broadcast_to(np.array(prefix, np.int64), (tail.shape[0], len(prefix))), tail], axis=1)
    quad = np.einsum("ij,jk,ik->i", n, G, n)
    lin = n @ v
    ok = (quad - lin) % mod == 0
    p = 2 if mod % 2 == 0 else 3
    ok &= (n % p != 0).any(axis=1)
    return n[ok].astype(np.int8)


def _solve_mod(M: ManifoldPresentation, mod: int, threads: int) -> np.ndarray:
    k = M.k
    G = np.array(M.G, dtype=np.int64) % mod
    v = np.array(stable_vector(M.L), dtype=np.int64) % mod
    split = min(k, max(0, k - 5))  # keep blocks at <= mod^5 rows
    prefixes = list(itertools.product(range(mod), repeat=split))
    if threads > 1 and len(prefixes) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(lambda p: _residue_block(G, v, mod, k, p), prefixes))
    else:
        parts = [_residue_block(G, v, mod, k, p) for p in prefixes]
    return np.concatenate(parts, axis=0) if parts else np.zeros((0, k), np.int8)


@dataclass
class ResidueSolutions:
    """Admissible residues mod 24, stored as their mod-8 and mod-3 factors.

    The set is the CRT product of the two factor sets; iteration yields
    vectors mod 24 in lexicographic order of (mod-8, mod-3) pairs.
    """
    k: int
    mod8: np.ndarray
    mod3: np.ndarray
    states_visited: int
    unit_only: bool = False  # k == 1: only residues +-1 lift primitively

    def __len__(self) -> int:
        return len(self.mod8) * len(self.mod3)

    def __bool__(self) -> bool:
        return len(self) > 0

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for a in self.mod8:
            for b in self.mod3:
                yield tuple(crt_pair(int(x), 8, int(y), 3) for x, y in zip(a, b))

    def __contains__(self, n) -> bool:
        n = tuple(int(x) % 24 for x in n)
        a = np.array([x % 8 for x in n], np.int8)
        b = np.array([x % 3 for x in n], np.int8)
        return bool((self.mod8 == a).all(axis=1).any() and (self.mod3 == b).all(axis=1).any())


def enumerate_admissible_residues(M: ManifoldPresentation, limit: int = DEFAULT_K_LIMIT,
                                  budget: int | None = None, threads: int | None = None) -> ResidueSolutions:
    k = M.k
    if k > limit:
        raise ResourceLimitError(f"k={k} exceeds the search limit {limit}")
    states = 8 ** k + 3 ** k
    if budget is not None and states > budget:
        raise ResourceLimitError(f"search needs {states} states, budget is {budget}")
    threads = threads or _default_threads()
    if k == 1:
        sols = [n for n in (1, 23) if is_admissible(M, (1 if n == 1 else -1,))]
        m8 = np.array([[n % 8] for n in sols], np.int8).reshape(-1, 1)
        m3 = np.array([[n % 3] for n in sols], np.int8).reshape(-1, 1)
        # pair each unit with its own CRT partner only
        return _UnitResidues(1, m8, m3, 2, True, sols)
    return ResidueSolutions(k, _solve_mod(M, 8, threads), _solve_mod(M, 3, threads), states)


class _UnitResidues(ResidueSolutions):
    def __init__(self, k, m8, m3, states, unit_only, sols):
        super().__init__(k, m8, m3, states, unit_only)
        self._sols = sols

    def __len__(self):
        return len(self._sols)

    def __iter__(self):
        return iter([(n,) for n in self._sols])

    def __contains__(self, n):
        return int(tuple(n)[0]) % 24 in self._sols


def enumerate_admissible_direct(M: ManifoldPresentation, limit: int = 4) -> set[tuple[int, ...]]:
    """Cross-check oracle: brute force over (Z/24)^k."""
    k = M.k
    if k > limit:
        raise ResourceLimitError(f"direct search limited to k <= {limit}")
    G = np.array(M.G, dtype=np.int64)
    v = np.array(stable_vector(M.L), dtype=np.int64)
    n = np.indices((24,) * k, dtype=np.int64).reshape(k, -1).T
    ok = (np.einsum("ij,jk,ik->i", n, G, n) - n @ v) % 24 == 0
    ok &= np.gcd.reduce(np.concatenate([n, np.full((len(n), 1), 24)], axis=1), axis=1) == 1
    out = {tuple(int(x) for x in row) for row in n[ok]}
    if k == 1:
        out &= {(1,), (23,)}
    return out


def exists_bundle(M: ManifoldPresentation, limit: int = DEFAULT_K_LIMIT, budget: int | None = None) -> bool:
    return bool(enumerate_admissible_residues(M, limit, budget))


def primitive_lift(residue: Sequence[int], radius: int = 24) -> tuple[int, ...] | None:
    """An integer vector congruent to ``residue`` mod 24, primitive, entries in [-radius, radius]."""
    r = [int(x) % 24 for x in residue]
    k = len(r)
    if gcd_with_modulus(r) not in (1,):
        return None
    if k == 1:
        x = r[0] if r[0] <= 12 else r[0] - 24
        return (x,) if abs(x) == 1 and abs(x) <= radius else None
    choices = []
    for x in r:
        opts = sorted({y for y in range(x - 48, x + 49, 24) if abs(y) <= radius}, key=lambda y: (abs(y), -y))
        if not opts:
            return None
        choices.append(opts)
    base = [c[0] for c in choices]
    if _content(base) == 1:
        return tuple(base)
    # vary one coordinate at a time, then pairs
    for i in range(k):
        for y in choices[i][1:]:
            cand = base[:i] + [y] + base[i + 1:]
            if _content(cand) == 1:
                return tuple(cand)
    for cand in itertools.product(*choices):
        if _content(cand) == 1:
            return tuple(cand)
    return None


# ---------------------------------------------------------------------------
# adapted bases and lambda

@dataclass(frozen=True)
class AdaptedBasis:
    A: Matrix
    case: str  # "Case1" or "Case2"
    transformed: ManifoldPresentation


def _last_col(G: Matrix) -> list[int]:
    return [r[-1] for r in G]


def _check_adapted(ab: AdaptedBasis) -> bool:
    G, k = ab.transformed.G, ab.transformed.k
    if ab.case == "Case1":
        return abs(G[k - 1][k - 1]) == 1 and all(G[j][k - 1] == 0 for j in range(k - 1))
    return G[k - 2][k - 1] == 1 and all(G[j][k - 1] == 0 for j in range(k - 2))


def adapt_basis(M: ManifoldPresentation, psi) -> AdaptedBasis:
    """Unimodular A with last column n (so psi becomes the last dual vector) putting
    the last column of A^T G A into Case 1 or Case 2 shape."""
    n = _coords(psi)
    k = M.k
    if k < 2:
        raise PreconditionError("adapted bases need k >= 2")
    if not is_admissible(M, n):
        raise PreconditionError(f"class {n} is not admissible")
    P = transpose(complete_primitive_to_basis(n))
    G1 = matmul(matmul(transpose(P), M.G), P)
    c = _last_col(G1)
    ck = c[-1]
    if abs(ck) == 1:
        Q = [list(r) for r in identity(k)]
        for j in range(k - 1):
            Q[k - 1][j] = -c[j] * ck
        A, case = matmul(P, as_matrix(Q)), "Case1"
    elif k == 2:
        A, case = matmul(P, _case2_rank2(c)), "Case2"
    else:
        A, case = matmul(P, _case2_general(c, k)), "Case2"
    ab = AdaptedBasis(A, case, change_basis(M, A))
    assert tuple(r[-1] for r in A) == tuple(n) and _check_adapted(ab)
    return ab


def _case2_rank2(c: list[int]) -> Matrix:
    c0, ck = c
    for sgn in (1, -1):
        if ck == 0:
            if sgn * c0 == 1:
                return as_matrix([[sgn, 0], [0, 1]])
            continue
        if (1 - sgn * c0) % ck == 0:
            return as_matrix([[sgn, 0], [(1 - sgn * c0) // ck, 1]])
    raise AdaptationError(f"no rank-2 adapted basis: pairing column {tuple(c)}")


def _embed(R: Matrix, k: int) -> list[list[int]]:
    Q = [list(r) for r in identity(k)]
    for i, row in enumerate(R):
        Q[i][:k - 1] = list(row)
    return Q


def _case2_general(c: list[int], k: int) -> Matrix:
    cp, ck = c[:-1], c[-1]
    d = _content(cp)
    # R0^T c' = d e_{k-1}
    R0 = inverse_unimodular(complete_primitive_to_basis([x // d for x in cp]))
    Q1 = as_matrix(_embed(R0, k))
    c1 = [sum(R0[a][j] * cp[a] for a in range(k - 1)) for j in range(k - 1)]
    # add the last basis vector's pairing into slot k-2: (.., ck, d) is primitive
    Q2 = [list(r) for r in identity(k)]
    Q2[k - 1][k - 3] = 1
    c2 = list(c1)
    c2[k - 3] += ck
    R2 = inverse_unimodular(complete_primitive_to_basis(c2))
    Q3 = as_matrix(_embed(R2, k))
    return matmul(matmul(Q1, as_matrix(Q2)), Q3)


def lambda_from_adapted(ab: AdaptedBasis) -> int:
    u = stable_vector(ab.transformed.L)
    k = ab.transformed.k
    if ab.case == "Case1":
        vals = list(u[:k - 1])
    else:
        gkk = ab.transformed.G[k - 1][k - 1]
        vals = list(u[:k - 2]) + [u[k - 1] - gkk * u[k - 2]]
    return gcd_with_modulus(vals)


def lambda_closed_form(M: ManifoldPresentation, psi) -> int:
    """gcd(24, all 2x2 minors of the pair (G n, v)); the gcd of tau over psi's annihilator."""
    n = _coords(psi)
    a = matvec(M.G, n)
    v = stable_vector(M.L)
    g = 24
    for i in range(M.k):
        for j in range(i + 1, M.k):
            g = gcd(g, a[i] * v[j] - a[j] * v[i])
    return _as_divisor(g)


def lambda_of(M: ManifoldPresentation, psi) -> int:
    """lambda(psi) as a divisor of 24, 0 standing for 24."""
    n = _coords(psi)
    try:
        lam = lambda_from_adapted(adapt_basis(M, n))
    except AdaptationError:
        lam = lambda_closed_form(M, n)
    s = sigma(M)
    if divisor_mod(lam, 24) % (24 if s == 0 else s):
        raise AssertionError(f"sigma={s} does not divide lambda={lam} at n={n}")
    return lam


def perturb_adapted(M: ManifoldPresentation, ab: AdaptedBasis, seed: int) -> AdaptedBasis:
    """Compose with a random unimodular change that keeps psi and the case shape.

    Case 1 allows any change on the first k-1 vectors.  Case 2 must fix the
    partner vector's pairing, so its row stays a unit row.
    """
    rng = random.Random(seed)
    k = M.k
    m = k - 1 if ab.case == "Case1" else k - 2
    Q = [list(r) for r in identity(k)]
    if m >= 1:
        R = random_unimodular(m, rng.randrange(2 ** 31), 4 * m)
        for i in range(m):
            Q[i][:m] = list(R[i])
            if ab.case == "Case2":
                Q[i][k - 2] = rng.randint(-3, 3)
    A = matmul(ab.A, as_matrix(Q))
    new = AdaptedBasis(A, ab.case, change_basis(M, A))
    assert _check_adapted(new)
    return new


@dataclass(frozen=True)
class BundleInvariants:
    lam: int
    epsilon_s: int | str


def epsilon_of(M: ManifoldPresentation, psi) -> int | str:
    if not is_admissible(M, psi):
        raise PreconditionError("class is not admissible")
    return 0 if parity(M) == Parity.EVEN else UNKNOWN


def bundle_invariants(M: ManifoldPresentation, psi) -> BundleInvariants:
    return BundleInvariants(lambda_of(M, psi), epsilon_of(M, psi))


# ---------------------------------------------------------------------------
# achievable lambda values

@dataclass
class AchievableLambdas:
    values: tuple[int, ...]
    witnesses: dict[int, tuple[int, ...]]
    box_misses: list[tuple[int, ...]] = field(default_factory=list)
    mod24_dependence: bool = False
    states_visited: int = 0
    group_mismatches: list[tuple[int, ...]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.values)

    def __contains__(self, x):
        return x in self.values


def _local_lambda(sols: np.ndarray, G: np.ndarray, v: np.ndarray, mod: int) -> np.ndarray:
    a = (sols.astype(np.int64) @ G) % mod
    k = sols.shape[1]
    g = np.full(len(sols), mod, dtype=np.int64)
    for i in range(k):
        for j in range(i + 1, k):
            g = np.gcd(g, (a[:, i] * v[j] - a[:, j] * v[i]) % mod)
    return g


def achievable_lambdas(M: ManifoldPresentation, lift_radius: int = 24, limit: int = DEFAULT_K_LIMIT,
                       budget: int | None = None, threads: int | None = None,
                       lifts_per_class: int = 2) -> AchievableLambdas:
    """lambda over admissible classes, grouped by their 2- and 3-primary parts.

    Residues are grouped by the local lambda values computed from (G n, v) mod 8
    and mod 3; each group is represented by a primitive integer lift inside the
    box and evaluated through an adapted basis.
    """
    sols = enumerate_admissible_residues(M, limit, budget, threads)
    if M.k == 1 or not sols:
        vals, wit, misses = {}, {}, []
        for r in sols:
            lift = primitive_lift(r, lift_radius)
            if lift is None:
                misses.append(r)
                continue
            if M.k == 1:
                continue  # adapted bases need k >= 2
            vals.setdefault(lambda_of(M, lift), lift)
        return AchievableLambdas(tuple(sorted(vals)), vals, misses, False, sols.states_visited)
    G = np.array(M.G, dtype=np.int64)
    v = np.array(stable_vector(M.L), dtype=np.int64)
    l8 = _local_lambda(sols.mod8, G % 8, v % 8, 8)
    l3 = _local_lambda(sols.mod3, G % 3, v % 3, 3)
    reps8 = {int(x): sols.mod8[np.argmax(l8 == x)] for x in np.unique(l8)}
    reps3 = {int(x): sols.mod3[np.argmax(l3 == x)] for x in np.unique(l3)}
    witnesses: dict[int, tuple[int, ...]] = {}
    misses, mismatches, dependence = [], [], False
    for a8, r8 in sorted(reps8.items()):
        for a3, r3 in sorted(reps3.items()):
            residue = tuple(crt_pair(int(x), 8, int(y), 3) for x, y in zip(r8, r3))
            lifts = _lifts(residue, lift_radius, lifts_per_class)
            if not lifts:
                misses.append(residue)
                continue
            lams = [lambda_of(M, x) for x in lifts]
            dependence = dependence or len(set(lams)) > 1
            if lams[0] != _as_divisor(a8 * a3):
                mismatches.append(lifts[0])
            for lam, x in zip(lams, lifts):
                witnesses.setdefault(lam, x)
    return AchievableLambdas(tuple(sorted(witnesses)), dict(sorted(witnesses.items())), misses,
                             dependence, sols.states_visited, mismatches)


def _lifts(residue, radius, count) -> list[tuple[int, ...]]:
    first = primitive_lift(residue, radius)
    if first is None:
        return []
    out = [first]
    k = len(residue)
    for i in range(k):
        if len(out) >= count:
            break
        for shift in (24, -24):
            cand = list(first)
            cand[i] += shift
            if abs(cand[i]) <= radius and _content(cand) == 1:
                out.append(tuple(cand))
                break
    return out


# ---------------------------------------------------------------------------
# hypotheses (H8) and (H4)

def _two_part(s: int) -> int:
    return gcd(24 if s == 0 else s, 8)


def _kernel_mod(v: Sequence[int], mod: int) -> list[list[int]]:
    """Generators (lifted to Z) of ker(x -> v.x mod ``mod``) via SNF of [v | mod]."""
    k = len(v)
    row = as_matrix([list(v) + [mod]])
    _, D, V = smith_normal_form(row)
    # columns of V past the rank span the integer kernel of [v | mod]
    return [[V[i][j] for i in range(k)] for j in range(1, k + 1)]


def perp_mod(M: ManifoldPresentation, gens: list[list[int]], mod: int) -> list[list[int]]:
    """Generators of {y mod ``mod`` : x^T G y = 0 for every generator x}."""
    k = M.k
    if not gens:
        return [list(r) for r in identity(k)]
    B = as_matrix([matvec(transpose(M.G), g) for g in gens])  # rows x^T G
    U, D, V = smith_normal_form(B)
    out = []
    for j in range(k):
        d = D[j][j] if j < len(D) else 0
        step = mod // gcd(d, mod) if d else 1
        out.append([(V[i][j] * step) % mod for i in range(k)])
    return [g for g in out if any(g)]


def _span_mod(gens: list[list[int]], mod: int, k: int) -> set[tuple[int, ...]]:
    seen = {(0,) * k}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % mod for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


@dataclass(frozen=True)
class HypothesisResult:
    holds: bool
    witness: tuple[int, ...]
    perp: tuple[tuple[int, ...], ...]


def _psi0(M: ManifoldPresentation, s2: int) -> tuple[int, ...]:
    v = stable_vector(M.L)
    w = [x // s2 for x in v]
    return matvec(inverse_unimodular(M.G), w)


def h8_detail(M: ManifoldPresentation) -> HypothesisResult:
    s2 = _two_part(sigma(M))
    if sigma(M) % 2 or s2 not in (2, 4):
        raise PreconditionError(f"(H8) needs the 2-part of sigma in {{2,4}}, sigma={sigma(M)}")
    k = M.k
    perp = perp_mod(M, _kernel_mod(stable_vector(M.L), 8), 8)
    psi0 = _psi0(M, s2)
    span = _span_mod(perp, 8, k)
    if span != _span_mod([[s2 * x % 8 for x in psi0]], 8, k):
        raise AssertionError("orthogonal complement is not generated by sigma * psi0")
    q = 8 // s2
    cands = sorted({tuple((u * x) % q for x in psi0) for u in range(1, 8, 2)})
    witness = cands[0]
    sq = self_intersection(M, witness)
    holds = sq % 8 == 0 if s2 == 2 else sq % 4 == 0
    return HypothesisResult(holds, witness, tuple(tuple(g) for g in perp))


def h4_detail(M: ManifoldPresentation) -> HypothesisResult:
    s2 = _two_part(sigma(M))
    if sigma(M) % 2 or s2 != 2:
        raise PreconditionError(f"(H4) needs the 2-part of sigma equal to 2, sigma={sigma(M)}")
    k = M.k
    perp = perp_mod(M, _kernel_mod(stable_vector(M.L), 4), 4)
    psi0 = _psi0(M, 2)
    if _span_mod(perp, 4, k) != _span_mod([[2 * x % 4 for x in psi0]], 4, k):
        raise AssertionError("orthogonal complement mod 4 is not generated by 2 * psi0")
    base = [x % 2 for x in psi0]
    for x in itertools.product(range(2), repeat=k):
        cand = tuple(b + 2 * y for b, y in zip(base, x))
        sq = self_intersection(M, cand) % 8
        if sq == tau(M, cand) % 8 and sq in (0, 4):
            return HypothesisResult(True, cand, tuple(tuple(g) for g in perp))
    return HypothesisResult(False, tuple(base), tuple(tuple(g) for g in perp))


def hypothesis_H8(M: ManifoldPresentation) -> bool:
    return h8_detail(M).holds


def hypothesis_H4(M: ManifoldPresentation) -> bool:
    return h4_detail(M).holds
