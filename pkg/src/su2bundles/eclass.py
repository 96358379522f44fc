"""Homotopy classification of 3-connected 11-complexes with 7-skeleton a wedge of S^4 and S^7.

A rank-r complex is presented by triples (lambda_i, s_i, r_i) in Z/24 x Z/24 x Z/3,
the coefficients of iota_7 o nu_(7), nu o nu_(7) and nu' o nu_(7) on the i-th summand.
A rank-one complex E_{lambda,eps,delta} is one triple.

Two kinds of rewrites act on presentations:

* the published identities (rank-one moves, the shear for even lambda_2,
  multiplication by a unit against E_{0,0,0}, and the E_{0,1,0} identity);
* a derived two-factor law for arbitrary self-maps of (S^4 v S^7)^2, used where
  the published identities do not reach (shears against an odd lambda, unit
  scaling against an E_{0,1,0} partner).

The derived law is

    lambda' = A^{-1} lambda
    s'_j = sum_i (2A_ij + lambda_i) c_ij - 4 A_ij c'_ij + s_i A_ij^2           (mod 24)
    r'_j = sum_i (A_ij + lambda_i) c'_ij + s_i C(A_ij, 2) + r_i A_ij           (mod 3)

valid when the [alpha_1, alpha_2] o nu_(7) coefficient

    T = sum_i (A_i1 c_i2 + A_i2 c_i1) - 2 (A_i1 c'_i2 + A_i2 c'_i1) + s_i A_i1 A_i2 + lambda . d

vanishes mod 24, where d = A^{-T} h and h = (sum_i A_i2 c_i1, sum_i A_i1 c_i2).
It reproduces every published identity (see the tests).
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .core import PreconditionError, binom2

Factor = tuple[int, int, int]


class Equality(str, Enum):
    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"


@dataclass(frozen=True, order=True)
class RankOneClass:
    lam: int
    eps: int
    delta: int

    def __post_init__(self):
        object.__setattr__(self, "lam", self.lam % 24)
        object.__setattr__(self, "eps", self.eps % 24)
        object.__setattr__(self, "delta", self.delta % 3)

    def as_tuple(self) -> Factor:
        return (self.lam, self.eps, self.delta)

    def __str__(self):
        return f"E_{{{self.lam},{self.eps},{self.delta}}}"


def _norm(f: Sequence[int]) -> Factor:
    return (int(f[0]) % 24, int(f[1]) % 24, int(f[2]) % 3)


@dataclass(frozen=True)
class EPresentation:
    factors: tuple[Factor, ...]

    def __post_init__(self):
        fs = tuple(_norm(f) for f in self.factors)
        if not fs:
            raise PreconditionError("a presentation needs rank >= 1")
        object.__setattr__(self, "factors", fs)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @classmethod
    def of(cls, *factors: Sequence[int]) -> "EPresentation":
        return cls(tuple(tuple(f) for f in factors))

    def to_json(self) -> dict:
        return {"factors": [{"lambda": l, "s": s, "r": r} for l, s, r in self.factors]}


@dataclass(frozen=True)
class ENormalForm:
    rank: int
    lambda_s: int
    eps_hat: int
    tail: RankOneClass

    def key(self) -> tuple:
        return (self.rank, self.lambda_s, self.eps_hat, self.tail.as_tuple())

    def describe(self) -> str:
        if self.rank == 1:
            return str(self.tail)
        parts = []
        if self.rank > 2:
            parts.append(f"#^{self.rank - 2} E_{{0,0,0}}")
        parts.append(f"E_{{0,{self.eps_hat},0}}")
        parts.append(str(self.tail))
        return " # ".join(parts)


# ---------------------------------------------------------------------------
# rank one

def rank1_neighbors(c) -> set[RankOneClass]:
    lam, eps, delta = c.as_tuple() if isinstance(c, RankOneClass) else _norm(c)
    out = {RankOneClass(-lam, eps, eps - delta)}
    for a in range(1, 24):
        out.add(RankOneClass(lam, eps + (lam + 2) * a, delta))
    for b in range(1, 24):
        out.add(RankOneClass(lam, eps - 4 * b, delta + (lam + 1) * b))
    return out


@lru_cache(maxsize=1)
def _orbits() -> tuple[dict[Factor, Factor], dict[Factor, list[Factor]]]:
    canon: dict[Factor, Factor] = {}
    members: dict[Factor, list[Factor]] = {}
    for start in ((l, e, d) for l in range(24) for e in range(24) for d in range(3)):
        if start in canon:
            continue
        orbit = {start}
        queue = deque([start])
        while queue:
            for nb in rank1_neighbors(queue.popleft()):
                t = nb.as_tuple()
                if t not in orbit:
                    orbit.add(t)
                    queue.append(t)
        rep = min(x for x in orbit if x[0] <= 12)
        for x in orbit:
            canon[x] = rep
        members[rep] = sorted(orbit)
    return canon, members


def _canon(f: Sequence[int]) -> Factor:
    return _orbits()[0][_norm(f)]


def rank1_canonical(c) -> RankOneClass:
    return RankOneClass(*_canon(c.as_tuple() if isinstance(c, RankOneClass) else c))


def rank1_display(c) -> RankOneClass:
    """The representative used in the printed classification table: the orbit
    member with lambda in [0,12] minimising (delta, eps)."""
    rep = _canon(c.as_tuple() if isinstance(c, RankOneClass) else c)
    best = min((x for x in _orbits()[1][rep] if x[0] == rep[0]), key=lambda x: (x[2], x[1]))
    return RankOneClass(*best)


def table1() -> dict[int, list[RankOneClass]]:
    rows: dict[int, list[RankOneClass]] = {lam: [] for lam in range(13)}
    for rep in sorted(_orbits()[1]):
        rows[rep[0]].append(RankOneClass(*rep))
    return rows


def table1_display() -> dict[int, list[RankOneClass]]:
    return {lam: sorted((rank1_display(c) for c in cs), key=lambda x: (x.delta, x.eps))
            for lam, cs in table1().items()}


# ---------------------------------------------------------------------------
# presentations and stable data

def connected_sum(E1: EPresentation, E2: EPresentation) -> EPresentation:
    return EPresentation(E1.factors + E2.factors)


def _divisor(g: int) -> int:
    g = gcd(g, 24)
    return 0 if g == 24 else g


def stable_invariants(E: EPresentation) -> tuple[int, int]:
    """(lambda_s, eps_s).  eps_s is reported as 0 whenever lambda_s is odd."""
    g = 24
    for lam, _, _ in E.factors:
        g = gcd(g, lam)
    lam_s = _divisor(g)
    if lam_s % 2 == 1:
        return lam_s, 0
    return lam_s, int(any(s % 2 for _, s, _ in E.factors))


# ---------------------------------------------------------------------------
# published rewrite identities (pairs are (i, j) slot indices)

def _replace(E: EPresentation, updates: dict[int, Factor]) -> EPresentation:
    fs = list(E.factors)
    for i, f in updates.items():
        fs[i] = f
    return EPresentation(tuple(fs))


def apply_rank1_move(E: EPresentation, i: int, kind: int, param: int = 1) -> EPresentation:
    lam, eps, delta = E.factors[i]
    if kind == 1:
        new = (-lam, eps, eps - delta)
    elif kind == 2:
        new = (lam, eps + (lam + 2) * param, delta)
    elif kind == 3:
        new = (lam, eps - 4 * param, delta + (lam + 1) * param)
    else:
        raise PreconditionError("move kind is 1, 2 or 3")
    return _replace(E, {i: new})


def apply_gen_sum(E: EPresentation, i: int, j: int) -> EPresentation:
    """E_i # E_j -> E_{l_i - l_j, e_i, d_i} # E_{l_j, e_j + e_i(2l_j - l_i - 1), d_i + d_j + (1 + l_i) e_i l_j}."""
    (l1, e1, d1), (l2, e2, d2) = E.factors[i], E.factors[j]
    if l2 % 2:
        raise PreconditionError("the shear identity needs an even lambda in the second slot")
    return _replace(E, {i: (l1 - l2, e1, d1),
                        j: (l2, e2 + e1 * (2 * l2 - l1 - 1), d1 + d2 + (1 + l1) * e1 * l2)})


def apply_mult_unit(E: EPresentation, i: int, j: int, a: int) -> EPresentation:
    """E_{l,e,d} # E_{0,0,0} -> E_{al, a^2 e, ad + C(a,2)e} # E_{0, -b^2 e - b l e, b d + C(b,2) e}, a^2 - 24b = 1."""
    if _canon(E.factors[j]) != (0, 0, 0):
        raise PreconditionError("unit multiplication needs an E_{0,0,0} partner")
    if (a * a - 1) % 24:
        raise PreconditionError("a must satisfy a^2 = 1 mod 24")
    b = (a * a - 1) // 24
    lam, eps, delta = E.factors[i]
    return _replace(E, {i: (a * lam, a * a * eps, a * delta + binom2(a) * eps),
                        j: (0, -b * b * eps - b * lam * eps, b * delta + binom2(b) * eps)})


def apply_e010(E: EPresentation, i: int, j: int) -> EPresentation:
    """E_{l,e,d} # E_{0,1,0} -> E_{l,e,d} # E_{0, 1 + e(-l-1), d}."""
    if _canon(E.factors[j]) != (0, 1, 0):
        raise PreconditionError("the identity needs an E_{0,1,0} partner")
    lam, eps, delta = E.factors[i]
    return _replace(E, {j: (0, 1 + eps * (-lam - 1), delta)})


def apply_permutation(E: EPresentation, perm: Sequence[int]) -> EPresentation:
    if sorted(perm) != list(range(E.rank)):
        raise PreconditionError("not a permutation of the slots")
    return EPresentation(tuple(E.factors[p] for p in perm))


# ---------------------------------------------------------------------------
# the derived two-factor law

def _law_T(A, c, cp, lam, s) -> int:
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    h = (A[0][1] * c[0][0] + A[1][1] * c[1][0], A[0][0] * c[0][1] + A[1][0] * c[1][1])
    d = (det * (A[1][1] * h[0] - A[1][0] * h[1]), det * (-A[0][1] * h[0] + A[0][0] * h[1]))
    t = sum((A[i][0] * c[i][1] + A[i][1] * c[i][0]) - 2 * (A[i][0] * cp[i][1] + A[i][1] * cp[i][0])
            + s[i] * A[i][0] * A[i][1] for i in range(2))
    return t + lam[0] * d[0] + lam[1] * d[1]


def law_apply(f1: Factor, f2: Factor, A, c, cp) -> tuple[Factor, Factor]:
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    if det not in (1, -1):
        raise PreconditionError("A must be unimodular")
    lam, s, r = (f1[0], f2[0]), (f1[1], f2[1]), (f1[2], f2[2])
    if _law_T(A, c, cp, lam, s) % 24:
        raise PreconditionError("(c, c') violates the cross-term condition")
    inv = ((det * A[1][1], -det * A[0][1]), (-det * A[1][0], det * A[0][0]))
    out = []
    for j in range(2):
        nl = inv[j][0] * lam[0] + inv[j][1] * lam[1]
        ns = sum((2 * A[i][j] + lam[i]) * c[i][j] - 4 * A[i][j] * cp[i][j] + s[i] * A[i][j] ** 2
                 for i in range(2))
        nr = sum((A[i][j] + lam[i]) * cp[i][j] + s[i] * binom2(A[i][j]) + r[i] * A[i][j] for i in range(2))
        out.append(_norm((nl, ns, nr)))
    return out[0], out[1]


def _unpack(x: Sequence[int]):
    return ((x[0], x[1]), (x[2], x[3])), ((x[4], x[5]), (x[6], x[7]))


def law_solutions(f1: Factor, f2: Factor, A, extra: int = 0):
    """A particular (c, c') solving the cross-term condition, plus up to ``extra``
    further solutions obtained from the kernel; empty if unsolvable."""
    lam, s = (f1[0], f2[0]), (f1[1], f2[1])
    zero = ((0, 0), (0, 0))
    base = _law_T(A, zero, zero, lam, s)
    coeffs = []
    for v in range(8):
        e = [0] * 8
        e[v] = 1
        c, cp = _unpack(e)
        coeffs.append(_law_T(A, c, cp, lam, s) - base)
    sol = _solve_linear_mod(coeffs, -base, 24)
    if sol is None:
        return []
    part, kernel = sol
    out = [_unpack(part)]
    for kv in kernel[:extra]:
        out.append(_unpack([(p + q) % 24 for p, q in zip(part, kv)]))
    return out


def _solve_linear_mod(coeffs: Sequence[int], rhs: int, mod: int):
    """x with coeffs . x = rhs (mod), by column reduction of [coeffs | mod]."""
    row = list(coeffs) + [mod]
    n = len(row)
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    while sum(1 for t in row if t) > 1:
        nz = [i for i in range(n) if row[i]]
        p = min(nz, key=lambda i: (abs(row[i]), i))
        for j in nz:
            if j != p:
                q = row[j] // row[p]
                row[j] -= q * row[p]
                for r in range(n):
                    V[r][j] -= q * V[r][p]
    p = next(i for i in range(n) if row[i])
    g = row[p]
    if rhs % g:
        return None
    part = [(V[r][p] * (rhs // g)) % mod for r in range(n - 1)]
    kernel = [[V[r][j] % mod for r in range(n - 1)] for j in range(n) if j != p]
    return part, kernel


def law_move(E: EPresentation, i: int, j: int, A, which: int = 0) -> EPresentation | None:
    """Apply the derived law to slots (i, j); None when the cross term cannot vanish."""
    sols = law_solutions(E.factors[i], E.factors[j], A, extra=which)
    if len(sols) <= which:
        return None
    c, cp = sols[which]
    f1, f2 = law_apply(E.factors[i], E.factors[j], A, c, cp)
    return _replace(E, {i: f1, j: f2})


# ---------------------------------------------------------------------------
# normal form

def _shear(E: EPresentation, i: int, j: int, m: int) -> EPresentation | None:
    """lambda_i -> lambda_i - m lambda_j, other data adjusted; None if blocked."""
    m %= 24
    if m == 0:
        return E
    if E.factors[j][0] % 2 == 0:
        for _ in range(m):
            E = apply_gen_sum(E, i, j)
        return E
    return law_move(E, i, j, ((1, m), (0, 1)))


def _reduce_lambdas(E: EPresentation) -> EPresentation:
    """Move all of the lambda-vector onto one slot with gcd(lambda, 24) = lambda_s."""
    lam_s = gcd(24, *[f[0] for f in E.factors])
    for _ in range(200):
        nz = [i for i, f in enumerate(E.factors) if f[0]]
        if len(nz) <= 1:
            return E
        j = min(nz, key=lambda i: (gcd(E.factors[i][0], 24), i))
        lj = E.factors[j][0]
        if gcd(lj, 24) == lam_s:
            i = next(x for x in nz if x != j)
            li = E.factors[i][0]
            new = None
            for m in range(24):
                if (li - m * lj) % 24 == 0:
                    new = _shear(E, i, j, m)
                    if new is not None:
                        break
            if new is None:
                raise AssertionError(f"no admissible shear clears slot {i} of {E.factors}")
            E = new
            continue
        # lower the smallest gcd by folding one slot into another
        floor = gcd(lj, 24)
        best = None
        for a in nz:
            for b in nz:
                if a == b:
                    continue
                for t in range(1, 24):
                    g = gcd(E.factors[a][0] - t * E.factors[b][0], 24)
                    if g < floor and (best is None or g < best[0]):
                        new = _shear(E, a, b, t)
                        if new is not None:
                            best = (g, new)
        if best is None:
            raise AssertionError(f"gcd reduction stalled at {E.factors}")
        E = best[1]
    raise AssertionError("lambda reduction did not terminate")


def _unit_for(lam: int, target: int) -> int:
    for a in range(1, 24, 2):
        if a % 3 and (a * lam) % 24 == target % 24:
            return a
    raise AssertionError(f"no unit sends {lam} to {target}")


def _scale_tail(E: EPresentation, t: int, p: int, lam_s: int) -> EPresentation:
    """Make lambda_t equal to lam_s using the lambda = 0 partner in slot p."""
    lam = E.factors[t][0]
    if lam == lam_s % 24:
        return E
    if (-lam) % 24 == lam_s % 24:
        return apply_rank1_move(E, t, 1)
    a = _unit_for(lam, lam_s)
    if _canon(E.factors[p]) == (0, 0, 0):
        E = _replace(E, {p: (0, 0, 0)})
        return apply_mult_unit(E, t, p, a)
    if lam % 2 == 0 and E.factors[t][1] % 2:
        E = apply_e010(_replace(E, {p: (0, 1, 0)}), t, p)
        return apply_mult_unit(_replace(E, {p: (0, 0, 0)}), t, p, a)
    b = (a * a - 1) // 24
    for which in range(9):
        new = law_move(E, t, p, ((a, b), (24, a)), which)
        if new is not None:
            return new
    raise AssertionError(f"unit scaling blocked at {E.factors}")


def normal_form(E: EPresentation) -> ENormalForm:
    lam_s, _ = stable_invariants(E)
    r = E.rank
    if r == 1:
        return ENormalForm(1, lam_s, 0, rank1_canonical(E.factors[0]))
    E = _reduce_lambdas(E)
    nz = [i for i, f in enumerate(E.factors) if f[0]]
    if nz and nz[0] != r - 1:
        perm = list(range(r))
        perm[nz[0]], perm[r - 1] = perm[r - 1], perm[nz[0]]
        E = apply_permutation(E, perm)
    E = _scale_tail(E, r - 1, r - 2, lam_s)
    # every other slot now has lambda = 0 and is E_{0,0,0} or E_{0,1,0}
    eps_hat = int(any(_canon(f)[1] for f in E.factors[:-1]))
    tail = _canon(E.factors[-1])
    assert tail[0] == lam_s, (tail, lam_s)
    if lam_s == 0:
        tail = (0, max(eps_hat, tail[1]), 0)
        eps_hat = 0
    elif lam_s % 2 == 0 and tail[1] % 2 == 1:
        eps_hat = 0
    elif lam_s % 2 == 0 and eps_hat:
        bridged = _bridge(tail)
        if bridged is not None:
            eps_hat, tail = 0, bridged
    return ENormalForm(r, lam_s, eps_hat, RankOneClass(*tail))


def _bridge(tail: Factor) -> Factor | None:
    """Try to trade E_{0,1,0} # E_{l,e,d} (e even) for E_{0,0,0} # E_{l,e',d'} with e' odd.

    Published moves only: move 1 on the tail, then three shears.  This
    succeeds exactly when l = 8.
    """
    if tail[0] % 2:
        return None
    E = EPresentation(((0, 1, 0), tail))
    E = apply_rank1_move(E, 1, 1)
    E = apply_gen_sum(E, 0, 1)
    E = apply_gen_sum(E, 1, 0)
    E = apply_gen_sum(E, 0, 1)
    (l0, s0, _), t = E.factors
    if l0 == 0 and s0 % 2 == 0 and _canon(t)[0] == tail[0] and t[1] % 2 == 1:
        return _canon(t)
    return None


def render(nf: ENormalForm) -> EPresentation:
    if nf.rank == 1:
        return EPresentation((nf.tail.as_tuple(),))
    fs = [(0, 0, 0)] * (nf.rank - 2) + [(0, nf.eps_hat, 0), nf.tail.as_tuple()]
    return EPresentation(tuple(fs))


def homotopy_equal(E1: EPresentation, E2: EPresentation) -> Equality:
    same = normal_form(E1).key() == normal_form(E2).key()
    return Equality.EQUAL if same else Equality.NOT_EQUAL


def shape_tuples(rank: int = 2) -> list[ENormalForm]:
    """Every normal form of the given rank >= 2, as listed by the classification."""
    out = []
    for lam_s in (0, 1, 2, 3, 4, 6, 8, 12):
        for c in table1()[lam_s]:
            out.append(ENormalForm(rank, lam_s, 0, c))
            if lam_s % 2 == 1 or (lam_s and c.eps % 2 == 0 and _bridge(c.as_tuple()) is None):
                out.append(ENormalForm(rank, lam_s, 1, c))
    return out


def theorem_shape_tuples(rank: int = 2) -> list[ENormalForm]:
    """The shapes as the classification theorem lists them, without the lambda_s = 8 bridge."""
    out = []
    for lam_s in (0, 1, 2, 3, 4, 6, 8, 12):
        for c in table1()[lam_s]:
            out.append(ENormalForm(rank, lam_s, 0, c))
            if lam_s % 2 == 1 or (lam_s and c.eps % 2 == 0):
                out.append(ENormalForm(rank, lam_s, 1, c))
    return out


# ---------------------------------------------------------------------------
# randomized move oracle

def random_published_move(E: EPresentation, rng: random.Random) -> EPresentation:
    """One randomly chosen published identity applied where it is defined."""
    r = E.rank
    for _ in range(20):
        kind = rng.randrange(6 if r > 1 else 1)
        if kind == 0:
            i = rng.randrange(r)
            mv = rng.randint(1, 3)
            return apply_rank1_move(E, i, mv, rng.randrange(1, 24))
        i, j = rng.sample(range(r), 2)
        if kind == 1 and E.factors[j][0] % 2 == 0:
            return apply_gen_sum(E, i, j)
        if kind == 2 and _canon(E.factors[j]) == (0, 0, 0):
            a = rng.choice((1, 5, 7, 11, 13, 17, 19, 23, 25, 29, 31, 35))
            return apply_mult_unit(_replace(E, {j: (0, 0, 0)}), i, j, a)
        if kind == 3 and _canon(E.factors[j]) == (0, 1, 0):
            return apply_e010(E, i, j)
        if kind == 4:
            perm = list(range(r))
            rng.shuffle(perm)
            return apply_permutation(E, perm)
        if kind == 5:
            return _replace(E, {i: RankOneClass(*_canon(E.factors[i])).as_tuple()})
    return E


def random_law_move(E: EPresentation, rng: random.Random) -> EPresentation:
    """A derived-law move on a random pair with a random small A; E itself if blocked."""
    if E.rank < 2:
        return E
    i, j = rng.sample(range(E.rank), 2)
    A = rng.choice((((1, 1), (0, 1)), ((1, 2), (0, 1)), ((1, 0), (1, 1)), ((1, 0), (2, 1)),
                    ((0, 1), (1, 0)), ((1, 0), (0, 1)), ((-1, 1), (0, 1)), ((2, 1), (1, 1))))
    new = law_move(E, i, j, A, which=rng.randrange(4))
    return E if new is None else new


def law_rank2_components():
    """Orbits of the derived law on pairs of rank-one classes.

    Generators: the swap, and for A in {I, S, S^2} (S the elementary shear)
    the particular cross-term solution together with each kernel-shifted
    solution.  Returns a dict mapping each pair of canonical classes to a
    component id.  Requires scipy; runs in about a minute.
    """
    import numpy as np
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    canon, members = _orbits()
    reps = sorted(members)
    rid = {rep: i for i, rep in enumerate(reps)}
    nc = len(reps)
    cls = np.zeros((24, 24, 3), dtype=np.int64)
    for x, rep in canon.items():
        cls[x] = rid[rep]
    grids = np.meshgrid(np.arange(24), np.arange(24), np.arange(24), np.arange(24),
                        np.arange(3), np.arange(3), indexing="ij")
    l1, l2, s1, s2, r1, r2 = [g.ravel() for g in grids]
    node = cls[l1, s1, r1] * nc + cls[l2, s2, r2]
    src, dst = [node], [cls[l2, s2, r2] * nc + cls[l1, s1, r1]]
    for A in (((1, 0), (0, 1)), ((1, 1), (0, 1)), ((1, 2), (0, 1))):
        det = 1
        inv = ((A[1][1], -A[0][1]), (-A[1][0], A[0][0]))
        table = np.zeros((24, 24, 24, 9, 8), dtype=np.int64)
        ok = np.zeros((24, 24, 24, 9), dtype=bool)
        for a1 in range(24):
            for a2 in range(24):
                for sv in range(24):
                    sols = law_solutions((a1, sv, 0), (a2, 0, 0), A, extra=8)
                    for w, (c, cp) in enumerate(sols):
                        table[a1, a2, sv, w] = [c[0][0], c[0][1], c[1][0], c[1][1],
                                                cp[0][0], cp[0][1], cp[1][0], cp[1][1]]
                        ok[a1, a2, sv, w] = True
        lam, s, r = (l1, l2), (s1, s2), (r1, r2)
        for w in range(9):
            valid = ok[l1, l2, s1, w]
            if not valid.any():
                continue
            X = table[l1, l2, s1, w]
            c = ((X[:, 0], X[:, 1]), (X[:, 2], X[:, 3]))
            cp = ((X[:, 4], X[:, 5]), (X[:, 6], X[:, 7]))
            new = []
            for j in range(2):
                nl = inv[j][0] * lam[0] + inv[j][1] * lam[1]
                ns = sum((2 * A[i][j] + lam[i]) * c[i][j] - 4 * A[i][j] * cp[i][j] + s[i] * A[i][j] ** 2
                         for i in range(2))
                nr = sum((A[i][j] + lam[i]) * cp[i][j] + s[i] * binom2(A[i][j]) + r[i] * A[i][j]
                         for i in range(2))
                new.append((nl % 24, ns % 24, nr % 3))
            tgt = cls[new[0]] * nc + cls[new[1]]
            src.append(node[valid])
            dst.append(tgt[valid])
        del det
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(nc * nc, nc * nc))
    _, labels = connected_components(graph, directed=False)
    return {(reps[x // nc], reps[x % nc]): int(labels[x]) for x in range(nc * nc)}


def law_merged_shapes(components=None, shapes=None) -> list[tuple[ENormalForm, ENormalForm]]:
    """Pairs of listed rank-2 shapes that the derived law places in one orbit.

    By default the shapes are those the classification theorem lists; the
    three lambda_s = 8 pairs it returns are the flagged counterexamples.
    """
    comps = law_rank2_components() if components is None else components
    seen: dict[int, ENormalForm] = {}
    merged = []
    for nf in (theorem_shape_tuples(2) if shapes is None else shapes):
        f = render(nf).factors
        cid = comps[(_canon(f[0]), _canon(f[1]))]
        if cid in seen:
            merged.append((seen[cid], nf))
        else:
            seen[cid] = nf
    return merged


def load_epresentation_dict(data) -> EPresentation:
    from .manifold import InputError
    if not isinstance(data, dict) or "factors" not in data:
        raise InputError("field 'factors': missing")
    fs = data["factors"]
    if not isinstance(fs, list) or not fs:
        raise InputError("field 'factors': expected a non-empty list")
    out = []
    for i, f in enumerate(fs):
        if not isinstance(f, dict):
            raise InputError(f"field 'factors[{i}]': expected an object")
        vals = []
        for key in ("lambda", "s", "r"):
            x = f.get(key)
            if not isinstance(x, int) or isinstance(x, bool):
                raise InputError(f"field 'factors[{i}].{key}': expected an integer")
            vals.append(x)
        out.append(tuple(vals))
    return EPresentation(tuple(out))


def load_epresentation(path: str) -> EPresentation:
    import json
    from .manifold import InputError
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return load_epresentation_dict(data)


def iter_factors(E: EPresentation) -> Iterable[RankOneClass]:
    return (RankOneClass(*f) for f in E.factors)
