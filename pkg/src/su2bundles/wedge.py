"""Elements of pi_7 of a wedge of 4-spheres and their pushforward.

An element is written in a basis alpha_1..alpha_k of pi_4 as

    sum_{i<j} w_ij [alpha_i, alpha_j] + sum_i s_i alpha_i o nu + sum_i t_i alpha_i o nu'

with w_ij, s_i integers and t_i in Z/12.  A basis change is given by an
integer matrix A with alpha_i = sum_j A_ij alpha'_j.  Expansion rules:

    [alpha'_p, alpha'_p] = 2 nu_p + nu'_p
    (a iota) o nu        = a^2 nu + C(a,2) nu'
    (x + y) o nu         = x o nu + y o nu + [x, y]   (Hopf invariant one)
    (x + y) o nu'        = x o nu' + y o nu'
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import Matrix, PreconditionError, binom2, transpose, matmul, as_matrix


@dataclass(frozen=True)
class Pi7Wedge:
    k: int
    whitehead: tuple[int, ...]  # w_ij for i < j, row-major
    nu: tuple[int, ...]
    nu_prime: tuple[int, ...]

    def __post_init__(self):
        k = self.k
        if k < 1:
            raise PreconditionError("rank must be positive")
        if len(self.whitehead) != k * (k - 1) // 2 or len(self.nu) != k or len(self.nu_prime) != k:
            raise PreconditionError("coefficient blocks do not match the rank")
        object.__setattr__(self, "whitehead", tuple(int(x) for x in self.whitehead))
        object.__setattr__(self, "nu", tuple(int(x) for x in self.nu))
        object.__setattr__(self, "nu_prime", tuple(int(x) % 12 for x in self.nu_prime))

    def w(self, i: int, j: int) -> int:
        """Whitehead coefficient of [alpha_i, alpha_j] (0-based, i != j)."""
        if i == j:
            raise PreconditionError("diagonal Whitehead terms live in the nu blocks")
        if i > j:
            i, j = j, i
        return self.whitehead[_upper_index(self.k, i, j)]

    @classmethod
    def from_gram(cls, gram: Sequence[Sequence[int]], l: Sequence[int]) -> "Pi7Wedge":
        k = len(gram)
        w = tuple(gram[i][j] for i in range(k) for j in range(i + 1, k))
        return cls(k, w, tuple(gram[i][i] for i in range(k)), tuple(l))

    @classmethod
    def zero(cls, k: int) -> "Pi7Wedge":
        return cls(k, (0,) * (k * (k - 1) // 2), (0,) * k, (0,) * k)


def _upper_index(k: int, i: int, j: int) -> int:
    return i * k - i * (i + 1) // 2 + (j - i - 1)


def gram_of(L: Pi7Wedge) -> Matrix:
    k = L.k
    return tuple(tuple(L.nu[i] if i == j else L.w(i, j) for j in range(k)) for i in range(k))


def pushforward(A: Matrix, L: Pi7Wedge) -> Pi7Wedge:
    """Rewrite L in the basis alpha' where alpha_i = sum_j A[i][j] alpha'_j.

    A may be rectangular (k x m); the result then lives in a wedge of m spheres.
    """
    k = L.k
    if len(A) != k:
        raise PreconditionError("matrix rows must match the rank of L")
    m = len(A[0])
    pairs = [(i, j, L.w(i, j)) for i in range(k) for j in range(i + 1, k) if L.w(i, j)]
    w_new = []
    for p in range(m):
        for q in range(p + 1, m):
            acc = sum(w * (A[i][p] * A[j][q] + A[i][q] * A[j][p]) for i, j, w in pairs)
            acc += sum(L.nu[i] * A[i][p] * A[i][q] for i in range(k))
            w_new.append(acc)
    s_new, t_new = [], []
    for p in range(m):
        cross = sum(w * A[i][p] * A[j][p] for i, j, w in pairs)
        s_new.append(2 * cross + sum(L.nu[i] * A[i][p] ** 2 for i in range(k)))
        t_new.append(cross + sum(L.nu[i] * binom2(A[i][p]) + L.nu_prime[i] * A[i][p]
                                 for i in range(k)))
    return Pi7Wedge(m, tuple(w_new), tuple(s_new), tuple(t_new))


def stable_vector(L: Pi7Wedge) -> tuple[int, ...]:
    return tuple((s - 2 * t) % 24 for s, t in zip(L.nu, L.nu_prime))


def compose_class(n: Sequence[int], L: Pi7Wedge) -> tuple[int, int]:
    """(nu, nu') coefficients of psi o L, where psi sends alpha_i to n_i iota."""
    if len(n) != L.k:
        raise PreconditionError("class length must equal the rank")
    k = L.k
    n = [int(x) for x in n]
    nu = sum(L.nu[i] * n[i] * n[i] for i in range(k))
    nu += 2 * sum(L.w(i, j) * n[i] * n[j] for i in range(k) for j in range(i + 1, k))
    nup = sum(L.w(i, j) * n[i] * n[j] for i in range(k) for j in range(i + 1, k))
    nup += sum(L.nu[i] * binom2(n[i]) + L.nu_prime[i] * n[i] for i in range(k))
    return nu, nup % 12


def congruent_gram(A: Matrix, G: Matrix) -> Matrix:
    """A^T G A, the independent target for the gram-congruence oracle."""
    return matmul(matmul(transpose(A), G), A)


__all__ = ["Pi7Wedge", "gram_of", "pushforward", "stable_vector", "compose_class",
           "congruent_gram", "as_matrix"]
