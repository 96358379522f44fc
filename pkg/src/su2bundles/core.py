"""Exact integer and residue arithmetic.

Matrices are tuples of row tuples of Python ints.  Python integers are
arbitrary precision, so elimination never wraps; ``ArithmeticOverflow`` is
kept only for callers that ask for a bounded-width check.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

Matrix = tuple[tuple[int, ...], ...]

MODULI = (2, 3, 4, 8, 12, 24)
DIVISORS_24 = (1, 2, 3, 4, 6, 8, 12, 24)


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class ResourceLimitError(RuntimeError):
    """A search would exceed its configured state budget."""


class ArithmeticOverflow(ArithmeticError):
    """An entry left the permitted integer width."""


@dataclass(frozen=True, order=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus not in MODULI:
            raise PreconditionError(f"unsupported modulus {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def __add__(self, other):
        return Residue(self.value + _val(other, self.modulus), self.modulus)

    def __sub__(self, other):
        return Residue(self.value - _val(other, self.modulus), self.modulus)

    def __mul__(self, other):
        return Residue(self.value * _val(other, self.modulus), self.modulus)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __int__(self):
        return self.value


def _val(x, modulus):
    if isinstance(x, Residue):
        if x.modulus != modulus:
            raise PreconditionError("residue moduli differ")
        return x.value
    return int(x)


def binom2(a: int) -> int:
    """a(a-1)/2, extended to negative a (so binom2(-1) == 1)."""
    return a * (a - 1) // 2


def identity(k: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(k)) for i in range(k))


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def det(m: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for i in range(n - 1):
        if a[i][i] == 0:
            for r in range(i + 1, n):
                if a[r][i]:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * a[i][i] - a[r][i] * a[i][c]) // prev
        prev = a[i][i]
    return sign * a[n - 1][n - 1]


def is_unimodular(m: Matrix) -> bool:
    return len(m) > 0 and all(len(r) == len(m) for r in m) and abs(det(m)) == 1


def inverse_unimodular(m: Matrix) -> Matrix:
    """Exact inverse of a unimodular matrix via the adjugate-free route of SNF."""
    if not is_unimodular(m):
        raise PreconditionError("matrix is not unimodular")
    u, d, v = smith_normal_form(m)
    # U M V = D with D = diag(+-1), so M^-1 = V D U
    return matmul(matmul(v, d), u)


def _check_width(x: int, bits: int | None):
    if bits is not None and x.bit_length() >= bits:
        raise ArithmeticOverflow(f"entry {x} exceeds {bits}-bit range")


def smith_normal_form(m: Matrix, bits: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U*M*V = D diagonal, d_i | d_{i+1}, U and V unimodular.

    Pivot choice is the entry of smallest nonzero absolute value.  ``bits``
    enables a width check on every intermediate entry.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def row_op(dst, src, q):  # row dst -= q * row src
        if q:
            a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def col_op(dst, src, q):
        if q:
            for r in a:
                r[dst] -= q * r[src]
            for r in v:
                r[dst] -= q * r[src]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    for t in range(min(rows, cols)):
        while True:
            cand = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not cand:
                break
            _, pi, pj = min(cand)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = a[t][t]
            done = True
            for i in range(t + 1, rows):
                row_op(i, t, a[i][t] // p)
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                col_op(j, t, a[t][j] // p)
                if a[t][j]:
                    done = False
            if bits is not None:
                for r in a:
                    for x in r:
                        _check_width(x, bits)
            if not done:
                continue
            # divisibility: fold in any entry the pivot does not divide
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            row_op(t, bad[0], -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return as_matrix(u), as_matrix(a), as_matrix(v)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def complete_primitive_to_basis(n: Sequence[int], k: int | None = None) -> Matrix:
    """Unimodular k x k matrix whose last row is the primitive vector n."""
    n = [int(x) for x in n]
    k = len(n) if k is None else k
    if len(n) != k or k == 0:
        raise PreconditionError("vector length must equal k >= 1")
    g = 0
    for x in n:
        g = gcd(g, x)
    if g != 1:
        raise PreconditionError(f"vector {tuple(n)} is not primitive")
    # column ops reduce n to e_k; the inverse transformation has last row n
    vec = list(n)
    ops = []  # (dst, src, q): column dst -= q * column src, or ("swap", i, j) / ("neg", i)
    while sum(1 for x in vec if x) > 1:
        nz = [i for i in range(k) if vec[i]]
        p = min(nz, key=lambda i: abs(vec[i]))
        for j in nz:
            if j != p:
                q = vec[j] // vec[p]
                vec[j] -= q * vec[p]
                ops.append((j, p, q))
    p = next(i for i in range(k) if vec[i])
    if p != k - 1:
        vec[p], vec[k - 1] = vec[k - 1], vec[p]
        ops.append(("swap", p, k - 1))
    if vec[k - 1] == -1:
        vec[k - 1] = 1
        ops.append(("neg", k - 1, 0))
    # n * W = e_k with W the product of ops; hence e_k * W^-1 = n
    w = [list(r) for r in identity(k)]
    for op in ops:
        if op[0] == "swap":
            _, i, j = op
            for r in w:
                r[i], r[j] = r[j], r[i]
        elif op[0] == "neg":
            for r in w:
                r[op[1]] = -r[op[1]]
        else:
            dst, src, q = op
            for r in w:
                r[dst] -= q * r[src]
    a = inverse_unimodular(as_matrix(w))
    assert list(a[-1]) == n
    return a


def random_unimodular(k: int, seed: int, move_count: int) -> Matrix:
    if k < 1:
        raise PreconditionError("k must be positive")
    rng = random.Random(seed)
    a = [list(r) for r in identity(k)]
    for _ in range(move_count):
        if k == 1 or rng.random() < 0.15:
            i = rng.randrange(k)
            a[i] = [-x for x in a[i]]
            continue
        i, j = rng.sample(range(k), 2)
        q = rng.choice((-2, -1, 1, 2))
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
    return as_matrix(a)


def gcd_with_modulus(values: Iterable, modulus: int = 24) -> int:
    """gcd of the values and the modulus; the all-zero case is reported as 0."""
    g = modulus
    for x in values:
        g = gcd(g, int(x))
    return 0 if g == modulus else g


def crt_pair(a: int, m: int, b: int, n: int) -> int:
    """The unique x mod m*n with x = a (m), x = b (n); m, n coprime."""
    g, s, _ = _ext_gcd(m, n)
    if g != 1:
        raise PreconditionError("moduli are not coprime")
    return (a + (b - a) * s * m) % (m * n)
