"""3-connected 8-dimensional Poincare duality complexes via their attaching map."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import Any, Sequence

from .core import Matrix, PreconditionError, det, gcd_with_modulus, is_unimodular
from .wedge import Pi7Wedge, gram_of, pushforward, stable_vector


class Parity(str, Enum):
    EVEN = "Even"
    ODD = "Odd"


class InputError(ValueError):
    """Malformed presentation data; the message names the offending field."""


@dataclass(frozen=True)
class CohomologyClass4:
    n: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(x) for x in self.n))

    @property
    def primitive(self) -> bool:
        g = 0
        for x in self.n:
            g = gcd(g, x)
        return g == 1


@dataclass(frozen=True)
class ManifoldPresentation:
    L: Pi7Wedge
    G: Matrix = field(init=False)

    def __post_init__(self):
        G = gram_of(self.L)
        if abs(det(G)) != 1:
            raise PreconditionError(f"intersection form has determinant {det(G)}, not +-1")
        object.__setattr__(self, "G", G)

    @property
    def k(self) -> int:
        return self.L.k

    @property
    def l(self) -> tuple[int, ...]:
        return self.L.nu_prime

    @classmethod
    def from_gram(cls, G: Sequence[Sequence[int]], l: Sequence[int]) -> "ManifoldPresentation":
        k = len(G)
        if any(len(r) != k for r in G):
            raise PreconditionError("Gram matrix must be square")
        if any(G[i][j] != G[j][i] for i in range(k) for j in range(k)):
            raise PreconditionError("Gram matrix must be symmetric")
        if len(l) != k:
            raise PreconditionError("l must have k entries")
        return cls(Pi7Wedge.from_gram(G, l))

    def to_json(self) -> dict:
        return {"k": self.k, "G": [list(r) for r in self.G], "l": list(self.l)}


def parity(M: ManifoldPresentation) -> Parity:
    return Parity.EVEN if all(M.G[i][i] % 2 == 0 for i in range(M.k)) else Parity.ODD


def sigma(M: ManifoldPresentation) -> int:
    return gcd_with_modulus(stable_vector(M.L))


def tau(M: ManifoldPresentation, psi) -> int:
    n = psi.n if isinstance(psi, CohomologyClass4) else tuple(psi)
    if len(n) != M.k:
        raise PreconditionError("class length must equal k")
    return sum(a * b for a, b in zip(n, stable_vector(M.L))) % 24


def is_stably_trivial(M: ManifoldPresentation) -> bool:
    return not any(stable_vector(M.L))


def change_basis(M: ManifoldPresentation, A: Matrix) -> ManifoldPresentation:
    if len(A) != M.k or not is_unimodular(A):
        raise PreconditionError("basis change must be a unimodular k x k matrix")
    return ManifoldPresentation(pushforward(A, M.L))


def self_intersection(M: ManifoldPresentation, n: Sequence[int]) -> int:
    k = M.k
    return sum(M.G[i][j] * n[i] * n[j] for i in range(k) for j in range(k))


def presentation_from_dict(data: Any) -> ManifoldPresentation:
    if not isinstance(data, dict):
        raise InputError("top level: expected a JSON object")
    for key in ("k", "G", "l"):
        if key not in data:
            raise InputError(f"field '{key}': missing")
    k = data["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise InputError("field 'k': expected a positive integer")
    G = _int_matrix(data["G"], k, "G")
    l = data["l"]
    if not isinstance(l, list) or len(l) != k or not all(_is_int(x) for x in l):
        raise InputError(f"field 'l': expected {k} integers")
    if any(G[i][j] != G[j][i] for i in range(k) for j in range(k)):
        raise InputError("field 'G': matrix is not symmetric")
    if "whitehead_override" in data:
        W = _int_matrix(data["whitehead_override"], k, "whitehead_override")
        bad = [(i, j) for i in range(k) for j in range(k) if W[i][j] != W[j][i]]
        if bad:
            raise InputError(f"field 'whitehead_override': entry {bad[0]} breaks symmetry")
        clash = [(i, j) for i in range(k) for j in range(i + 1, k) if W[i][j] != G[i][j]]
        if clash:
            raise InputError(f"field 'whitehead_override': entry {clash[0]} disagrees with G")
    try:
        return ManifoldPresentation.from_gram(G, l)
    except PreconditionError as exc:
        raise InputError(f"field 'G': {exc}") from None


def load_presentation(path: str) -> ManifoldPresentation:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return presentation_from_dict(data)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _int_matrix(rows, k, name) -> list[list[int]]:
    if not isinstance(rows, list) or len(rows) != k:
        raise InputError(f"field '{name}': expected {k} rows")
    for i, r in enumerate(rows):
        if not isinstance(r, list) or len(r) != k or not all(_is_int(x) for x in r):
            raise InputError(f"field '{name}': row {i} must hold {k} integers")
    return [list(r) for r in rows]
