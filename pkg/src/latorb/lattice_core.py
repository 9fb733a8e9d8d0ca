"""Integral quadratic lattices with exact Gram algebra.

A lattice is held as its Gram matrix; vectors are integer coordinate tuples
in the implied basis.  Everything is exact — no floats.  Provides the
standard even unimodular models (hyperbolic plane, negated E8, and the two
rank-6/rank-22 direct sums used throughout), Hermite/Smith-based sublattice
calculus, and constructive hyperbolic splitting off an isotropic vector.
"""

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from . import intlin
from .errors import (
    DegenerateGram,
    DimensionMismatch,
    NoHyperbolicSplit,
    NotIsotropic,
    NotPrimitive,
    NotSaturated,
)


class Signature(NamedTuple):
    p: int
    q: int


@dataclass(frozen=True)
class QuadLattice:
    """Nondegenerate symmetric integer bilinear form on Z^rank."""

    gram: tuple

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError("gram matrix must be symmetric")
        if n and intlin.det_bareiss([list(r) for r in g]) == 0:
            raise DegenerateGram("gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)


@dataclass(frozen=True)
class Sublattice:
    """Sublattice given by an independent integral basis (rows)."""

    basis: tuple

    def __post_init__(self):
        b = tuple(tuple(int(x) for x in row) for row in self.basis)
        object.__setattr__(self, "basis", b)
        if b:
            if len({len(row) for row in b}) != 1:
                raise ValueError("basis vectors must share a length")
            if intlin.rational_rank([list(r) for r in b]) != len(b):
                raise ValueError("basis vectors must be linearly independent")

    @property
    def rank(self) -> int:
        return len(self.basis)


def _check_vec(L: QuadLattice, v) -> list:
    v = [int(x) for x in v]
    if len(v) != L.rank:
        raise DimensionMismatch(
            f"vector length {len(v)} does not match lattice rank {L.rank}"
        )
    return v


def inner(L: QuadLattice, v, w) -> int:
    """Exact pairing v·gram·w."""
    v, w = _check_vec(L, v), _check_vec(L, w)
    gw = intlin.mat_vec([list(r) for r in L.gram], w)
    return sum(a * b for a, b in zip(v, gw))


def gram_column(L: QuadLattice, v) -> list:
    """Pairings of v against the basis vectors, i.e. gram·v."""
    return intlin.mat_vec([list(r) for r in L.gram], _check_vec(L, v))


def determinant(L: QuadLattice) -> int:
    return intlin.det_bareiss([list(r) for r in L.gram])


def signature(L: QuadLattice) -> Signature:
    return Signature(*intlin.signature([list(r) for r in L.gram]))


def is_even(L: QuadLattice) -> bool:
    return all(L.gram[i][i] % 2 == 0 for i in range(L.rank))


def is_unimodular(L: QuadLattice) -> bool:
    return abs(determinant(L)) == 1


def is_primitive(L: QuadLattice, v) -> bool:
    v = _check_vec(L, v)
    if not any(v):
        raise ValueError("zero vector has no primitivity")
    return intlin.vector_gcd(v) == 1


def is_isotropic(L: QuadLattice, v) -> bool:
    return inner(L, v, v) == 0


def height(v) -> int:
    return max(abs(int(x)) for x in v) if len(v) else 0


def divisor(L: QuadLattice, u) -> int:
    """Positive generator of the pairing ideal {(u, x) : x in the lattice}."""
    u = _check_vec(L, u)
    if not any(u):
        raise ValueError("zero vector has no divisor")
    return intlin.vector_gcd(gram_column(L, u))


def direct_sum(*lattices: QuadLattice) -> QuadLattice:
    total = sum(L.rank for L in lattices)
    g = [[0] * total for _ in range(total)]
    off = 0
    for L in lattices:
        for i in range(L.rank):
            for j in range(L.rank):
                g[off + i][off + j] = L.gram[i][j]
        off += L.rank
    return QuadLattice(tuple(tuple(r) for r in g))


def hyperbolic() -> QuadLattice:
    return QuadLattice(((0, 1), (1, 0)))


# Negated E8 Gram in the usual Cartan numbering: chain 1-3-4-5-6-7-8 with
# node 2 hanging off node 4.  Validated (even, unimodular, definite) in the
# test suite rather than trusted.
_E8_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))


def e8_minus() -> QuadLattice:
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = -2
    for a, b in _E8_EDGES:
        g[a - 1][b - 1] = g[b - 1][a - 1] = 1
    return QuadLattice(tuple(tuple(r) for r in g))


def span4() -> QuadLattice:
    return QuadLattice(((4,),))


def t4_model() -> QuadLattice:
    return direct_sum(hyperbolic(), hyperbolic(), hyperbolic())


def k3_model() -> QuadLattice:
    return direct_sum(
        hyperbolic(), hyperbolic(), hyperbolic(), e8_minus(), e8_minus()
    )


def sublattice_gram(L: QuadLattice, S: Sublattice) -> tuple:
    """Gram matrix of the form restricted to S's basis."""
    b = [list(_check_vec(L, v)) for v in S.basis]
    g = [list(r) for r in L.gram]
    return tuple(
        tuple(sum(vi * x for vi, x in zip(v, intlin.mat_vec(g, w))) for w in b)
        for v in b
    )


def orthogonal_sublattice(L: QuadLattice, vectors: Iterable) -> Sublattice:
    """Saturated sublattice of everything pairing to zero with the inputs."""
    rows = [gram_column(L, v) for v in vectors]
    if not rows:
        return Sublattice(tuple(tuple(r) for r in intlin.identity(L.rank)))
    return Sublattice(tuple(tuple(r) for r in intlin.kernel_basis(rows)))


def is_saturated(L: QuadLattice, S: Sublattice) -> bool:
    if S.rank == 0:
        return True
    cols = intlin.transpose([list(_check_vec(L, v)) for v in S.basis])
    return all(d == 1 for d in intlin.elementary_divisors(cols))


def saturation(L: QuadLattice, S: Sublattice) -> Sublattice:
    """Smallest saturated sublattice containing S (same rational span)."""
    if S.rank == 0:
        return S
    cols = intlin.transpose([list(_check_vec(L, v)) for v in S.basis])
    _, p, _ = intlin.snf(cols)
    pinv = intlin.integer_inverse(p)
    k = S.rank
    sat_rows = [[pinv[i][j] for i in range(L.rank)] for j in range(k)]
    return Sublattice(tuple(tuple(r) for r in intlin.hnf_basis(sat_rows)))


def extend_to_unimodular_basis(S: Sublattice):
    """Completes a saturated basis to a determinant-±1 square matrix.

    Output columns: the input basis first, then a complement; realizes the
    transitivity of the integral linear group on saturated sublattices of a
    fixed rank.
    """
    if S.rank == 0:
        raise ValueError("cannot infer ambient rank from an empty basis")
    m = len(S.basis[0])
    cols = intlin.transpose([list(v) for v in S.basis])
    d, p, _ = intlin.snf(cols)
    k = S.rank
    if any(d[i][i] != 1 for i in range(k)):
        raise NotSaturated("basis does not span a saturated sublattice")
    pinv = intlin.integer_inverse(p)
    out = [[cols[i][j] for j in range(k)] + [pinv[i][j] for j in range(k, m)]
           for i in range(m)]
    det = intlin.det_bareiss(out)
    if abs(det) != 1:
        raise AssertionError("unimodular completion failed")
    if det == -1 and m > k:
        for i in range(m):
            out[i][m - 1] = -out[i][m - 1]
    return tuple(tuple(r) for r in out)


def split_hyperbolic(L: QuadLattice, u):
    """Splits an integral hyperbolic plane off an even unimodular lattice.

    Finds s with (u,s) = 1 by extended gcd over the basis pairings and sets
    z = s − ((s,s)/2)·u, so (z,z) = 0 and (u,z) = 1.  Returns (z, Lprime)
    with Lprime = {u,z}^⊥ — even, unimodular, signature dropped by (1,1);
    the combined basis {u, z} ∪ Lprime.basis generates the whole lattice.
    """
    u = _check_vec(L, u)
    if not is_even(L) or not is_unimodular(L):
        raise NoHyperbolicSplit(
            "hyperbolic splitting requires an even unimodular lattice"
        )
    if inner(L, u, u) != 0:
        raise NotIsotropic("u must be isotropic")
    if not is_primitive(L, u):
        raise NotPrimitive("u must be primitive")
    g, coeffs = intlin.xgcd_vector(gram_column(L, u))
    if g != 1:
        raise NotPrimitive("u pairs non-trivially modulo its divisor")
    s = coeffs
    ss = inner(L, s, s)
    z = [si - (ss // 2) * ui for si, ui in zip(s, u)]
    assert inner(L, u, z) == 1 and inner(L, z, z) == 0
    lprime = orthogonal_sublattice(L, [u, z])
    return tuple(z), lprime
