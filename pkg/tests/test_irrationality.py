import math
import random
from fractions import Fraction

import pytest

from helpers import engineered_k3_vector
from latorb import intlin
from latorb.errors import NotOrthogonal, PrecisionError
from latorb.irrationality import (
    CERTIFIED,
    INCONCLUSIVE,
    REFUTED,
    UNIT,
    IrrationalityCertificate,
    Symbol,
    SymbolicRealVector,
    certified_norm_sign,
    certify_orthoisotropic_irrational,
    find_isotropic_orthogonal,
    from_columns,
    is_u_orthoirrational,
    rational_constraint_lattice,
    rational_vector,
    scale,
    symbolic_inner,
    transform,
)
from latorb.isometries import compose, gu_lattice_generators, identity_isometry
from latorb.lattice_core import gram_column, inner, is_isotropic, t4_model

T4 = t4_model()
SQRT2 = Symbol("sqrt2", math.sqrt(2))
SQRT3 = Symbol("sqrt3", math.sqrt(3))
X1 = (1, 0, 0, 0, 0, 0)

# y = x2 + sqrt2 * y2, the running two-symbol example
Y_IRR = from_columns((UNIT, SQRT2), [[0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0]])


def brute_force_isotropic_orthogonal(L, y, height):
    """Independent oracle: scan the full coordinate box."""
    import itertools

    out = []
    for v in itertools.product(range(-height, height + 1), repeat=L.rank):
        if not any(v):
            continue
        if next(x for x in v if x != 0) < 0:
            continue
        if intlin.vector_gcd(list(v)) != 1:
            continue
        if any(c != 0 for c in symbolic_inner(L, y, v)):
            continue
        if inner(L, v, v) != 0:
            continue
        out.append(tuple(v))
    return sorted(out)


def test_symbol_validation():
    with pytest.raises(ValueError):
        Symbol("bad", float("inf"))
    with pytest.raises(ValueError):
        SymbolicRealVector((SQRT2,), ((1,),))  # unit symbol must lead
    with pytest.raises(ValueError):
        SymbolicRealVector((UNIT, Symbol("1", 2.0)), ((1, 1),))
    with pytest.raises(Exception):
        SymbolicRealVector((UNIT, SQRT2), ((1,),))  # ragged row


def test_symbolic_inner_examples():
    assert symbolic_inner(T4, Y_IRR, (0, 0, 0, 1, 0, 0)) == [1, 0]
    assert symbolic_inner(T4, Y_IRR, (1, 0, 0, 0, 0, 0)) == [0, 0]
    assert symbolic_inner(T4, Y_IRR, (0, 0, 1, 0, 0, 0)) == [0, 1]
    yr = rational_vector((0, 1, 0, 0, 0, 0))
    v = (1, 2, 0, 0, 0, 0)
    assert symbolic_inner(T4, yr, v) == [inner(T4, (0, 1, 0, 0, 0, 0), v)]


def test_rational_constraint_lattice():
    K = rational_constraint_lattice(T4, Y_IRR)
    assert K.rank == 4
    assert K.basis == (
        (1, 0, 0, 0, 0, 0),
        (0, 1, 0, 0, 0, 0),
        (0, 0, 0, 0, 1, 0),
        (0, 0, 0, 0, 0, 1),
    )
    K1 = rational_constraint_lattice(T4, rational_vector(X1))
    assert K1.rank == 5
    zero = SymbolicRealVector((UNIT,), tuple((0,) for _ in range(6)))
    assert rational_constraint_lattice(T4, zero).rank == 6


def test_certified_norm_sign():
    assert certified_norm_sign(T4, Y_IRR) == 1  # (y,y) = 2*sqrt2
    neg = rational_vector((1, -1, 0, 0, 0, 0))
    assert certified_norm_sign(T4, neg) == -1
    # all pairing coefficients vanish: a certified zero, not a straddle
    assert certified_norm_sign(T4, rational_vector(X1)) == 0
    # nonzero coefficients that cancel numerically are a genuine straddle
    col = [0, 0, 1, 1, 0, 0]
    cancel = from_columns((UNIT, Symbol("one", 1.0)), [col, [-x for x in col]])
    with pytest.raises(PrecisionError):
        certified_norm_sign(T4, cancel)


def test_is_u_orthoirrational_examples():
    assert is_u_orthoirrational(T4, X1, Y_IRR) is True
    # (1 + sqrt2)(x2 + y2): positive norm but rank-1 symbol matrix
    col = [0, 0, 1, 1, 0, 0]
    y = from_columns((UNIT, SQRT2), [col, col])
    assert is_u_orthoirrational(T4, X1, y) is False
    # (1 + sqrt2)*x2 is null, but the decision is still rank-1 → false:
    # the vector lies on the plane through u and x2
    isotropic_y = from_columns((UNIT, SQRT2),
                               [[0, 0, 1, 0, 0, 0], [0, 0, 1, 0, 0, 0]])
    assert is_u_orthoirrational(T4, X1, isotropic_y) is False
    # any rational vector is caught by the plane through itself
    yr = rational_vector((0, 0, 1, 1, 0, 0))
    assert is_u_orthoirrational(T4, X1, yr) is False
    with pytest.raises(NotOrthogonal):
        is_u_orthoirrational(T4, (0, 0, 1, 0, 0, 0), Y_IRR)


def test_find_isotropic_orthogonal():
    found = find_isotropic_orthogonal(T4, Y_IRR, 1)
    assert (1, 0, 0, 0, 0, 0) in found
    assert (0, 1, 0, 0, 0, 0) in found
    assert found == brute_force_isotropic_orthogonal(T4, Y_IRR, 1)
    assert find_isotropic_orthogonal(T4, Y_IRR, 0) == []
    # a definite constraint lattice has no isotropic vectors at all
    y = from_columns(
        (UNIT, SQRT2, SQRT3),
        [[1, 1, 0, 0, 0, 0], [0, 0, 1, 1, 0, 0], [0, 0, 0, 0, 1, 1]],
    )
    assert find_isotropic_orthogonal(T4, y, 3) == []


def test_find_isotropic_orthogonal_vs_brute_force():
    rng = random.Random(30)
    for _ in range(10):
        cols = [[rng.randint(-2, 2) for _ in range(6)] for _ in range(2)]
        if not any(cols[0]) or not any(cols[1]):
            continue
        y = from_columns((UNIT, SQRT2), cols)
        for h in (1, 2):
            assert find_isotropic_orthogonal(T4, y, h) == \
                brute_force_isotropic_orthogonal(T4, y, h)


def test_membership_in_constraint_lattice():
    K = rational_constraint_lattice(T4, Y_IRR)
    rows = [list(b) for b in K.basis]
    for u in find_isotropic_orthogonal(T4, Y_IRR, 2):
        stacked = rows + [list(u)]
        assert intlin.rational_rank(stacked) == K.rank
        # integral membership, not merely rational span
        assert intlin.hnf_basis(stacked) == intlin.hnf_basis(rows)


def test_certificate_validation():
    with pytest.raises(ValueError):
        IrrationalityCertificate("Wrong", None, 4, 1)
    with pytest.raises(ValueError):
        IrrationalityCertificate(CERTIFIED, None, 4, 1)
    cert = IrrationalityCertificate(INCONCLUSIVE, None, 4, 1)
    assert "Q-linearly independent" in cert.assumption


def test_certify_inconclusive_two_symbol():
    cert = certify_orthoisotropic_irrational(T4, Y_IRR, 1)
    assert cert.verdict == INCONCLUSIVE
    assert cert.perp_rank == 4  # rank(L) - 2: the rank certificate is mute
    assert cert.height_bound_used == 1


def test_certify_refuted_rational():
    y = rational_vector((0, 0, 1, 1, 0, 0))
    cert = certify_orthoisotropic_irrational(T4, y, 1)
    assert cert.verdict == REFUTED
    u = cert.witness_u
    assert is_isotropic(T4, u)
    assert symbolic_inner(T4, y, u) == [0]
    assert is_u_orthoirrational(T4, u, y) is False  # witness re-checks


def test_certify_inconclusive_no_isotropic():
    y = from_columns(
        (UNIT, SQRT2, SQRT3),
        [[1, 1, 0, 0, 0, 0], [0, 0, 1, 1, 0, 0], [0, 0, 0, 0, 1, 1]],
    )
    cert = certify_orthoisotropic_irrational(T4, y, 2)
    assert cert.verdict == INCONCLUSIVE
    assert cert.witness_u is None
    assert cert.perp_rank == 3


def test_certify_k3_rank_certificate():
    K3, y = engineered_k3_vector()
    assert certified_norm_sign(K3, y) == 1
    cert = certify_orthoisotropic_irrational(K3, y, 1)
    assert cert.verdict == CERTIFIED
    assert cert.perp_rank == 7
    assert cert.perp_rank <= K3.rank - 3
    assert cert.witness_u is not None
    assert is_isotropic(K3, cert.witness_u)
    assert all(c == 0 for c in symbolic_inner(K3, y, cert.witness_u))


def test_verdict_invariant_under_stabilizer():
    gens = gu_lattice_generators(T4, X1)
    rng = random.Random(31)
    base = is_u_orthoirrational(T4, X1, Y_IRR)
    for _ in range(10):
        g = identity_isometry(T4)
        for _ in range(rng.randint(1, 3)):
            g = compose(g, rng.choice(gens))
        moved = transform(g, Y_IRR)
        assert is_u_orthoirrational(T4, X1, moved) == base


def test_scaling_invariance():
    for factor in (2, Fraction(3, 2), Fraction(1, 7)):
        y = scale(Y_IRR, factor)
        assert is_u_orthoirrational(T4, X1, y) is True
        cert = certify_orthoisotropic_irrational(T4, y, 1)
        assert cert.verdict == INCONCLUSIVE
    yr = scale(rational_vector((0, 0, 1, 1, 0, 0)), Fraction(5, 3))
    assert certify_orthoisotropic_irrational(T4, yr, 1).verdict == REFUTED


def test_transform_matches_matrix_action():
    gens = gu_lattice_generators(T4, X1)
    g = gens[0]
    moved = transform(g, Y_IRR)
    m = [list(r) for r in g.matrix]
    for j in range(2):
        assert moved.column(j) == intlin.mat_vec(m, Y_IRR.column(j))
