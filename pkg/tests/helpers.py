"""Shared builders for the test suite."""

import math
from fractions import Fraction

from latorb import intlin
from latorb.irrationality import UNIT, Symbol, from_columns
from latorb.lattice_core import gram_column, inner, k3_model


def random_primitive_isotropic(rng, L, height_cap=5):
    """Small primitive isotropic vector via the leading hyperbolic block.

    With u = x1 + b·y1 + w and w supported past the first plane,
    (u,u) = 2b + (w,w); b = −(w,w)/2 lands on the cone and the leading 1
    keeps u primitive.  Heights stay within the cap by rejection.
    """
    n = L.rank
    while True:
        w = [0, 0] + [rng.choice((-1, 0, 0, 0, 1)) for _ in range(n - 2)]
        ww = inner(L, w, w)
        if abs(ww // 2) <= height_cap:
            u = list(w)
            u[0] = 1
            u[1] = -ww // 2
            return tuple(u)


_SQUAREFREE = (2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22)


def engineered_k3_vector():
    """Symbolic vector over the rank-22 model whose exact orthogonal
    sublattice is a fixed rank-7 sublattice containing isotropic vectors.

    The sublattice is spanned by the first two hyperbolic planes and three
    root vectors of the definite block; the symbolic coefficients run over
    a basis of its orthogonal complement, weighted so the norm is
    comfortably positive.  The square roots of distinct squarefree
    integers used as symbols genuinely are Q-linearly independent with 1,
    so the caller contract holds, not just formally.
    """
    K3 = k3_model()
    span_rows = []
    for i in (0, 1, 2, 3, 6, 7, 8):
        r = [0] * 22
        r[i] = 1
        span_rows.append(r)
    perp = intlin.kernel_basis([gram_column(K3, v) for v in span_rows])
    assert len(perp) == 15
    x3 = [0] * 22
    x3[4] = 1
    y3 = [0] * 22
    y3[5] = 1
    drop = perp.index(x3)
    others = [row for i, row in enumerate(perp) if i != drop]
    assert y3 in others  # the unit column and y3 recover the dropped x3
    unit_col = [10 * (a + b) for a, b in zip(x3, y3)]
    symbols = [UNIT] + [
        Symbol(f"sqrt{t}", math.sqrt(t) / 10) for t in _SQUAREFREE
    ]
    columns = [unit_col] + [[Fraction(x) for x in row] for row in others]
    return K3, from_columns(symbols, columns)
