"""Integral isometries of quadratic lattices.

Eichler transvections, identity-component membership, stabilizer-shape
predicates, and a constructive reduction mapping any primitive isotropic
vector to any other (two orthogonal hyperbolic planes are required, as in
the rank-6 and rank-22 models).  Everything is exact; the only group
elements ever manufactured here are words in transvections, plus explicit
reflections used for orientation repair.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import intlin
from .errors import (
    DimensionMismatch,
    NoHyperbolicSplit,
    NoOrientationFix,
    NotIsotropic,
    NotPrimitive,
)
from .lattice_core import (
    QuadLattice,
    Sublattice,
    extend_to_unimodular_basis,
    gram_column,
    inner,
    is_even,
    is_isotropic,
    is_primitive,
    split_hyperbolic,
)


@dataclass(frozen=True)
class Isometry:
    """Integral isometry of a quadratic lattice, acting by matrix × column."""

    matrix: tuple
    lattice: QuadLattice

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        n = self.lattice.rank
        if len(m) != n or any(len(row) != n for row in m):
            raise DimensionMismatch("matrix does not match the lattice rank")
        g = [list(r) for r in self.lattice.gram]
        mm = [list(r) for r in m]
        mt = intlin.transpose(mm)
        if not intlin.mat_eq(intlin.mat_mul(intlin.mat_mul(mt, g), mm), g):
            raise ValueError("matrix does not preserve the bilinear form")
        # the Gram identity forces det^2 = 1; keep the check as a tripwire
        assert abs(intlin.det_bareiss(mm)) == 1

    @property
    def det(self):
        return intlin.det_bareiss([list(r) for r in self.matrix])


def identity_isometry(L: QuadLattice) -> Isometry:
    return Isometry(tuple(tuple(r) for r in intlin.identity(L.rank)), L)


def apply(g: Isometry, v):
    if len(v) != g.lattice.rank:
        raise DimensionMismatch("vector length does not match the lattice")
    return tuple(intlin.mat_vec([list(r) for r in g.matrix], list(v)))


def compose(g: Isometry, h: Isometry) -> Isometry:
    """g ∘ h — h acts first."""
    if g.lattice != h.lattice:
        raise DimensionMismatch("isometries act on different lattices")
    m = intlin.mat_mul([list(r) for r in g.matrix], [list(r) for r in h.matrix])
    return Isometry(tuple(tuple(r) for r in m), g.lattice)


def invert(g: Isometry) -> Isometry:
    m = intlin.integer_inverse([list(r) for r in g.matrix])
    return Isometry(tuple(tuple(r) for r in m), g.lattice)


def eichler_transvection(L: QuadLattice, e, a) -> Isometry:
    """Unipotent isometry x ↦ x + (x,e)a − (x,a)e − ½(a,a)(x,e)e.

    Needs (e,e) = 0, (e,a) = 0 and an even lattice, so the correction term
    is integral.  Fixes e; inverse is the transvection at (e, −a).
    """
    if not is_even(L):
        raise ValueError("transvections need an even lattice")
    e = list(e)
    a = list(a)
    if inner(L, e, e) != 0:
        raise NotIsotropic("e must be isotropic")
    if inner(L, e, a) != 0:
        raise ValueError("a must pair to zero with e")
    ge = gram_column(L, e)
    ga = gram_column(L, a)
    half_aa = inner(L, a, a) // 2
    n = L.rank
    cols = []
    for j in range(n):
        col = [0] * n
        col[j] = 1
        for i in range(n):
            col[i] += ge[j] * a[i] - ga[j] * e[i] - half_aa * ge[j] * e[i]
        cols.append(col)
    return Isometry(tuple(zip(*cols)), L)


@lru_cache(maxsize=None)
def _positive_frame(L: QuadLattice):
    """Orthogonal rational basis of a maximal positive subspace, with norms."""
    basis = intlin.positive_basis([list(r) for r in L.gram])
    g = [list(r) for r in L.gram]
    norms = []
    for v in basis:
        gv = intlin.mat_vec(g, v)
        norms.append(sum(x * y for x, y in zip(gv, v)))
    return basis, norms


def is_in_so_plus(g: Isometry) -> bool:
    """Whether g preserves the orientation of a maximal positive subspace.

    Projects the image of an orthogonal positive basis P back onto P and
    takes the sign of the determinant, all in exact rational arithmetic.
    Inputs of determinant −1 are rejected.
    """
    if g.det != 1:
        raise ValueError("orientation test requires determinant +1")
    basis, norms = _positive_frame(g.lattice)
    if not basis:
        return True
    gram = [list(r) for r in g.lattice.gram]
    m = [list(r) for r in g.matrix]
    proj = []
    for v in basis:
        gv = intlin.mat_vec(m, v)
        ggv = intlin.mat_vec(gram, gv)
        proj.append(
            [
                sum(x * y for x, y in zip(ggv, p)) / nrm
                for p, nrm in zip(basis, norms)
            ]
        )
    d = 1
    # fraction-free elimination is overkill at these sizes; Gauss over Q
    mat = [row[:] for row in intlin.transpose(proj)]
    n = len(mat)
    sign = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if mat[r][c] != 0), None)
        if piv is None:
            return False  # degenerate projection: cannot preserve orientation
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            sign = -sign
        d = d * mat[c][c]
        inv = Fraction(1) / mat[c][c]
        for r in range(c + 1, n):
            if mat[r][c] != 0:
                f = mat[r][c] * inv
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[c])]
    return sign * d > 0


def reflection(L: QuadLattice, a) -> Isometry:
    """x ↦ x − 2(x,a)/(a,a) · a; integral whenever (a,a) divides 2(x,a)."""
    a = list(a)
    aa = inner(L, a, a)
    if aa == 0:
        raise NotIsotropic("cannot reflect in an isotropic vector")
    ga = gram_column(L, a)
    n = L.rank
    cols = []
    for j in range(n):
        col = [0] * n
        col[j] = 1
        for i in range(n):
            num = 2 * ga[j] * a[i]
            if num % aa != 0:
                raise ValueError("reflection is not integral at this vector")
            col[i] -= num // aa
        cols.append(col)
    return Isometry(tuple(zip(*cols)), L)


class _Frame:
    """Two orthogonal hyperbolic planes (e1,f1), (e2,f2) plus the remainder.

    The column matrix [e1 f1 e2 f2 | rest] is a basis of the lattice; tinv
    recovers coordinates of any vector in that basis.
    """

    __slots__ = ("e1", "f1", "e2", "f2", "rest", "tinv")

    def __init__(self, e1, f1, e2, f2, rest, tinv):
        self.e1, self.f1, self.e2, self.f2 = e1, f1, e2, f2
        self.rest = rest
        self.tinv = tinv


@lru_cache(maxsize=None)
def _hyperbolic_frame(L: QuadLattice) -> _Frame:
    n = L.rank
    e1 = None
    for i in range(n):
        if L.gram[i][i] == 0:
            e1 = tuple(1 if j == i else 0 for j in range(n))
            break
    if e1 is None:
        raise NoHyperbolicSplit("no isotropic basis vector to split at")
    f1, comp = split_hyperbolic(L, e1)
    if comp.rank < 2:
        raise NoHyperbolicSplit("lattice has no second hyperbolic plane")
    inner_gram = QuadLattice(
        tuple(
            tuple(inner(L, v, w) for w in comp.basis) for v in comp.basis
        )
    )
    j = next((k for k in range(comp.rank) if inner_gram.gram[k][k] == 0), None)
    if j is None:
        raise NoHyperbolicSplit("no isotropic vector in the split complement")
    e2c = tuple(1 if k == j else 0 for k in range(comp.rank))
    f2c, comp2 = split_hyperbolic(inner_gram, e2c)

    def to_ambient(coords):
        return tuple(
            sum(c * b[i] for c, b in zip(coords, comp.basis)) for i in range(n)
        )

    e2 = to_ambient(e2c)
    f2 = to_ambient(f2c)
    rest = tuple(to_ambient(c) for c in comp2.basis)
    cols = [e1, f1, e2, f2, *rest]
    t = [[cols[j][i] for j in range(n)] for i in range(n)]
    tinv = intlin.integer_inverse(t)
    return _Frame(e1, f1, e2, f2, rest, tuple(tuple(r) for r in tinv))


class _Reduction:
    """Accumulates a word of transvections driving a vector to frame.e1."""

    def __init__(self, L, frame, t):
        self.L = L
        self.fr = frame
        self.t = tuple(t)
        self.word = identity_isometry(L)

    def coords(self):
        c = intlin.mat_vec([list(r) for r in self.fr.tinv], list(self.t))
        return c[0], c[1], c[2], c[3], c[4:]

    def emit(self, e, a):
        g = eichler_transvection(self.L, e, a)
        self.t = apply(g, self.t)
        self.word = compose(g, self.word)

    # The four elementary moves act on the 2×2 coefficient matrix
    # M = [[α, −γ], [δ, β]] of t over (e1, f1) × (e2, f2):
    def l_up(self, k):  # M ← [[1,k],[0,1]]·M
        self.emit(self.fr.e2, tuple(k * x for x in self.fr.e1))

    def l_low(self, k):  # M ← [[1,0],[k,1]]·M
        self.emit(self.fr.f1, tuple(k * x for x in self.fr.f2))

    def r_up(self, k):  # M ← M·[[1,k],[0,1]]
        self.emit(self.fr.e2, tuple(k * x for x in self.fr.f1))

    def r_low(self, k):  # M ← M·[[1,0],[k,1]]
        self.emit(self.fr.e1, tuple(k * x for x in self.fr.f2))

    def swap_left(self):  # M ← [[0,1],[−1,0]]·M
        self.l_up(1)
        self.l_low(-1)
        self.l_up(1)

    def swap_right(self):  # M ← M·[[0,1],[−1,0]]
        self.r_up(1)
        self.r_low(-1)
        self.r_up(1)

    def rest_pairings(self):
        return [inner(self.L, self.t, r) for r in self.fr.rest]

    def rest_combination(self, coeffs):
        n = self.L.rank
        return tuple(
            sum(c * r[i] for c, r in zip(coeffs, self.fr.rest))
            for i in range(n)
        )

    def run(self):
        al, be, ga, de, _ = self.coords()
        if al == be == ga == de == 0:
            # t lies in the plane-orthogonal remainder; pull it towards e1
            # with a pure translation (the e1-pairing is zero, so no
            # quadratic correction appears)
            d, coeffs = intlin.xgcd_vector(self.rest_pairings())
            assert d == 1  # unimodularity: primitive vectors pair onto 1
            self.emit(self.fr.e1, self.rest_combination([-c for c in coeffs]))
        self.dance()
        al, be, ga, de, _ = self.coords()
        if al != 1:
            # fold the remainder divisor into the plane coefficients, then
            # rerun the euclidean dance; primitivity forces gcd 1 overall
            d, coeffs = intlin.xgcd_vector(self.rest_pairings())
            assert d > 0
            self.emit(self.fr.e2, self.rest_combination(coeffs))
            self.dance()
            al, be, ga, de, _ = self.coords()
        assert al == 1 and ga == 0 and de == 0
        w = tuple(
            x - al * e - be * f
            for x, e, f in zip(self.t, self.fr.e1, self.fr.f1)
        )
        self.emit(self.fr.f1, tuple(-x for x in w))
        assert self.t == self.fr.e1
        return self.word

    def dance(self):
        """Euclidean reduction of M to [[g,0],[0,*]] with g = gcd > 0."""
        while True:
            al, be, ga, de, _ = self.coords()
            if de != 0:
                if al == 0 or abs(de) < abs(al):
                    self.swap_left()
                else:
                    self.l_low(-(de // al))
                continue
            if ga != 0:
                m01 = -ga
                if al == 0 or abs(m01) < abs(al):
                    self.swap_right()
                else:
                    self.r_up(-(m01 // al))
                continue
            if al == 0:
                if be != 0:
                    self.swap_left()  # rotate β into the working corner
                    continue
                # whole plane part vanished mid-dance: cannot happen for a
                # nonzero gcd, which every euclidean move preserves
                raise NotPrimitive("zero vector cannot be reduced")
            if be % al != 0:
                self.r_low(1)  # re-expose β to the euclidean loop
                continue
            if al < 0:
                self.swap_left()
                self.swap_left()  # left −1: negates α and β
                continue
            return


def map_isotropic(L: QuadLattice, u, v) -> Isometry:
    """Integral isometry in the identity component sending u to v.

    Requires two orthogonal hyperbolic-plane summands (as in the rank-6
    and rank-22 models).  Both vectors are reduced to a common frame
    vector by words in Eichler transvections; the result is the second
    word's inverse composed with the first.  Transvection words always
    land in the identity component, so the orientation repair below is a
    tripwire rather than an expected path.
    """
    for t in (u, v):
        if len(t) != L.rank:
            raise DimensionMismatch("vector length does not match the lattice")
        if not is_isotropic(L, t):
            raise NotIsotropic("endpoints must be isotropic")
        if not is_primitive(L, t):
            raise NotPrimitive("endpoints must be primitive")
    frame = _hyperbolic_frame(L)
    gu = _Reduction(L, frame, u).run()
    gv = _Reduction(L, frame, v).run()
    g = compose(invert(gv), gu)
    assert apply(g, u) == tuple(v)
    if g.det == 1 and is_in_so_plus(g):
        return g
    g = _orientation_repair(L, frame, g, tuple(v))
    return g


def _orientation_repair(L, frame, g, v):
    """Post-compose a determinant-+1 orientation swap fixing v, if one exists."""
    plus = [
        tuple(a + b for a, b in zip(frame.e1, frame.f1)),
        tuple(a + b for a, b in zip(frame.e2, frame.f2)),
    ]
    minus = [
        tuple(a - b for a, b in zip(frame.e1, frame.f1)),
        tuple(a - b for a, b in zip(frame.e2, frame.f2)),
    ]
    for a in plus:
        for b in minus:
            if inner(L, a, v) == 0 and inner(L, b, v) == 0:
                h = compose(reflection(L, a), reflection(L, b))
                fixed = compose(h, g)
                if fixed.det == 1 and is_in_so_plus(fixed):
                    return fixed
    raise NoOrientationFix(
        "no orientation-correcting isometry fixes the target vector"
    )


@dataclass(frozen=True)
class AdaptedBasis:
    """Ordered integral basis of u^⊥ ∩ Λ whose last vector is u."""

    vectors: tuple
    u: tuple

    def __post_init__(self):
        if not self.vectors or tuple(self.vectors[-1]) != tuple(self.u):
            raise ValueError("adapted basis must end at u")


def adapted_basis(L: QuadLattice, u) -> AdaptedBasis:
    u = tuple(u)
    if not is_primitive(L, u):
        raise NotPrimitive("u must be primitive")
    ker = intlin.kernel_basis([gram_column(L, u)])
    # coordinates of u in the kernel basis: integral and primitive because
    # the kernel is saturated and u is primitive
    kt = intlin.transpose(ker)
    coords = _solve_overdetermined(kt, list(u))
    square = extend_to_unimodular_basis(Sublattice((tuple(coords),)))
    # rows of the transpose form a Z-basis of coordinate space starting at
    # the u-row; rotate it to the end
    change = intlin.transpose([list(r) for r in square])
    new_rows = [
        tuple(sum(c * k for c, k in zip(row, col)) for col in zip(*ker))
        for row in change
    ]
    ordered = tuple(new_rows[1:]) + (new_rows[0],)
    assert ordered[-1] == u
    return AdaptedBasis(ordered, u)


def _solve_overdetermined(a, b):
    """Exact solution of a·x = b for a tall full-column-rank integer matrix."""
    rows = len(a)
    cols = len(a[0])
    idx = []
    acc = []
    for i in range(rows):
        if len(idx) == cols:
            break
        if intlin.rational_rank(acc + [a[i]]) > len(idx):
            acc.append(a[i])
            idx.append(i)
    sol = intlin.rational_solve([a[i] for i in idx], [b[i] for i in idx])
    out = []
    for x in sol:
        assert x.denominator == 1
        out.append(int(x))
    assert intlin.mat_vec(a, out) == list(b)
    return out


def _vector_matches(g, y):
    """Exact g(y) = y for integer vectors or symbolic real vectors."""
    m = [list(r) for r in g.matrix]
    if hasattr(y, "coeffs"):
        for col in _symbol_columns(y):
            if intlin.mat_vec(m, col) != col:
                return False
        return True
    y = list(y)
    return intlin.mat_vec(m, y) == y


def _symbol_columns(y):
    return [list(col) for col in zip(*y.coeffs)]


def _difference_in_span(g, y, u):
    """g(y) − y ∈ Span{u}, checked per symbol for symbolic vectors."""
    m = [list(r) for r in g.matrix]
    cols = _symbol_columns(y) if hasattr(y, "coeffs") else [list(y)]
    for col in cols:
        diff = [a - b for a, b in zip(intlin.mat_vec(m, col), col)]
        if not _is_multiple(diff, u):
            return False
    return True


def _is_multiple(vec, u):
    ratio = None
    for a, b in zip(vec, u):
        if b == 0:
            if a != 0:
                return False
            continue
        r = Fraction(a) / Fraction(b)
        if ratio is None:
            ratio = r
        elif r != ratio:
            return False
    return True


def is_in_gu(g: Isometry, u) -> bool:
    """Stabilizer of u inside the identity component."""
    if apply(g, u) != tuple(u):
        return False
    return g.det == 1 and is_in_so_plus(g)


def is_in_hy(g: Isometry, u, y) -> bool:
    """Simultaneous stabilizer of u and of y (y may carry symbols)."""
    return is_in_gu(g, u) and _vector_matches(g, y)


def is_in_ky(g: Isometry, u, y) -> bool:
    """Stabilizer of u moving y only along u.

    Membership forces setwise preservation of y^⊥ ∩ u^⊥: for x there,
    (gx, u) = (x, u) = 0 and (gx, y) = (x, g⁻¹y) = (x, y ∓ cu) = 0.
    """
    return is_in_gu(g, u) and _difference_in_span(g, y, u)


def is_in_unipotent_radical(g: Isometry, basis: AdaptedBasis) -> bool:
    """Block shape [[I, 0], [*, 1]] on u^⊥ in an adapted basis.

    Basis-free reading: g fixes u and (g − 1) pushes all of u^⊥ ∩ Λ into
    Z·u.  That is exactly what the displayed shape encodes, so the check
    does not depend on which adapted basis was supplied.
    """
    u = basis.u
    if apply(g, u) != tuple(u):
        return False
    m = [list(r) for r in g.matrix]
    for w in basis.vectors[:-1]:
        diff = [a - b for a, b in zip(intlin.mat_vec(m, list(w)), w)]
        if not _is_multiple(diff, u):
            return False
        # integrality of the multiplier comes free: all entries are integers
    return True


def gu_lattice_generators(L: QuadLattice, u):
    """Finite generating set inside the stabilizer of u.

    Two families: transvections at u itself (one per basis vector of
    u^⊥ ∩ Λ), and transvections supported on the orthogonal complement of
    the hyperbolic plane split off at u, extended by the identity.  The
    list is deliberately rich but makes no claim of generating the full
    stabilizer.
    """
    u = tuple(u)
    if not is_isotropic(L, u):
        raise NotIsotropic("u must be isotropic")
    if not is_primitive(L, u):
        raise NotPrimitive("u must be primitive")
    out = []
    seen = set()
    ident = tuple(tuple(r) for r in intlin.identity(L.rank))

    def push(g):
        if g.matrix != ident and g.matrix not in seen:
            seen.add(g.matrix)
            out.append(g)

    for a in intlin.kernel_basis([gram_column(L, u)]):
        push(eichler_transvection(L, u, a))
    z, comp = split_hyperbolic(L, u)
    cg = [[inner(L, v, w) for w in comp.basis] for v in comp.basis]
    for i, e in enumerate(comp.basis):
        if cg[i][i] != 0:
            continue
        for j, a in enumerate(comp.basis):
            if i != j and cg[i][j] == 0:
                push(eichler_transvection(L, e, a))
    for g in out:
        assert is_in_gu(g, u)
    return out
