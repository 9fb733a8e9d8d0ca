"""Linear symplectic forms on even-dimensional tori, in adapted blocks.

A form vanishing on a fixed Lagrangian plane l is, in a basis adapted to a
complementary pair (l, l′), the block matrix [[0, −Cᵀ], [C, D]] with C
invertible and D skew.  Integral shears [[I, B], [0, A]] act by congruence;
the solver below drives D towards 0 along that action, which is the
effective content of the density statement for split forms.  Everything
here is floating point except the exterior-square bridge at the bottom,
which is exact integer arithmetic.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateGram,
    DidNotConverge,
    DimensionMismatch,
    InvalidTolerance,
    NotComplementary,
    NotVanishingOnL,
)
from . import intlin
from .isometries import Isometry
from .lattice_core import QuadLattice, Sublattice

DET_TOL = 1e-10
VANISH_TOL = 1e-12
RELATION_TOL = 1e-12


def _as_float_matrix(m):
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("expected a square matrix")
    return a


class LinearSymplecticForm:
    """Nondegenerate skew 2n×2n real matrix; skewness is exact."""

    def __init__(self, matrix):
        a = _as_float_matrix(matrix)
        if a.shape[0] % 2 != 0:
            raise DimensionMismatch("symplectic forms live in even dimension")
        if not np.array_equal(a, -a.T):
            raise ValueError("matrix must be exactly skew-symmetric")
        if pfaffian(a) == 0.0:
            raise DegenerateGram("form is degenerate (zero Pfaffian)")
        self.matrix = a
        self.matrix.setflags(write=False)

    @property
    def dim(self):
        return self.matrix.shape[0]


class SplitBlockForm:
    """Adapted-block data (C, D): the form [[0, −Cᵀ], [C, D]]."""

    def __init__(self, c, d):
        c = _as_float_matrix(c)
        d = _as_float_matrix(d)
        if c.shape != d.shape:
            raise DimensionMismatch("C and D must share a size")
        if abs(np.linalg.det(c) - 1.0) > DET_TOL:
            raise ValueError("C must have determinant 1")
        if not np.array_equal(d, -d.T):
            raise ValueError("D must be exactly skew-symmetric")
        self.c = c
        self.d = d
        self.c.setflags(write=False)
        self.d.setflags(write=False)

    @property
    def n(self):
        return self.c.shape[0]

    def assembled(self):
        n = self.n
        out = np.zeros((2 * n, 2 * n))
        out[:n, n:] = -self.c.T
        out[n:, :n] = self.c
        out[n:, n:] = self.d
        return out


class IntegralShear:
    """Block matrix [[I, B], [0, A]] with integer blocks and det A = 1."""

    def __init__(self, b, a=None):
        self.b = tuple(tuple(int(x) for x in row) for row in b)
        n = len(self.b)
        if any(len(row) != n for row in self.b):
            raise DimensionMismatch("B must be square")
        if a is None:
            a = intlin.identity(n)
        self.a = tuple(tuple(int(x) for x in row) for row in a)
        if len(self.a) != n or any(len(row) != n for row in self.a):
            raise DimensionMismatch("A must match B in size")
        if intlin.det_bareiss([list(r) for r in self.a]) != 1:
            raise ValueError("A must have determinant 1")

    @property
    def n(self):
        return len(self.b)

    def is_pure_shear(self):
        return self.a == tuple(tuple(r) for r in intlin.identity(self.n))

    def assembled(self):
        n = self.n
        out = [[0] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            out[i][i] = 1
            for j in range(n):
                out[i][n + j] = self.b[i][j]
                out[n + i][n + j] = self.a[i][j]
        return out


def compose_shears(g: IntegralShear, h: IntegralShear) -> IntegralShear:
    prod = intlin.mat_mul(g.assembled(), h.assembled())
    n = g.n
    b = [row[n:] for row in prod[:n]]
    a = [row[n:] for row in prod[n:]]
    return IntegralShear(b, a)


def darboux(n) -> LinearSymplecticForm:
    """Block-diagonal sum of n standard 2×2 pairs; Pfaffian +1."""
    m = np.zeros((2 * n, 2 * n))
    for k in range(n):
        m[2 * k, 2 * k + 1] = 1.0
        m[2 * k + 1, 2 * k] = -1.0
    return LinearSymplecticForm(m)


def standard_lagrangian(n) -> Sublattice:
    """The plane spanned by the second vector of each Darboux pair."""
    rows = []
    for k in range(n):
        r = [0] * (2 * n)
        r[2 * k + 1] = 1
        rows.append(tuple(r))
    return Sublattice(tuple(rows))


def standard_complement(n) -> Sublattice:
    rows = []
    for k in range(n):
        r = [0] * (2 * n)
        r[2 * k] = 1
        rows.append(tuple(r))
    return Sublattice(tuple(rows))


def pfaffian(omega):
    """Pfaffian by recursive first-row expansion (4×4 closed form inlined)."""
    a = omega.matrix if isinstance(omega, LinearSymplecticForm) else np.array(omega, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("expected a square matrix")
    if not np.array_equal(a, -a.T):
        raise ValueError("pfaffian needs an exactly skew matrix")
    return _pf(a)


def _pf(a):
    m = a.shape[0]
    if m % 2 != 0:
        raise DimensionMismatch("odd-size skew matrices have no pfaffian")
    if m == 0:
        return 1.0
    if m == 2:
        return float(a[0, 1])
    if m == 4:
        return float(
            a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]
        )
    total = 0.0
    rest = list(range(1, m))
    for pos, j in enumerate(rest):
        keep = [k for k in rest if k != j]
        sign = -1.0 if pos % 2 else 1.0
        total += sign * a[0, j] * _pf(a[np.ix_(keep, keep)])
    return float(total)


def normalize_volume(omega) -> LinearSymplecticForm:
    """Rescales the form so its Pfaffian is exactly 1."""
    a = omega.matrix if isinstance(omega, LinearSymplecticForm) else np.array(omega, dtype=float)
    pf = pfaffian(a)
    if pf == 0.0:
        raise DegenerateGram("cannot normalize a degenerate form")
    n = a.shape[0] // 2
    if pf < 0 and n % 2 == 0:
        raise ValueError("negative Pfaffian cannot be rescaled to +1 here")
    lam = math.copysign(abs(pf) ** (-1.0 / n), pf)
    return LinearSymplecticForm(lam * a)


def is_lagrangian_subspace(omega, l: Sublattice, tol=VANISH_TOL) -> bool:
    a = omega.matrix if isinstance(omega, LinearSymplecticForm) else np.array(omega, dtype=float)
    if 2 * l.rank != a.shape[0]:
        raise DimensionMismatch("plane rank must be half the dimension")
    basis = np.array([list(r) for r in l.basis], dtype=float)
    pairings = basis @ a @ basis.T
    return bool(np.max(np.abs(pairings)) <= tol)


def _stacked(l, lprime):
    rows = [list(r) for r in l.basis] + [list(r) for r in lprime.basis]
    return rows


def to_blocks(omega, l: Sublattice, lprime: Sublattice) -> SplitBlockForm:
    """Reads off (C, D) in the basis adapted to the pair (l, l′)."""
    a = omega.matrix if isinstance(omega, LinearSymplecticForm) else np.array(omega, dtype=float)
    n = a.shape[0] // 2
    if l.rank != n or lprime.rank != n:
        raise DimensionMismatch("both planes must have half rank")
    stacked = _stacked(l, lprime)
    if abs(intlin.det_bareiss(stacked)) != 1:
        raise NotComplementary(
            "integral spans of the planes do not sum to the full lattice"
        )
    if not is_lagrangian_subspace(omega, l):
        raise NotVanishingOnL("form does not vanish on the first plane")
    s = np.array(stacked, dtype=float)
    adapted = s @ a @ s.T
    d = adapted[n:, n:]
    return SplitBlockForm(adapted[n:, :n], (d - d.T) / 2.0)


def from_blocks(f: SplitBlockForm, l: Sublattice, lprime: Sublattice) -> LinearSymplecticForm:
    """Reassembles the ambient form with prescribed adapted blocks."""
    stacked = _stacked(l, lprime)
    if abs(intlin.det_bareiss(stacked)) != 1:
        raise NotComplementary(
            "integral spans of the planes do not sum to the full lattice"
        )
    sinv = np.array(intlin.integer_inverse(stacked), dtype=float)
    m = sinv @ f.assembled() @ sinv.T
    return LinearSymplecticForm((m - m.T) / 2.0)


def act(g: IntegralShear, f: SplitBlockForm) -> SplitBlockForm:
    """Congruence action of the shear on the adapted blocks.

    Pure shears (A = I) use the displayed block formula
    D′ = D + (CB − (CB)ᵀ); a nontrivial A falls back to the dense
    congruence of the assembled matrices, split back into blocks.
    """
    if g.n != f.n:
        raise DimensionMismatch("shear size must match the form")
    b = np.array([list(r) for r in g.b], dtype=float)
    if g.is_pure_shear():
        cb = f.c @ b
        return SplitBlockForm(f.c, f.d + (cb - cb.T))
    asm = np.array(g.assembled(), dtype=float)
    m = asm.T @ f.assembled() @ asm
    n = f.n
    d = m[n:, n:]
    return SplitBlockForm(m[n:, :n], (d - d.T) / 2.0)


# ---------------------------------------------------------------------------
# lattice reduction helpers (plain float LLL + Babai nearest plane)


def _lll(rows, delta=0.99):
    """Lenstra–Lenstra–Lovász on float row vectors.

    Returns (reduced_rows, transform) with reduced = transform · rows and
    transform integer unimodular.
    """
    b = [np.array(r, dtype=float) for r in rows]
    k = len(b)
    u = [[1 if i == j else 0 for j in range(k)] for i in range(k)]

    def gso():
        star = []
        mu = [[0.0] * k for _ in range(k)]
        for i in range(k):
            v = b[i].copy()
            for j in range(i):
                denom = float(star[j] @ star[j])
                mu[i][j] = float(b[i] @ star[j]) / denom if denom else 0.0
                v = v - mu[i][j] * star[j]
            star.append(v)
        return star, mu

    i = 1
    star, mu = gso()
    while i < k:
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q != 0:
                b[i] = b[i] - q * b[j]
                u[i] = [x - q * y for x, y in zip(u[i], u[j])]
                star, mu = gso()
        norm_prev = float(star[i - 1] @ star[i - 1])
        norm_here = float(star[i] @ star[i])
        if norm_here >= (delta - mu[i][i - 1] ** 2) * norm_prev:
            i += 1
        else:
            b[i], b[i - 1] = b[i - 1], b[i]
            u[i], u[i - 1] = u[i - 1], u[i]
            star, mu = gso()
            i = max(i - 1, 1)
    return b, u


def _babai(reduced, transform, target):
    """Nearest-plane: integer coefficients (on the original basis) of a
    lattice vector close to target."""
    k = len(reduced)
    star = []
    for i in range(k):
        v = reduced[i].copy()
        for w in star:
            denom = float(w @ w)
            if denom:
                v = v - (float(reduced[i] @ w) / denom) * w
        star.append(v)
    t = np.array(target, dtype=float)
    coeffs = [0] * k
    for i in range(k - 1, -1, -1):
        denom = float(star[i] @ star[i])
        c = round(float(t @ star[i]) / denom) if denom else 0
        coeffs[i] = c
        t = t - c * reduced[i]
    out = [0] * k
    for i in range(k):
        if coeffs[i]:
            for j in range(k):
                out[j] += coeffs[i] * transform[i][j]
    return out


@dataclass(frozen=True)
class SolveResult:
    cprime: tuple
    b: tuple
    err: float
    rounds: int


def _skew_upper(m):
    n = m.shape[0]
    return np.array([m[i, j] for i in range(n) for j in range(i + 1, n)])


def _solve_b(cprime, d, mu):
    """Best integer B (via scaled-embedding CVP) for one weight μ."""
    n = cprime.shape[0]
    dirs = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n))
            e[i, j] = 1.0
            cb = cprime @ e
            dirs.append(_skew_upper(cb - cb.T))
    k = n * n
    rows = []
    for idx in range(k):
        rows.append(np.concatenate([mu * np.eye(k)[idx], dirs[idx] / mu]))
    target = np.concatenate([np.zeros(k), _skew_upper(d) / mu])
    reduced, transform = _lll(rows)
    coeffs = _babai(reduced, transform, target)
    b = np.array(coeffs, dtype=float).reshape((n, n))
    return [[int(x) for x in row] for row in b]


def approx_by_split_orbit(
    target: SplitBlockForm, eps, delta, budget=8, seed=0
) -> SolveResult:
    """Approximates (C, D) by a shear image of a split form (C′, 0).

    Each round perturbs C within delta (re-normalized to determinant 1)
    and walks a ladder of embedding weights, asking lattice reduction for
    an integer B with C′B − (C′B)ᵀ close to D.  The reported error is
    always recomputed from the returned data.  Terminates early once the
    incumbent error reaches eps; otherwise exhausts the budget and raises,
    carrying the best incumbent found.
    """
    if eps <= 0 or delta < 0:
        raise InvalidTolerance("need eps > 0 and delta >= 0")
    if budget < 1:
        raise InvalidTolerance("budget must be at least one round")
    c = target.c
    d = target.d
    n = target.n
    zero_b = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    as_tuple = lambda m: tuple(tuple(float(x) for x in row) for row in m)
    if not d.any():
        return SolveResult(as_tuple(c), zero_b, 0.0, 0)
    rng = np.random.default_rng(seed)
    best = None  # (err, b_flat, b, cprime, rounds)
    for round_no in range(1, budget + 1):
        if round_no == 1 or delta == 0:
            cprime = c
        else:
            for _ in range(32):
                pert = rng.uniform(-delta / 2, delta / 2, size=(n, n))
                cand = c + pert
                det = np.linalg.det(cand)
                if det <= 0:
                    continue
                cand = cand * det ** (-1.0 / n)
                if np.max(np.abs(cand - c)) <= delta:
                    cprime = cand
                    break
            else:
                cprime = c
        for mu in [10.0 ** (-e) for e in range(0, 10)]:
            b = _solve_b(cprime, d, mu)
            bm = np.array(b, dtype=float)
            cb = cprime @ bm
            err = float(np.max(np.abs((cb - cb.T) - d)))
            key = (err, tuple(x for row in b for x in row))
            if best is None or key < (best[0], best[1]):
                best = (err, key[1], b, cprime, round_no)
        if best[0] <= eps:
            return SolveResult(
                as_tuple(best[3]),
                tuple(tuple(r) for r in best[2]),
                best[0],
                best[4],
            )
    incumbent = SolveResult(
        as_tuple(best[3]), tuple(tuple(r) for r in best[2]), best[0], best[4]
    )
    raise DidNotConverge(
        "no shear image reached the requested accuracy within budget",
        incumbent=incumbent,
    )


@dataclass(frozen=True)
class GenericityReport:
    found: bool
    relation: tuple | None
    residual: float | None


def genericity_score(c, bound, residual_tol=RELATION_TOL) -> GenericityReport:
    """Searches for a small integer relation among the entries of C⁻¹.

    A found relation is hard evidence of rational dependence; absence is a
    heuristic pass at the given coefficient bound.  The search embeds the
    entries against a scaled identity and reads candidates off an
    LLL-reduced basis.
    """
    c = _as_float_matrix(c)
    if abs(np.linalg.det(c)) < 1e-300:
        raise ValueError("C is singular")
    if bound < 1:
        return GenericityReport(False, None, None)
    entries = np.linalg.inv(c).flatten()
    k = len(entries)
    scale = 1.0 / residual_tol
    rows = [
        np.concatenate([np.eye(k)[i], [scale * entries[i]]]) for i in range(k)
    ]
    reduced, transform = _lll(rows)
    best = None
    for i in range(k):
        m = transform[i]
        if not any(m):
            continue
        if max(abs(x) for x in m) > bound:
            continue
        residual = abs(float(np.dot(m, entries)))
        if best is None or residual < best[1]:
            best = (tuple(m), residual)
    if best is None:
        return GenericityReport(False, None, None)
    if best[1] <= residual_tol:
        return GenericityReport(True, best[0], best[1])
    return GenericityReport(False, best[0], best[1])


# ---------------------------------------------------------------------------
# exterior-square bridge (exact)

_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def wedge_gram() -> QuadLattice:
    """Rank-6 pairing of coordinate 2-wedges against the 4-volume."""
    gram = []
    for a in _PAIRS:
        row = []
        for b in _PAIRS:
            if set(a) & set(b):
                row.append(0)
            else:
                row.append(_perm_sign(a + b))
        gram.append(tuple(row))
    return QuadLattice(tuple(gram))


def wedge_square_action(g) -> Isometry:
    """Induced action on 2-wedges of a determinant-1 integer 4×4 matrix."""
    m = [[int(x) for x in row] for row in g]
    if len(m) != 4 or any(len(row) != 4 for row in m):
        raise DimensionMismatch("expected a 4×4 matrix")
    if intlin.det_bareiss(m) != 1:
        raise ValueError("matrix must have determinant 1")
    out = []
    for (k, l) in _PAIRS:
        row = []
        for (i, j) in _PAIRS:
            row.append(m[k][i] * m[l][j] - m[k][j] * m[l][i])
        out.append(tuple(row))
    return Isometry(tuple(out), wedge_gram())
