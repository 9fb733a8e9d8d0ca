"""Exact integer and rational linear algebra on plain nested lists.

Everything here is arbitrary precision (Python ints, fractions.Fraction);
no floating point.  Matrices are lists of rows.  These are the primitives
behind the lattice layer: canonical Hermite/Smith forms, integer kernels,
exact inertia, and rational elimination.
"""

from fractions import Fraction
from math import gcd

from .errors import DegenerateGram


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m):
    return [list(col) for col in zip(*m)] if m else []


def mat_mul(a, b):
    if not a or not b:
        return []
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m, v):
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def mat_eq(a, b):
    return len(a) == len(b) and all(list(ra) == list(rb) for ra, rb in zip(a, b))


def det_bareiss(m):
    """Determinant of a square integer matrix, fraction-free."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rational_solve(a, b):
    """Solve a·x = b exactly for square a; raises ValueError when singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def rational_inverse(a):
    n = len(a)
    cols = [rational_solve(a, [1 if i == j else 0 for i in range(n)]) for j in range(n)]
    return transpose(cols)


def integer_inverse(a):
    """Inverse of a unimodular integer matrix, returned over the integers."""
    inv = rational_inverse(a)
    out = []
    for row in inv:
        irow = []
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            irow.append(int(x))
        out.append(irow)
    return out


def rational_rank(m):
    if not m:
        return 0
    a = [[Fraction(x) for x in row] for row in m]
    rows, cols = len(a), len(a[0])
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][col]
        a[rank] = [x * inv for x in a[rank]]
        for r in range(rows):
            if r != rank and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def xgcd(a, b):
    """Returns (g, x, y) with g = gcd(a,b) >= 0 and x*a + y*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def xgcd_vector(vals):
    """Greedy left-to-right extended gcd: (g, coeffs) with sum(c*v) = g >= 0.

    Keeps earlier coefficients untouched whenever the running gcd already
    divides the next entry, so the combination stays as short as possible.
    """
    g = 0
    coeffs = []
    for v in vals:
        if g != 0 and v % g == 0:
            coeffs.append(0)
            continue
        g2, x, y = xgcd(g, v)
        coeffs = [c * x for c in coeffs] + [y]
        g = g2
    return g, coeffs


def vector_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def row_hnf(m):
    """Canonical row-style Hermite normal form.

    Returns (h, u) with h = u·m, u unimodular; pivots positive, entries above
    each pivot reduced into [0, pivot), zero rows last.
    """
    if not m:
        return [], []
    h = [list(row) for row in m]
    nrows, ncols = len(h), len(h[0])
    u = identity(nrows)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if h[i][c] != 0), None)
        if piv is None:
            continue
        h[r], h[piv] = h[piv], h[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, nrows):
            if h[i][c] == 0:
                continue
            g, x, y = xgcd(h[r][c], h[i][c])
            p, q = h[r][c] // g, h[i][c] // g
            h[r], h[i] = (
                [x * a + y * b for a, b in zip(h[r], h[i])],
                [-q * a + p * b for a, b in zip(h[r], h[i])],
            )
            u[r], u[i] = (
                [x * a + y * b for a, b in zip(u[r], u[i])],
                [-q * a + p * b for a, b in zip(u[r], u[i])],
            )
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            f = h[i][c] // h[r][c]
            if f != 0:
                h[i] = [a - f * b for a, b in zip(h[i], h[r])]
                u[i] = [a - f * b for a, b in zip(u[i], u[r])]
        r += 1
    return h, u


def hnf_basis(rows):
    """Canonical basis (HNF rows) of the lattice spanned by integer rows."""
    h, _ = row_hnf(rows)
    return [row for row in h if any(row)]


def kernel_basis(a):
    """Canonical basis of the integer kernel {x : a·x = 0}; saturated."""
    if not a or not a[0]:
        n = len(a[0]) if a else 0
        return identity(n)
    at = transpose(a)
    h, u = row_hnf(at)
    ker = [u[i] for i in range(len(h)) if not any(h[i])]
    return hnf_basis(ker)


def snf(m):
    """Smith normal form with transforms: returns (d, p, q), p·m·q = d.

    Elementary divisors are nonnegative and ordered by divisibility.
    """
    if not m:
        return [], [], []
    d = [list(row) for row in m]
    nrows, ncols = len(d), len(d[0])
    p = identity(nrows)
    q = identity(ncols)

    def row_op(i, j, f):  # row i -= f * row j
        d[i] = [a - f * b for a, b in zip(d[i], d[j])]
        p[i] = [a - f * b for a, b in zip(p[i], p[j])]

    def col_op(i, j, f):  # col i -= f * col j
        for row in d:
            row[i] -= f * row[j]
        for row in q:
            row[i] -= f * row[j]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        p[i], p[j] = p[j], p[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in q:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(nrows, ncols):
        # locate a minimal nonzero entry in the trailing submatrix
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if d[i][j] != 0 and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, nrows):
                if d[i][t] != 0:
                    f = d[i][t] // d[t][t]
                    row_op(i, t, f)
                    if d[i][t] != 0:  # remainder became the smaller pivot
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, ncols):
                if d[t][j] != 0:
                    f = d[t][j] // d[t][t]
                    col_op(j, t, f)
                    if d[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
        # enforce divisibility of the whole trailing block by the pivot
        offender = None
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if d[i][j] % d[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)  # row t += offending row; redo this pivot
            continue
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            p[t] = [-x for x in p[t]]
        t += 1
    return d, p, q


def elementary_divisors(m):
    d, _, _ = snf(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i] != 0]


def signature(gram):
    """Exact inertia (p, q) by rational symmetric reduction.

    A zero diagonal pivot with a nonzero off-diagonal partner is processed as
    a 2x2 hyperbolic-like block contributing (1,1); its Schur complement is
    taken exactly.  Raises DegenerateGram when the form is singular.
    """
    n = len(gram)
    s = [[Fraction(x) for x in row] for row in gram]
    active = list(range(n))
    p = q = 0
    while active:
        i = active[0]
        if s[i][i] != 0:
            if s[i][i] > 0:
                p += 1
            else:
                q += 1
            rest = active[1:]
            piv = s[i][i]
            for k in rest:
                if s[k][i] == 0:
                    continue
                f = s[k][i] / piv
                for l in rest:
                    s[k][l] -= f * s[i][l]
            for k in rest:
                s[k][i] = s[i][k] = Fraction(0)
            active = rest
            continue
        j = next((j for j in active[1:] if s[i][j] != 0), None)
        if j is None:
            raise DegenerateGram("gram matrix is degenerate")
        p += 1
        q += 1
        b = s[i][j]
        djj = s[j][j]
        det = -b * b
        rest = [k for k in active if k != i and k != j]
        # inverse of [[0, b], [b, djj]] is (1/det)·[[djj, -b], [-b, 0]]
        for k in rest:
            ki, kj = s[k][i], s[k][j]
            ci = (djj * ki - b * kj) / det
            cj = (-b * ki) / det
            for l in rest:
                s[k][l] -= ci * s[i][l] + cj * s[j][l]
        for k in rest:
            s[k][i] = s[i][k] = s[k][j] = s[j][k] = Fraction(0)
        active = rest
    return p, q


def positive_basis(gram):
    """Rational basis vectors of a maximal positive-definite subspace.

    Returned vectors are pairwise orthogonal under the form with positive
    self-pairing; obtained by symmetric column reduction, replacing a
    zero-pivot column by column ± partner to expose a nonzero pivot.
    """
    n = len(gram)
    s = [[Fraction(x) for x in row] for row in gram]
    b = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]

    def col_add(dst, src, f):  # column dst += f * column src, congruently
        for k in range(n):
            s[k][dst] += f * s[k][src]
        for k in range(n):
            s[dst][k] += f * s[src][k]
        for k in range(n):
            b[k][dst] += f * b[k][src]

    for i in range(n):
        if s[i][i] == 0:
            j = next((j for j in range(i + 1, n) if s[i][j] != 0), None)
            if j is None:
                continue
            sign = 1 if 2 * s[i][j] + s[j][j] != 0 else -1
            col_add(i, j, sign)
        if s[i][i] == 0:
            continue
        for j in range(i + 1, n):
            if s[i][j] != 0:
                col_add(j, i, -s[i][j] / s[i][i])
    return [[b[k][i] for k in range(n)] for i in range(n) if s[i][i] > 0]
