"""Small exact linear-algebra toolkit over Q and Z.

Everything in this package is exact: vectors are tuples of ``Fraction``
(plain ``int`` entries are accepted anywhere and coerced), matrices are
tuples of row tuples acting on column vectors, and there is no floating
point anywhere.  The sizes involved are tiny (ambient dimension <= 8), so
the implementations are straightforward textbook ones; clarity wins over
asymptotics.

The integer half (Hermite/Smith normal forms, integral solving) backs the
lattice computations: quotient structure of one lattice inside another,
membership of a vector in an integral span, and integral kernels.

>>> mat_inverse(((Fraction(2), Fraction(-1)), (Fraction(-1), Fraction(2))))
((Fraction(2, 3), Fraction(1, 3)), (Fraction(1, 3), Fraction(2, 3)))
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

Vec = tuple[Fraction, ...]
Mat = tuple[tuple[Fraction, ...], ...]


def frac(x) -> Fraction:
    """Coerce ints/strings/Fractions to Fraction (floats are rejected)."""
    if isinstance(x, float):
        raise TypeError("floating point is banned here; use Fraction")
    return Fraction(x)


def vec(xs) -> Vec:
    return tuple(frac(x) for x in xs)


def vadd(u, v) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u, v) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vneg(u) -> Vec:
    return tuple(-a for a in u)


def vscale(c, u) -> Vec:
    c = frac(c)
    return tuple(c * a for a in u)


def dot(u, v) -> Fraction:
    """Pairing of a covector with a vector (or plain dot product).

    >>> dot((1, 2), (3, Fraction(1, 2)))
    Fraction(4, 1)
    """
    return sum((frac(a) * frac(b) for a, b in zip(u, v, strict=True)), Fraction(0))


def zero_vec(n) -> Vec:
    return (Fraction(0),) * n


def basis_vec(n, i) -> Vec:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def matvec(m, v) -> Vec:
    """m acting on the column vector v."""
    return tuple(dot(row, v) for row in m)


def vecmat(row, m) -> Vec:
    """Row vector (covector) times matrix: the pullback of ``row`` along m."""
    n = len(m[0])
    return tuple(
        sum((frac(row[i]) * frac(m[i][j]) for i in range(len(m))), Fraction(0))
        for j in range(n)
    )


def matmul(a, b) -> Mat:
    rows = len(a)
    inner = len(b)
    cols = len(b[0])
    return tuple(
        tuple(
            sum((frac(a[i][k]) * frac(b[k][j]) for k in range(inner)), Fraction(0))
            for j in range(cols)
        )
        for i in range(rows)
    )


def transpose(m) -> Mat:
    return tuple(zip(*m, strict=True))


def identity_matrix(n) -> Mat:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def int_matrix(m) -> tuple[tuple[int, ...], ...]:
    """Cast an exactly-integral rational matrix to machine ints."""
    out = []
    for row in m:
        irow = []
        for x in row:
            f = frac(x)
            if f.denominator != 1:
                raise ValueError(f"entry {f} is not an integer")
            irow.append(f.numerator)
        out.append(tuple(irow))
    return tuple(out)


def _gauss(rows, width):
    """Row-reduce in place (list of lists of Fractions); returns pivot cols."""
    pivots = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def mat_inverse(m) -> Mat:
    """Inverse of a square matrix; raises ValueError if singular.

    >>> mat_inverse(((1, 1), (0, 1)))
    ((Fraction(1, 1), Fraction(-1, 1)), (Fraction(0, 1), Fraction(1, 1)))
    """
    n = len(m)
    rows = [[frac(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
            for i, row in enumerate(m)]
    pivots = _gauss(rows, n)
    if len(pivots) != n:
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in rows)


def solve(m, b) -> Vec:
    """Unique solution of m x = b for square invertible m."""
    return matvec(mat_inverse(m), b)


def rank(m) -> int:
    rows = [[frac(x) for x in row] for row in m]
    return len(_gauss(rows, len(m[0]) if m else 0))


def rational_kernel(m) -> tuple[Vec, ...]:
    """Basis of the right kernel {x : m x = 0} over Q.

    >>> rational_kernel(((1, 1),))
    ((Fraction(-1, 1), Fraction(1, 1)),)
    """
    ncols = len(m[0]) if m else 0
    rows = [[frac(x) for x in row] for row in m]
    pivots = _gauss(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * ncols
        x[fcol] = Fraction(1)
        for r, pcol in enumerate(pivots):
            x[pcol] = -rows[r][fcol]
        basis.append(tuple(x))
    return tuple(basis)


def lcm_den(values) -> int:
    """lcm of the denominators of an iterable of rationals (1 if empty)."""
    out = 1
    for v in values:
        out = math.lcm(out, frac(v).denominator)
    return out


def scaled_int_vec(v, scale) -> tuple[int, ...]:
    """v * scale as machine ints; scale must clear all denominators."""
    out = []
    for x in v:
        f = frac(x) * scale
        if f.denominator != 1:
            raise ValueError(f"scale {scale} does not clear denominator of {x}")
        out.append(f.numerator)
    return tuple(out)


def idot(u, v) -> int:
    """Integer dot product (hot path; no Fractions)."""
    return sum(map(lambda a, b: a * b, u, v))


# --- integer normal forms -------------------------------------------------
#
# Conventions: everything below takes matrices of machine ints.  hermite/smith
# return transforms as full matrices, so callers can push coordinates around
# without re-deriving them.


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _addmul_row(m, dst, src, c):
    m[dst] = [a + c * b for a, b in zip(m[dst], m[src])]


def integer_hermite(m):
    """Row Hermite normal form.

    Returns (H, U) with U unimodular, U*m == H, H in row echelon form with
    positive pivots and reduced entries above each pivot.

    >>> H, U = integer_hermite(((2, 4), (3, 6)))
    >>> H
    ((1, 2), (0, 0))
    """
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    h = [list(row) for row in m]
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    r = 0
    for c in range(ncols):
        # Euclid down column c to leave a single nonzero at row r.
        while True:
            nz = [i for i in range(r, nrows) if h[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(h[i][c]))
            _swap_rows(h, r, piv)
            _swap_rows(u, r, piv)
            done = True
            for i in range(r + 1, nrows):
                if h[i][c] != 0:
                    q = h[i][c] // h[r][c]
                    _addmul_row(h, i, r, -q)
                    _addmul_row(u, i, r, -q)
                    if h[i][c] != 0:
                        done = False
            if done:
                break
        if r < nrows and h[r][c] != 0:
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                q = h[i][c] // h[r][c]
                if q:
                    _addmul_row(h, i, r, -q)
                    _addmul_row(u, i, r, -q)
            r += 1
            if r == nrows:
                break
    return tuple(map(tuple, h)), tuple(map(tuple, u))


def integer_smith(m):
    """Smith normal form of an integer matrix.

    Returns (d, U, V): U*m*V is diagonal with diagonal d, each d[i] >= 0 and
    d[i] | d[i+1], U and V unimodular.

    >>> d, U, V = integer_smith(((2, 0), (0, 3)))
    >>> d
    (1, 6)
    """
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    a = [list(row) for row in m]
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    v = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def addmul_col(mat, dst, src, c):
        for row in mat:
            row[dst] += c * row[src]

    def swap_cols(mat, i, j):
        for row in mat:
            row[i], row[j] = row[j], row[i]

    k = 0
    while k < min(nrows, ncols):
        # find a nonzero pivot in the lower-right block
        piv = None
        best = None
        for i in range(k, nrows):
            for j in range(k, ncols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    piv = (i, j)
        if piv is None:
            break
        _swap_rows(a, k, piv[0])
        _swap_rows(u, k, piv[0])
        swap_cols(a, k, piv[1])
        swap_cols(v, k, piv[1])
        # clear row and column k by Euclid
        dirty = True
        while dirty:
            dirty = False
            for i in range(k + 1, nrows):
                if a[i][k] != 0:
                    q = a[i][k] // a[k][k]
                    _addmul_row(a, i, k, -q)
                    _addmul_row(u, i, k, -q)
                    if a[i][k] != 0:
                        _swap_rows(a, k, i)
                        _swap_rows(u, k, i)
                        dirty = True
            for j in range(k + 1, ncols):
                if a[k][j] != 0:
                    q = a[k][j] // a[k][k]
                    addmul_col(a, j, k, -q)
                    addmul_col(v, j, k, -q)
                    if a[k][j] != 0:
                        swap_cols(a, k, j)
                        swap_cols(v, k, j)
                        dirty = True
        # enforce divisibility d_k | a[i][j] for the rest
        offender = None
        for i in range(k + 1, nrows):
            for j in range(k + 1, ncols):
                if a[i][j] % a[k][k] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            _addmul_row(a, k, offender, 1)
            _addmul_row(u, k, offender, 1)
            continue  # redo pivot k
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
        k += 1
    d = tuple(a[i][i] if i < ncols else 0 for i in range(min(nrows, ncols)))
    return d, tuple(map(tuple, u)), tuple(map(tuple, v))


def integer_solve(m, b):
    """One integral solution x of m x = b, or None.

    >>> integer_solve(((2, 1), (0, 3)), (1, 3))
    (0, 1)
    >>> integer_solve(((2, 0), (0, 2)), (1, 0)) is None
    True
    """
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    d, u, v = integer_smith(m)
    c = [sum(u[i][j] * b[j] for j in range(nrows)) for i in range(nrows)]
    y = [0] * ncols
    for i in range(nrows):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di != 0:
                return None
            if i < ncols:
                y[i] = c[i] // di
    return tuple(sum(v[i][j] * y[j] for j in range(ncols)) for i in range(ncols))


def integer_kernel(m):
    """Basis of {x in Z^n : m x = 0} (a full lattice basis of the kernel)."""
    ncols = len(m[0]) if m else 0
    d, _u, v = integer_smith(m)
    cols = []
    for j in range(ncols):
        dj = d[j] if j < len(d) else 0
        if dj == 0:
            cols.append(tuple(v[i][j] for i in range(ncols)))
    return tuple(cols)


def in_integer_span(vectors, target):
    """Is target an integer combination of the given integer vectors?

    >>> in_integer_span([(2, 0), (1, 1)], (3, 1))
    True
    >>> in_integer_span([(2, 0)], (1, 0))
    False
    """
    if not vectors:
        return all(x == 0 for x in target)
    m = tuple(zip(*vectors, strict=True))  # columns are the given vectors
    return integer_solve(m, tuple(target)) is not None


def gram_det(m) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination."""
    n = len(m)
    rows = [[frac(x) for x in row] for row in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


def is_positive_definite(m) -> bool:
    """Sylvester's criterion on a symmetric rational matrix.

    >>> is_positive_definite(((2, -1), (-1, 2)))
    True
    >>> is_positive_definite(((2, -2), (-2, 2)))
    False
    """
    n = len(m)
    for k in range(1, n + 1):
        minor = tuple(tuple(m[i][j] for j in range(k)) for i in range(k))
        if gram_det(minor) <= 0:
            return False
    return True


def enumerate_box(lo, hi):
    """All integer tuples n with lo[i] <= n[i] <= hi[i].

    >>> list(enumerate_box((0, 0), (1, 1)))
    [(0, 0), (0, 1), (1, 0), (1, 1)]
    """
    ranges = [range(a, b + 1) for a, b in zip(lo, hi, strict=True)]
    return itertools.product(*ranges)
