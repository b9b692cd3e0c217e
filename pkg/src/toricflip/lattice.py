"""Exact linear algebra over the integers and rationals.

Matrices are tuples of tuples of Python ints in row-major order and
vectors are tuples of ints.  Python's arbitrary-precision integers are
the scalar type throughout; ``fractions.Fraction`` appears only where a
solve is genuinely rational.  Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def as_matrix(rows) -> tuple:
    """Freeze ``rows`` into a row-major tuple-of-tuples integer matrix."""
    M = tuple(tuple(int(x) for x in row) for row in rows)
    if M:
        width = len(M[0])
        if any(len(r) != width for r in M):
            raise ValueError("rows have unequal lengths")
    return M


def identity_matrix(n: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(M) -> tuple:
    return tuple(tuple(col) for col in zip(*M))


def dot(u, v) -> int:
    if len(u) != len(v):
        raise ValueError("dimension mismatch: %d vs %d" % (len(u), len(v)))
    return sum(a * b for a, b in zip(u, v))


def mat_vec(M, v) -> tuple:
    return tuple(dot(row, v) for row in M)


def mat_mul(A, B) -> tuple:
    Bt = transpose(B)
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def vec_add(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v) -> tuple:
    return tuple(c * a for a in v)


def vec_neg(v) -> tuple:
    return tuple(-a for a in v)


def is_zero_vector(v) -> bool:
    return all(a == 0 for a in v)


def vector_gcd(v) -> int:
    g = 0
    for a in v:
        g = gcd(g, abs(a))
    return g


def primitive_vector(v) -> tuple:
    """Divide by the gcd of the coordinates, keeping the orientation.

    The zero vector has no primitive form and is rejected.
    """
    v = tuple(int(a) for a in v)
    g = vector_gcd(v)
    if g == 0:
        raise ValueError("zero vector is never primitive")
    return tuple(a // g for a in v)


def det(M) -> int:
    """Determinant via fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    if len(M[0]) != n:
        raise ValueError("determinant of a non-square matrix")
    a = [list(r) for r in M]
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
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(M) -> int:
    """Rank over Q, computed by fraction-free row elimination."""
    M = [list(r) for r in M]
    if not M or not M[0]:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, rows):
            if M[i][c] != 0:
                f, g = M[i][c], M[r][c]
                M[i] = [x * g - y * f for x, y in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


def hermite_normal_form(M):
    """Row-style Hermite normal form ``(H, U)`` with ``U @ M == H``.

    U is unimodular.  H is in row echelon form with positive pivots,
    entries above each pivot reduced into ``[0, pivot)``, columns
    processed left to right so the result is unique.
    """
    M = as_matrix(M)
    if not M:
        raise ValueError("empty matrix")
    rows, cols = len(M), len(M[0])
    H = [list(r) for r in M]
    U = [list(r) for r in identity_matrix(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if H[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(H[i][c]), i))
            if i0 != r:
                H[r], H[i0] = H[i0], H[r]
                U[r], U[i0] = U[i0], U[r]
            done = True
            for i in range(r + 1, rows):
                if H[i][c] != 0:
                    q = H[i][c] // H[r][c]
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if H[i][c] != 0:
                        done = False
            if done:
                break
        if r < rows and H[r][c] != 0:
            if H[r][c] < 0:
                H[r] = [-x for x in H[r]]
                U[r] = [-x for x in U[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
            r += 1
    return as_matrix(H), as_matrix(U)


def _smith_clear(A, U, V, rows, cols):
    """Diagonalize A in place, recording row ops in U and column ops in V."""
    t = 0
    while t < min(rows, cols):
        entries = [(abs(A[i][j]), i, j)
                   for i in range(t, rows) for j in range(t, cols)
                   if A[i][j] != 0]
        if not entries:
            break
        _, pi, pj = min(entries)
        if pi != t:
            A[t], A[pi] = A[pi], A[t]
            U[t], U[pi] = U[pi], U[t]
        if pj != t:
            for row in A:
                row[t], row[pj] = row[pj], row[t]
            for row in V:
                row[t], row[pj] = row[pj], row[t]
        while True:
            moved = False
            for i in range(t + 1, rows):
                if A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[t])]
                    if A[i][t] != 0:
                        A[t], A[i] = A[i], A[t]
                        U[t], U[i] = U[i], U[t]
                        moved = True
            for j in range(t + 1, cols):
                if A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    for row in A:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                    if A[t][j] != 0:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        for row in V:
                            row[t], row[j] = row[j], row[t]
                        moved = True
            if not moved:
                below = any(A[i][t] for i in range(t + 1, rows))
                right = any(A[t][j] for j in range(t + 1, cols))
                if not below and not right:
                    break
        t += 1


def smith_normal_form(M):
    """Smith normal form ``(D, U, V)`` with ``U @ M @ V == D``.

    U and V are unimodular; D is diagonal with nonnegative entries
    forming a divisibility chain d1 | d2 | ...
    """
    M = as_matrix(M)
    if not M:
        raise ValueError("empty matrix")
    rows, cols = len(M), len(M[0])
    A = [list(r) for r in M]
    U = [list(r) for r in identity_matrix(rows)]
    V = [list(r) for r in identity_matrix(cols)]
    while True:
        _smith_clear(A, U, V, rows, cols)
        bad = None
        for t in range(min(rows, cols) - 1):
            a, b = A[t][t], A[t + 1][t + 1]
            if a != 0 and b % a != 0:
                bad = t
                break
        if bad is None:
            break
        # fold the offending entry back into column `bad` and re-clear
        for row in A:
            row[bad] += row[bad + 1]
        for row in V:
            row[bad] += row[bad + 1]
    for t in range(min(rows, cols)):
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return as_matrix(A), as_matrix(U), as_matrix(V)


def invariant_factors(M) -> tuple:
    D, _, _ = smith_normal_form(M)
    return tuple(D[i][i] for i in range(min(len(D), len(D[0]))))


def integer_kernel(M) -> tuple:
    """Basis of the saturated lattice ``{v : M v = 0}``.

    Returned as rows in Hermite normal form, which makes the basis a
    canonical function of the kernel itself.
    """
    M = as_matrix(M)
    if not M:
        raise ValueError("empty matrix")
    cols = len(M[0])
    D, _, V = smith_normal_form(M)
    nonzero = sum(1 for i in range(min(len(M), cols)) if D[i][i] != 0)
    basis = [tuple(V[i][j] for i in range(cols)) for j in range(nonzero, cols)]
    if not basis:
        return ()
    H, _ = hermite_normal_form(basis)
    return tuple(row for row in H if any(row))


def rational_inverse(M):
    """Inverse of a square integer matrix as a tuple of Fraction rows."""
    n = len(M)
    if n == 0:
        return ()
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = a[c][c]
        a[c] = [x / inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def unimodular_inverse(M) -> tuple:
    """Exact integer inverse; valid when ``det(M) = ±1``."""
    inv = rational_inverse(M)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(x) for x in row))
    return tuple(out)


def adjugate(M) -> tuple:
    """Adjugate matrix: ``M @ adjugate(M) == det(M) * I``."""
    d = det(M)
    if d == 0:
        raise ValueError("adjugate via inverse needs a nonsingular matrix")
    inv = rational_inverse(M)
    out = []
    for row in inv:
        entries = [x * d for x in row]
        assert all(e.denominator == 1 for e in entries)
        out.append(tuple(int(e) for e in entries))
    return tuple(out)


def solve_rational(A, b):
    """Solve ``A x = b`` exactly when A has full column rank.

    Returns a tuple of Fractions, or None when the system is
    inconsistent.  Raises on underdetermined systems.
    """
    rows = len(A)
    if rows == 0:
        raise ValueError("empty system")
    cols = len(A[0])
    a = [[Fraction(x) for x in row] + [Fraction(bv)] for row, bv in zip(A, b)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c]
        a[r] = [x / inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if len(pivots) < cols:
        raise ValueError("underdetermined system")
    for i in range(r, rows):
        if a[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = a[i][cols]
    return tuple(x)


def solve_integer(A, b) -> tuple:
    """Solve ``A x = b`` and insist the unique solution is integral."""
    x = solve_rational(A, b)
    if x is None:
        raise ValueError("inconsistent system")
    if any(v.denominator != 1 for v in x):
        raise ValueError("solution is not integral")
    return tuple(int(v) for v in x)


def right_inverse(P) -> tuple:
    """Integer right inverse of a matrix that is surjective over Z.

    Surjectivity means all Smith invariant factors equal 1; then
    ``P @ right_inverse(P)`` is the identity.
    """
    P = as_matrix(P)
    rows, cols = len(P), len(P[0])
    D, U, V = smith_normal_form(P)
    if rows > cols or any(D[i][i] != 1 for i in range(rows)):
        raise ValueError("matrix is not surjective over the integers")
    # P = U^-1 [I 0] V^-1, so W = V [I; 0] U is a right inverse.
    first_cols = tuple(tuple(V[i][j] for j in range(rows)) for i in range(cols))
    return mat_mul(first_cols, U)


def reduce_mod_rows(v, H) -> tuple:
    """Reduce ``v`` modulo the lattice spanned by HNF rows ``H``.

    Each pivot coordinate of the result lies in ``[0, pivot)``; this is
    the canonical coset representative used to normalize generators
    modulo a lineality lattice.
    """
    v = list(v)
    for row in H:
        j = next((k for k, x in enumerate(row) if x != 0), None)
        if j is None:
            continue
        q = v[j] // row[j]
        if q:
            for k in range(len(v)):
                v[k] -= q * row[k]
    return tuple(v)
