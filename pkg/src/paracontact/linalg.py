"""Small dense linear algebra over exact fields (Fraction, AlgNum) or floats.

Matrices are lists of rows.  Every routine takes an optional ``tol``: with
``tol=None`` zero tests are exact, otherwise ``abs(x) <= tol`` counts as zero.
"""

from __future__ import annotations


def _zero(x, tol) -> bool:
    if tol is None:
        return not x
    return abs(float(x)) <= tol


def _pivot_row(m, col, start, tol):
    if tol is None:
        for r in range(start, len(m)):
            if m[r][col]:
                return r
        return None
    best, best_val = None, tol
    for r in range(start, len(m)):
        v = abs(float(m[r][col]))
        if v > best_val:
            best, best_val = r, v
    return best


def row_echelon(m, tol=None):
    """Reduced row echelon form; returns ``(rref, pivot_columns)``."""
    m = [list(row) for row in m]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = _pivot_row(m, c, r, tol)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for rr in range(rows):
            if rr != r and not _zero(m[rr][c], tol):
                f = m[rr][c]
                m[rr] = [a - f * b for a, b in zip(m[rr], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(m, tol=None) -> int:
    if not m:
        return 0
    return len(row_echelon(m, tol)[1])


def nullspace(m, tol=None, one=1):
    """Basis of ``{x : m x = 0}`` as a list of column tuples."""
    cols = len(m[0])
    red, pivots = row_echelon(m, tol)
    zero = one - one
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        x = [zero] * cols
        x[f] = one
        for r, pc in enumerate(pivots):
            x[pc] = -red[r][f]
        basis.append(tuple(x))
    return basis


def mat_inverse(m, tol=None):
    n = len(m)
    one = m[0][0] ** 0 if n else 1
    zero = one - one
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    red, pivots = row_echelon(aug, tol)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def mat_mul(a, b):
    inner = len(b)
    cols = len(b[0]) if inner else 0
    out = []
    for row in a:
        out_row = []
        for j in range(cols):
            acc = None
            for k in range(inner):
                if row[k] and b[k][j]:
                    t = row[k] * b[k][j]
                    acc = t if acc is None else acc + t
            out_row.append(acc if acc is not None else row[0] * 0)
        out.append(out_row)
    return out


def mat_vec(a, v):
    return [sum((a[i][k] * v[k] for k in range(len(v)) if a[i][k] and v[k]), v[0] * 0) for i in range(len(a))]


def transpose(a):
    return [list(col) for col in zip(*a)]


def bilinear(g, u, v):
    """``u^T g v``."""
    n = len(u)
    acc = u[0] * 0
    for a in range(n):
        if not u[a]:
            continue
        for b in range(n):
            if g[a][b] and v[b]:
                acc = acc + u[a] * g[a][b] * v[b]
    return acc


def determinant(m, tol=None):
    """Determinant by Gaussian elimination (exact for field entries)."""
    m = [list(row) for row in m]
    n = len(m)
    det = m[0][0] ** 0 if n else 1
    for c in range(n):
        p = _pivot_row(m, c, c, tol)
        if p is None:
            return det * 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det = det * m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if not _zero(m[r][c], tol):
                f = m[r][c] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def _sign(x) -> int:
    if hasattr(x, "sign"):
        return x.sign()
    return (x > 0) - (x < 0)


def inertia(g, tol=None):
    """``(positive, negative, zero)`` counts of a symmetric matrix.

    Congruence diagonalisation: use a nonzero diagonal pivot when one exists,
    otherwise add a row/column with a nonzero off-diagonal entry to create one.
    """
    m = [list(row) for row in g]
    n = len(m)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if not _zero(m[i][i], tol)), None)
        if piv is None:
            pair = next(
                ((i, j) for i in active for j in active if i != j and not _zero(m[i][j], tol)),
                None,
            )
            if pair is None:
                break
            i, j = pair
            # e_i <- e_i + e_j gives diagonal 2 m_ij + m_jj = 2 m_ij != 0
            for k in range(n):
                m[i][k] = m[i][k] + m[j][k]
            for k in range(n):
                m[k][i] = m[k][i] + m[k][j]
            piv = i
        d = m[piv][piv]
        if _sign(d) > 0:
            pos += 1
        else:
            neg += 1
        inv = 1 / d
        rest = [i for i in active if i != piv]
        for r in rest:
            f = m[r][piv] * inv
            if _zero(f, tol):
                continue
            for k in range(n):
                m[r][k] = m[r][k] - f * m[piv][k]
            for k in range(n):
                m[k][r] = m[k][r] - f * m[k][piv]
        active = rest
    return pos, neg, len(active)
