"""Pointwise normal form of h for (-1, mu)-spaces.

At a point p with h_p^2 = 0 we build a basis ``{xi_p, X_1, Y_1, ..., X_n, Y_n}``
whose only nonzero Gram entries are ``g(xi, xi) = 1`` and ``g(X_i, Y_i) = +-1``,
with ``h X_i = Y_i`` for ``i <= m = rank h_p`` and ``h = 0`` on the other pairs.

Arithmetic is exact in Q(sqrt2) as long as every square root that the
construction needs exists there; otherwise the whole construction is redone
in floating point and checked with tolerance ``TOL``.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algnum import ONE, ZERO, AlgNum, NotASquare
from .linalg import determinant, mat_inverse, mat_mul, nullspace, rank, transpose
from .scalar import Scalar, evaluate
from .structure import Check, ParacontactStructure, VerificationReport

__all__ = [
    "TOL",
    "CanonicalFormError",
    "PointEvaluation",
    "CanonicalBasisResult",
    "evaluate_at_point",
    "h_rank_profile",
    "canonical_basis",
    "verify_normal_form",
]

TOL = 1e-9


class CanonicalFormError(ValueError):
    pass


@dataclass
class PointEvaluation:
    """Tensors at one point, in frame components at that point.

    ``h[k][i]`` and ``phi[k][i]`` are the ``e_k`` component of the image of
    ``e_i``; ``g[i][j] = g_p(e_i, e_j)``.  Entries are AlgNum when ``exact``
    and floats otherwise.
    """

    point: dict
    g: list
    phi: list
    h: list
    xi: tuple
    eta: tuple
    exact: bool
    labels: tuple = ()
    frame_vectors: list | None = None  # coordinate components of e_i at p

    @property
    def dim(self) -> int:
        return len(self.g)

    @property
    def n(self) -> int:
        return (self.dim - 1) // 2

    def as_float(self) -> PointEvaluation:
        f = lambda m: [[float(x) for x in row] for row in m]
        return PointEvaluation(
            self.point, f(self.g), f(self.phi), f(self.h),
            tuple(float(x) for x in self.xi), tuple(float(x) for x in self.eta),
            False, self.labels, None if self.frame_vectors is None else f(self.frame_vectors),
        )


def _norm_point(s: ParacontactStructure, point) -> dict:
    point = dict(point or {})
    chart = s.frame.chart
    if isinstance(point, dict) and set(point) - set(chart):
        raise CanonicalFormError(f"point has coordinates outside the chart {chart}")
    missing = [c for c in chart if c not in point]
    if missing:
        raise CanonicalFormError(f"point does not assign {missing}")
    return {c: Fraction(point[c]) for c in chart}


def evaluate_at_point(s: ParacontactStructure, point=None) -> PointEvaluation:
    """Evaluate g, phi, h, xi, eta of ``s`` at ``point`` (a coordinate dict)."""
    pt = _norm_point(s, point)
    N = s.dim
    hm = s.h.matrix()
    values = [[evaluate(hm[k][i], pt) for i in range(N)] for k in range(N)]
    eta = [evaluate(e, pt) for e in s.eta]
    frame_vectors = None
    if s.frame.kind == "coordinate":
        frame_vectors = [[evaluate(c, pt) for c in v] for v in s.frame.vectors]
    exact = all(isinstance(x, AlgNum) for row in values for x in row) and all(isinstance(x, AlgNum) for x in eta)
    if frame_vectors is not None:
        exact = exact and all(isinstance(x, AlgNum) for row in frame_vectors for x in row)
    pe = PointEvaluation(
        pt,
        [list(row) for row in s.metric.g],
        [list(row) for row in s.phi],
        values,
        tuple(ONE if k == 0 else ZERO for k in range(N)),
        tuple(eta),
        True,
        s.labels,
        frame_vectors,
    )
    if not exact:
        return pe.as_float()
    return pe


def _rank(m, exact: bool) -> int:
    return rank(m, None if exact else TOL)


def h_rank_profile(s: ParacontactStructure, points: Sequence) -> list:
    """``[(point, rank h_p), ...]``; exact rank when the point evaluates exactly."""
    out = []
    for p in points:
        pe = evaluate_at_point(s, p)
        out.append((pe.point, _rank(pe.h, pe.exact)))
    return out


# ---------------------------------------------------------------------------
# field helpers


class _Exact:
    exact = True
    tol = None

    @staticmethod
    def zero(x) -> bool:
        return not x

    @staticmethod
    def sign(x) -> int:
        return AlgNum.coerce(x).sign()

    @staticmethod
    def sqrt(x):
        return AlgNum.coerce(x).sqrt()

    @staticmethod
    def is_square(x) -> bool:
        try:
            AlgNum.coerce(x).sqrt()
            return True
        except NotASquare:
            return False

    one = ONE
    zero_el = ZERO


class _HighPrecision:
    """Decimal arithmetic for the inexact fallback.

    Only square roots (and exponentials already present in the input) are
    rounded, so the result is accurate far below ``TOL`` even for badly
    conditioned frames.  ``tol`` is the zero test used while constructing.
    """

    exact = False
    PREC = 60

    def __init__(self, tol):
        self.tol = Decimal(tol)

    def zero(self, x) -> bool:
        return abs(x) <= self.tol

    @staticmethod
    def sign(x) -> int:
        return (x > 0) - (x < 0)

    @staticmethod
    def sqrt(x):
        return x.sqrt()

    @staticmethod
    def is_square(x) -> bool:
        return True

    one = Decimal(1)
    zero_el = Decimal(0)


def _to_decimal(x) -> Decimal:
    if isinstance(x, AlgNum):
        d = lambda q: Decimal(q.numerator) / Decimal(q.denominator)
        return d(x.a) + d(x.b) * Decimal(2).sqrt() if x.b else d(x.a)
    return Decimal(x)


def _decimal_eval(pe: PointEvaluation) -> PointEvaluation:
    f = lambda m: [[_to_decimal(x) for x in row] for row in m]
    return PointEvaluation(
        pe.point, f(pe.g), f(pe.phi), f(pe.h),
        tuple(_to_decimal(x) for x in pe.xi), tuple(_to_decimal(x) for x in pe.eta),
        False, pe.labels, None if pe.frame_vectors is None else f(pe.frame_vectors),
    )


def _matvec(m, v):
    n = len(v)
    return [sum((m[k][i] * v[i] for i in range(n) if v[i]), v[0] * 0) for k in range(len(m))]


def _form(g, u, v):
    n = len(u)
    acc = u[0] * 0
    for a in range(n):
        if not u[a]:
            continue
        for b in range(n):
            if g[a][b] and v[b]:
                acc = acc + u[a] * g[a][b] * v[b]
    return acc


def _lin(a, u, b, v):
    return [a * x + b * y for x, y in zip(u, v)]


def _scale(c, u):
    return [c * x for x in u]


def _is_zero_vec(F, u) -> bool:
    return all(F.zero(x) for x in u)


def _independent(F, vectors):
    """Greedy independent subset in order (keeps the original vectors)."""
    kept = []
    for v in vectors:
        if _is_zero_vec(F, v):
            continue
        if rank([list(w) for w in kept + [v]], F.tol) > len(kept):
            kept.append(list(v))
    return kept


def _project_out_pair(F, g, w, x, y, eps):
    # remove the components of w along a null pair with g(x, y) = eps
    a = _form(g, w, y)
    b = _form(g, w, x)
    return [wi - eps * a * xi - eps * b * yi for wi, xi, yi in zip(w, x, y)]


def _split_off(F, g, W, x, y, eps):
    """Spanning set of the g-orthogonal complement of (x, y) inside span(W)."""
    out = [_project_out_pair(F, g, w, x, y, eps) for w in W]
    if not F.exact:
        # project twice and rescale; in floats the spanning vectors otherwise
        # grow and leave round-off above the absolute tolerance
        out = [_project_out_pair(F, g, w, x, y, eps) for w in out]
        out = [_scale(1 / m, w) if (m := max(abs(c) for c in w)) > TOL else w for w in out]
    return _independent(F, out)


@dataclass
class CanonicalBasisResult:
    """Output of :func:`canonical_basis`.

    ``basis[0]`` is xi_p, then ``X_1, Y_1, ..., X_n, Y_n`` in frame
    components at p.  ``gram`` and ``h_matrix`` are recomputed in the new
    basis (``h_matrix[k][i]`` = component k of h applied to basis vector i).
    """

    basis: list
    signs: list
    m: int
    gram: list
    h_matrix: list
    exact: bool
    notes: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.signs)

    def labels(self) -> list:
        out = ["xi_p"]
        for i in range(1, self.n + 1):
            out += [f"X{i}", f"Y{i}"]
        return out

    def coordinate_basis(self, pe: PointEvaluation) -> list | None:
        """Basis vectors in chart coordinates (coordinate frames only)."""
        if pe.frame_vectors is None:
            return None
        A = pe.frame_vectors
        if not (self.exact and pe.exact):
            A = [[float(x) for x in row] for row in A]
            basis = [[float(x) for x in v] for v in self.basis]
        else:
            basis = self.basis
        dim = len(A[0])
        return [[sum((v[i] * A[i][a] for i in range(len(v))), v[0] * 0) for a in range(dim)] for v in basis]

    def _fmt(self, x) -> str:
        return str(x) if self.exact else repr(float(x))

    def to_dict(self) -> dict:
        f = self._fmt
        return {
            "m": self.m,
            "signs": self.signs,
            "exact": self.exact,
            "basis": {lab: [f(x) for x in v] for lab, v in zip(self.labels(), self.basis)},
            "gram": [[f(x) for x in row] for row in self.gram],
            "h_matrix": [[f(x) for x in row] for row in self.h_matrix],
            "notes": self.notes,
        }


def _hyperbolic_from(F, up, ap, un, an):
    # x = up + t un is null for t^2 = -ap/an; y = (up - t un)/(2 ap) gives g(x, y) = 1
    t = F.sqrt(-ap / an)
    x = _lin(F.one, up, t, un)
    y = _scale(1 / (2 * ap), _lin(F.one, up, -t, un))
    return x, y


def _isotropic_pair(F, g, W):
    """Split off one hyperbolic pair (x, y), g(x,y) = 1, from span(W) where h = 0."""
    null = next((w for w in W if F.zero(_form(g, w, w))), None)
    if null is None:
        # orthogonalise (without normalising) until an exact split shows up
        diag = []
        rest = [list(w) for w in W]
        while rest and null is None:
            u = rest.pop(0)
            a = _form(g, u, u)
            diag.append((u, a))
            rest = [_lin(F.one, w, -(_form(g, w, u) / a), u) for w in rest]
            rest = [w for w in rest if not _is_zero_vec(F, w)]
            null = next((w for w in rest if F.zero(_form(g, w, w))), None)
            pos = [d for d in diag if F.sign(d[1]) > 0]
            neg = [d for d in diag if F.sign(d[1]) < 0]
            for up, ap in pos:
                for un, an in neg:
                    if F.is_square(-ap / an):
                        return _hyperbolic_from(F, up, ap, un, an)
        if null is None:
            pos = [d for d in diag if F.sign(d[1]) > 0]
            neg = [d for d in diag if F.sign(d[1]) < 0]
            if not (pos and neg):
                raise CanonicalFormError("kernel of h is not split; metric signature is wrong")
            # raises NotASquare in exact mode, which triggers the float rerun
            return _hyperbolic_from(F, pos[0][0], pos[0][1], neg[0][0], neg[0][1])
    x = null
    y = next((w for w in W if not F.zero(_form(g, x, w))), None)
    if y is None:
        raise CanonicalFormError("metric is degenerate on the kernel of h")
    y = _scale(1 / _form(g, x, y), y)
    c = _form(g, y, y)
    if not F.zero(c):
        y = _lin(F.one, y, -c / 2, x)
    return x, y


def _balance(F, x, y):
    """Rescale a pair with g(x, y) = 1 to (2^k x, y / 2^k) of similar size."""
    nx = max(abs(float(c)) for c in x)
    ny = max(abs(float(c)) for c in y)
    k = round(math.log2(ny / nx) / 2) if nx and ny else 0
    if k == 0:
        return x, y
    big = F.one * 2 ** abs(k)
    if k > 0:
        return _scale(big, x), _scale(1 / big, y)
    return _scale(1 / big, x), _scale(big, y)


def _nonisotropic_for_h(F, g, h, W):
    """Some v in span(W) with g(v, h v) != 0, or None.

    h v != 0 alone is not enough when m >= 2 (X_1 + X_2 with opposite signs
    gives g(v, h v) = 0).  The form (u, w) -> g(u, h w) is symmetric, so if it
    vanishes on every w and every w_i + w_j it vanishes identically.
    """
    for w in W:
        if not F.zero(_form(g, w, _matvec(h, w))):
            return w
    for i, u in enumerate(W):
        hu = _matvec(h, u)
        for w in W[i + 1:]:
            if not F.zero(_form(g, w, hu)):
                return _lin(F.one, u, F.one, w)
    return None


def _construct(pe: PointEvaluation, F) -> CanonicalBasisResult:
    g, h, N = pe.g, pe.h, pe.dim
    n = pe.n
    notes = []
    if N % 2 == 0:
        raise CanonicalFormError("dimension must be odd")
    if F.zero(determinant(g, F.tol)):
        raise CanonicalFormError("g_p is degenerate")
    h2 = mat_mul(h, h)
    if any(not F.zero(x) for row in h2 for x in row):
        raise CanonicalFormError("h_p^2 != 0")
    eta_row = [list(pe.eta)]
    W = _independent(F, [list(v) for v in nullspace(eta_row, F.tol, F.one)])
    if len(W) != N - 1:
        raise CanonicalFormError("eta_p vanishes")
    pairs = []
    # nilpotent part: pick v with h v != 0, make it null, normalise
    while True:
        if all(_is_zero_vec(F, _matvec(h, w)) for w in W):
            break
        v = _nonisotropic_for_h(F, g, h, W)
        if v is None:
            raise CanonicalFormError("g(v, h v) = 0 on all of Ker eta; h_p is not self-adjoint or g_p degenerate")
        hv = _matvec(h, v)
        a = _form(g, v, hv)
        gvv = _form(g, v, v)
        if not F.zero(gvv):
            v = _lin(F.one, v, -(gvv / (2 * a)), hv)
            hv = _matvec(h, v)
            if not F.zero(_form(g, v, v)):
                raise CanonicalFormError("isotropic correction failed")
            notes.append("isotropic correction v - g(v,v)/(2 g(v,hv)) hv applied")
        s = F.sqrt(abs(a))
        X = _scale(1 / s, v)
        Y = _matvec(h, X)
        eps = F.sign(a)
        pairs.append((X, Y, eps))
        W = _split_off(F, g, W, X, Y, eps)
    m = len(pairs)
    if m > n:
        raise CanonicalFormError(f"rank of h_p exceeds n: {m} > {n}")
    # kernel part: hyperbolic pairs with g(X, Y) = 1
    while W:
        x, y = _isotropic_pair(F, g, W)
        x, y = _balance(F, x, y)
        pairs.append((x, y, 1))
        W = _split_off(F, g, W, x, y, 1)
    if len(pairs) != n:
        raise CanonicalFormError("failed to exhaust Ker eta_p with null pairs")
    basis = [list(pe.xi)]
    for X, Y, _ in pairs:
        basis += [X, Y]
    signs = [e for _, _, e in pairs]
    if n == 1:
        X, Y = basis[1], basis[2]
        px, py = _matvec(pe.phi, X), _matvec(pe.phi, Y)
        plus = _is_zero_vec(F, _lin(F.one, px, -F.one, X)) and _is_zero_vec(F, _lin(F.one, py, F.one, Y))
        minus = _is_zero_vec(F, _lin(F.one, px, F.one, X)) and _is_zero_vec(F, _lin(F.one, py, -F.one, Y))
        if not (plus or minus):
            raise CanonicalFormError("phi_p X1 = +-X1, phi_p Y1 = -+Y1 fails")
        notes.append(f"phi_p X1 = {'+' if plus else '-'}X1, phi_p Y1 = {'-' if plus else '+'}Y1")
    B = transpose(basis)  # columns are the new basis vectors
    gram = mat_mul(transpose(B), mat_mul(g, B))
    hB = mat_mul(mat_inverse(B, F.tol), mat_mul(h, B))
    result = CanonicalBasisResult([tuple(v) for v in basis], signs, m, gram, hB, F.exact, notes)
    rep = verify_normal_form(result, pe)
    if not rep.passed:
        raise CanonicalFormError(f"normal form check failed: {[str(c) for c in rep.failures()]}")
    return result


def canonical_basis(pe: PointEvaluation) -> CanonicalBasisResult:
    """Canonical basis at a point with h_p^2 = 0 (exact when possible)."""
    if pe.exact:
        try:
            return _construct(pe, _Exact)
        except NotASquare:
            pass
    # inputs that were exact only lose accuracy in square roots
    F = _HighPrecision("1e-20" if pe.exact else "1e-12")
    with localcontext() as ctx:
        ctx.prec = _HighPrecision.PREC
        return _construct(_decimal_eval(pe), F)


def _witness(x, exact):
    return Scalar.const(x) if exact and x else None


def verify_normal_form(result: CanonicalBasisResult, pe: PointEvaluation) -> VerificationReport:
    """Recompute Gram and h matrices from the basis and check the normal form."""
    exact = result.exact and pe.exact
    if not exact:
        # residuals of the produced basis, measured well below TOL
        with localcontext() as ctx:
            ctx.prec = _HighPrecision.PREC
            return _verify(result, _decimal_eval(pe), _HighPrecision(TOL), False)
    return _verify(result, pe, _Exact, True)


def _verify(result, pe, F, exact):
    g, h = pe.g, pe.h
    basis = [[x if exact else _to_decimal(x) for x in v] for v in result.basis]
    rep = VerificationReport("canonical normal form")
    N = len(basis)
    n = (N - 1) // 2
    B = transpose(basis)
    det = determinant(B, F.tol)
    rep.add(Check("basis invertible", not F.zero(det), "det", None))
    if F.zero(det):
        return rep
    gram = mat_mul(transpose(B), mat_mul(g, B))
    hB = mat_mul(mat_inverse(B, F.tol), mat_mul(h, B))

    def expect(name, table, target):
        for i in range(N):
            for j in range(N):
                d = table[i][j] - target(i, j)
                if not F.zero(d):
                    rep.add(Check(name, False, f"entry ({i}, {j}) off by {d}", _witness(d, exact)))
                    return
        rep.add(Check(name, True))

    signs = list(result.signs)
    ok_signs = len(signs) == n and all(e in (1, -1) for e in signs)
    rep.add(Check("signs are +-1", ok_signs, f"signs = {signs}", None))
    if not ok_signs:
        return rep

    def gram_target(i, j):
        if i == j == 0:
            return 1
        if i > 0 and j > 0 and (i - 1) // 2 == (j - 1) // 2 and i != j:
            return signs[(i - 1) // 2]
        return 0

    m = result.m

    def h_target(k, i):
        # h X_p = Y_p for p <= m: column of X_p has a 1 in the Y_p row
        if i > 0 and i % 2 == 1 and (i + 1) // 2 <= m and k == i + 1:
            return 1
        return 0

    expect("Gram matrix normal form", gram, gram_target)
    expect("h normal form", hB, h_target)
    rk = rank(h, F.tol)
    rep.add(Check("number of h-blocks = rank h_p", rk == m, f"rank = {rk}, blocks = {m}",
                  None if rk == m else Scalar.const(rk - m)))
    rep.add(Check("rank h_p <= n", m <= n, f"m = {m}, n = {n}", None if m <= n else Scalar.const(m - n)))
    rep.info["m"] = m
    rep.info["signs"] = signs
    rep.info["exact"] = exact
    return rep
