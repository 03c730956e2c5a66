"""Frame calculus: brackets, Levi-Civita connection, curvature, Lie derivatives.

A frame is an ordered basis ``e_0, ..., e_{N-1}`` of vector fields with
``e_0`` playing the role of the Reeb field.  Vector fields are represented
by their component tuples in the frame (tuples of :class:`Scalar`).  The
metric has constant components in the frame, so Koszul's formula reduces to
bracket terms only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .algnum import ONE, ZERO, AlgNum
from .linalg import inertia, mat_inverse
from .scalar import Scalar

__all__ = [
    "FrameError",
    "Frame",
    "Metric",
    "Connection",
    "Curvature",
    "lie_bracket",
    "bracket_fields",
    "verify_jacobi",
    "levi_civita",
    "covariant_derivative",
    "curvature",
    "lie_derivative_metric",
    "exterior_derivative_eta",
]


class FrameError(ValueError):
    pass


Vector = tuple  # tuple[Scalar, ...]


def zero_vector(dim: int, chart=()) -> Vector:
    z = Scalar(chart)
    return (z,) * dim


def basis_vector(dim: int, i: int, chart=()) -> Vector:
    return tuple(Scalar.const(1 if k == i else 0, chart) for k in range(dim))


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(f, v: Vector) -> Vector:
    if isinstance(f, Scalar):
        if f.is_zero():
            return tuple(Scalar(a.chart) for a in v)
    elif not f:
        return tuple(Scalar(a.chart) for a in v)
    return tuple(a * f for a in v)


def is_zero_vector(v: Vector) -> bool:
    return all(a.is_zero() for a in v)


def lincomb(coeffs: Sequence, vectors: Sequence[Vector], dim: int, chart=()) -> Vector:
    """``sum_k coeffs[k] * vectors[k]`` skipping zero coefficients."""
    acc = [Scalar(chart)] * dim
    for c, v in zip(coeffs, vectors):
        if isinstance(c, Scalar):
            if c.is_zero():
                continue
        elif not c:
            continue
        for l in range(dim):
            if not v[l].is_zero():
                acc[l] = acc[l] + v[l] * c
    return tuple(acc)


def format_vector(v: Vector, labels: Sequence[str]) -> str:
    parts = []
    for c, name in zip(v, labels):
        if c.is_zero():
            continue
        text = str(c)
        if len(c.terms) > 1:
            text = f"({text})"
        if text == "1":
            parts.append(name)
        elif text == "-1":
            parts.append(f"-{name}")
        else:
            parts.append(f"{text}*{name}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _det_laplace(m, rows: Sequence[int], chart) -> Scalar:
    """Determinant of the submatrix on ``rows`` (all columns), memoised."""
    n = len(rows)
    memo: dict = {}

    def det(k: int, cols: frozenset) -> Scalar:
        if k == n:
            return Scalar.const(1, chart)
        key = cols
        if key in memo:
            return memo[key]
        total = Scalar(chart)
        sign = 1
        for c in sorted(cols):
            entry = m[rows[k]][c]
            if not entry.is_zero():
                sub = det(k + 1, cols - {c})
                if not sub.is_zero():
                    term = entry * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    return det(0, frozenset(range(n)))


def _minor(m, skip_row: int, skip_col: int, chart) -> Scalar:
    n = len(m)
    sub = [[m[r][c] for c in range(n) if c != skip_col] for r in range(n) if r != skip_row]
    return _det_laplace(sub, list(range(n - 1)), chart)


class Frame:
    """An anholonomic frame, given by constant structure constants or by
    coordinate vector fields.

    ``labels[0]`` is the Reeb field.  Build with :meth:`from_brackets` or
    :meth:`from_vectors`.
    """

    def __init__(self, labels, chart=(), *, brackets=None, vectors=None):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.chart = tuple(chart)
        if len(set(self.labels)) != self.dim:
            raise FrameError("duplicate frame labels")
        if (brackets is None) == (vectors is None):
            raise FrameError("give exactly one of brackets or vectors")
        if brackets is not None:
            self.kind = "algebra"
            self.vectors = None
            self._table = self._table_from_constants(brackets)
        else:
            self.kind = "coordinate"
            self.vectors = tuple(tuple(s.with_chart(self.chart) for s in v) for v in vectors)
            if any(len(v) != len(self.chart) for v in self.vectors):
                raise FrameError("each frame vector needs one coefficient per coordinate")
            if len(self.chart) != self.dim:
                raise FrameError("coordinate frame needs as many vectors as coordinates")
            self._table = self._table_from_vectors()

    @classmethod
    def from_brackets(cls, labels, brackets: dict) -> Frame:
        """``brackets`` maps ``(i, j)`` to a component sequence of [e_i, e_j].

        Only one of ``(i, j)`` / ``(j, i)`` needs to be given; conflicting
        entries raise FrameError.
        """
        return cls(labels, (), brackets=brackets)

    @classmethod
    def from_vectors(cls, labels, chart, vectors) -> Frame:
        """``vectors[i][a]`` is the coefficient of d/d(chart[a]) in e_i."""
        return cls(labels, chart, vectors=vectors)

    # -- construction helpers -------------------------------------------------
    def _table_from_constants(self, brackets):
        n = self.dim
        table = [[None] * n for _ in range(n)]
        for (i, j), vec in brackets.items():
            if not (0 <= i < n and 0 <= j < n):
                raise FrameError(f"bracket index out of range: {(i, j)}")
            vec = tuple(v if isinstance(v, Scalar) else Scalar.const(v) for v in vec)
            if len(vec) != n:
                raise FrameError("bracket vector has wrong length")
            if not all(v.is_constant() for v in vec):
                raise FrameError("structure constants must be constant")
            vec = tuple(Scalar.const(v.constant_value()) for v in vec)
            if i == j:
                if not is_zero_vector(vec):
                    raise FrameError(f"[e{i}, e{i}] must vanish")
                continue
            neg = tuple(-v for v in vec)
            for (a, b, w) in ((i, j, vec), (j, i, neg)):
                if table[a][b] is not None and table[a][b] != w:
                    raise FrameError(f"conflicting brackets for {(self.labels[i], self.labels[j])}")
                table[a][b] = w
        z = zero_vector(n)
        return tuple(tuple(table[i][j] if table[i][j] is not None else z for j in range(n)) for i in range(n))

    @cached_property
    def coefficient_determinant(self) -> Scalar:
        if self.kind != "coordinate":
            return Scalar.const(1)
        return _det_laplace(self.vectors, list(range(self.dim)), self.chart)

    def _express(self, coord_vec) -> Vector:
        # solve sum_k c_k A[k][a] = b_a, i.e. M c = b with M = A^T
        det = self.coefficient_determinant
        if det.is_zero():
            raise FrameError("frame vectors are linearly dependent on the whole chart")
        n = self.dim
        M = [[self.vectors[k][a] for k in range(n)] for a in range(n)]
        adj = self._adjugate(M)
        out = []
        for k in range(n):
            num = Scalar(self.chart)
            for a in range(n):
                if not coord_vec[a].is_zero() and not adj[k][a].is_zero():
                    num = num + adj[k][a] * coord_vec[a]
            try:
                out.append(num.divide_exact(det))
            except ArithmeticError as exc:
                raise FrameError(f"cannot re-express bracket in the frame: {exc}") from None
        return tuple(out)

    def _adjugate(self, M):
        cache = getattr(self, "_adj_cache", None)
        if cache is None:
            n = self.dim
            cache = [[None] * n for _ in range(n)]
            for r in range(n):
                for c in range(n):
                    minor = _minor(M, c, r, self.chart)
                    cache[r][c] = minor if (r + c) % 2 == 0 else -minor
            self._adj_cache = cache
        return cache

    def _table_from_vectors(self):
        n = self.dim
        z = zero_vector(n, self.chart)
        table = [[z] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                coord = tuple(
                    self.apply(i, self.vectors[j][a]) - self.apply(j, self.vectors[i][a])
                    for a in range(n)
                )
                v = self._express(coord)
                table[i][j] = v
                table[j][i] = tuple(-x for x in v)
        return tuple(tuple(row) for row in table)

    # -- queries ------------------------------------------------------------------
    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise FrameError(f"unknown frame label {label!r}") from None

    def bracket(self, i: int, j: int) -> Vector:
        return self._table[i][j]

    def apply(self, i: int, f: Scalar) -> Scalar:
        """Directional derivative ``e_i(f)``."""
        if self.kind == "algebra" or f.is_constant():
            return Scalar(self.chart)
        acc = Scalar(self.chart)
        for a, coeff in enumerate(self.vectors[i]):
            if not coeff.is_zero():
                d = f.diff(self.chart[a])
                if not d.is_zero():
                    acc = acc + coeff * d
        return acc

    def derive(self, v: Vector, f: Scalar) -> Scalar:
        """``V(f)`` for a vector field given in frame components."""
        acc = Scalar(self.chart)
        for k, c in enumerate(v):
            if not c.is_zero():
                d = self.apply(k, f)
                if not d.is_zero():
                    acc = acc + c * d
        return acc

    def zero(self) -> Vector:
        return zero_vector(self.dim, self.chart)

    def basis(self, i: int) -> Vector:
        return basis_vector(self.dim, i, self.chart)

    def scalar(self, value) -> Scalar:
        return Scalar.const(value, self.chart)

    def structure_constants(self):
        """Dense table ``C[i][j]`` of bracket component tuples."""
        return self._table

    def format(self, v: Vector) -> str:
        return format_vector(v, self.labels)

    def __eq__(self, other):
        if not isinstance(other, Frame):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.chart == other.chart
            and self.kind == other.kind
            and self.vectors == other.vectors
            and self._table == other._table
        )

    __hash__ = None

    def __repr__(self):
        return f"Frame({self.kind}, labels={self.labels}, chart={self.chart})"


def lie_bracket(frame: Frame, i: int, j: int) -> Vector:
    return frame.bracket(i, j)


def bracket_fields(frame: Frame, u: Vector, v: Vector) -> Vector:
    """[U, V] for vector fields with Scalar frame components."""
    n = frame.dim
    acc = list(frame.zero())
    for a in range(n):
        if u[a].is_zero():
            continue
        for b in range(n):
            if v[b].is_zero() or a == b:
                continue
            coeff = u[a] * v[b]
            br = frame.bracket(a, b)
            for l in range(n):
                if not br[l].is_zero():
                    acc[l] = acc[l] + coeff * br[l]
    for b in range(n):
        d = frame.derive(u, v[b])
        if not d.is_zero():
            acc[b] = acc[b] + d
    for a in range(n):
        d = frame.derive(v, u[a])
        if not d.is_zero():
            acc[a] = acc[a] - d
    return tuple(acc)


def verify_jacobi(frame: Frame) -> list:
    """All triples ``(i, j, k)``, ``i < j < k``, with a nonzero Jacobiator.

    Returns a list of ``(i, j, k, witness_vector)``; empty means the bracket
    table defines a Lie algebra.
    """
    if frame.kind != "algebra":
        raise FrameError("Jacobi check applies to constant structure constants only")
    n = frame.dim
    failures = []

    def br_vec(i, v):
        return lincomb(v, [frame.bracket(i, m) for m in range(n)], n)

    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                total = vadd(
                    vadd(br_vec(i, frame.bracket(j, k)), br_vec(j, frame.bracket(k, i))),
                    br_vec(k, frame.bracket(i, j)),
                )
                if not is_zero_vector(total):
                    failures.append((i, j, k, total))
    return failures


# ---------------------------------------------------------------------------
# metric


class Metric:
    """Constant symmetric non-degenerate frame metric ``g_ij`` in Q(sqrt2)."""

    def __init__(self, components):
        g = [[AlgNum.coerce(x.constant_value() if isinstance(x, Scalar) else x) for x in row] for row in components]
        n = len(g)
        if any(len(row) != n for row in g):
            raise FrameError("metric must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if g[i][j] != g[j][i]:
                    raise FrameError(f"metric not symmetric at ({i}, {j})")
        self.g = tuple(tuple(row) for row in g)
        self.dim = n
        try:
            self.inv = tuple(tuple(row) for row in mat_inverse(self.g))
        except ZeroDivisionError:
            raise FrameError("metric is degenerate") from None

    @classmethod
    def from_dict(cls, dim: int, entries: dict) -> Metric:
        g = [[ZERO] * dim for _ in range(dim)]
        for (i, j), v in entries.items():
            v = AlgNum.coerce(v)
            for a, b in ((i, j), (j, i)):
                if g[a][b] and g[a][b] != v:
                    raise FrameError(f"conflicting metric entries at ({i}, {j})")
                g[a][b] = v
        return cls(g)

    @cached_property
    def signature(self) -> tuple:
        """``(positive, negative)`` counts, computed exactly."""
        pos, neg, zero = inertia(self.g)
        return pos, neg

    def __call__(self, u: Vector, v: Vector) -> Scalar:
        """g(U, V) for Scalar frame components."""
        acc = Scalar(u[0].chart if u else ())
        for a in range(self.dim):
            if u[a].is_zero():
                continue
            for b in range(self.dim):
                gab = self.g[a][b]
                if gab and not v[b].is_zero():
                    acc = acc + u[a] * v[b] * gab
        return acc

    def lower(self, v: Vector) -> tuple:
        """Covector ``g(V, e_k)``."""
        chart = v[0].chart if v else ()
        out = []
        for k in range(self.dim):
            acc = Scalar(chart)
            for a in range(self.dim):
                if self.g[a][k] and not v[a].is_zero():
                    acc = acc + v[a] * self.g[a][k]
            out.append(acc)
        return tuple(out)

    def raise_(self, w: Sequence[Scalar]) -> Vector:
        """Vector ``V`` with ``g(V, e_k) = w_k``."""
        chart = w[0].chart if w else ()
        out = []
        for l in range(self.dim):
            acc = Scalar(chart)
            for k in range(self.dim):
                if self.inv[l][k] and not w[k].is_zero():
                    acc = acc + w[k] * self.inv[l][k]
            out.append(acc)
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, Metric):
            return NotImplemented
        return self.g == other.g

    __hash__ = None

    def __repr__(self):
        return f"Metric({[[str(x) for x in row] for row in self.g]})"


# ---------------------------------------------------------------------------
# connection and curvature


@dataclass(frozen=True)
class Connection:
    """``table[i][j]`` holds the components of nabla_{e_i} e_j."""

    frame: Frame
    table: tuple

    def __call__(self, i: int, j: int) -> Vector:
        return self.table[i][j]

    def christoffel(self, k: int, i: int, j: int) -> Scalar:
        return self.table[i][j][k]


def levi_civita(frame: Frame, metric: Metric) -> Connection:
    """Levi-Civita connection from Koszul's formula for a constant frame metric.

    2 g(nabla_i e_j, e_k) = -g(e_i, [e_j, e_k]) - g(e_j, [e_i, e_k]) + g(e_k, [e_i, e_j])
    """
    n = frame.dim
    if metric.dim != n:
        raise FrameError("metric and frame dimensions differ")
    half = Fraction(1, 2)
    # lowered brackets: B[i][j][k] = g([e_i, e_j], e_k)
    lowered = [[metric.lower(frame.bracket(i, j)) for j in range(n)] for i in range(n)]
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            w = tuple(
                (lowered[j][k][i] + lowered[i][k][j] - lowered[i][j][k]) * (-half)
                for k in range(n)
            )
            row.append(metric.raise_(w))
        table.append(tuple(row))
    return Connection(frame, tuple(table))


def covariant_derivative(conn: Connection, frame: Frame, i: int, v: Vector) -> Vector:
    """nabla_{e_i} V = sum e_i(V^k) e_k + sum V^k nabla_{e_i} e_k."""
    n = frame.dim
    acc = list(lincomb(v, conn.table[i], n, frame.chart))
    if frame.kind == "coordinate":
        for k in range(n):
            d = frame.apply(i, v[k])
            if not d.is_zero():
                acc[k] = acc[k] + d
    return tuple(acc)


def nabla(conn: Connection, frame: Frame, x: Vector, v: Vector) -> Vector:
    """nabla_X V for a general vector field X."""
    n = frame.dim
    acc = frame.zero()
    for i in range(n):
        if not x[i].is_zero():
            acc = vadd(acc, vscale(x[i], covariant_derivative(conn, frame, i, v)))
    return acc


@dataclass(frozen=True)
class Curvature:
    """``table[i][j][k]`` holds the components of R(e_i, e_j) e_k."""

    frame: Frame
    table: tuple

    def __call__(self, i: int, j: int, k: int) -> Vector:
        return self.table[i][j][k]

    def component(self, l: int, i: int, j: int, k: int) -> Scalar:
        return self.table[i][j][k][l]

    def apply(self, x: Vector, y: Vector, z: Vector) -> Vector:
        n = self.frame.dim
        acc = self.frame.zero()
        for i in range(n):
            if x[i].is_zero():
                continue
            for j in range(n):
                if y[j].is_zero() or i == j:
                    continue
                for k in range(n):
                    if z[k].is_zero():
                        continue
                    acc = vadd(acc, vscale(x[i] * y[j] * z[k], self.table[i][j][k]))
        return acc

    def lowered(self, metric: Metric, i: int, j: int, k: int, l: int) -> Scalar:
        """g(R(e_i, e_j) e_k, e_l)."""
        return metric(self.table[i][j][k], self.frame.basis(l))


def curvature(frame: Frame, metric: Metric, conn: Connection | None = None) -> Curvature:
    """R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z on frame triples."""
    if conn is None:
        conn = levi_civita(frame, metric)
    n = frame.dim
    z = frame.zero()
    table = [[[z] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            br = frame.bracket(i, j)
            for k in range(n):
                r = covariant_derivative(conn, frame, i, conn.table[j][k])
                r = vsub(r, covariant_derivative(conn, frame, j, conn.table[i][k]))
                r = vsub(r, lincomb(br, [conn.table[m][k] for m in range(n)], n, frame.chart))
                table[i][j][k] = r
                table[j][i][k] = tuple(-x for x in r)
    return Curvature(frame, tuple(tuple(tuple(row) for row in plane) for plane in table))


def lie_derivative_metric(frame: Frame, metric: Metric, v: Vector) -> tuple:
    """(L_V g)(e_i, e_j) = V(g_ij) - g([V, e_i], e_j) - g(e_i, [V, e_j]); V(g_ij) = 0."""
    n = frame.dim
    brs = [bracket_fields(frame, v, frame.basis(i)) for i in range(n)]
    low = [metric.lower(b) for b in brs]
    return tuple(tuple(-(low[i][j] + low[j][i]) for j in range(n)) for i in range(n))


def exterior_derivative_eta(frame: Frame, eta: Sequence[Scalar]) -> tuple:
    """d eta(e_i, e_j) = 1/2 (e_i(eta_j) - e_j(eta_i) - eta([e_i, e_j])).

    The factor 1/2 is part of the convention used throughout the package.
    """
    n = frame.dim
    half = Fraction(1, 2)
    out = [[Scalar(frame.chart)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            br = frame.bracket(i, j)
            acc = frame.apply(i, eta[j]) - frame.apply(j, eta[i])
            for k in range(n):
                if not br[k].is_zero() and not eta[k].is_zero():
                    acc = acc - br[k] * eta[k]
            acc = acc * half
            out[i][j] = acc
            out[j][i] = -acc
    return tuple(tuple(row) for row in out)
