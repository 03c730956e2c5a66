"""Almost paracontact metric structures and their verification.

A :class:`ParacontactStructure` bundles a frame, a constant frame metric, a
constant (1,1)-tensor ``phi`` and the 1-form ``eta``.  The Reeb field is
always frame vector 0.  Checks never raise on a mathematical failure; they
return a :class:`VerificationReport` whose failed entries carry a nonzero
witness Scalar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .algnum import ONE, ZERO, AlgNum
from .frame import (
    Connection,
    Curvature,
    Frame,
    FrameError,
    Metric,
    _det_laplace,
    bracket_fields,
    curvature,
    exterior_derivative_eta,
    format_vector,
    is_zero_vector,
    levi_civita,
    lie_derivative_metric,
    lincomb,
    vadd,
    vscale,
    vsub,
)
from .linalg import nullspace, rank
from .scalar import Scalar

__all__ = [
    "StructureError",
    "EngineInconsistency",
    "Check",
    "VerificationReport",
    "ParacontactStructure",
    "HTensor",
    "verify_almost_paracontact",
    "verify_compatibility",
    "verify_paracontact",
    "compute_h",
    "verify_h_identities",
    "is_K_paracontact",
    "nijenhuis_normality",
    "is_paraSasakian",
    "check_paraSasakian_curvature",
]


class StructureError(ValueError):
    """Raised at ingestion for data that cannot form a structure at all."""


class EngineInconsistency(RuntimeError):
    """Two independent computations of the same fact disagree."""


@dataclass
class Check:
    name: str
    passed: bool
    where: str = ""
    witness: Scalar | None = None

    def __post_init__(self):
        if not self.passed and self.witness is not None and self.witness.is_zero():
            raise ValueError("a failing check needs a nonzero witness")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "where": self.where,
            "witness": None if self.witness is None else str(self.witness),
        }

    def __str__(self):
        mark = "ok  " if self.passed else "FAIL"
        tail = ""
        if not self.passed:
            tail = f"  [{self.where}: {self.witness}]" if self.witness is not None else f"  [{self.where}]"
        return f"{mark} {self.name}{tail}"


@dataclass
class VerificationReport:
    title: str
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.passed

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: VerificationReport) -> VerificationReport:
        self.checks.extend(other.checks)
        self.info.update(other.info)
        return self

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "info": _jsonable(self.info),
        }

    def __str__(self):
        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        lines += [f"  {c}" for c in self.checks]
        for k, v in self.info.items():
            lines.append(f"  {k} = {v}")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


def _zero_table_check(report, name, entries):
    """Add one check that passes iff every ``(where, scalar)`` entry is zero."""
    for where, s in entries:
        if not s.is_zero():
            return report.add(Check(name, False, where, s))
    return report.add(Check(name, True))


class ParacontactStructure:
    """(phi, xi, eta, g) on a frame; xi is frame vector 0.

    ``phi[k][i]`` is the ``e_k`` component of ``phi e_i`` (constant), and
    ``eta[i] = eta(e_i)``.  With ``strict=True`` (the default) ``eta`` must
    agree with ``g(., xi)``.
    """

    def __init__(self, frame: Frame, metric: Metric, phi, eta: Sequence, *, name: str = "", strict: bool = True):
        n = frame.dim
        if metric.dim != n:
            raise StructureError("metric and frame dimensions differ")
        phi_rows = []
        for row in phi:
            out = []
            for x in row:
                if isinstance(x, Scalar):
                    if not x.is_constant():
                        raise StructureError(f"phi must have constant frame components, got {x}")
                    x = x.constant_value()
                out.append(AlgNum.coerce(x))
            phi_rows.append(tuple(out))
        if len(phi_rows) != n or any(len(r) != n for r in phi_rows):
            raise StructureError("phi must be a square matrix of the frame dimension")
        eta = tuple(
            (x.with_chart(frame.chart) if x.chart else Scalar.const(x.constant_value(), frame.chart))
            if isinstance(x, Scalar)
            else Scalar.const(x, frame.chart)
            for x in eta
        )
        if len(eta) != n:
            raise StructureError("eta must have one component per frame vector")
        self.frame = frame
        self.metric = metric
        self.phi = tuple(phi_rows)
        self.eta = eta
        self.name = name
        if strict:
            mismatch = self.eta_mismatch()
            if mismatch is not None:
                i, s = mismatch
                raise StructureError(f"eta differs from g(., xi) at {frame.labels[i]}: difference {s}")

    # -- basics -------------------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.frame.dim

    @property
    def n(self) -> int:
        return (self.frame.dim - 1) // 2

    @property
    def labels(self):
        return self.frame.labels

    @property
    def xi(self):
        return self.frame.basis(0)

    def eta_mismatch(self):
        g_xi = self.metric.lower(self.frame.basis(0))
        for i in range(self.dim):
            d = self.eta[i] - g_xi[i]
            if not d.is_zero():
                return i, d
        return None

    def phi_vec(self, v) -> tuple:
        n = self.dim
        out = []
        for k in range(n):
            acc = Scalar(self.frame.chart)
            for i in range(n):
                c = self.phi[k][i]
                if c and not v[i].is_zero():
                    acc = acc + v[i] * c
            out.append(acc)
        return tuple(out)

    def phi_column(self, i: int) -> tuple:
        return tuple(Scalar.const(self.phi[k][i], self.frame.chart) for k in range(self.dim))

    def eta_of(self, v) -> Scalar:
        acc = Scalar(self.frame.chart)
        for a, b in zip(self.eta, v):
            if not a.is_zero() and not b.is_zero():
                acc = acc + a * b
        return acc

    def format(self, v) -> str:
        return format_vector(v, self.labels)

    # -- derived tensors (write-once caches) ---------------------------------------
    @cached_property
    def connection(self) -> Connection:
        return levi_civita(self.frame, self.metric)

    @cached_property
    def curvature(self) -> Curvature:
        return curvature(self.frame, self.metric, self.connection)

    @cached_property
    def d_eta(self) -> tuple:
        return exterior_derivative_eta(self.frame, self.eta)

    @cached_property
    def h(self) -> HTensor:
        return compute_h(self)

    @cached_property
    def nijenhuis(self) -> tuple:
        return _normality_tensor(self)

    def __eq__(self, other):
        if not isinstance(other, ParacontactStructure):
            return NotImplemented
        return (
            self.frame == other.frame
            and self.metric == other.metric
            and self.phi == other.phi
            and self.eta == other.eta
        )

    __hash__ = None

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<ParacontactStructure{label} dim={self.dim} {self.frame.kind}>"


@dataclass(frozen=True)
class HTensor:
    """``columns[i]`` holds the frame components of h e_i."""

    columns: tuple

    def __call__(self, v) -> tuple:
        n = len(self.columns)
        return lincomb(v, self.columns, n, v[0].chart if v else ())

    def matrix(self) -> tuple:
        """``m[k][i]`` = e_k component of h e_i."""
        n = len(self.columns)
        return tuple(tuple(self.columns[i][k] for i in range(n)) for k in range(n))

    def is_zero(self) -> bool:
        return all(is_zero_vector(c) for c in self.columns)

    def trace(self) -> Scalar:
        acc = self.columns[0][0]
        for i in range(1, len(self.columns)):
            acc = acc + self.columns[i][i]
        return acc


# ---------------------------------------------------------------------------
# axioms


def _phi_matrix_power2(phi):
    n = len(phi)
    return [[sum((phi[k][a] * phi[a][i] for a in range(n)), ZERO) for i in range(n)] for k in range(n)]


def verify_almost_paracontact(s: ParacontactStructure) -> VerificationReport:
    """eta(xi) = 1, phi^2 = I - eta (x) xi and dim D+ = dim D- = n."""
    rep = VerificationReport("almost paracontact structure")
    lab = s.labels
    n, N = s.n, s.dim
    if N % 2 == 0:
        rep.add(Check("odd dimension", False, f"dim = {N}", Scalar.const(N)))
        return rep
    one = s.frame.scalar(1)
    d = s.eta[0] - one
    rep.add(Check("eta(xi) = 1", d.is_zero(), f"eta({lab[0]}) - 1", d if not d.is_zero() else None))

    p2 = _phi_matrix_power2(s.phi)
    entries = []
    for i in range(N):
        for k in range(N):
            expected = (one if i == k else s.frame.scalar(0)) - (s.eta[i] if k == 0 else s.frame.scalar(0))
            entries.append((f"phi^2 {lab[i]} on {lab[k]}", Scalar.const(p2[k][i], s.frame.chart) - expected))
    _zero_table_check(rep, "phi^2 = I - eta (x) xi", entries)

    _zero_table_check(rep, "phi xi = 0", [(f"phi xi on {lab[k]}", Scalar.const(s.phi[k][0])) for k in range(N)])
    eta_phi = [(f"eta(phi {lab[i]})", s.eta_of(s.phi_column(i))) for i in range(N)]
    _zero_table_check(rep, "eta o phi = 0", eta_phi)

    phi_rank = rank([list(r) for r in s.phi])
    rep.add(Check("rank phi = 2n", phi_rank == 2 * n, f"rank = {phi_rank}",
                  None if phi_rank == 2 * n else Scalar.const(phi_rank - 2 * n)))

    plus = len(nullspace([[s.phi[k][i] - (ONE if i == k else ZERO) for i in range(N)] for k in range(N)], one=ONE))
    minus = len(nullspace([[s.phi[k][i] + (ONE if i == k else ZERO) for i in range(N)] for k in range(N)], one=ONE))
    rep.info["dim D+"] = plus
    rep.info["dim D-"] = minus
    ok = plus == n and minus == n
    rep.add(Check("dim D+ = dim D- = n", ok, f"(dim D+, dim D-) = ({plus}, {minus}), n = {n}",
                  None if ok else Scalar.const(plus - minus if plus != minus else plus - n)))
    return rep


def verify_compatibility(s: ParacontactStructure) -> VerificationReport:
    """g(phi X, phi Y) = -g(X, Y) + eta(X) eta(Y) and signature (n+1, n)."""
    rep = VerificationReport("metric compatibility")
    lab, N, n = s.labels, s.dim, s.n
    cols = [s.phi_column(i) for i in range(N)]
    g = s.metric
    entries = []
    for i in range(N):
        for j in range(i, N):
            lhs = g(cols[i], cols[j])
            rhs = -Scalar.const(g.g[i][j], s.frame.chart) + s.eta[i] * s.eta[j]
            entries.append((f"g(phi {lab[i]}, phi {lab[j]})", lhs - rhs))
    _zero_table_check(rep, "g(phi X, phi Y) = -g(X, Y) + eta(X) eta(Y)", entries)

    sig = g.signature
    rep.info["signature"] = sig
    ok = sig == (n + 1, n)
    rep.add(Check("signature (n+1, n)", ok, f"signature = {sig}", None if ok else Scalar.const(sig[0] - n - 1 or sig[1] - n)))

    mismatch = s.eta_mismatch()
    if mismatch is None:
        rep.add(Check("eta = g(., xi)", True))
    else:
        i, d = mismatch
        rep.add(Check("eta = g(., xi)", False, f"on {lab[i]}", d))

    entries = []
    for i in range(N):
        for j in range(N):
            a = g(s.frame.basis(i), cols[j])
            b = g(cols[i], s.frame.basis(j))
            entries.append((f"g({lab[i]}, phi {lab[j]}) + g(phi {lab[i]}, {lab[j]})", a + b))
    _zero_table_check(rep, "g(., phi .) = -g(phi ., .)", entries)
    return rep


def _ker_eta_basis(s: ParacontactStructure):
    # e_i - eta_i xi lies in Ker eta whenever eta(xi) = 1
    out = []
    for i in range(1, s.dim):
        v = list(s.frame.basis(i))
        v[0] = v[0] - s.eta[i]
        out.append(tuple(v))
    return out


def verify_paracontact(s: ParacontactStructure) -> VerificationReport:
    """Full paracontact metric check: axioms, compatibility, d eta = Phi, contact."""
    rep = VerificationReport("paracontact metric structure")
    rep.extend(verify_almost_paracontact(s))
    rep.extend(verify_compatibility(s))
    lab, N = s.labels, s.dim
    de = s.d_eta
    entries = []
    for i in range(N):
        for j in range(i + 1, N):
            phi_form = s.metric(s.frame.basis(i), s.phi_column(j))
            entries.append((f"d eta({lab[i]}, {lab[j]}) - g({lab[i]}, phi {lab[j]})", de[i][j] - phi_form))
    _zero_table_check(rep, "d eta = Phi", entries)

    basis = _ker_eta_basis(s)
    m = len(basis)
    if m == 0:
        rep.add(Check("eta ^ (d eta)^n != 0", True, "dimension 1"))
    else:
        restricted = []
        for u in basis:
            row = []
            for v in basis:
                acc = Scalar(s.frame.chart)
                for a in range(N):
                    if u[a].is_zero():
                        continue
                    for b in range(N):
                        if not v[b].is_zero() and not de[a][b].is_zero():
                            acc = acc + u[a] * v[b] * de[a][b]
                row.append(acc)
            restricted.append(row)
        det = _det_laplace(restricted, list(range(m)), s.frame.chart)
        rep.info["contact determinant"] = str(det)
        rep.add(Check("eta ^ (d eta)^n != 0", not det.is_zero(), "det of d eta on Ker eta",
                      None))
    return rep


# ---------------------------------------------------------------------------
# the tensor h


def compute_h(s: ParacontactStructure) -> HTensor:
    """h e_i = 1/2 ([xi, phi e_i] - phi [xi, e_i])."""
    half = Fraction(1, 2)
    xi = s.xi
    cols = []
    for i in range(s.dim):
        a = bracket_fields(s.frame, xi, s.phi_column(i))
        b = s.phi_vec(s.frame.bracket(0, i))
        cols.append(tuple(x * half for x in vsub(a, b)))
    return HTensor(tuple(cols))


def verify_h_identities(s: ParacontactStructure, h: HTensor | None = None) -> VerificationReport:
    """h symmetric, h phi = -phi h, h xi = 0, tr h = 0, nabla xi = -phi + phi h."""
    h = h if h is not None else s.h
    rep = VerificationReport("identities of h")
    lab, N = s.labels, s.dim
    g = s.metric
    basis = [s.frame.basis(i) for i in range(N)]
    entries = []
    for i in range(N):
        for j in range(i + 1, N):
            entries.append((f"g(h {lab[i]}, {lab[j]}) - g({lab[i]}, h {lab[j]})",
                            g(h.columns[i], basis[j]) - g(basis[i], h.columns[j])))
    _zero_table_check(rep, "g(hX, Y) = g(X, hY)", entries)

    entries = []
    for i in range(N):
        v = vadd(h(s.phi_column(i)), s.phi_vec(h.columns[i]))
        entries += [(f"(h phi + phi h) {lab[i]} on {lab[k]}", v[k]) for k in range(N)]
    _zero_table_check(rep, "h phi + phi h = 0", entries)

    _zero_table_check(rep, "h xi = 0", [(f"h xi on {lab[k]}", h.columns[0][k]) for k in range(N)])
    _zero_table_check(rep, "tr h = 0", [("trace", h.trace())])

    conn = s.connection
    entries = []
    for i in range(N):
        expected = vadd(vscale(-1, s.phi_column(i)), s.phi_vec(h.columns[i]))
        diff = vsub(conn(i, 0), expected)
        entries += [(f"nabla_{lab[i]} xi on {lab[k]}", diff[k]) for k in range(N)]
    _zero_table_check(rep, "nabla xi = -phi + phi h", entries)
    return rep


def is_K_paracontact(s: ParacontactStructure):
    """``(flag, report)``: h = 0, cross-checked against L_xi g = 0."""
    rep = VerificationReport("K-paracontact")
    lab, N = s.labels, s.dim
    h = s.h
    h_entries = [(f"h {lab[i]} on {lab[k]}", h.columns[i][k]) for i in range(N) for k in range(N)]
    c1 = _zero_table_check(rep, "h = 0", h_entries)
    lg = lie_derivative_metric(s.frame, s.metric, s.xi)
    lg_entries = [(f"(L_xi g)({lab[i]}, {lab[j]})", lg[i][j]) for i in range(N) for j in range(i, N)]
    c2 = _zero_table_check(rep, "L_xi g = 0", lg_entries)
    if c1.passed != c2.passed:
        raise EngineInconsistency(
            f"h = 0 is {c1.passed} but L_xi g = 0 is {c2.passed} for {s!r}"
        )
    return c1.passed, rep


def _normality_tensor(s: ParacontactStructure):
    N = s.dim
    fr = s.frame
    cols = [s.phi_column(i) for i in range(N)]
    de = s.d_eta
    table = [[fr.zero()] * N for _ in range(N)]
    for i in range(N):
        for j in range(i + 1, N):
            v = s.phi_vec(s.phi_vec(fr.bracket(i, j)))
            v = vadd(v, bracket_fields(fr, cols[i], cols[j]))
            v = vsub(v, s.phi_vec(bracket_fields(fr, cols[i], fr.basis(j))))
            v = vsub(v, s.phi_vec(bracket_fields(fr, fr.basis(i), cols[j])))
            v = vsub(v, vscale(de[i][j] * 2, s.xi))
            table[i][j] = v
            table[j][i] = tuple(-x for x in v)
    return tuple(tuple(r) for r in table)


def nijenhuis_normality(s: ParacontactStructure) -> VerificationReport:
    """N = [phi, phi] - 2 d eta (x) xi on all frame pairs; normal iff N = 0."""
    rep = VerificationReport("normality")
    lab, N = s.labels, s.dim
    table = s.nijenhuis
    entries = [
        (f"N({lab[i]}, {lab[j]}) on {lab[k]}", table[i][j][k])
        for i in range(N) for j in range(i + 1, N) for k in range(N)
    ]
    _zero_table_check(rep, "[phi, phi] - 2 d eta (x) xi = 0", entries)
    return rep


def is_paraSasakian(s: ParacontactStructure) -> bool:
    return verify_paracontact(s).passed and nijenhuis_normality(s).passed


def check_paraSasakian_curvature(s: ParacontactStructure) -> VerificationReport:
    """R(X, Y) xi = -(eta(Y) X - eta(X) Y) on all frame pairs."""
    rep = VerificationReport("R(X,Y)xi = -(eta(Y)X - eta(X)Y)")
    lab, N = s.labels, s.dim
    R = s.curvature
    entries = []
    for i in range(N):
        for j in range(i + 1, N):
            expected = vsub(vscale(s.eta[i], s.frame.basis(j)), vscale(s.eta[j], s.frame.basis(i)))
            diff = vsub(R(i, j, 0), expected)
            entries += [(f"R({lab[i]}, {lab[j]}) xi on {lab[k]}", diff[k]) for k in range(N)]
    _zero_table_check(rep, "R(X,Y)xi = -(eta(Y)X - eta(X)Y)", entries)
    return rep
