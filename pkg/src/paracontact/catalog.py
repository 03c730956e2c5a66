"""Built-in example families of paracontact metric (-1, mu)-spaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algnum import SQRT2, AlgNum
from .frame import Frame, Metric
from .scalar import Scalar, parse_scalar
from .structure import ParacontactStructure

__all__ = ["CatalogEntry", "ParameterError", "BUILTINS", "instantiate_builtin", "get_entry", "pair_labels"]


class ParameterError(ValueError):
    pass


def pair_labels(n: int) -> list:
    labels = ["xi"]
    for i in range(1, n + 1):
        labels += [f"X{i}", f"Y{i}"]
    return labels


class _Algebra:
    """Accumulates brackets by label with Q(sqrt2) coefficients."""

    def __init__(self, labels):
        self.labels = list(labels)
        self.idx = {l: k for k, l in enumerate(self.labels)}
        self.brackets: dict = {}

    def vec(self, combo: dict) -> tuple:
        v = [AlgNum(0)] * len(self.labels)
        for l, c in combo.items():
            v[self.idx[l]] = v[self.idx[l]] + AlgNum.coerce(c)
        return tuple(v)

    def set(self, a: str, b: str, combo: dict):
        i, j = self.idx[a], self.idx[b]
        key, sign = ((i, j), 1) if i < j else ((j, i), -1)
        if key in self.brackets:
            raise ValueError(f"bracket [{a}, {b}] defined twice")
        self.brackets[key] = tuple(sign * c for c in self.vec(combo))

    def frame(self) -> Frame:
        br = {k: tuple(Scalar.const(c) for c in v) for k, v in self.brackets.items()}
        return Frame.from_brackets(self.labels, br)


def _add(*combos) -> dict:
    out: dict = {}
    for c in combos:
        for k, v in c.items():
            out[k] = out.get(k, 0) + v
    return out


def _scale(c, combo: dict) -> dict:
    return {k: c * v for k, v in combo.items()}


def _phi_from_signs(labels, signs: dict) -> list:
    n = len(labels)
    phi = [[0] * n for _ in range(n)]
    for l, s in signs.items():
        k = labels.index(l)
        phi[k][k] = s
    return phi


def _pair_metric(labels, eps: dict) -> Metric:
    entries = {(0, 0): 1}
    for i, e in eps.items():
        entries[(labels.index(f"X{i}"), labels.index(f"Y{i}"))] = e
    return Metric.from_dict(len(labels), entries)


def _reeb_eta(dim: int) -> list:
    return [1] + [0] * (dim - 1)


def build_mu2_rank_m(n: int, m: int) -> ParacontactStructure:
    """(2n+1)-dim Lie algebra, (-1, 2)-space with rank h = m, 1 <= m <= n."""
    labels = pair_labels(n)
    alg = _Algebra(labels)
    X = lambda i: f"X{i}"
    Y = lambda i: f"Y{i}"
    for i in range(1, m + 1):
        alg.set("xi", X(i), {Y(i): 1})
    r2 = SQRT2
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            d = lambda a, b: 1 if a == b else 0
            if i <= m and j <= m:
                if i == j:
                    combo = _add({"xi": 2}, {Y(m): r2 * (1 + d(i, m))})
                else:
                    combo = _add(_scale(r2 * d(i, m), {Y(j): 1}), _scale(r2 * d(j, m), {Y(i): 1}))
            elif i > m and j > m:
                if i != j:
                    continue
                combo = {"xi": 2, Y(i): r2}
            elif i <= m < j:
                combo = {Y(i): r2}
            else:
                continue
            if any(AlgNum.coerce(v) for v in combo.values()):
                alg.set(X(i), Y(j), combo)
    signs = {}
    for i in range(1, n + 1):
        signs[X(i)], signs[Y(i)] = 1, -1
    phi = _phi_from_signs(labels, signs)
    g = _pair_metric(labels, {i: 1 for i in range(1, n + 1)})
    return ParacontactStructure(alg.frame(), g, phi, _reeb_eta(len(labels)), name=f"ex-mu2-hm-n(n={n},m={m})")


def build_mu0_rank1(n: int) -> ParacontactStructure:
    """(2n+1)-dim Lie algebra, (-1, 0)-space with rank h = 1."""
    labels = pair_labels(n)
    alg = _Algebra(labels)
    alg.set("xi", "X1", {"X1": 1, "Y1": 1})
    alg.set("xi", "Y1", {"Y1": -1})
    alg.set("X1", "Y1", {"xi": 2})
    for i in range(2, n + 1):
        alg.set(f"X{i}", f"Y{i}", {"xi": 2, f"Y{i}": 2})
        alg.set("X1", f"Y{i}", {"X1": 1, "Y1": 1})
        alg.set("Y1", f"Y{i}", {"Y1": -1})
    signs = {"X1": 1, "Y1": -1}
    for i in range(2, n + 1):
        signs[f"X{i}"], signs[f"Y{i}"] = -1, 1
    phi = _phi_from_signs(labels, signs)
    eps = {1: 1}
    eps.update({i: -1 for i in range(2, n + 1)})
    g = _pair_metric(labels, eps)
    return ParacontactStructure(alg.frame(), g, phi, _reeb_eta(len(labels)), name=f"ex-mu0-h1(n={n})")


def build_mu0_rank_m(n: int, m: int) -> ParacontactStructure:
    """(2n+1)-dim Lie algebra, (-1, 0)-space with rank h = m, 2 <= m <= n.

    Brackets whose index range is empty for the given (n, m) are omitted.
    """
    labels = pair_labels(n)
    alg = _Algebra(labels)
    X = lambda i: f"X{i}"
    Y = lambda i: f"Y{i}"
    r2 = SQRT2
    ad_X = {1: {"X1": 1, "X2": 1, "Y1": 1}, 2: {"X1": 1, "X2": 1, "Y2": 1}}
    ad_Y = {1: {"Y1": -1, "Y2": 1}, 2: {"Y1": 1, "Y2": -1}}
    for i in range(3, m + 1):
        ad_X[i] = {X(i): 1, Y(i): 1}
        ad_Y[i] = {Y(i): -1}
    for i in range(1, m + 1):
        alg.set("xi", X(i), ad_X[i])
        alg.set("xi", Y(i), ad_Y[i])
    # [X_i, X_j]
    alg.set(X(1), X(2), {X(1): r2})
    for j in range(3, m + 1):
        alg.set(X(2), X(j), {X(j): -r2})
    for i in range(1, m + 1):
        for j in range(m + 1, n + 1):
            alg.set(X(i), X(j), _scale(r2, ad_X[i]))
    # [Y_i, Y_j]
    alg.set(Y(1), Y(2), {Y(1): -r2, Y(2): r2})
    for i in (1, 2):
        for j in range(3, m + 1):
            alg.set(Y(i), Y(j), {Y(j): r2})
    # [X_i, Y_i]
    alg.set(X(1), Y(1), {"xi": 2, X(2): r2, Y(2): r2})
    alg.set(X(2), Y(2), {"xi": -2, X(1): r2})
    for i in range(3, m + 1):
        alg.set(X(i), Y(i), {"xi": -2, X(1): r2, X(2): -r2, Y(2): -r2})
    for i in range(m + 1, n + 1):
        alg.set(X(i), Y(i), {"xi": -2, X(i): -r2})
    # [X_i, Y_j], i != j
    alg.set(X(1), Y(2), {Y(1): r2, X(2): r2})
    alg.set(X(2), Y(1), {X(1): r2})
    for i in (1, 2):
        for j in range(3, m + 1):
            alg.set(X(i), Y(j), {X(j): r2})
    for i in range(3, m + 1):
        alg.set(X(i), Y(2), {Y(i): r2})
    for i in range(m + 1, n + 1):
        for j in range(1, m + 1):
            alg.set(X(i), Y(j), _scale(-r2, ad_Y[j]))
    signs = {}
    for i in range(1, n + 1):
        signs[X(i)], signs[Y(i)] = 1, -1
    phi = _phi_from_signs(labels, signs)
    eps = {1: 1}
    eps.update({i: -1 for i in range(2, n + 1)})
    g = _pair_metric(labels, eps)
    return ParacontactStructure(alg.frame(), g, phi, _reeb_eta(len(labels)), name=f"ex-mu0-h2+(n={n},m={m})")


def _nonconstant(coefficient: str, name: str) -> ParacontactStructure:
    chart = ("x", "y", "z")
    P = lambda t: parse_scalar(t, chart)
    vectors = [
        [P("0"), P("0"), P("1")],  # xi = d/dz
        [P("1"), P(coefficient), P("-2*y")],  # e1
        [P("0"), P("1"), P("0")],  # e2 = d/dy
    ]
    frame = Frame.from_vectors(["xi", "e1", "e2"], chart, vectors)
    g = Metric.from_dict(3, {(0, 0): 1, (1, 2): 1})
    phi = [[0, 0, 0], [0, 1, 0], [0, 0, -1]]
    # eta = 2y dx + dz evaluated on the frame
    eta_coord = [P("2*y"), P("0"), P("1")]
    eta = [sum((a * b for a, b in zip(v, eta_coord)), Scalar(chart)) for v in vectors]
    return ParacontactStructure(frame, g, phi, eta, name=name)


def build_mu2_nonconstant() -> ParacontactStructure:
    """R^3 with e1 = dx + xz dy - 2y dz; (-1, 2)-space, rank h_p = 0 iff x = 0."""
    return _nonconstant("x*z", "ex-mu2-nonconstant")


def build_mu0_nonconstant() -> ParacontactStructure:
    """R^3 with e1 = dx + x e^{-2z} dy - 2y dz; (-1, 0)-space, rank h_p = 0 iff x = 0."""
    return _nonconstant("x*exp(-2*z)", "ex-mu0-nonconstant")


def build_heisenberg(n: int) -> ParacontactStructure:
    """Hyperbolic Heisenberg algebra [X_i, Y_i] = 2 xi: a paraSasakian reference."""
    labels = pair_labels(n)
    alg = _Algebra(labels)
    for i in range(1, n + 1):
        alg.set(f"X{i}", f"Y{i}", {"xi": 2})
    signs = {}
    for i in range(1, n + 1):
        signs[f"X{i}"], signs[f"Y{i}"] = 1, -1
    phi = _phi_from_signs(labels, signs)
    g = _pair_metric(labels, {i: 1 for i in range(1, n + 1)})
    return ParacontactStructure(alg.frame(), g, phi, _reeb_eta(len(labels)), name=f"parasasakian-heisenberg(n={n})")


def _x_rank_law(point) -> int:
    return 0 if Fraction(point["x"]) == 0 else 1


@dataclass
class CatalogEntry:
    """A parameterised example family and the facts recorded for it.

    ``expected(params)`` returns a dict with keys ``kappa``, ``mu`` (None
    when indeterminate), ``rank`` (an int, or a callable of a point),
    ``parasasakian`` and ``eq_parasasakian_curvature``.
    """

    name: str
    description: str
    params: dict
    builder: Callable
    expected: Callable
    constraint: Callable = field(default=lambda p: None)
    defaults: dict = field(default_factory=dict)

    def validate(self, params: dict) -> dict:
        p = dict(self.defaults)
        p.update(params)
        unknown = set(p) - set(self.params)
        if unknown:
            raise ParameterError(f"{self.name}: unknown parameter(s) {sorted(unknown)}")
        missing = set(self.params) - set(p)
        if missing:
            raise ParameterError(f"{self.name}: missing parameter(s) {sorted(missing)}")
        try:
            p = {k: int(v) for k, v in p.items()}
        except (TypeError, ValueError):
            raise ParameterError(f"{self.name}: parameters must be integers") from None
        msg = self.constraint(p)
        if msg:
            raise ParameterError(f"{self.name}: {msg}")
        return p

    def build(self, params: dict | None = None) -> ParacontactStructure:
        p = self.validate(params or {})
        return self.builder(**p)


def _c_nm(min_m):
    def check(p):
        n, m = p["n"], p["m"]
        if n < 1:
            return "requires n >= 1"
        if min_m == 2 and n < 2:
            return "requires n >= 2"
        if not (min_m <= m <= n):
            return f"requires {min_m} <= m <= n"
        return None
    return check


def _c_n(p):
    return None if p["n"] >= 1 else "requires n >= 1"


BUILTINS = {
    e.name: e
    for e in [
        CatalogEntry(
            "ex-mu2-hm-n",
            "(2n+1)-dim Lie group, (-1,2)-space with constant rank h = m",
            {"n": "n >= 1", "m": "1 <= m <= n"},
            build_mu2_rank_m,
            lambda p: dict(kappa=-1, mu=2, rank=p["m"], parasasakian=False, eq_parasasakian_curvature=False),
            _c_nm(1),
        ),
        CatalogEntry(
            "ex-mu0-h1",
            "(2n+1)-dim Lie group, (-1,0)-space with rank h = 1",
            {"n": "n >= 1"},
            build_mu0_rank1,
            lambda p: dict(kappa=-1, mu=0, rank=1, parasasakian=False, eq_parasasakian_curvature=True),
            _c_n,
        ),
        CatalogEntry(
            "ex-mu0-h2+",
            "(2n+1)-dim Lie group, (-1,0)-space with constant rank h = m >= 2",
            {"n": "n >= 2", "m": "2 <= m <= n"},
            build_mu0_rank_m,
            lambda p: dict(kappa=-1, mu=0, rank=p["m"], parasasakian=False, eq_parasasakian_curvature=True),
            _c_nm(2),
        ),
        CatalogEntry(
            "ex-mu2-nonconstant",
            "R^3, (-1,2)-space with rank h_p = 0 if x = 0 and 1 otherwise",
            {},
            build_mu2_nonconstant,
            lambda p: dict(kappa=-1, mu=2, rank=_x_rank_law, parasasakian=False, eq_parasasakian_curvature=False),
        ),
        CatalogEntry(
            "ex-mu0-nonconstant",
            "R^3, (-1,0)-space with rank h_p = 0 if x = 0 and 1 otherwise",
            {},
            build_mu0_nonconstant,
            lambda p: dict(kappa=-1, mu=0, rank=_x_rank_law, parasasakian=False, eq_parasasakian_curvature=True),
        ),
        CatalogEntry(
            "parasasakian-heisenberg",
            "(2n+1)-dim hyperbolic Heisenberg algebra, paraSasakian (h = 0)",
            {"n": "n >= 1"},
            build_heisenberg,
            lambda p: dict(kappa=-1, mu=None, rank=0, parasasakian=True, eq_parasasakian_curvature=True),
            _c_n,
        ),
    ]
}


def get_entry(name: str) -> CatalogEntry:
    try:
        return BUILTINS[name]
    except KeyError:
        raise ParameterError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None


def instantiate_builtin(name: str, params: dict | None = None) -> ParacontactStructure:
    return get_entry(name).build(params)
