"""The (kappa, mu) nullity condition: exact solve, h^2 law and case split."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .frame import vscale, vsub
from .linalg import row_echelon
from .scalar import Scalar
from .structure import Check, ParacontactStructure, VerificationReport, _zero_table_check

__all__ = ["NullityResult", "solve_kappa_mu", "nullity_residuals", "check_h_squared", "classify_case"]

UNIQUE = "unique"
MU_INDETERMINATE = "mu_indeterminate"
UNDERDETERMINED = "underdetermined"
INCONSISTENT = "inconsistent"


@dataclass
class NullityResult:
    kappa: Fraction | None
    mu: Fraction | str | None
    status: str
    h_zero: bool
    residuals: list = field(default_factory=list)
    case: str = "n/a"

    @property
    def is_unique(self) -> bool:
        return self.status == UNIQUE

    def to_dict(self) -> dict:
        return {
            "kappa": None if self.kappa is None else str(self.kappa),
            "mu": None if self.mu is None else str(self.mu),
            "status": self.status,
            "h_zero": self.h_zero,
            "case": self.case,
            "residuals": [{"where": w, "value": str(s)} for w, s in self.residuals],
        }

    def __str__(self):
        k = "?" if self.kappa is None else self.kappa
        m = "?" if self.mu is None else self.mu
        return f"(kappa, mu) = ({k}, {m}) [{self.status}, case {self.case}]"


def _nullity_parts(s: ParacontactStructure):
    """Per (pair, component): (R(e_i,e_j)xi, kappa-part, mu-part) as Scalars."""
    N = s.dim
    R = s.curvature
    h = s.h
    lab = s.labels
    out = []
    for i in range(N):
        for j in range(i + 1, N):
            ei, ej = s.frame.basis(i), s.frame.basis(j)
            kap = vsub(vscale(s.eta[j], ei), vscale(s.eta[i], ej))
            mu = vsub(vscale(s.eta[j], h.columns[i]), vscale(s.eta[i], h.columns[j]))
            r = R(i, j, 0)
            for l in range(N):
                out.append((f"R({lab[i]}, {lab[j]}) xi on {lab[l]}", r[l], kap[l], mu[l]))
    return out


def nullity_residuals(s: ParacontactStructure, kappa, mu) -> list:
    """Nonzero ``(where, residual)`` of R(X,Y)xi - kappa(...) - mu(...)."""
    mu = 0 if mu is None or isinstance(mu, str) else mu
    out = []
    for where, r, a, b in _nullity_parts(s):
        res = r - a * Fraction(kappa) - b * Fraction(mu)
        if not res.is_zero():
            out.append((where, res))
    return out


def solve_kappa_mu(s: ParacontactStructure) -> NullityResult:
    """Solve for rational constants kappa, mu in the nullity condition.

    Each canonical monomial of each residual component gives one linear
    equation; the rational and sqrt2 parts of its coefficient are split, so
    the overdetermined system is over Q and solved by exact elimination.
    """
    rows = []
    for _, r, a, b in _nullity_parts(s):
        keys = set(r.terms) | set(a.terms) | set(b.terms)
        for key in keys:
            cr, ca, cb = (x.terms.get(key) for x in (r, a, b))
            for part in ("a", "b"):
                vals = [getattr(c, part) if c is not None else Fraction(0) for c in (ca, cb, cr)]
                if any(vals):
                    rows.append(vals)
    h_zero = s.h.is_zero()
    if not rows:
        return NullityResult(None, None, UNDERDETERMINED, h_zero)
    red, pivots = row_echelon(rows)
    coef_rank = len([p for p in pivots if p < 2])
    if 2 in pivots:
        # 0 = 1 row: inconsistent; report residuals at a least-committal guess
        guess = _particular(rows)
        res = nullity_residuals(s, *guess)
        return NullityResult(None, None, INCONSISTENT, h_zero, residuals=res)
    if coef_rank == 2:
        kappa, mu = red[0][2], red[1][2]
        result = NullityResult(kappa, mu, UNIQUE, h_zero)
    elif coef_rank == 1 and pivots == [0] and all(row[1] == 0 for row in rows):
        kappa = red[0][2]
        status = MU_INDETERMINATE if h_zero else UNDERDETERMINED
        result = NullityResult(kappa, "indeterminate" if h_zero else None, status, h_zero)
    else:
        result = NullityResult(None, None, UNDERDETERMINED, h_zero)
    result.case = classify_case(result)
    return result


def _particular(rows):
    # solve using the first rows that determine (kappa, mu), ignoring the rest
    kappa = mu = Fraction(0)
    for r in rows:
        if r[0] and not r[1]:
            kappa = r[2] / r[0]
            break
    for r in rows:
        if r[1]:
            mu = (r[2] - r[0] * kappa) / r[1]
            break
    return kappa, mu


def check_h_squared(s: ParacontactStructure, kappa) -> VerificationReport:
    """h^2 = (kappa + 1) phi^2, componentwise and exactly."""
    rep = VerificationReport(f"h^2 = (kappa+1) phi^2 with kappa = {kappa}")
    N = s.dim
    lab = s.labels
    h = s.h
    factor = Fraction(kappa) + 1
    entries = []
    for i in range(N):
        h2 = h(h.columns[i])
        p2 = s.phi_vec(s.phi_column(i))
        diff = vsub(h2, vscale(factor, p2))
        entries += [(f"h^2 {lab[i]} on {lab[k]}", diff[k]) for k in range(N)]
    _zero_table_check(rep, "h^2 = (kappa+1) phi^2", entries)
    h2_zero = all(h(h.columns[i])[k].is_zero() for i in range(N) for k in range(N))
    rep.info["h^2 = 0"] = h2_zero
    return rep


def classify_case(result: NullityResult) -> str:
    """``kappa>-1``, ``kappa<-1``, ``kappa=-1 (h=0)``, ``kappa=-1 (h^2=0, h!=0)`` or ``n/a``."""
    if result.status == INCONSISTENT or result.kappa is None:
        return "n/a"
    k = Fraction(result.kappa)
    if k > -1:
        return "kappa>-1"
    if k < -1:
        return "kappa<-1"
    return "kappa=-1 (h=0)" if result.h_zero else "kappa=-1 (h^2=0, h!=0)"
