"""D_c-homothetic deformations.

phi' = phi, xi' = xi / c, eta' = c eta, g' = c g + c (c - 1) eta (x) eta.

The deformed structure lives on the frame ``{xi / c, e_1, ..., e_N}`` so that
frame vector 0 is again the Reeb field.
"""

from __future__ import annotations

from fractions import Fraction

from .algnum import AlgNum
from .frame import Frame, Metric
from .nullity import solve_kappa_mu
from .scalar import Scalar
from .structure import Check, ParacontactStructure, VerificationReport, verify_paracontact

__all__ = ["deform", "deform_kappa_mu", "verify_deformation_consistency"]


def _as_c(c) -> AlgNum:
    c = AlgNum.coerce(Fraction(c) if isinstance(c, str) else c)
    if not c:
        raise ValueError("deformation parameter c must be nonzero")
    return c


def _plain(x: AlgNum):
    return x.a if x.is_rational() else x


def deform(s: ParacontactStructure, c) -> ParacontactStructure:
    c = _as_c(c)
    N = s.dim
    inv = c.inverse()
    # change of basis: new e_0 = e_0 / c, other vectors unchanged
    scale = [inv] + [AlgNum(1)] * (N - 1)  # P = diag(scale)
    fr = s.frame
    if fr.kind == "algebra":
        brackets = {}
        for i in range(N):
            for j in range(i + 1, N):
                old = fr.bracket(i, j)
                factor = scale[i] * scale[j]
                # components in the new basis: multiply the e_0 slot by c
                new = tuple(
                    (old[k] * factor * (c if k == 0 else 1)) for k in range(N)
                )
                if any(not x.is_zero() for x in new):
                    brackets[(i, j)] = new
        frame = Frame.from_brackets(fr.labels, brackets)
    else:
        vectors = [list(v) for v in fr.vectors]
        vectors[0] = [x * inv for x in vectors[0]]
        frame = Frame.from_vectors(fr.labels, fr.chart, vectors)

    eta = [e.constant_value() for e in s.eta]
    g_old = [[c * s.metric.g[a][b] + c * (c - 1) * eta[a] * eta[b] for b in range(N)] for a in range(N)]
    g_new = [[g_old[a][b] * scale[a] * scale[b] for b in range(N)] for a in range(N)]
    phi_new = [[s.phi[k][i] * scale[i] * (c if k == 0 else 1) for i in range(N)] for k in range(N)]
    eta_new = [c * eta[j] * scale[j] for j in range(N)]
    name = f"{s.name} deformed by c={c}" if s.name else ""
    return ParacontactStructure(frame, Metric(g_new), phi_new, eta_new, name=name)


def deform_kappa_mu(kappa, mu, c):
    """(kappa', mu') = ((kappa + 1 - c^2) / c^2, (mu - 2 + 2c) / c).

    ``mu`` may be None (indeterminate), which is passed through.
    """
    c = _as_c(c)
    c2 = c * c
    k2 = (AlgNum.coerce(Fraction(kappa)) + 1 - c2) / c2
    m2 = None if mu is None or isinstance(mu, str) else (AlgNum.coerce(Fraction(mu)) - 2 + 2 * c) / c
    return _plain(k2), (None if m2 is None else _plain(m2))


def verify_deformation_consistency(s: ParacontactStructure, c) -> VerificationReport:
    """Deform, recompute (kappa', mu') from scratch and compare with the formula."""
    rep = VerificationReport(f"D_c-homothetic deformation, c = {c}")
    before = solve_kappa_mu(s)
    rep.add(Check("original (kappa, mu) solved", before.kappa is not None, before.status, None))
    d = deform(s, c)
    pc = verify_paracontact(d)
    rep.add(Check("deformed structure is paracontact metric", pc.passed,
                  "; ".join(str(f) for f in pc.failures()), None))
    after = solve_kappa_mu(d)
    rep.info["before"] = str(before)
    rep.info["after"] = str(after)
    if before.kappa is None:
        return rep
    mu_in = before.mu if before.status == "unique" else None
    k_pred, m_pred = deform_kappa_mu(before.kappa, mu_in, c)
    rep.info["predicted"] = f"({k_pred}, {m_pred})"
    dk = Scalar.const(AlgNum.coerce(k_pred) - AlgNum.coerce(after.kappa)) if after.kappa is not None else Scalar.const(1)
    rep.add(Check("kappa' matches formula", dk.is_zero(), f"recomputed {after.kappa}, predicted {k_pred}",
                  None if dk.is_zero() else dk))
    if m_pred is None:
        ok = after.status in ("mu_indeterminate",)
        rep.add(Check("mu' indeterminate (h = 0 preserved)", ok, after.status, None))
    else:
        after_mu = after.mu if after.status == "unique" else None
        dm = Scalar.const(AlgNum.coerce(m_pred) - AlgNum.coerce(after_mu)) if after_mu is not None else Scalar.const(1)
        rep.add(Check("mu' matches formula", dm.is_zero(), f"recomputed {after.mu}, predicted {m_pred}",
                      None if dm.is_zero() else dm))
    return rep
