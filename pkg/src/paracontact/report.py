"""Full verification pipeline with text and structured (JSON-ready) output."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .canonical import (
    CanonicalFormError,
    canonical_basis,
    evaluate_at_point,
    h_rank_profile,
    verify_normal_form,
)
from .linalg import rank
from .nullity import check_h_squared, solve_kappa_mu
from .structure import (
    Check,
    ParacontactStructure,
    VerificationReport,
    check_paraSasakian_curvature,
    is_K_paracontact,
    nijenhuis_normality,
    verify_h_identities,
    verify_paracontact,
)

__all__ = ["FullReport", "run_full_report", "default_points", "parse_point"]

REPORT_VERSION = 1


def default_points(s: ParacontactStructure) -> list:
    """A fixed sample of points for coordinate structures (empty for algebras)."""
    chart = s.frame.chart
    if not chart:
        return []
    base = [
        (0, 0, 0), (0, 1, -1), (0, -2, 3), (1, 0, 0), (-1, 0, 0),
        (2, 1, -1), (-3, 2, 1), (1, -1, 2), (Fraction(1, 2), 3, 0), (-2, 3, 0),
    ]
    pts = []
    for b in base:
        vals = (list(b) + [0] * len(chart))[: len(chart)]
        pts.append(dict(zip(chart, map(Fraction, vals))))
    return pts


def parse_point(text: str, chart) -> dict:
    """``"1,-2,1/2"`` -> ``{x: 1, y: -2, z: 1/2}`` in chart order."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != len(chart):
        raise ValueError(f"point {text!r} has {len(parts)} coordinates, chart {tuple(chart)} needs {len(chart)}")
    try:
        return {c: Fraction(p) for c, p in zip(chart, parts)}
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"point {text!r} is not a list of rationals") from None


def _fmt_point(p: dict) -> str:
    return "(" + ", ".join(f"{k}={v}" for k, v in p.items()) + ")"


def _constant_h_rank(s: ParacontactStructure):
    m = s.h.matrix()
    if not all(x.is_constant() for row in m for x in row):
        return None
    return rank([[x.constant_value() for x in row] for row in m])


@dataclass
class FullReport:
    name: str
    sections: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    @property
    def reports(self) -> list:
        return list(self.sections.values())

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.sections.values())

    def failures(self) -> list:
        return [(k, c) for k, r in self.sections.items() for c in r.failures()]

    def to_dict(self) -> dict:
        out = {"version": REPORT_VERSION, "name": self.name, "passed": self.passed}
        out.update(self.data)
        out["sections"] = {k: r.to_dict() for k, r in self.sections.items()}
        return out

    def __str__(self) -> str:
        d = self.data
        lines = [f"== {self.name or 'structure'} ==  {'PASS' if self.passed else 'FAIL'}"]
        lines.append(f"dimension {d['dim']}, frame kind {d['frame_kind']}")
        lines.append(f"paracontact metric: {'yes' if d['paracontact'] else 'no'}")
        lines.append(f"h = 0: {d['h_zero']}, h^2 = 0: {d['h_squared_zero']}")
        nl = d["nullity"]
        lines.append(f"(kappa, mu) = ({nl['kappa']}, {nl['mu']}) [{nl['status']}], case {nl['case']}")
        lines.append(f"paraSasakian: {d['parasasakian']}, K-paracontact: {d['k_paracontact']}")
        lines.append(f"paraSasakian curvature identity: {d['eq_parasasakian_curvature']}")
        if d["rank"] is not None:
            lines.append(f"rank h = {d['rank']}")
        for row in d["rank_profile"]:
            lines.append(f"rank h at {row['point']} = {row['rank']}")
        for row in d["canonical"]:
            if "error" in row:
                lines.append(f"canonical basis at {row['point']}: error: {row['error']}")
            else:
                lines.append(f"canonical basis at {row['point']}: m = {row['m']}, signs {row['signs']}, "
                             f"{'exact' if row['exact'] else 'float'}")
        for r in self.sections.values():
            lines.append(str(r))
        return "\n".join(lines)


def run_full_report(
    s: ParacontactStructure,
    points=None,
    expected: dict | None = None,
    canonical_points=None,
    name: str | None = None,
) -> FullReport:
    """Run every check on ``s``; failures are recorded, not raised.

    ``points`` drives the rank profile (defaults to a fixed sample for
    coordinate structures).  ``canonical_points`` selects where canonical
    bases are built (default: ``points`` when given explicitly, otherwise a
    single evaluation for algebras).  ``expected`` is a catalog expectation
    dict, compared exactly.
    """
    rep = FullReport(name if name is not None else s.name)
    explicit = points is not None
    if points is None:
        points = default_points(s)
    if canonical_points is None:
        canonical_points = points if explicit else ([] if s.frame.chart else [{}])

    pc = verify_paracontact(s)
    rep.sections["paracontact"] = pc
    hid = verify_h_identities(s)
    rep.sections["h_identities"] = hid
    k_para, k_rep = is_K_paracontact(s)
    norm = nijenhuis_normality(s)
    eq2 = check_paraSasakian_curvature(s)

    nl = solve_kappa_mu(s)
    nullity_rep = VerificationReport("nullity condition")
    h2_zero = None
    if nl.kappa is not None:
        h2 = check_h_squared(s, nl.kappa)
        nullity_rep.extend(h2)
        h2_zero = h2.info.get("h^2 = 0")
    else:
        h2_zero = all(s.h(s.h.columns[i])[k].is_zero() for i in range(s.dim) for k in range(s.dim))
    nullity_rep.info["status"] = nl.status
    rep.sections["nullity"] = nullity_rep

    const_rank = _constant_h_rank(s)
    profile = []
    for p, r in h_rank_profile(s, points) if s.frame.chart else []:
        profile.append({"point": _fmt_point(p), "coords": {k: str(v) for k, v in p.items()}, "rank": r})

    canon = []
    canon_rep = VerificationReport("canonical bases")
    for p in canonical_points:
        label = _fmt_point(p) if p else "(constant)"
        try:
            pe = evaluate_at_point(s, p)
            res = canonical_basis(pe)
            vr = verify_normal_form(res, pe)
            canon_rep.checks.extend(
                Check(f"{c.name} at {label}", c.passed, c.where, c.witness) for c in vr.checks
            )
            canon.append({
                "point": label,
                "m": res.m,
                "signs": [int(e) for e in res.signs],
                "exact": res.exact,
                "basis": res.to_dict()["basis"],
                "normal_form": vr.passed,
            })
        except CanonicalFormError as exc:
            canon.append({"point": label, "error": str(exc)})
            canon_rep.add(Check(f"canonical basis at {label}", False, str(exc)))
    if canonical_points:
        rep.sections["canonical"] = canon_rep

    rep.data = {
        "dim": s.dim,
        "frame_kind": s.frame.kind,
        "paracontact": pc.passed,
        "h_zero": s.h.is_zero(),
        "h_squared_zero": h2_zero,
        "nullity": nl.to_dict(),
        "case": nl.case,
        "k_paracontact": k_para,
        "normal": norm.passed,
        "parasasakian": bool(norm.passed and pc.passed),
        "eq_parasasakian_curvature": eq2.passed,
        "rank": const_rank,
        "rank_profile": profile,
        "canonical": canon,
        "informational": {
            "normality": norm.to_dict(),
            "parasasakian_curvature": eq2.to_dict(),
            "killing": k_rep.to_dict(),
        },
    }
    if expected is not None:
        rep.sections["expected"] = compare_expected(rep, expected, points)
    return rep


def compare_expected(rep: FullReport, expected: dict, points) -> VerificationReport:
    """Exact comparison of a report against recorded expectations."""
    out = VerificationReport("recorded expectations")
    d = rep.data
    nl = d["nullity"]
    kappa = None if nl["kappa"] is None else Fraction(nl["kappa"])
    if "kappa" in expected:
        want = expected["kappa"]
        out.add(Check("kappa", kappa is not None and kappa == Fraction(want), f"got {nl['kappa']}, expected {want}"))
    if "mu" in expected:
        want = expected["mu"]
        if want is None:
            ok = nl["status"] == "mu_indeterminate"
        else:
            ok = nl["status"] == "unique" and Fraction(nl["mu"]) == Fraction(want)
        out.add(Check("mu", ok, f"got {nl['mu']} [{nl['status']}], expected {want}"))
    if "rank" in expected:
        law = expected["rank"]
        if callable(law):
            bad = [row for row, p in zip(d["rank_profile"], points) if row["rank"] != law(p)]
            out.add(Check("rank profile", not bad and bool(d["rank_profile"]),
                          "; ".join(f"{b['point']}: {b['rank']}" for b in bad) or "no sample points"))
        else:
            out.add(Check("rank", d["rank"] == law, f"got {d['rank']}, expected {law}"))
    if "parasasakian" in expected:
        out.add(Check("paraSasakian", d["parasasakian"] == expected["parasasakian"],
                      f"got {d['parasasakian']}, expected {expected['parasasakian']}"))
    if "eq_parasasakian_curvature" in expected:
        want = expected["eq_parasasakian_curvature"]
        out.add(Check("paraSasakian curvature identity", d["eq_parasasakian_curvature"] == want,
                      f"got {d['eq_parasasakian_curvature']}, expected {want}"))
    return out
