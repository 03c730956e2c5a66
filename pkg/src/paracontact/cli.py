"""Command-line front end.

Exit status: 0 when every check passed, 1 when a mathematical check failed,
2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .canonical import CanonicalFormError, canonical_basis, evaluate_at_point, verify_normal_form
from .catalog import BUILTINS, ParameterError, get_entry
from .deformation import deform, deform_kappa_mu, verify_deformation_consistency
from .dsl import DocumentError, DocumentRejected, load_document, print_document
from .nullity import solve_kappa_mu
from .report import parse_point, run_full_report
from .structure import verify_h_identities, verify_paracontact

__all__ = ["main", "build_parser", "ALL_INSTANCES"]

OK, FAILED, USAGE = 0, 1, 2

# instances exercised by ``report --all``
ALL_INSTANCES = [
    ("ex-mu2-hm-n", {"n": 1, "m": 1}),
    ("ex-mu2-hm-n", {"n": 2, "m": 1}),
    ("ex-mu2-hm-n", {"n": 2, "m": 2}),
    ("ex-mu2-hm-n", {"n": 3, "m": 2}),
    ("ex-mu0-h1", {"n": 1}),
    ("ex-mu0-h1", {"n": 2}),
    ("ex-mu0-h1", {"n": 3}),
    ("ex-mu0-h2+", {"n": 2, "m": 2}),
    ("ex-mu0-h2+", {"n": 3, "m": 2}),
    ("ex-mu0-h2+", {"n": 3, "m": 3}),
    ("ex-mu0-h2+", {"n": 4, "m": 3}),
    ("ex-mu2-nonconstant", {}),
    ("ex-mu0-nonconstant", {}),
    ("parasasakian-heisenberg", {"n": 1}),
    ("parasasakian-heisenberg", {"n": 2}),
]


class UsageError(Exception):
    pass


def _emit(args, text: str, data) -> None:
    if args.format == "structured":
        print(json.dumps(data, indent=2, ensure_ascii=False))
    else:
        print(text)


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects k=v, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _load(args):
    """Return (structure, catalog entry or None, validated params)."""
    if bool(args.builtin) == bool(args.file):
        raise UsageError("give exactly one of --builtin or --file")
    if args.builtin:
        entry = get_entry(args.builtin)
        params = entry.validate(_parse_params(args.param))
        return entry.build(params), entry, params
    if args.param:
        raise UsageError("--param only applies to --builtin")
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    return load_document(text), None, {}


def _points(args, s) -> list:
    try:
        return [parse_point(p, s.frame.chart) for p in args.point or []]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _status(*reports) -> int:
    return OK if all(r.passed for r in reports) else FAILED


# -- commands ------------------------------------------------------------------


def cmd_list(args) -> int:
    rows = []
    for e in BUILTINS.values():
        rows.append({"name": e.name, "description": e.description, "parameters": e.params})
    text = "\n".join(
        f"{r['name']:26s} {r['description']}"
        + ("".join(f"\n{'':26s}   {k}: {v}" for k, v in r["parameters"].items()))
        for r in rows
    )
    _emit(args, text, {"builtins": rows})
    return OK


def cmd_verify(args) -> int:
    s, _, _ = _load(args)
    pc = verify_paracontact(s)
    hid = verify_h_identities(s)
    _emit(args, f"{pc}\n{hid}", {"passed": pc.passed and hid.passed,
                                 "paracontact": pc.to_dict(), "h_identities": hid.to_dict()})
    return _status(pc, hid)


def cmd_classify(args) -> int:
    s, _, _ = _load(args)
    pc = verify_paracontact(s)
    res = solve_kappa_mu(s)
    ok = pc.passed and res.status in ("unique", "mu_indeterminate")
    lines = [f"(kappa,mu)=({res.kappa if res.kappa is not None else '?'},"
             f"{res.mu if res.mu is not None else '?'})",
             f"status: {res.status}", f"case: {res.case}"]
    if not pc.passed:
        lines.append(str(pc))
    for where, r in res.residuals[:5]:
        lines.append(f"residual {where}: {r}")
    _emit(args, "\n".join(lines), {"passed": ok, "paracontact": pc.passed, "nullity": res.to_dict()})
    return OK if ok else FAILED


def cmd_canonical(args) -> int:
    s, _, _ = _load(args)
    points = _points(args, s)
    if not points:
        if s.frame.chart:
            raise UsageError("coordinate structures need at least one --point")
        points = [{}]
    texts, rows, status = [], [], OK
    for p in points:
        label = ", ".join(f"{k}={v}" for k, v in p.items()) or "constant"
        try:
            pe = evaluate_at_point(s, p)
            res = canonical_basis(pe)
            vr = verify_normal_form(res, pe)
        except CanonicalFormError as exc:
            status = FAILED
            texts.append(f"at {label}: error: {exc}")
            rows.append({"point": label, "error": str(exc)})
            continue
        if not vr.passed:
            status = FAILED
        eps = ", ".join(f"eps{i + 1}={'+1' if e > 0 else '-1'}" for i, e in enumerate(res.signs))
        block = [f"at {label}: m={res.m}, {eps} ({'exact' if res.exact else 'float, tol 1e-9'})"]
        d = res.to_dict()
        for lab, v in d["basis"].items():
            block.append(f"  {lab} = [{', '.join(v)}] in frame {list(s.labels)}")
        coords = res.coordinate_basis(pe)
        if coords is not None:
            d["coordinate_basis"] = {lab: [str(x) for x in v] for lab, v in zip(res.labels(), coords)}
        block.append(str(vr))
        texts.append("\n".join(block))
        rows.append({"point": label, **d, "verification": vr.to_dict()})
    _emit(args, "\n".join(texts), {"passed": status == OK, "bases": rows})
    return status


def cmd_deform(args) -> int:
    s, _, _ = _load(args)
    if args.c is None:
        raise UsageError("deform needs --c")
    try:
        d = deform(s, args.c)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    out = {"c": args.c, "document": print_document(d)}
    lines = [f"# deformed with c = {args.c}", out["document"].rstrip()]
    status = OK
    if args.check:
        rep = verify_deformation_consistency(s, args.c)
        out["verification"] = rep.to_dict()
        lines.append(str(rep))
        status = _status(rep)
    else:
        res = solve_kappa_mu(s)
        if res.kappa is not None:
            mu = res.mu if res.status == "unique" else None
            k2, m2 = deform_kappa_mu(res.kappa, mu, args.c)
            out["predicted"] = {"kappa": str(k2), "mu": None if m2 is None else str(m2)}
            lines.append(f"# predicted (kappa,mu)=({k2},{'indeterminate' if m2 is None else m2})")
    out["passed"] = status == OK
    _emit(args, "\n".join(lines), out)
    return status


def _report_one(job):
    name, params = job
    entry = get_entry(name)
    p = entry.validate(params)
    r = run_full_report(entry.build(p), expected=entry.expected(p))
    return r.passed, r.to_dict(), str(r)


def cmd_report(args) -> int:
    if args.all:
        if args.builtin or args.file or args.param or args.point:
            raise UsageError("--all takes no input selector")
        jobs = ALL_INSTANCES
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as ex:
                results = list(ex.map(_report_one, jobs))
        else:
            results = [_report_one(j) for j in jobs]
        ok = all(r[0] for r in results)
        _emit(args, "\n\n".join(r[2] for r in results), {"passed": ok, "reports": [r[1] for r in results]})
        return OK if ok else FAILED
    s, entry, params = _load(args)
    points = _points(args, s) if args.point else None
    expected = entry.expected(params) if entry is not None else None
    r = run_full_report(s, points=points, expected=expected)
    _emit(args, str(r), r.to_dict())
    return OK if r.passed else FAILED


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paracontact",
        description="Verify and classify paracontact metric (kappa, mu)-structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, points=False):
        p.add_argument("--builtin", help="catalog entry name (see 'list')")
        p.add_argument("--file", help="structure document")
        p.add_argument("--param", action="append", metavar="K=V", help="builtin parameter (repeatable)")
        if points:
            p.add_argument("--point", action="append", metavar="X,Y,Z",
                           help="evaluation point in chart order (repeatable)")
        p.add_argument("--format", choices=("text", "structured"), default="text")

    p = sub.add_parser("list", help="list builtin structures")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.set_defaults(func=cmd_list)
    p = sub.add_parser("verify", help="check the paracontact metric axioms and h identities")
    common(p)
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("classify", help="solve the (kappa, mu) nullity condition")
    common(p)
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("canonical", help="canonical null basis at points")
    common(p, points=True)
    p.set_defaults(func=cmd_canonical)
    p = sub.add_parser("deform", help="apply a D_c-homothetic deformation")
    common(p)
    p.add_argument("--c", help="nonzero rational, e.g. 3 or -1/2")
    p.add_argument("--check", action="store_true", help="recompute (kappa, mu) and compare with the formula")
    p.set_defaults(func=cmd_deform)
    p = sub.add_parser("report", help="full pipeline report")
    common(p, points=True)
    p.add_argument("--all", action="store_true", help="report on every builtin instance")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for --all")
    p.set_defaults(func=cmd_report)
    return parser


def _glue_values(argv):
    # let option values start with '-' (e.g. --point -2,3,0 or --c -1/2)
    out, it = [], iter(argv)
    for a in it:
        if a in ("--point", "--c", "--param"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except (UsageError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except DocumentError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return USAGE
    except DocumentRejected as exc:
        if args.format == "structured":
            print(json.dumps({"passed": False, "rejected": str(exc),
                              "witness": None if exc.witness is None else str(exc.witness)}, indent=2))
        else:
            print(f"rejected: {exc}")
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
