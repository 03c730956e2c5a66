"""Line-oriented text format for structures.

Example::

    [dim]
    3
    [chart]
    x y z
    [frame]
    vector xi = dz
    vector e1 = dx + x*z*dy - 2*y*dz
    vector e2 = dy
    [metric]
    g xi xi = 1
    g e1 e2 = 1
    [phi]
    phi e1 = e1
    phi e2 = -e2
    [eta]
    eta = 2*y*dx + dz

A Lie-algebra frame uses ``labels xi X1 Y1`` followed by lines such as
``bracket X1 Y1 = 2*xi + sqrt2*Y1``.  ``eta`` may be given either as a
coordinate 1-form (``eta = ...`` in ``d<coord>``) or per frame vector
(``eta xi = 1``).  Unspecified components are zero and ``xi`` is always
frame vector 0.  ``#`` starts a comment.
"""

from __future__ import annotations

import re

from .algnum import AlgNum
from .frame import Frame, FrameError, Metric, verify_jacobi
from .scalar import Scalar, ScalarSyntaxError, parse_linear_form, parse_scalar
from .structure import ParacontactStructure, StructureError, verify_almost_paracontact

__all__ = ["DocumentError", "DocumentRejected", "parse_document", "load_document", "print_document"]

SECTIONS = ("dim", "chart", "frame", "metric", "phi", "eta")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")


class DocumentError(ValueError):
    """Syntax error, with 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line, self.column = line, column
        super().__init__(f"line {line}, column {column}: {message}")


class DocumentRejected(StructureError):
    """Well-formed document describing an invalid structure."""

    def __init__(self, message: str, report=None, witness=None):
        self.report = report
        self.witness = witness
        super().__init__(message)


def _sections(text: str):
    current = None
    out = {k: [] for k in SECTIONS}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            m = re.fullmatch(r"\[\s*([a-z]+)\s*\]", stripped)
            if not m or m.group(1) not in SECTIONS:
                raise DocumentError(f"unknown section header {stripped!r}", lineno, line.index("[") + 1)
            current = m.group(1)
            if current in seen:
                raise DocumentError(f"duplicate section [{current}]", lineno, line.index("[") + 1)
            seen.add(current)
            continue
        if current is None:
            raise DocumentError("content before the first section header", lineno, 1)
        out[current].append((lineno, line))
    return out, seen


def _split_assignment(lineno, line, keyword):
    """``keyword a b = rhs`` -> (['a', 'b'], rhs, rhs column)."""
    if "=" not in line:
        raise DocumentError(f"expected '=' in {keyword} line", lineno, len(line.rstrip()) + 1)
    lhs, rhs = line.split("=", 1)
    words = lhs.split()
    if not words or words[0] != keyword:
        col = len(lhs) - len(lhs.lstrip()) + 1
        raise DocumentError(f"expected {keyword!r}", lineno, col)
    if not rhs.strip():
        raise DocumentError("empty right-hand side", lineno, len(lhs) + 2)
    return words[1:], rhs, len(lhs) + 2


def _expr(fn, lineno, rhs, col, *args):
    try:
        return fn(rhs, *args)
    except ScalarSyntaxError as exc:
        pos = exc.position if exc.position is not None else 0
        raise DocumentError(str(exc).split(" at position")[0], lineno, col + pos) from None
    except ValueError as exc:
        raise DocumentError(str(exc), lineno, col) from None


def _label_index(labels, name, lineno, line):
    if name not in labels:
        col = line.find(name) + 1 if name in line else 1
        raise DocumentError(f"unknown frame label {name!r}", lineno, col)
    return labels.index(name)


def _constant(s: Scalar, lineno, col, what) -> AlgNum:
    if not s.is_constant():
        raise DocumentError(f"{what} must be constant, got {s}", lineno, col)
    return s.constant_value()


def parse_document(text: str, *, strict: bool = True) -> ParacontactStructure:
    """Parse a document into a structure without semantic checks beyond
    those the constructors perform (``strict`` is passed to the structure)."""
    sec, seen = _sections(text)
    if "frame" not in seen or not sec["frame"]:
        line = sec["frame"][0][0] if sec["frame"] else 1
        raise DocumentError("empty or missing [frame] section", line, 1)

    dim = None
    if sec["dim"]:
        if len(sec["dim"]) != 1 or not sec["dim"][0][1].strip().isdigit():
            lineno = sec["dim"][0][0]
            raise DocumentError("[dim] must hold a single positive integer", lineno, 1)
        dim = int(sec["dim"][0][1])

    chart = ()
    for lineno, line in sec["chart"]:
        for name in line.split():
            if not _NAME.match(name) or name in ("sqrt2", "exp"):
                raise DocumentError(f"invalid coordinate name {name!r}", lineno, line.find(name) + 1)
            chart += (name,)
    if len(set(chart)) != len(chart):
        raise DocumentError("duplicate coordinate names", sec["chart"][0][0], 1)

    frame_lines = sec["frame"]
    kinds = {line.split()[0] for _, line in frame_lines}
    if kinds - {"labels", "bracket", "vector"}:
        bad = next((ln, l) for ln, l in frame_lines if l.split()[0] not in ("labels", "bracket", "vector"))
        raise DocumentError(f"unknown frame statement {bad[1].split()[0]!r}", bad[0], bad[1].find(bad[1].split()[0]) + 1)
    if "vector" in kinds and kinds & {"labels", "bracket"}:
        raise DocumentError("mix of vector and bracket frame statements", frame_lines[0][0], 1)

    try:
        if "vector" in kinds:
            frame = _coordinate_frame(frame_lines, chart)
        else:
            frame = _algebra_frame(frame_lines, chart)
    except FrameError as exc:
        raise DocumentError(str(exc), frame_lines[0][0], 1) from None

    labels = frame.labels
    N = frame.dim
    if dim is not None and dim != N:
        raise DocumentError(f"[dim] says {dim} but the frame has {N} vectors", sec["dim"][0][0], 1)

    entries = {}
    for lineno, line in sec["metric"]:
        names, rhs, col = _split_assignment(lineno, line, "g")
        if len(names) != 2:
            raise DocumentError("metric line needs two labels: g a b = value", lineno, 1)
        i, j = (_label_index(labels, nm, lineno, line) for nm in names)
        v = _constant(_expr(parse_scalar, lineno, rhs, col, chart), lineno, col, "metric component")
        key = (min(i, j), max(i, j))
        if key in entries and entries[key] != v:
            raise DocumentError("conflicting metric entries", lineno, 1)
        entries[key] = v
    try:
        metric = Metric.from_dict(N, entries)
    except FrameError as exc:
        line = sec["metric"][0][0] if sec["metric"] else 1
        raise DocumentError(str(exc), line, 1) from None

    phi = [[AlgNum(0)] * N for _ in range(N)]
    for lineno, line in sec["phi"]:
        names, rhs, col = _split_assignment(lineno, line, "phi")
        if len(names) != 1:
            raise DocumentError("phi line needs one label: phi a = combination", lineno, 1)
        i = _label_index(labels, names[0], lineno, line)
        combo = _expr(parse_linear_form, lineno, rhs, col, chart, labels)
        for lab, coeff in combo.items():
            phi[labels.index(lab)][i] = _constant(coeff, lineno, col, "phi component")

    eta = [Scalar(chart)] * N
    for lineno, line in sec["eta"]:
        names, rhs, col = _split_assignment(lineno, line, "eta")
        if not names:
            if frame.kind != "coordinate":
                raise DocumentError("coordinate form of eta needs a coordinate frame", lineno, 1)
            dsyms = tuple(f"d{c}" for c in chart)
            form = _expr(parse_linear_form, lineno, rhs, col, chart, dsyms)
            comps = [form.get(d, Scalar(chart)) for d in dsyms]
            eta = [sum((v[a] * comps[a] for a in range(len(chart))), Scalar(chart)) for v in frame.vectors]
        elif len(names) == 1:
            i = _label_index(labels, names[0], lineno, line)
            eta[i] = _expr(parse_scalar, lineno, rhs, col, chart)
        else:
            raise DocumentError("eta line: 'eta a = value' or 'eta = 1-form'", lineno, 1)
    try:
        return ParacontactStructure(frame, metric, phi, eta, strict=strict)
    except StructureError as exc:
        raise DocumentRejected(str(exc)) from None


def _coordinate_frame(lines, chart) -> Frame:
    if not chart:
        raise DocumentError("vector frame statements need a [chart] section", lines[0][0], 1)
    dsyms = tuple(f"d{c}" for c in chart)
    names, vectors = [], []
    for lineno, line in lines:
        words, rhs, col = _split_assignment(lineno, line, "vector")
        if len(words) != 1 or not _NAME.match(words[0]):
            raise DocumentError("vector line: vector <label> = combination of d<coord>", lineno, 1)
        if words[0] in names:
            raise DocumentError(f"duplicate label {words[0]!r}", lineno, 1)
        form = _expr(parse_linear_form, lineno, rhs, col, chart, dsyms)
        names.append(words[0])
        vectors.append([form.get(d, Scalar(chart)) for d in dsyms])
    if "xi" not in names:
        raise DocumentError("frame must define xi", lines[0][0], 1)
    k = names.index("xi")
    order = [k] + [i for i in range(len(names)) if i != k]
    return Frame.from_vectors([names[i] for i in order], chart, [vectors[i] for i in order])


def _algebra_frame(lines, chart) -> Frame:
    label_lines = [(ln, l) for ln, l in lines if l.split()[0] == "labels"]
    if len(label_lines) != 1:
        ln = label_lines[1][0] if label_lines else lines[0][0]
        raise DocumentError("exactly one 'labels' line is required", ln, 1)
    lineno, line = label_lines[0]
    names = line.split()[1:]
    if not names:
        raise DocumentError("empty labels line", lineno, 1)
    for nm in names:
        if not _NAME.match(nm) or nm in chart or nm in ("sqrt2", "exp"):
            raise DocumentError(f"invalid label {nm!r}", lineno, line.find(nm) + 1)
    if len(set(names)) != len(names):
        raise DocumentError("duplicate labels", lineno, 1)
    if "xi" not in names:
        raise DocumentError("labels must include xi", lineno, 1)
    labels = ["xi"] + [nm for nm in names if nm != "xi"]
    brackets = {}
    for lineno, line in lines:
        if line.split()[0] != "bracket":
            continue
        words, rhs, col = _split_assignment(lineno, line, "bracket")
        if len(words) != 2:
            raise DocumentError("bracket line: bracket a b = combination", lineno, 1)
        i, j = (_label_index(labels, w, lineno, line) for w in words)
        combo = _expr(parse_linear_form, lineno, rhs, col, chart, tuple(labels))
        vec = [Scalar() for _ in labels]
        for lab, coeff in combo.items():
            vec[labels.index(lab)] = Scalar.const(_constant(coeff, lineno, col, "structure constant"))
        if i == j:
            raise DocumentError("bracket of a label with itself", lineno, 1)
        key, sign = ((i, j), 1) if i < j else ((j, i), -1)
        vec = tuple(v * sign for v in vec)
        if key in brackets and brackets[key] != vec:
            raise DocumentError("conflicting bracket definitions", lineno, 1)
        brackets[key] = vec
    return Frame.from_brackets(labels, brackets)


def load_document(text: str) -> ParacontactStructure:
    """Parse and ingest: Jacobi (algebras), eta = g(., xi), almost paracontact axioms."""
    s = parse_document(text, strict=False)
    if s.frame.kind == "algebra":
        bad = verify_jacobi(s.frame)
        if bad:
            i, j, k, w = bad[0]
            lab = s.labels
            raise DocumentRejected(
                f"Jacobi identity fails on ({lab[i]}, {lab[j]}, {lab[k]}): {s.format(w)}",
                witness=((lab[i], lab[j], lab[k]), s.format(w)),
            )
    mismatch = s.eta_mismatch()
    if mismatch is not None:
        i, d = mismatch
        raise DocumentRejected(f"eta differs from g(., xi) on {s.labels[i]}: difference {d}", witness=d)
    rep = verify_almost_paracontact(s)
    if not rep.passed:
        f = rep.failures()[0]
        raise DocumentRejected(f"almost paracontact axioms fail: {f}", report=rep, witness=f.witness)
    return s


def _combo_text(vec, names) -> str:
    from .frame import format_vector

    return format_vector(vec, names)


def print_document(s: ParacontactStructure) -> str:
    """Render ``s`` in the document format; ``load_document`` inverts it."""
    fr = s.frame
    N = fr.dim
    labels = fr.labels
    out = ["[dim]", str(N)]
    if fr.kind == "coordinate":
        out += ["[chart]", " ".join(fr.chart), "[frame]"]
        dsyms = [f"d{c}" for c in fr.chart]
        for lab, v in zip(labels, fr.vectors):
            out.append(f"vector {lab} = {_combo_text(v, dsyms)}")
    else:
        out += ["[frame]", "labels " + " ".join(labels)]
        for i in range(N):
            for j in range(i + 1, N):
                v = fr.bracket(i, j)
                if any(not x.is_zero() for x in v):
                    out.append(f"bracket {labels[i]} {labels[j]} = {_combo_text(v, labels)}")
    out.append("[metric]")
    for i in range(N):
        for j in range(i, N):
            if s.metric.g[i][j]:
                out.append(f"g {labels[i]} {labels[j]} = {Scalar.const(s.metric.g[i][j])}")
    out.append("[phi]")
    for i in range(N):
        col = tuple(Scalar.const(s.phi[k][i]) for k in range(N))
        if any(not x.is_zero() for x in col):
            out.append(f"phi {labels[i]} = {_combo_text(col, labels)}")
    out.append("[eta]")
    for i in range(N):
        if not s.eta[i].is_zero():
            out.append(f"eta {labels[i]} = {s.eta[i]}")
    return "\n".join(out) + "\n"
