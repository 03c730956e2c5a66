import pytest

from paracontact import (
    DocumentError,
    DocumentRejected,
    instantiate_builtin,
    load_document,
    print_document,
)
from paracontact.cli import ALL_INSTANCES

MU2_NC_DOC = """\
# R^3 with a non-constant-rank h
[dim]
3
[chart]
x y z
[frame]
vector e1 = dx + x*z*dy - 2*y*dz
vector e2 = dy
vector xi = dz
[metric]
g e1 e2 = 1
g xi xi = 1
[phi]
phi e1 = e1
phi e2 = -e2
[eta]
eta = 2*y*dx + dz
"""

MU0_NC_DOC = MU2_NC_DOC.replace("x*z*dy", "x*exp(-2*z)*dy")


@pytest.mark.parametrize("name,params", ALL_INSTANCES, ids=lambda x: str(x))
def test_round_trip_every_builtin(name, params):
    s = instantiate_builtin(name, params)
    text = print_document(s)
    t = load_document(text)
    assert t == s
    assert print_document(t) == text
    # tensor by tensor
    assert t.h == s.h and t.d_eta == s.d_eta


@pytest.mark.parametrize("doc,name", [(MU2_NC_DOC, "ex-mu2-nonconstant"), (MU0_NC_DOC, "ex-mu0-nonconstant")])
def test_transcribed_documents_equal_builtins(doc, name):
    s = load_document(doc)
    b = instantiate_builtin(name)
    assert s == b
    assert s.h == b.h
    N = s.dim
    for i in range(N):
        for j in range(N):
            assert s.connection(i, j) == b.connection(i, j)
            assert s.curvature(i, j, 0) == b.curvature(i, j, 0)


def test_xi_is_index_zero_whatever_the_order():
    s = load_document(MU2_NC_DOC)
    assert s.labels[0] == "xi"


def test_per_vector_eta_form():
    doc = MU2_NC_DOC.replace("eta = 2*y*dx + dz", "eta xi = 1")
    assert load_document(doc) == load_document(MU2_NC_DOC)


def test_jacobi_violation_rejected_with_triple():
    doc = """[frame]
labels xi a b c d
bracket a b = a
bracket a c = b
[metric]
g xi xi = 1
g a b = 1
g c d = 1
[phi]
phi a = a
phi b = -b
phi c = c
phi d = -d
[eta]
eta xi = 1
"""
    with pytest.raises(DocumentRejected) as info:
        load_document(doc)
    assert info.value.witness[0] == ("a", "b", "c")
    assert "Jacobi" in str(info.value)


@pytest.mark.parametrize(
    "doc,line,col",
    [
        ("[frame]\n", 1, 1),
        ("[dim]\n3\n", 1, 1),
        ("[frame]\nlabels xi a b\nbracket a b = 2*xi + * a\n", 3, 22),
        ("[frame]\nlabels xi a b\nbracket a q = xi\n", 3, 11),
        ("stray\n[frame]\nlabels xi a b\n", 1, 1),
        ("[frame]\nlabels xi a b\n[metrics]\n", 3, 1),
        ("[frame]\nlabels a b c\n", 2, 1),
        ("[frame]\nlabels xi a b\n[metric]\ng xi = 1\n", 4, 1),
    ],
)
def test_parse_errors_have_positions(doc, line, col):
    with pytest.raises(DocumentError) as info:
        load_document(doc)
    assert info.value.line == line
    assert info.value.column == col


def test_eta_mismatch_rejected():
    doc = MU2_NC_DOC.replace("eta = 2*y*dx + dz", "eta = 2*y*dx + 2*dz")
    with pytest.raises(DocumentRejected) as info:
        load_document(doc)
    assert info.value.witness is not None


def test_almost_paracontact_axioms_enforced():
    doc = MU2_NC_DOC.replace("phi e2 = -e2", "phi e2 = e2")
    with pytest.raises(DocumentRejected):
        load_document(doc)


def test_comments_and_blank_lines_ignored():
    doc = "\n# header\n" + MU2_NC_DOC.replace("g xi xi = 1", "g xi xi = 1   # unit Reeb field\n\n")
    assert load_document(doc) == load_document(MU2_NC_DOC)


def test_non_constant_metric_rejected():
    doc = MU2_NC_DOC.replace("g e1 e2 = 1", "g e1 e2 = x")
    with pytest.raises(DocumentError):
        load_document(doc)


def test_sqrt2_structure_constants():
    s = instantiate_builtin("ex-mu2-hm-n", {"n": 2, "m": 1})
    text = print_document(s)
    assert "sqrt2" in text
    assert load_document(text) == s
