from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paracontact import (
    EngineInconsistency,
    ParacontactStructure,
    StructureError,
    check_paraSasakian_curvature,
    instantiate_builtin,
    is_K_paracontact,
    is_paraSasakian,
    nijenhuis_normality,
    verify_almost_paracontact,
    verify_h_identities,
    verify_paracontact,
)
from paracontact.algnum import AlgNum
from paracontact.frame import Metric
from paracontact.scalar import Scalar

from conftest import sc, three_dim, vec

INSTANCES = [
    ("ex-mu2-hm-n", {"n": 1, "m": 1}),
    ("ex-mu2-hm-n", {"n": 3, "m": 2}),
    ("ex-mu0-h1", {"n": 1}),
    ("ex-mu0-h1", {"n": 3}),
    ("ex-mu0-h2+", {"n": 2, "m": 2}),
    ("ex-mu0-h2+", {"n": 4, "m": 3}),
    ("ex-mu2-nonconstant", {}),
    ("ex-mu0-nonconstant", {}),
    ("parasasakian-heisenberg", {"n": 1}),
    ("parasasakian-heisenberg", {"n": 3}),
]


@pytest.fixture(scope="module", params=INSTANCES, ids=lambda p: f"{p[0]}{sorted(p[1].items())}")
def builtin(request):
    return instantiate_builtin(*request.param)


def test_builtins_are_paracontact_metric(builtin):
    rep = verify_paracontact(builtin)
    assert rep.passed, str(rep)
    assert rep.info["signature"] == (builtin.n + 1, builtin.n)


def test_h_identities_hold(builtin):
    assert verify_h_identities(builtin).passed


def test_only_heisenberg_is_parasasakian(builtin):
    heis = builtin.name.startswith("parasasakian-heisenberg")
    assert is_paraSasakian(builtin) == heis
    rep = nijenhuis_normality(builtin)
    if not heis:
        (bad,) = rep.failures()
        assert bad.witness is not None and not bad.witness.is_zero()


def test_killing_equivalence(builtin):
    flag, rep = is_K_paracontact(builtin)
    assert flag == builtin.h.is_zero()
    assert rep.check("h = 0").passed == rep.check("L_xi g = 0").passed


def test_mu2_hm_h_values():
    n, m = 3, 2
    s = instantiate_builtin("ex-mu2-hm-n", {"n": n, "m": m})
    ix = s.frame.index
    for i in range(1, n + 1):
        want = vec(s, f"Y{i}") if i <= m else vec(s, "0")
        assert s.h.columns[ix(f"X{i}")] == want
        assert s.h.columns[ix(f"Y{i}")] == vec(s, "0")


def test_mu0_h1_h_values():
    s = instantiate_builtin("ex-mu0-h1", {"n": 3})
    ix = s.frame.index
    assert s.h.columns[ix("X1")] == vec(s, "Y1")
    for lab in ["xi", "Y1", "X2", "Y2", "X3", "Y3"]:
        assert s.h.columns[ix(lab)] == vec(s, "0")


def test_mu2_nc_h_and_d_eta(mu2_nc):
    assert mu2_nc.h.columns[1] == vec(mu2_nc, "x*e2")
    assert mu2_nc.h.columns[2] == vec(mu2_nc, "0")
    de = mu2_nc.d_eta
    assert de[1][2] == sc(mu2_nc, "-1")
    assert de[1][0] == sc(mu2_nc, "0") and de[2][0] == sc(mu2_nc, "0")


def test_mu0_nc_h(mu0_nc):
    assert mu0_nc.h.columns[1] == vec(mu0_nc, "-2*x*exp(-2*z)*e2")
    assert mu0_nc.h.columns[2] == vec(mu0_nc, "0")


def test_mu0_nc_curvature_identity_without_normality(mu0_nc):
    assert check_paraSasakian_curvature(mu0_nc).passed
    assert not is_paraSasakian(mu0_nc)
    bad = nijenhuis_normality(mu0_nc).failures()[0]
    assert not bad.witness.is_zero()


def test_mu2_spaces_fail_curvature_identity(mu2_nc):
    assert not check_paraSasakian_curvature(mu2_nc).passed
    s = instantiate_builtin("ex-mu2-hm-n", {"n": 2, "m": 1})
    assert not check_paraSasakian_curvature(s).passed


def test_heisenberg_curvature_identity():
    s = instantiate_builtin("parasasakian-heisenberg", {"n": 2})
    assert check_paraSasakian_curvature(s).passed
    assert nijenhuis_normality(s).passed


# -- failing inputs -------------------------------------------------------------


def _rebuild(s, phi=None, metric=None, eta=None, strict=True):
    return ParacontactStructure(s.frame, metric or s.metric, phi or s.phi, eta or s.eta, strict=strict)


def test_eta_mismatch_rejected(mu2_nc):
    eta = list(mu2_nc.eta)
    eta[1] = sc(mu2_nc, "y")
    with pytest.raises(StructureError):
        _rebuild(mu2_nc, eta=eta)
    t = _rebuild(mu2_nc, eta=eta, strict=False)
    rep = verify_paracontact(t)
    assert not rep.check("eta = g(., xi)").passed


def test_phi_squared_failure_has_witness():
    s = instantiate_builtin("ex-mu0-h1", {"n": 1})
    phi = [list(r) for r in s.phi]
    phi[1][1] = AlgNum(2)
    t = _rebuild(s, phi=phi)
    rep = verify_almost_paracontact(t)
    c = rep.check("phi^2 = I - eta (x) xi")
    assert not c.passed and not c.witness.is_zero()


def test_wrong_signature_detected():
    s = instantiate_builtin("ex-mu0-h1", {"n": 1})
    g = [list(r) for r in s.metric.g]
    g[0][0] = AlgNum(-1)
    t = _rebuild(s, metric=Metric(g), eta=[Scalar.const(-1), Scalar(), Scalar()])
    rep = verify_paracontact(t)
    assert not rep.check("signature (n+1, n)").passed


def test_engine_inconsistency_is_raised(monkeypatch):
    s = three_dim(1, 1, 1)
    import paracontact.structure as mod

    monkeypatch.setattr(mod, "lie_derivative_metric", lambda f, g, v: [[Scalar()] * 3 for _ in range(3)])
    with pytest.raises(EngineInconsistency):
        is_K_paracontact(s)


# -- a family outside the catalog -----------------------------------------------

small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@settings(max_examples=30, deadline=None)
@given(small, small, small)
def test_three_dim_family_identities(a, b, c):
    s = three_dim(a, b, c)
    assert verify_paracontact(s).passed
    assert verify_h_identities(s).passed
    flag, _ = is_K_paracontact(s)
    assert flag == s.h.is_zero()
