import pytest

from paracontact import Frame, FrameError, Metric, instantiate_builtin, verify_jacobi
from paracontact.frame import bracket_fields, vadd, vsub
from paracontact.scalar import Scalar

from conftest import sc, vec

STRUCTURES = [
    ("ex-mu2-hm-n", {"n": 2, "m": 2}),
    ("ex-mu0-h1", {"n": 2}),
    ("ex-mu0-h2+", {"n": 3, "m": 2}),
    ("ex-mu2-nonconstant", {}),
    ("ex-mu0-nonconstant", {}),
    ("parasasakian-heisenberg", {"n": 2}),
]


@pytest.fixture(scope="module", params=STRUCTURES, ids=lambda p: p[0])
def structure(request):
    return instantiate_builtin(*request.param)


# -- coordinate frames: known tables -------------------------------------------


def test_mu2_nc_brackets(mu2_nc):
    f = mu2_nc.frame
    assert f.bracket(1, 2) == vec(mu2_nc, "2*xi")
    assert f.bracket(1, 0) == vec(mu2_nc, "-x*e2")
    assert f.bracket(2, 0) == vec(mu2_nc, "0")


def test_mu0_nc_brackets(mu0_nc):
    f = mu0_nc.frame
    assert f.bracket(1, 2) == vec(mu0_nc, "2*xi")
    assert f.bracket(1, 0) == vec(mu0_nc, "2*x*exp(-2*z)*e2")
    assert f.bracket(2, 0) == vec(mu0_nc, "0")


MU2_NC_NABLA = {
    ("xi", "xi"): "0", ("e1", "xi"): "-e1 - x*e2", ("e2", "xi"): "e2",
    ("xi", "e1"): "-e1", ("xi", "e2"): "e2",
    ("e1", "e1"): "x*xi", ("e2", "e2"): "0", ("e1", "e2"): "xi", ("e2", "e1"): "-xi",
}
MU0_NC_NABLA = {
    ("xi", "xi"): "0", ("e1", "xi"): "-e1 + 2*x*exp(-2*z)*e2", ("e2", "xi"): "e2",
    ("xi", "e1"): "-e1", ("xi", "e2"): "e2",
    ("e1", "e1"): "-2*x*exp(-2*z)*xi", ("e2", "e2"): "0", ("e1", "e2"): "xi", ("e2", "e1"): "-xi",
}


@pytest.mark.parametrize("which,table", [("mu2_nc", MU2_NC_NABLA), ("mu0_nc", MU0_NC_NABLA)])
def test_nabla_tables(which, table, request):
    s = request.getfixturevalue(which)
    for (a, b), want in table.items():
        assert s.connection(s.frame.index(a), s.frame.index(b)) == vec(s, want), (a, b)


def test_mu2_nc_curvature(mu2_nc):
    s = mu2_nc
    R = s.curvature
    he1 = s.h.columns[1]
    assert R(1, 0, 0) == vec(s, "-e1 + 2*x*e2")
    assert R(1, 0, 0) == vsub(tuple(2 * c for c in he1), vec(s, "e1"))
    assert R(2, 0, 0) == vec(s, "-e2")  # h e2 = 0
    assert R(1, 2, 0) == vec(s, "0")


def test_mu0_nc_curvature(mu0_nc):
    R = mu0_nc.curvature
    assert R(1, 0, 0) == vec(mu0_nc, "-e1")
    assert R(2, 0, 0) == vec(mu0_nc, "-e2")
    assert R(1, 2, 0) == vec(mu0_nc, "0")


# -- Lie algebra example with a partial nabla table in closed form -------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_mu0_h1_nabla_and_curvature(n):
    s = instantiate_builtin("ex-mu0-h1", {"n": n})
    ix = s.frame.index
    nab = lambda a, b: s.connection(ix(a), ix(b))
    assert nab("xi", "X1") == vec(s, "0")
    assert nab("xi", "Y1") == vec(s, "0")
    assert nab("X1", "Y1") == vec(s, "xi")
    assert nab("Y1", "X1") == vec(s, "-xi")
    assert nab("Y1", "Y1") == vec(s, "0")
    for i in range(2, n + 1):
        Xi, Yi = f"X{i}", f"Y{i}"
        assert nab("xi", Xi) == vec(s, Xi)
        assert nab("xi", Yi) == vec(s, f"-{Yi}")
        assert nab(Xi, "Y1") == vec(s, "0")
        assert nab("X1", Xi) == vec(s, "0")
        assert nab("Y1", Yi) == vec(s, "0")
        assert nab(Yi, "Y1") == vec(s, "Y1")
        for j in range(2, n + 1):
            Xj, Yj = f"X{j}", f"Y{j}"
            assert nab(Xi, Yj) == (vec(s, f"xi + 2*{Xi.replace('X', 'Y')}") if i == j else vec(s, "0"))
            assert nab(Yi, Xj) == (vec(s, "-xi") if i == j else vec(s, "0"))
    R = s.curvature
    for k in range(1, s.dim):
        assert R(k, 0, 0) == tuple(-c for c in s.frame.basis(k))
        for l in range(1, s.dim):
            assert R(k, l, 0) == s.frame.zero()


# -- generic identities ----------------------------------------------------------


def test_torsion_free(structure):
    s = structure
    for i in range(s.dim):
        for j in range(s.dim):
            lhs = vsub(s.connection(i, j), s.connection(j, i))
            assert lhs == s.frame.bracket(i, j)


def test_metric_compatible(structure):
    # constant frame metric: g(nabla_i e_j, e_k) + g(e_j, nabla_i e_k) = 0
    s = structure
    g = s.metric
    for i in range(s.dim):
        for j in range(s.dim):
            for k in range(s.dim):
                t = g(s.connection(i, j), s.frame.basis(k)) + g(s.frame.basis(j), s.connection(i, k))
                assert t.is_zero()


def test_curvature_symmetries(structure):
    s = structure
    R = s.curvature
    N = s.dim
    for i in range(N):
        for j in range(N):
            for k in range(N):
                assert R(i, j, k) == tuple(-c for c in R(j, i, k))
                if i < j < k:
                    cyc = vadd(vadd(R(i, j, k), R(j, k, i)), R(k, i, j))
                    assert cyc == s.frame.zero()
    for i, j, k, l in [(0, 1, 1, 2), (1, 2, 0, 1), (1, 2, 1, 2)] + ([(1, 3, 2, 4)] if N > 4 else []):
        a = R.lowered(s.metric, i, j, k, l)
        assert a == -R.lowered(s.metric, i, j, l, k)
        assert a == R.lowered(s.metric, k, l, i, j)


def test_jacobi_passes_on_builtins(structure):
    if structure.frame.kind == "algebra":
        assert verify_jacobi(structure.frame) == []


def test_jacobi_failure_reports_triple():
    one = Scalar.const(1)
    z = Scalar()
    f = Frame.from_brackets(["xi", "a", "b", "c"], {
        (1, 2): (z, one, z, z),   # [a, b] = a
        (1, 3): (z, z, one, z),   # [a, c] = b
    })
    bad = verify_jacobi(f)
    assert bad
    i, j, k, w = bad[0]
    assert (i, j, k) == (1, 2, 3)
    assert any(not c.is_zero() for c in w)


def test_coordinate_bracket_is_vector_field_bracket(mu0_nc):
    f = mu0_nc.frame
    # [xi + e1, x*e2] expanded by the Leibniz rule
    u = vec(mu0_nc, "xi + e1")
    v = vec(mu0_nc, "x*e2")
    expected = vadd(
        tuple(f.derive(u, sc(mu0_nc, "x")) * c for c in f.basis(2)),
        tuple(sc(mu0_nc, "x") * c for c in vadd(f.bracket(0, 2), f.bracket(1, 2))),
    )
    assert bracket_fields(f, u, v) == expected


def test_degenerate_metric_rejected():
    with pytest.raises(FrameError):
        Metric.from_dict(3, {(0, 0): 1, (1, 1): 1})


def test_jacobi_not_defined_on_coordinate_frames(mu2_nc):
    with pytest.raises(FrameError):
        verify_jacobi(mu2_nc.frame)
