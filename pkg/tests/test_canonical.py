import functools
import random
from fractions import Fraction

import pytest

from paracontact import (
    AlgNum,
    CanonicalFormError,
    canonical_basis,
    evaluate_at_point,
    h_rank_profile,
    instantiate_builtin,
    verify_normal_form,
)
from paracontact.algnum import SQRT2
from paracontact.canonical import PointEvaluation
from paracontact.linalg import mat_inverse, mat_mul, transpose

ONE, ZERO = AlgNum(1), AlgNum(0)


def normal_form(n, m, signs):
    """g, phi, h of the normal form: xi, then (X_p, Y_p) pairs."""
    N = 2 * n + 1
    g = [[ZERO] * N for _ in range(N)]
    phi = [[ZERO] * N for _ in range(N)]
    h = [[ZERO] * N for _ in range(N)]
    g[0][0] = ONE
    for p in range(n):
        x, y = 2 * p + 1, 2 * p + 2
        g[x][y] = g[y][x] = AlgNum(signs[p])
        phi[x][x], phi[y][y] = ONE, -ONE
        if p < m:
            h[y][x] = ONE
    return g, phi, h


def conjugated_instance(rng, n, m, signs, irrational=False):
    N = 2 * n + 1
    g0, phi0, h0 = normal_form(n, m, signs)
    while True:
        B = [[AlgNum(rng.randint(-2, 2), rng.randint(-1, 1) if irrational else 0) for _ in range(N - 1)]
             for _ in range(N - 1)]
        A = [[ONE] + [ZERO] * (N - 1)] + [[ZERO] + row for row in B]
        try:
            Ainv = mat_inverse(A)
            break
        except (ZeroDivisionError, ValueError, ArithmeticError):
            continue
    g = mat_mul(transpose(A), mat_mul(g0, A))
    phi = mat_mul(Ainv, mat_mul(phi0, A))
    h = mat_mul(Ainv, mat_mul(h0, A))
    xi = tuple(ONE if k == 0 else ZERO for k in range(N))
    eta = tuple(A[0])
    return PointEvaluation({}, g, phi, h, xi, eta, True)


def random_instance(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)  # dimensions 5..9
    m = rng.randint(0, n)
    signs = [rng.choice([1, -1]) for _ in range(m)] + [1] * (n - m)
    return conjugated_instance(rng, n, m, signs, irrational=rng.random() < 0.3), m, signs


# -- the nonconstant example, pointwise -----------------------------------------


@pytest.mark.parametrize("point,eps", [((1, 0, 0), 1), ((-1, 0, 0), -1), ((-2, 3, 0), -1)])
def test_mu2_nc_points(mu2_nc, point, eps):
    pe = evaluate_at_point(mu2_nc, dict(zip("xyz", point)))
    res = canonical_basis(pe)
    rep = verify_normal_form(res, pe)
    assert rep.passed and res.exact
    assert res.m == 1 and res.signs == [eps]


def test_mu2_nc_basis_matches_closed_form(mu2_nc):
    # X1 = e1 / sqrt|x|, Y1 = h X1
    pe = evaluate_at_point(mu2_nc, {"x": -2, "y": 3, "z": 0})
    res = canonical_basis(pe)
    r = AlgNum(2).sqrt()
    assert res.basis[1] == (ZERO, 1 / r, ZERO)
    assert res.basis[2] == (ZERO, ZERO, -2 / r)


def test_mu2_nc_zero_rank_point(mu2_nc):
    pe = evaluate_at_point(mu2_nc, {"x": 0, "y": 1, "z": 2})
    res = canonical_basis(pe)
    assert res.m == 0 and verify_normal_form(res, pe).passed


def test_mu0_nc_falls_back_to_floats(mu0_nc):
    pe = evaluate_at_point(mu0_nc, {"x": 1, "y": 0, "z": 1})
    assert not pe.exact
    res = canonical_basis(pe)
    assert not res.exact and res.m == 1 and res.signs == [-1]
    assert verify_normal_form(res, pe).passed


def test_rank_profile(mu2_nc, mu0_nc):
    pts = [{"x": 0, "y": y, "z": z} for y, z in [(0, 0), (1, -1), (2, 3)]]
    pts += [{"x": x, "y": 1, "z": Fraction(1, 2)} for x in (1, -1, 3)]
    for s in (mu2_nc, mu0_nc):
        assert [r for _, r in h_rank_profile(s, pts)] == [0, 0, 0, 1, 1, 1]


@pytest.mark.parametrize("name,params,m", [("ex-mu0-h2+", {"n": 4, "m": 3}, 3), ("ex-mu2-hm-n", {"n": 3, "m": 2}, 2)])
def test_algebra_examples(name, params, m):
    s = instantiate_builtin(name, params)
    pe = evaluate_at_point(s)
    res = canonical_basis(pe)
    assert res.m == m and verify_normal_form(res, pe).passed


# -- random conjugated normal forms ------------------------------------------------


@functools.lru_cache(maxsize=None)
def solved(seed):
    pe, m, signs = random_instance(seed)
    return pe, m, signs, canonical_basis(pe)


@pytest.mark.parametrize("seed", range(100))
def test_random_conjugated_normal_forms(seed):
    pe, m, signs, res = solved(seed)
    rep = verify_normal_form(res, pe)
    assert rep.passed, str(rep)
    assert res.m == m
    # the signs of the nilpotent blocks are congruence invariants
    assert sorted(res.signs[:m]) == sorted(signs[:m])


def test_float_fallback_is_exercised():
    modes = {solved(seed)[3].exact for seed in range(100)}
    assert modes == {True, False}


def test_tampered_basis_fails():
    pe, m, _ = random_instance(7)
    res = canonical_basis(pe)
    assert verify_normal_form(res, pe).passed
    res.basis[1] = tuple(2 * x for x in res.basis[1])
    rep = verify_normal_form(res, pe)
    assert not rep.passed
    res2 = canonical_basis(pe)
    res2.signs[0] = -res2.signs[0]
    assert not verify_normal_form(res2, pe).passed


def test_idempotent_on_its_own_output():
    for seed in range(10):
        pe, m, _ = random_instance(seed)
        res = canonical_basis(pe)
        if not res.exact:
            continue
        B = transpose([list(v) for v in res.basis])
        Binv = mat_inverse(B)
        pe2 = PointEvaluation({}, mat_mul(transpose(B), mat_mul(pe.g, B)),
                              mat_mul(Binv, mat_mul(pe.phi, B)), mat_mul(Binv, mat_mul(pe.h, B)),
                              pe.xi, tuple(mat_mul([list(pe.eta)], B)[0]), True)
        res2 = canonical_basis(pe2)
        assert res2.m == res.m and res2.signs == res.signs
        assert res2.gram == res.gram and res2.h_matrix == res.h_matrix


def test_rejects_h_squared_nonzero():
    pe, _, _ = random_instance(3)
    N = pe.dim
    h = [[ZERO] * N for _ in range(N)]
    h[1][1] = h[2][2] = ONE
    bad = PointEvaluation({}, pe.g, pe.phi, h, pe.xi, pe.eta, True)
    with pytest.raises(CanonicalFormError):
        canonical_basis(bad)


def test_irrational_entries_supported():
    rng = random.Random(11)
    pe = conjugated_instance(rng, 2, 2, [1, -1], irrational=True)
    assert any(x.b for row in pe.g for x in row)
    res = canonical_basis(pe)
    assert verify_normal_form(res, pe).passed and res.m == 2
    assert sorted(res.signs) == [-1, 1]
    assert SQRT2 * SQRT2 == 2
