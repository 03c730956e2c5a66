"""
Canonical null bases
====================

At a point where h^2 = 0, the tangent space splits into xi and null pairs
(X_i, Y_i) with phi X_i = X_i, phi Y_i = -Y_i, g(X_i, Y_i) = eps_i and
h X_i = Y_i on the first rank(h) pairs. The signs eps_i are invariants.
"""

# %%
from paracontact import canonical_basis, evaluate_at_point, h_rank_profile, instantiate_builtin, verify_normal_form

s = instantiate_builtin("ex-mu2-nonconstant")

# %%
# The rank of h jumps on the plane x = 0.
points = [{"x": 0, "y": 1, "z": 2}, {"x": 1, "y": 0, "z": 0}, {"x": -2, "y": 3, "z": 0}]
for p, rk in h_rank_profile(s, points):
    print(", ".join(f"{k}={v}" for k, v in p.items()), "rank", rk)

# %%
# The sign of the nilpotent block follows the sign of x.
for p in points[1:]:
    pe = evaluate_at_point(s, p)
    res = canonical_basis(pe)
    print(p, "eps =", res.signs, "exact" if res.exact else "decimal")
    for lab, v in res.to_dict()["basis"].items():
        print("   ", lab, v)
    print(verify_normal_form(res, pe))

# %%
# With exp(-2z) in the structure the point values leave the exact field,
# so the construction runs in 60-digit decimal arithmetic instead.
t = instantiate_builtin("ex-mu0-nonconstant")
pe = evaluate_at_point(t, {"x": 1, "y": 0, "z": 1})
res = canonical_basis(pe)
print(res.exact, res.signs, verify_normal_form(res, pe).passed)
