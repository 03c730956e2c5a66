"""
Classifying the builtin structures
==================================

Every builtin is a paracontact metric structure whose curvature satisfies
the (kappa, mu)-nullity condition. Here we verify the axioms and solve for
the two constants exactly.
"""

# %%
# The catalog lists the builtins and their parameters.
from paracontact import BUILTINS, instantiate_builtin, solve_kappa_mu, verify_paracontact

for name, entry in BUILTINS.items():
    print(f"{name:26s} {entry.description}")

# %%
# A five-dimensional Lie algebra with h of rank 2 and h^2 = 0.
s = instantiate_builtin("ex-mu2-hm-n", {"n": 2, "m": 2})
print(verify_paracontact(s))

res = solve_kappa_mu(s)
print(f"(kappa, mu) = ({res.kappa}, {res.mu}), status {res.status}, case {res.case}")

# %%
# When h vanishes, mu multiplies zero and cannot be determined.
heis = instantiate_builtin("parasasakian-heisenberg", {"n": 1})
print(solve_kappa_mu(heis).status)

# %%
# A coordinate structure on R^3 whose h has rank 1 off the plane x = 0.
# The tensors are exact expressions in x, y, z.
nc = instantiate_builtin("ex-mu2-nonconstant")
print("h e1 =", nc.frame.format(nc.h.columns[1]))
r = solve_kappa_mu(nc)
print(f"(kappa, mu) = ({r.kappa}, {r.mu})")
