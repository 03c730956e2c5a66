"""
Deformations and structure documents
====================================

A D_c-homothetic deformation rescales (phi, xi, eta, g). For a (kappa, mu)
space it predicts new constants, which we check by recomputing the
curvature of the deformed metric from scratch.
"""

# %%
from fractions import Fraction

from paracontact import (
    deform,
    deform_kappa_mu,
    instantiate_builtin,
    load_document,
    print_document,
    solve_kappa_mu,
    verify_deformation_consistency,
)

s = instantiate_builtin("ex-mu0-nonconstant")
print(deform_kappa_mu(-1, 0, 2))
print(verify_deformation_consistency(s, 2))

# %%
# Deformations compose multiplicatively.
a, b = Fraction(3, 2), Fraction(-2, 5)
print(deform(deform(s, a), b) == deform(s, a * b))

# %%
# Not every kappa = -1 space stays in the class. This rank-one example
# deforms into a paracontact metric structure with no (kappa, mu).
t = instantiate_builtin("ex-mu0-h1", {"n": 2})
print(solve_kappa_mu(deform(t, 2)).status)

# %%
# Any structure can be written out as a plain-text document and read back.
text = print_document(deform(s, 2))
print(text)
print(load_document(text) == deform(s, 2))
