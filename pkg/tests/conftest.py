from fractions import Fraction

import pytest

from paracontact import instantiate_builtin, parse_linear_form, parse_scalar
from paracontact.scalar import Scalar


def vec(s, text):
    """Frame vector of structure ``s`` from text like ``"-e1 + 2*x*e2"``."""
    if text.strip() == "0":
        return tuple(Scalar(s.frame.chart) for _ in s.labels)
    combo = parse_linear_form(text, s.frame.chart, s.labels)
    return tuple(combo.get(lab, Scalar(s.frame.chart)) for lab in s.labels)


def sc(s, text):
    return parse_scalar(text, s.frame.chart)


@pytest.fixture(scope="session")
def mu2_nc():
    return instantiate_builtin("ex-mu2-nonconstant")


@pytest.fixture(scope="session")
def mu0_nc():
    return instantiate_builtin("ex-mu0-nonconstant")


def three_dim_doc(a, b, c):
    """Unimodular 3-dim algebra [xi,X] = aX + bY, [xi,Y] = cX - aY, [X,Y] = 2xi.

    Paracontact metric for every (a, b, c); it gives (kappa, mu) examples on
    both sides of kappa = -1.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    return f"""[frame]
labels xi X Y
bracket xi X = {a}*X + {b}*Y
bracket xi Y = {c}*X + {-a}*Y
bracket X Y = 2*xi
[metric]
g xi xi = 1
g X Y = 1
[phi]
phi X = X
phi Y = -Y
[eta]
eta xi = 1
"""


def three_dim(a, b, c):
    from paracontact import load_document

    return load_document(three_dim_doc(a, b, c))
