"""Operators shared by the test modules, hypothesis strategies, and a
plain-rational sequence oracle."""

import random

from flint import fmpq, fmpq_poly
from hypothesis import strategies as st

from lindiff import OreOperator, RationalFunction, parse_operator, parse_rational_function

L_A260772 = parse_operator(
    "(x+5)*(x+4)*(25*x^2+130*x+141)*t^4 - 30*(x+4)*(7*x+13)*t^3"
    " - (1100*x^4+12320*x^3+48664*x^2+80740*x+47400)*t^2"
    " + 120*(x+6)*(x+1)*t - 16*x*(x+1)*(25*x^2+180*x+296)"
)
SECTION_A260772 = parse_operator(
    "(4*x^4 + 56*x^3 + 287*x^2 + 634*x + 504)*t^4"
    " + (-352*x^4 - 4048*x^3 - 17276*x^2 - 32354*x - 22344)*t^3"
    " + (7616*x^4 + 68544*x^3 + 229648*x^2 + 339408*x + 186648)*t^2"
    " + (5632*x^4 + 36608*x^3 + 86336*x^2 + 88288*x + 32928)*t"
    " + 1024*x^4 + 4096*x^3 + 4352*x^2 + 1280*x"
)
R = parse_operator("(2*x + 5)*(5*x + 3)*(x + 2)*t^2 - (440*x^3 + 1584*x^2 + 1780*x + 600)*t - 8*(5*x + 8)*(4*x^2 + 2*x)")
R_PRIME = parse_operator("(2*x + 5)*(10*x + 9)*(x + 2)*t^2 - (880*x^3 + 3432*x^2 + 4220*x + 1650)*t - 16*(10*x + 19)*(2*x^2 + x)")
L3_A295371 = parse_operator(
    "(2*x + 1)*(x + 3)^2*t^3 - (2*x + 1)*(7*x^2 + 38*x + 52)*t^2"
    " - 3*(2*x + 5)*(7*x^2 + 4*x + 1)*t + 27*(2*x + 5)*x^2"
)
L2_A295371 = parse_operator("t^2 + t - 3*(x+1)/(4*(x-1))")
R_A295371 = parse_rational_function("4*(x^2+3*x+3)*(2*x+5)*(x-1)^2/((x^2+x+1)*(2*x+3)*x*(x+1))")

X = RationalFunction.x()


# --- random objects ---------------------------------------------------------


def rand_poly(rng, deg, lo=-5, hi=5, nonzero=True):
    while True:
        p = fmpq_poly([rng.randint(lo, hi) for _ in range(deg + 1)])
        if not nonzero or not p.is_zero():
            return p


def rand_rf(rng, deg=2, lo=-5, hi=5):
    return RationalFunction(rand_poly(rng, deg, lo, hi), rand_poly(rng, deg, 1, hi))


def positive_poly(rng, deg):
    """Positive coefficients: no roots at x >= 0."""
    return fmpq_poly([rng.randint(1, 6) for _ in range(deg + 1)])


def rand_operator(rng, order, deg=2, positive_ends=True):
    coeffs = [RationalFunction(rand_poly(rng, deg, nonzero=False)) for _ in range(order + 1)]
    if positive_ends:
        coeffs[0] = RationalFunction(positive_poly(rng, deg))
        coeffs[-1] = RationalFunction(positive_poly(rng, deg))
    return OreOperator(coeffs)


@st.composite
def polys(draw, max_deg=3, bound=6, nonzero=False):
    cs = draw(st.lists(st.integers(-bound, bound), min_size=1, max_size=max_deg + 1))
    p = fmpq_poly(cs)
    if nonzero and p.is_zero():
        p = fmpq_poly([draw(st.integers(1, bound))])
    return p


@st.composite
def rational_functions(draw, max_deg=2, bound=6):
    num = draw(polys(max_deg, bound))
    den = draw(polys(max_deg, bound, nonzero=True))
    return RationalFunction(num, den)


@st.composite
def operators(draw, min_order=0, max_order=3, max_deg=2):
    n = draw(st.integers(min_order, max_order))
    coeffs = [draw(rational_functions(max_deg)) for _ in range(n + 1)]
    if coeffs[-1].is_zero():
        coeffs[-1] = RationalFunction(draw(polys(max_deg, nonzero=True)))
    return OreOperator(coeffs)


@st.composite
def full_operators(draw, min_order=1, max_order=3, max_deg=2):
    """Operators with nonzero leading and trailing coefficient."""
    L = draw(operators(min_order, max_order, max_deg))
    if L.trailing_coefficient().is_zero():
        L = L + OreOperator([RationalFunction(draw(polys(max_deg, nonzero=True)))])
    return L


# --- sequence oracle --------------------------------------------------------


def coeff_at(c, x):
    """c(x) as fmpq, or None at a pole."""
    d = c.den(x)
    if d == 0:
        return None
    return c.num(x) / d


def solution(L, x0, initial, count):
    """u(x0), ..., u(x0 + count - 1) for L(u) = 0; None if a singular point
    is met on the way."""
    n = L.order
    u = [fmpq(v) for v in initial]
    while len(u) < count:
        x = x0 + len(u) - n
        cs = [coeff_at(c, x) for c in L.coeffs]
        if any(c is None for c in cs) or cs[-1] == 0:
            return None
        u.append(-sum((cs[i] * u[-n + i] for i in range(n)), fmpq(0)) / cs[-1])
    return u


def residuals(L, x0, u):
    """L(u)(x) for every x in the window where it is defined."""
    out = []
    for k in range(len(u) - L.order):
        cs = [coeff_at(c, x0 + k) for c in L.coeffs]
        if any(c is None for c in cs):
            continue
        out.append(sum((cs[i] * u[k + i] for i in range(L.order + 1)), fmpq(0)))
    return out


def apply_window(G, x0, u):
    """(G u)(x0 + k) for k while G's coefficients are defined."""
    out = []
    for k in range(len(u) - max(G.order, 0)):
        cs = [coeff_at(c, x0 + k) for c in G.coeffs]
        if any(c is None for c in cs):
            return out
        out.append(sum((cs[i] * u[k + i] for i in range(G.order + 1)), fmpq(0)))
    return out


def rng_for(name):
    return random.Random(name)
