"""
Reduce a third-order operator to a symmetric square of a second-order one.

L3 is 2-solvable when it is gauge equivalent to L2 (S)^2 (S) (t - r).  The
symmetric square of such an operator has order 5; the invariant I detects
this directly, and otherwise a gauge map G = b0 + b1 t + b2 t^2 is searched
for by putting an order-1 right factor of L3 (S)^2 in the kernel of the
induced map on symmetric squares.  That condition is a conic in (b0, b1, b2).
"""

from dataclasses import dataclass, field
from functools import lru_cache

from sympy import Symbol, ZZ
from sympy.polys.matrices import DomainMatrix

from .absfact import abs_factorization, check_irreducible
from .conic import ConicForm, NoPoint, conic_point
from .constructions import GaugeMap, invert_gauge, symmetric_product, symmetric_square
from .field import ONE, ZERO, RationalFunction
from .linalg import solve as rf_solve
from .ore import OreOperator, rem
from .solve import hypergeometric_right_factors

SOLVED = "Solved"
NOT_2_SOLVABLE = "Not2Solvable"
DELEGATED = "Delegated"

# basis u(x+i)*u(x+j), i <= j, of the degree-2 part
MONOMIALS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


class NotAbsolutelyIrreducibleError(ValueError):
    def __init__(self, result):
        super().__init__(f"input not absolutely irreducible: {result}")
        self.result = result


def _coefficients(L3):
    if L3.order != 3:
        raise ValueError(f"expected an operator of order 3, got order {L3.order}")
    if L3.trailing_coefficient().is_zero():
        raise ValueError("trailing coefficient vanishes")
    c0, c1, c2, _ = L3.monic().coeffs
    return c0, c1, c2


def _shift_coords(coeffs, kmax):
    """Coordinates of u(x+k) in the basis u(x), u(x+1), u(x+2) for k <= kmax,
    with c_j(x+s) given by coeffs(j, s)."""
    U = [[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]]
    for k in range(3, kmax + 1):
        s = k - 3
        row = [ZERO, ZERO, ZERO]
        for j in range(3):
            c = coeffs(j, s)
            for m in range(3):
                row[m] = row[m] - c * U[s + j][m]
        U.append(row)
    return U


def _square_coords(v):
    return [v[i] * v[j] * (2 if i < j else 1) for i, j in MONOMIALS]


# --- the invariant ----------------------------------------------------------


@lru_cache(maxsize=1)
def invariant_terms():
    """Terms (coefficient, {(j, k): exponent}) of I in the symbols
    c_j(x + k).  Computed from the generic symmetric square and cached."""
    names = [(j, k) for k in range(3) for j in range(3)]
    syms = [Symbol(f"c{j}_{k}") for j, k in names]
    R = ZZ[tuple(syms)]
    gens = R.gens
    idx = {nk: g for nk, g in zip(names, gens)}

    zero, one = R.zero, R.one
    U = [[one, zero, zero], [zero, one, zero], [zero, zero, one]]
    for k in range(3, 6):
        s = k - 3
        row = [zero, zero, zero]
        for j in range(3):
            c = idx[(j, s)]
            for m in range(3):
                row[m] = row[m] - c * U[s + j][m]
        U.append(row)
    cols = [[v[i] * v[j] * (2 if i < j else 1) for i, j in MONOMIALS] for v in U[:6]]
    rows = [[cols[k][m] for k in range(6)] for m in range(6)]
    det = DomainMatrix(rows, (6, 6), R).det()
    # det = -8 c0^2 c0(x+1) I
    lead = idx[(0, 0)] ** 2 * idx[(0, 1)] * (-8)
    I, r = R.div(det, lead)
    if r != 0:
        raise ArithmeticError("unexpected shape of the symmetric square determinant")
    terms = []
    for monom, coeff in I.terms():
        exps = {names[i]: e for i, e in enumerate(monom) if e}
        terms.append((int(coeff), exps))
    return tuple(terms)


def sym_square_invariant(L3):
    """I(c0, c1, c2) for the monic form t^3 + c2 t^2 + c1 t + c0 of L3.

    I = 0 exactly when the symmetric square of L3 has order at most 5.
    """
    c = _coefficients(L3)
    cache = {}

    def val(j, k):
        if (j, k) not in cache:
            cache[(j, k)] = c[j].shift(k)
        return cache[(j, k)]

    total = ZERO
    for coeff, exps in invariant_terms():
        term = RationalFunction(coeff)
        for (j, k), e in exps.items():
            term = term * val(j, k) ** e
        total = total + term
    return total


# --- simple case --------------------------------------------------------------


@dataclass
class SimpleCaseResult:
    """Which of the three shapes of an order-3 operator with order-5
    symmetric square applies.  Case "C" carries (b, r) with
    L3 = (t^2 + t + b)(S)^2 (S) (t - r); case "B" the factorization."""

    case: str
    c0: RationalFunction = None
    factors: tuple = None
    b: RationalFunction = None
    r: RationalFunction = None

    @property
    def L2(self):
        if self.case != "C":
            return None
        return OreOperator([self.b, ONE, ONE])


def sym2_twist(L2, r):
    """L2 (S)^2 (S) (t - r)."""
    return symmetric_product(symmetric_square(L2), OreOperator([-r, ONE]))


def decompose_simple(L3):
    c0, c1, c2 = _coefficients(L3)
    if c1.is_zero() and c2.is_zero():
        return SimpleCaseResult("A", c0=c0)
    c1m = c1.shift(-1)
    if c0 == c1m * c2:
        return SimpleCaseResult("B", factors=(OreOperator([c2, ONE]), OreOperator([c1m, ZERO, ONE])))
    if c1.is_zero() or c2.is_zero():
        return SimpleCaseResult("None")
    if not sym_square_invariant(L3).is_zero():
        return SimpleCaseResult("None")
    A = c2.shift(-1) * c2 / c1
    B = c1 * c1m / (c0 * c2.shift(-1))
    b = (ONE - A) / (ONE - A * B)
    if b.is_one():
        raise ValueError("degenerate parameters: b = 1")
    r = c2.shift(-2) / (b.shift(-1) - ONE)
    if r.is_zero():
        raise ValueError("degenerate parameters: r = 0")
    L2 = OreOperator([b, ONE, ONE])
    if sym2_twist(L2, r) != L3.monic():
        raise ArithmeticError("reconstruction from (b, r) does not reproduce the operator")
    return SimpleCaseResult("C", b=b, r=r)


# --- the G2 ansatz ----------------------------------------------------------


@dataclass
class G2Ansatz:
    """G2 = sum over monomials b_i b_j of b_i*b_j * parts[(i, j)].

    G2 is the operator on the symmetric square induced by
    G = b0 + b1 t + b2 t^2, i.e. G2(u^2) = G(u)^2 for u in V(L3).
    """

    L3: OreOperator
    parts: dict

    def substitute(self, point):
        b = [RationalFunction.coerce(v) for v in point]
        out = OreOperator(())
        for (i, j), A in self.parts.items():
            beta = b[i] * b[j]
            if not beta.is_zero():
                out = out + beta * A
        return out


def build_g2_ansatz(L3):
    c = _coefficients(L3)
    U = _shift_coords(lambda j, s: c[j].shift(s), 5)
    cols = [_square_coords(U[k]) for k in range(6)]
    S = [[cols[k][m] for k in range(6)] for m in range(6)]
    parts = {}
    for m, (i, j) in enumerate(MONOMIALS):
        w = RationalFunction(2 if i < j else 1)
        e = [w if q == m else ZERO for q in range(6)]
        try:
            a = rf_solve(S, e)
        except ValueError:
            raise ValueError("symmetric square degenerate") from None
        parts[(i, j)] = OreOperator(a)
    return G2Ansatz(L3=L3.monic(), parts=parts)


def conic_from_kernel(ansatz, L1):
    """The conic rem(G2, L1) = 0 in (b0, b1, b2)."""
    if L1.order != 1:
        raise ValueError("L1 must have order 1")
    coeffs = {}
    for mono, A in ansatz.parts.items():
        R = rem(A, L1)
        if R.order > 0:
            raise ArithmeticError("remainder is not a scalar")
        coeffs[mono] = R[0]
    return ConicForm.from_monomials(coeffs).cleared()


# --- the pipeline -----------------------------------------------------------


@dataclass
class ReduceOrderResult:
    verdict: str
    gauge: GaugeMap = None
    L2: OreOperator = None
    r: RationalFunction = None
    LG: OreOperator = None
    L1: OreOperator = None
    reason: str = None
    conditional: bool = False
    certificates: list = field(default_factory=list)
    simple: SimpleCaseResult = None

    @property
    def solved(self):
        return self.verdict == SOLVED

    def certificates_hold(self):
        """All exact identities a solved result has to satisfy."""
        if not self.solved:
            return {}
        checks = dict(self.gauge.check())
        checks["LG = L2(S)^2(S)(t - r)"] = sym2_twist(self.L2, self.r) == self.LG
        checks["ord sym^2(LG) = 5"] = symmetric_square(self.LG).order == 5
        return checks


def _precondition(L3):
    check_irreducible(L3)
    res = abs_factorization(L3, check=False)
    if res.factored:
        raise NotAbsolutelyIrreducibleError(res)


def _finish(gauge, simple, L1=None):
    if simple.case == "C":
        return ReduceOrderResult(SOLVED, gauge=gauge, L2=simple.L2, r=simple.r,
                                 LG=gauge.target, L1=L1, simple=simple)
    return ReduceOrderResult(DELEGATED, gauge=gauge, LG=gauge.target, L1=L1, simple=simple,
                             reason=f"case {simple.case}")


def reduce_order(L3, check=True):
    """Find (G, G~, L2, r) or report Not2Solvable."""
    _coefficients(L3)
    if check:
        _precondition(L3)
    L3m = L3.monic()
    L6 = symmetric_square(L3m)
    if L6.order <= 5:
        one = OreOperator((ONE,))
        gauge = GaugeMap(G=one, source=L3m, target=L3m, inverse=one)
        return _finish(gauge, decompose_simple(L3m))
    factors = hypergeometric_right_factors(L6)
    if not factors:
        return ReduceOrderResult(NOT_2_SOLVABLE, reason="no-order-1-factor")
    ansatz = build_g2_ansatz(L3m)
    certificates = []
    for f in factors:
        L1 = f.operator
        C = conic_from_kernel(ansatz, L1)
        pt = conic_point(C)
        if isinstance(pt, NoPoint):
            certificates.append(pt)
            continue
        G = OreOperator(pt)
        gauge = invert_gauge(G, L3m)
        simple = decompose_simple(gauge.target)
        if simple.case == "None":
            raise ArithmeticError("gauged operator does not have an order-5 symmetric square")
        return _finish(gauge, simple, L1)
    return ReduceOrderResult(NOT_2_SOLVABLE, reason="all-conics-unsolvable", conditional=True,
                             certificates=certificates)
