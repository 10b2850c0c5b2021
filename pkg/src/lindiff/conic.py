"""
Conics over Q(x): congruence diagonalization and a descent solver.

A diagonal conic c1*X1^2 + c2*X2^2 + c3*X3^2 = 0 with pairwise coprime
squarefree polynomial coefficients is rewritten as a*X^2 + b*Y^2 = Z^2 and
reduced by Lagrange descent (degree of a drops each round) to a conic over Q,
which is decided by Legendre's theorem.  Failure is reported with the local
obstruction that proves it.
"""

from dataclasses import dataclass
from functools import reduce
from math import gcd, lcm

from flint import fmpq, fmpq_mat, fmpq_poly
from sympy import factorint, legendre_symbol, symbols
from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic_normal

from .field import (
    ONE,
    ZERO,
    RationalFunction,
    is_rational_square,
    poly_factor,
    poly_str,
    primitive_integer,
    rational_sqrt,
    squarefree_rational,
)

X = fmpq_poly([0, 1])


@dataclass(frozen=True)
class ConicForm:
    """The quadratic form b^T M b with M symmetric 3x3 over Q(x)."""

    M: tuple

    def __post_init__(self):
        M = tuple(tuple(RationalFunction.coerce(e) for e in row) for row in self.M)
        if len(M) != 3 or any(len(r) != 3 for r in M):
            raise ValueError("conic matrix must be 3x3")
        for i in range(3):
            for j in range(i):
                if M[i][j] != M[j][i]:
                    raise ValueError("conic matrix must be symmetric")
        object.__setattr__(self, "M", M)

    @classmethod
    def from_monomials(cls, coeffs):
        """Build from {(i, j): coefficient of b_i*b_j} with i <= j."""
        M = [[ZERO] * 3 for _ in range(3)]
        half = RationalFunction(fmpq(1, 2))
        for (i, j), c in coeffs.items():
            c = RationalFunction.coerce(c)
            if i == j:
                M[i][i] = M[i][i] + c
            else:
                M[i][j] = M[i][j] + c * half
                M[j][i] = M[i][j]
        return cls(tuple(tuple(r) for r in M))

    def __call__(self, point):
        p = [RationalFunction.coerce(v) for v in point]
        total = ZERO
        for i in range(3):
            for j in range(3):
                if not self.M[i][j].is_zero():
                    total = total + self.M[i][j] * p[i] * p[j]
        return total

    def is_zero(self):
        return all(e.is_zero() for row in self.M for e in row)

    def cleared(self):
        """Same conic scaled to polynomial entries."""
        den = fmpq_poly([1])
        for row in self.M:
            for e in row:
                den = den * e.den // den.gcd(e.den)
        d = RationalFunction(den)
        return ConicForm(tuple(tuple(e * d for e in row) for row in self.M))


@dataclass(frozen=True)
class NoPoint:
    """Certificate that a conic has no nontrivial point over Q(x).

    ``kind`` is "place" (``where`` is an irreducible polynomial f and the
    quantity ``value`` is not a square modulo f), "prime" (``where`` is a
    prime p with Hilbert symbol -1) or "real" (both coefficients negative).
    """

    kind: str
    where: object
    value: object = None

    def __str__(self):
        if self.kind == "place":
            return f"no point: {poly_str(self.value)} is not a square modulo {poly_str(self.where)}"
        if self.kind == "prime":
            return f"no point: local obstruction at p = {self.where}"
        return "no point: obstruction at the real place"


@dataclass
class Diagonalization:
    c: list
    T: list
    rank: int


def _matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(3)), ZERO) for j in range(3)] for i in range(3)]


def _transpose(A):
    return [[A[j][i] for j in range(3)] for i in range(3)]


def _identity():
    return [[ONE if i == j else ZERO for j in range(3)] for i in range(3)]


def congruent(M, T):
    """T^T M T."""
    return _matmul(_matmul(_transpose(T), M), T)


def _squarefree_split(p):
    """p = k * sf * sq^2 with sf squarefree primitive integer, k a squarefree
    integer and sq a polynomial.  Returns (k*sf, sq * s) as (poly, poly)."""
    lc, facs = poly_factor(p)
    sf = fmpq_poly([1])
    sq = fmpq_poly([1])
    for f, e in facs:
        if e % 2:
            sf *= f
        if e // 2:
            sq *= f ** (e // 2)
    kappa, sf0 = primitive_integer(sf)
    k0, w = squarefree_rational(lc * kappa)
    return sf0 * k0, sq * w


def diagonalize_conic(C):
    """Return Diagonalization with T^T M T = diag(c) exactly.

    Each nonzero c_i is a squarefree polynomial with squarefree integer
    content; zero entries mean the rank is below 3.
    """
    if C.is_zero():
        raise ValueError("zero conic")
    M = [list(r) for r in C.M]
    T = _identity()

    def apply(E):
        nonlocal M, T
        M = congruent(M, E)
        T = _matmul(T, E)

    for k in range(3):
        if M[k][k].is_zero():
            i = next((i for i in range(k + 1, 3) if not M[i][i].is_zero()), None)
            if i is not None:
                E = _identity()
                E[k][k], E[i][i], E[k][i], E[i][k] = ZERO, ZERO, ONE, ONE
                apply(E)
            else:
                j = next((j for j in range(k + 1, 3) if not M[k][j].is_zero()), None)
                if j is None:
                    continue
                E = _identity()
                E[j][k] = ONE
                apply(E)
        p = M[k][k]
        E = _identity()
        for i in range(k + 1, 3):
            if not M[k][i].is_zero():
                E[k][i] = -(M[k][i] / p)
        apply(E)
    c = [M[i][i] for i in range(3)]
    scale = _identity()
    for i in range(3):
        if c[i].is_zero():
            continue
        d = c[i].den
        P = c[i].num * d
        sf, sq = _squarefree_split(P)
        s = RationalFunction(d, sq)
        scale[i][i] = s
        c[i] = RationalFunction(sf)
    T = _matmul(T, scale)
    rank = sum(1 for v in c if not v.is_zero())
    return Diagonalization(c=c, T=T, rank=rank)


# --- square roots in Q[x]/(f) ----------------------------------------------


def _mulmat(beta, f):
    d = f.degree()
    M = fmpq_mat(d, d)
    v = beta % f
    for j in range(d):
        cs = v.coeffs()
        for i, a in enumerate(cs):
            M[i, j] = a
        v = (v * X) % f
    return M


def _invmod(a, f):
    g, s, _ = a.xgcd(f)
    if g.degree() != 0:
        raise ZeroDivisionError("not invertible modulo f")
    return (s / g.coeffs()[0]) % f


def sqrt_mod_irreducible(beta, f):
    """A square root of beta in Q[x]/(f) for irreducible f, or None."""
    beta = beta % f
    if beta.is_zero():
        return fmpq_poly([])
    d = f.degree()
    if d == 1:
        c = beta.coeffs()[0]
        return fmpq_poly([rational_sqrt(c)]) if is_rational_square(c) else None
    for k in range(0, 50):
        gamma = X + k if k else fmpq_poly([1])
        if k and (gamma % f).is_zero():
            continue
        b = (beta * gamma * gamma) % f
        chi = _mulmat(b, f).charpoly()
        if chi.gcd(chi.derivative()).degree() > 0:
            continue
        _, facs = fmpq_poly(_spread(chi)).factor()
        nu = next((g for g, _ in facs if g.degree() == d), None)
        if nu is None:
            return None
        cs = nu.coeffs()
        A = fmpq_poly([])
        B = fmpq_poly([])
        pw = fmpq_poly([1])
        for i in range(0, len(cs), 2):
            A += cs[i] * pw
            if i + 1 < len(cs):
                B += cs[i + 1] * pw
            pw = (pw * b) % f
        A, B = A % f, B % f
        alpha = (-A * _invmod(B, f)) % f
        root = (alpha * _invmod(gamma % f, f)) % f
        if ((root * root - beta) % f).is_zero():
            return root
        raise ArithmeticError("square root check failed")
    raise ArithmeticError("no primitive element found")


def _spread(p):
    """Coefficients of p(y^2) given p(y)."""
    out = []
    for c in p.coeffs():
        out.extend([c, fmpq(0)])
    return out[:-1] if out else out


def sqrt_mod(b, a):
    """s with s^2 = b mod a for squarefree a, or a NoPoint certificate."""
    _, facs = poly_factor(a)
    residues, moduli = [], []
    for f, _ in facs:
        r = sqrt_mod_irreducible(b, f)
        if r is None:
            return NoPoint("place", f, b % f)
        residues.append(r)
        moduli.append(f)
    # CRT
    s = fmpq_poly([])
    m = fmpq_poly([1])
    for r, f in zip(residues, moduli):
        # s' = s + m * ((r - s) * m^-1 mod f)
        t = ((r - s) * _invmod(m % f, f)) % f
        s = s + m * t
        m = m * f
    return s % a if a.degree() > 0 else s


# --- base case over Q ------------------------------------------------------


def hilbert_symbol(a, b, p):
    """Hilbert symbol (a, b)_p for nonzero integers; p = -1 means the real place."""
    if p == -1:
        return -1 if a < 0 and b < 0 else 1

    def split(n):
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return v, n

    va, ua = split(a)
    vb, ub = split(b)
    if p != 2:
        s = (-1) ** (va * vb * ((p - 1) // 2))
        s *= legendre_symbol(ua % p, p) ** vb if vb % 2 else 1
        s *= legendre_symbol(ub % p, p) ** va if va % 2 else 1
        return s

    def eps(u):
        return ((u - 1) // 2) % 2

    def omega(u):
        return ((u * u - 1) // 8) % 2

    e = eps(ua) * eps(ub) + va * omega(ub) + vb * omega(ua)
    return -1 if e % 2 else 1


def _legendre(a, b):
    """Point on a*X^2 + b*Y^2 = Z^2 over Q or a NoPoint."""
    ka, wa = squarefree_rational(a)
    kb, wb = squarefree_rational(b)
    # a X^2 = ka (wa X)^2
    x, y, z = symbols("x y z")
    sol = diop_ternary_quadratic_normal(ka * x**2 + kb * y**2 - z**2)
    if sol[0] is None:
        for p in [-1] + sorted(set(factorint(abs(2 * ka * kb)))):
            if hilbert_symbol(ka, kb, p) == -1:
                return NoPoint("real" if p == -1 else "prime", p)
        raise ArithmeticError("Legendre solver failed without an obstruction")
    X0, Y0, Z0 = (fmpq(int(v)) for v in sol)
    return (X0 / wa, Y0 / wb, Z0)


# --- descent over Q[x] -----------------------------------------------------


def _poly_sqrt(p):
    """Square root of a polynomial over Q, or None."""
    if p.is_zero():
        return p
    lc = p.leading_coefficient()
    if not is_rational_square(lc):
        return None
    _, facs = poly_factor(p)
    if any(e % 2 for _, e in facs):
        return None
    r = fmpq_poly([rational_sqrt(lc)])
    for f, e in facs:
        r *= f ** (e // 2)
    return r


def _rf(p):
    return RationalFunction.coerce(p)


def _descent(a, b, depth=0):
    """Point (X, Y, Z) over Q(x) on a*X^2 + b*Y^2 = Z^2, or NoPoint."""
    if depth > 200:
        raise ArithmeticError("conic descent did not terminate")
    rb = _poly_sqrt(b)
    if rb is not None:
        return (ZERO, ONE, _rf(rb))
    ra = _poly_sqrt(a)
    if ra is not None:
        return (ONE, ZERO, _rf(ra))
    if a.degree() < b.degree():
        res = _descent(b, a, depth + 1)
        if isinstance(res, NoPoint):
            return res
        return (res[1], res[0], res[2])
    if a.degree() == 0:
        res = _legendre(a.coeffs()[0], b.coeffs()[0])
        if isinstance(res, NoPoint):
            return res
        return tuple(_rf(fmpq_poly([v])) for v in res)
    s = sqrt_mod(b, a)
    if isinstance(s, NoPoint):
        return s
    t, rem_ = divmod(s * s - b, a)
    if not rem_.is_zero():
        raise ArithmeticError("square root modulo a is wrong")
    k, w = _squarefree_split(t)
    res = _descent(k, b, depth + 1)
    if isinstance(res, NoPoint):
        return res
    x2, y1, z1 = res
    x1 = x2 / _rf(w)
    s_, b_, t_ = _rf(s), _rf(b), _rf(t)
    return (t_ * x1, z1 + s_ * y1, z1 * s_ + b_ * y1)


def _primitive_point(pt):
    """Scale a point over Q(x) to coprime polynomial coordinates."""
    den = fmpq_poly([1])
    for v in pt:
        den = den * v.den // den.gcd(v.den)
    nums = [(v * _rf(den)).num for v in pt]
    g = fmpq_poly([])
    for n in nums:
        g = n if g.is_zero() else (g.gcd(n) if not n.is_zero() else g)
    nums = [n // g for n in nums]
    coeffs = [c for n in nums for c in n.coeffs()]
    if coeffs:
        dl = reduce(lcm, (int(c.q) for c in coeffs), 1)
        cg = reduce(gcd, (int(c.p) * (dl // int(c.q)) for c in coeffs), 0)
        nums = [n * fmpq(dl, cg) for n in nums]
    return tuple(_rf(n) for n in nums)


def solve_conic(c1, c2, c3):
    """Nontrivial (X1, X2, X3) with c1*X1^2 + c2*X2^2 + c3*X3^2 = 0, or NoPoint.

    Coefficients are polynomials (fmpq_poly or polynomial RationalFunction).
    """
    cs = []
    for c in (c1, c2, c3):
        c = RationalFunction.coerce(c)
        if not c.is_polynomial():
            raise ValueError("conic coefficients must be polynomials")
        cs.append(c.num)
    for i, c in enumerate(cs):
        if c.is_zero():
            pt = [ZERO, ZERO, ZERO]
            pt[i] = ONE
            return tuple(pt)
    scale = [ONE, ONE, ONE]  # original X_i = scale_i * current Y_i
    for i in range(3):
        sf, sq = _squarefree_split(cs[i])
        # c Y^2 = sf (sq Y)^2
        cs[i] = sf
        scale[i] = scale[i] / _rf(sq)
    changed = True
    while changed:
        changed = False
        for i, j in ((0, 1), (0, 2), (1, 2)):
            g = cs[i].gcd(cs[j])
            if g.degree() < 1:
                continue
            k = 3 - i - j
            cs[i], cs[j] = cs[i] // g, cs[j] // g
            scale[i] = scale[i] / _rf(g)
            scale[j] = scale[j] / _rf(g)
            sf, sq = _squarefree_split(cs[k] * g)
            cs[k] = sf
            scale[k] = scale[k] / _rf(sq)
            changed = True
    a = -cs[0] * cs[2]
    b = -cs[1] * cs[2]
    res = _descent(a, b)
    if isinstance(res, NoPoint):
        return res
    Xp, Yp, Zp = res
    Y = (Xp, Yp, Zp / _rf(cs[2]))
    pt = tuple(s * v for s, v in zip(scale, Y))
    return _primitive_point(pt)


def conic_point(C):
    """Nontrivial point of a ConicForm over Q(x), or NoPoint."""
    D = diagonalize_conic(C)
    if D.rank < 3:
        i = next(i for i in range(3) if D.c[i].is_zero())
        Y = [ZERO, ZERO, ZERO]
        Y[i] = ONE
    else:
        Y = solve_conic(*D.c)
        if isinstance(Y, NoPoint):
            return Y
    pt = [sum((D.T[i][j] * Y[j] for j in range(3)), ZERO) for i in range(3)]
    return _primitive_point(pt)
