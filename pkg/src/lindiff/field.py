"""
Exact arithmetic over Q and Q(x).

Rationals are ``flint.fmpq`` and dense polynomials are ``flint.fmpq_poly``;
this module adds the reduced rational-function type used as the coefficient
field of every operator, plus the small amount of polynomial plumbing the
solvers need (shifts, integer roots, factorization, canonical printing).
"""

from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from flint import fmpq, fmpq_poly, fmpz

Polynomial = fmpq_poly
Rational = fmpq

X = fmpq_poly([0, 1])
_ONE = fmpq_poly([1])
_ZERO = fmpq_poly([])


def to_rational(value):
    """Coerce int, Fraction, str ("3/4") or fmpq to fmpq."""
    if isinstance(value, fmpq):
        return value
    if isinstance(value, (int, fmpz)):
        return fmpq(value)
    if isinstance(value, Fraction):
        return fmpq(value.numerator, value.denominator)
    if isinstance(value, str):
        f = Fraction(value)
        return fmpq(f.numerator, f.denominator)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def rational_to_fraction(q):
    return Fraction(int(q.p), int(q.q))


def poly_key(p):
    return tuple((int(c.p), int(c.q)) for c in p.coeffs())


def poly_shift(p, q):
    """p(x + q)."""
    if p.degree() <= 0 or q == 0:
        return p
    return p(fmpq_poly([q, 1]))


def poly_scale_var(p, m):
    """p(m*x)."""
    if p.degree() <= 0:
        return p
    return p(fmpq_poly([0, m]))


def monic(p):
    return p / p.leading_coefficient()


def primitive_integer(p):
    """Return (c, q) with p = c*q, q having coprime integer coefficients and
    positive leading coefficient."""
    if p.is_zero():
        return fmpq(0), p
    coeffs = p.coeffs()
    den = reduce(lcm, (int(c.q) for c in coeffs), 1)
    ints = [int(c.p) * (den // int(c.q)) for c in coeffs]
    g = reduce(gcd, ints, 0)
    if ints[-1] < 0:
        g = -g
    return fmpq(g, den), fmpq_poly([i // g for i in ints])


def poly_factor(p):
    """Factor p over Q.

    Returns ``(content, [(monic_irreducible, multiplicity), ...])`` with the
    factors sorted by (degree, coefficients) so output is deterministic.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    _, facs = p.factor()
    out = []
    for f, e in facs:
        out.append((monic(f), int(e)))
    out.sort(key=lambda fe: (fe[0].degree(), poly_key(fe[0])))
    return p.leading_coefficient(), out


def int_roots(p):
    """Integer roots of p, listed with multiplicity, ascending."""
    if p.is_zero():
        raise ValueError("zero polynomial has every integer as a root")
    out = []
    for r, e in p.roots():
        if r.q == 1:
            out.extend([int(r.p)] * int(e))
    return sorted(out)


def rational_roots(p):
    return sorted(((r, int(e)) for r, e in p.roots()), key=lambda re: re[0])


def _format_poly_int(coeffs, var="x"):
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        s += f" {sign} {body}"
    return s


def poly_str(p, var="x"):
    """Descending powers; rational content pulled out as a factor."""
    if p.is_zero():
        return "0"
    c, q = primitive_integer(p)
    body = _format_poly_int([int(a.p) for a in q.coeffs()], var)
    if c == 1:
        return body
    if q.is_one():
        return str(c)
    single = sum(1 for a in q.coeffs() if a != 0) == 1
    if c == -1:
        return f"-{body}" if single else f"-({body})"
    return f"{c}*{body}" if single else f"{c}*({body})"


class RationalFunction:
    """Reduced quotient num/den of polynomials over Q, den monic.

    Instances are immutable.  The zero element is 0/1.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None, _reduced=False):
        if not isinstance(num, fmpq_poly):
            num = fmpq_poly([to_rational(num)])
        if den is None:
            den = _ONE
        elif not isinstance(den, fmpq_poly):
            den = fmpq_poly([to_rational(den)])
        if not _reduced:
            if den.is_zero():
                raise ZeroDivisionError("rational function with zero denominator")
            if num.is_zero():
                den = _ONE
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num // g
                    den = den // g
                lc = den.leading_coefficient()
                if lc != 1:
                    num = num / lc
                    den = den / lc
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def coerce(cls, value):
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, fmpq_poly):
            return cls(value, _ONE, _reduced=True)
        return cls(fmpq_poly([to_rational(value)]), _ONE, _reduced=True)

    @classmethod
    def x(cls):
        return cls(X, _ONE, _reduced=True)

    # predicates

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_constant(self):
        return self.num.degree() <= 0 and self.den.degree() == 0

    def is_polynomial(self):
        return self.den.is_one()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.coeffs()[0] if not self.num.is_zero() else fmpq(0)

    def degree(self):
        """deg(num) - deg(den); -inf encoded as None for zero."""
        if self.is_zero():
            return None
        return self.num.degree() - self.den.degree()

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = RationalFunction.coerce(other)
            except TypeError:
                return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        if self.den.is_one():
            return RationalFunction(self.num * other.den + other.num, other.den, _reduced=True)
        if other.den.is_one():
            return RationalFunction(self.num + other.num * self.den, self.den, _reduced=True)
        # Henrici: only the gcd of the denominators can cancel
        g = self.den.gcd(other.den)
        if g.is_one():
            return RationalFunction(self.num * other.den + other.num * self.den,
                                    self.den * other.den, _reduced=True)
        b, d = self.den // g, other.den // g
        n = self.num * d + other.num * b
        if n.is_zero():
            return ZERO
        g2 = n.gcd(g)
        if not g2.is_one():
            n = n // g2
            g = g // g2
        den = b * d * g
        lc = den.leading_coefficient()
        if lc != 1:
            n, den = n / lc, den / lc
        return RationalFunction(n, den, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = RationalFunction.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = RationalFunction.coerce(other)
            except TypeError:
                return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if self.den.is_one() and other.den.is_one():
            return RationalFunction(self.num * other.num, _ONE, _reduced=True)
        # cross-cancel to keep operands small
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n = (self.num // g1) * (other.num // g2)
        d = (self.den // g2) * (other.den // g1)
        lc = d.leading_coefficient()
        if lc != 1:
            n, d = n / lc, d / lc
        return RationalFunction(n, d, _reduced=True)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        lc = self.num.leading_coefficient()
        return RationalFunction(self.den / lc, self.num / lc, _reduced=True)

    def __truediv__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = RationalFunction.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return RationalFunction(self.num ** e, self.den ** e, _reduced=True)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = RationalFunction.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __ne__(self, other):
        res = self.__eq__(other)
        return res if res is NotImplemented else not res

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((poly_key(self.num), poly_key(self.den)))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def weight(self):
        """Total degree, used to pick small pivots."""
        return self.num.degree() + self.den.degree()

    # substitutions

    def shift(self, q=1):
        """f(x + q) for rational q."""
        q = to_rational(q)
        if q == 0 or (self.num.degree() <= 0 and self.den.degree() <= 0):
            return self
        return RationalFunction(poly_shift(self.num, q), poly_shift(self.den, q), _reduced=True)

    def scale_var(self, m):
        """f(m*x)."""
        m = to_rational(m)
        n = poly_scale_var(self.num, m)
        d = poly_scale_var(self.den, m)
        lc = d.leading_coefficient()
        return RationalFunction(n / lc, d / lc, _reduced=True)

    def __call__(self, point):
        point = to_rational(point)
        d = self.den(point)
        if d == 0:
            raise ZeroDivisionError(f"pole of {self} at x = {point}")
        return self.num(point) / d

    def __str__(self):
        if self.den.is_one():
            return poly_str(self.num)
        # common scaling so num and den have coprime integer coefficients
        cn, pn = primitive_integer(self.num)
        cd, pd = primitive_integer(self.den)
        c = cn / cd
        a, b = int(c.p), int(c.q)
        num_s = _format_poly_int([a * int(t.p) for t in pn.coeffs()])
        den_s = _format_poly_int([b * int(t.p) for t in pd.coeffs()])
        if pn.degree() > 0 or a < 0 and len(pn.coeffs()) > 1:
            num_s = f"({num_s})"
        elif a < 0 and not num_s.startswith("-"):
            num_s = f"({num_s})"
        if pd.degree() > 0 or b != 1 and len(pd.coeffs()) > 1:
            den_s = f"({den_s})"
        return f"{num_s}/{den_s}"

    def __repr__(self):
        return f"RationalFunction({self})"


ZERO = RationalFunction(_ZERO, _ONE, _reduced=True)
ONE = RationalFunction(_ONE, _ONE, _reduced=True)


def shift(f, q):
    """f(x + q) for a rational function (or polynomial) f and rational q."""
    return RationalFunction.coerce(f).shift(q)


def rf(num, den=None):
    """Convenience constructor accepting polynomials, ints or coefficient lists."""
    if isinstance(num, (list, tuple)):
        num = fmpq_poly([to_rational(c) for c in num])
    if isinstance(den, (list, tuple)):
        den = fmpq_poly([to_rational(c) for c in den])
    return RationalFunction(num, den)


class QuadExtElement:
    """a + b*s over Q(x) with s^2 = d, d a non-square rational.

    Only used when a constant has to be replaced by its square root.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        self.a = RationalFunction.coerce(a)
        self.b = RationalFunction.coerce(b)
        self.d = to_rational(d)

    def _check(self, other):
        if isinstance(other, QuadExtElement):
            if other.d != self.d:
                raise ValueError("elements of different quadratic extensions")
            return other
        return QuadExtElement(other, ZERO, self.d)

    def _other(self, other):
        try:
            return self._check(other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExtElement(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtElement(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExtElement(self.a * o.a + self.b * o.b * self.d,
                              self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadExtElement(self.a, -self.b, self.d)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self):
        n = self.norm()
        return QuadExtElement(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def shift(self, q=1):
        return QuadExtElement(self.a.shift(q), self.b.shift(q), self.d)

    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()

    def is_one(self):
        return self.a.is_one() and self.b.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def weight(self):
        return max(self.a.weight(), self.b.weight() if not self.b.is_zero() else 0)

    def scale_var(self, m):
        return QuadExtElement(self.a.scale_var(m), self.b.scale_var(m), self.d)

    def __eq__(self, other):
        try:
            o = self._check(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __str__(self):
        root = f"sqrt({self.d})"
        if self.b.is_zero():
            return str(self.a)
        bs = str(self.b)
        bpart = root if bs == "1" else f"-{root}" if bs == "-1" else f"({bs})*{root}"
        if self.a.is_zero():
            return bpart
        if bpart.startswith("-"):
            return f"{self.a} - {bpart[1:]}"
        return f"{self.a} + {bpart}"

    def __repr__(self):
        return f"QuadExtElement({self})"

    __repr__ = __str__


def is_rational_square(q):
    q = to_rational(q)
    if q < 0:
        return False
    p, d = fmpz(q.p), fmpz(q.q)
    return p.isqrt() ** 2 == p and d.isqrt() ** 2 == d


def rational_sqrt(q):
    q = to_rational(q)
    if not is_rational_square(q):
        raise ValueError(f"{q} is not a square in Q")
    return fmpq(fmpz(q.p).isqrt(), fmpz(q.q).isqrt())


def squarefree_rational(q):
    """Write a nonzero rational q as s^2 * k with k a squarefree integer.
    Returns (k, s)."""
    from sympy import factorint

    q = to_rational(q)
    n = int(q.p) * int(q.q)
    s = fmpq(1, int(q.q))
    k = 1 if n > 0 else -1
    for p, e in factorint(abs(n)).items():
        s *= p ** (e // 2)
        if e % 2:
            k *= p
    return k, s
