"""
The Ore algebra Q(x)[t] with t*f(x) = f(x+1)*t.

Operators are stored as tuples of ``RationalFunction`` coefficients in
ascending powers of t.  Normalisation ("monic") always divides by the
leading coefficient from the left.
"""

from functools import reduce
from math import gcd, lcm

from flint import fmpq

from .field import ONE, ZERO, QuadExtElement, RationalFunction, to_rational


def _coerce_coeff(c):
    if isinstance(c, QuadExtElement):
        return c
    return RationalFunction.coerce(c)


class OreOperator:
    """Operator sum c_i t^i.  Coefficients are ``RationalFunction`` or, for
    work over a quadratic extension, ``QuadExtElement``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_coerce_coeff(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, coeffs):
        op = cls.__new__(cls)
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        op.coeffs = tuple(cs)
        return op

    @classmethod
    def coerce(cls, value):
        if isinstance(value, OreOperator):
            return value
        return cls((value,))

    @classmethod
    def tau(cls, k=1):
        return cls._raw([ZERO] * k + [ONE])

    # structure

    @property
    def order(self):
        """Order of the operator; -1 for the zero operator."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0].is_one()

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return ZERO

    def leading_coefficient(self):
        if not self.coeffs:
            raise ValueError("zero operator has no leading coefficient")
        return self.coeffs[-1]

    def trailing_coefficient(self):
        return self.coeffs[0] if self.coeffs else ZERO

    def is_full(self):
        """Nonzero leading and trailing coefficient."""
        return bool(self.coeffs) and not self.coeffs[0].is_zero()

    def monic(self):
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        if lc.is_one():
            return self
        inv = lc.inverse()
        return OreOperator._raw([inv * c for c in self.coeffs])

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1].is_one()

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, OreOperator):
            other = OreOperator.coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return OreOperator._raw([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return OreOperator._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, OreOperator):
            other = OreOperator.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return OreOperator.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, OreOperator):
            other = _coerce_coeff(other)
            # right multiplication by a scalar: c_i t^i f = c_i f(x+i) t^i
            return OreOperator._raw([c * other.shift(i) for i, c in enumerate(self.coeffs)])
        return mul(self, other)

    def __rmul__(self, other):
        other = _coerce_coeff(other)
        return OreOperator._raw([other * c for c in self.coeffs])

    def __pow__(self, e):
        out = OreOperator((ONE,))
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, OreOperator):
            try:
                other = OreOperator.coerce(other)
            except TypeError:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # transformations

    def shift_x(self, q):
        """Substitute x -> x + q in every coefficient."""
        q = to_rational(q)
        return OreOperator._raw([c.shift(q) for c in self.coeffs])

    def scale_x(self, m):
        """Substitute x -> m*x in every coefficient."""
        return OreOperator._raw([c.scale_var(m) for c in self.coeffs])

    def negate_tau(self):
        """t -> -t."""
        return OreOperator._raw([c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    def shift_tau(self, k):
        """t^k * self."""
        return OreOperator._raw([ZERO] * k + [c.shift(k) for c in self.coeffs])

    def adjoint(self):
        """t^n * phi(L) for the anti-automorphism phi: t -> 1/t, x -> x.

        Right factors of the adjoint correspond to left factors of L.
        """
        n = self.order
        return OreOperator._raw([self[n - j].shift(j) for j in range(n + 1)])

    def in_subring(self, m):
        """True if only powers of t divisible by m occur."""
        return all(c.is_zero() for i, c in enumerate(self.coeffs) if i % m)

    def clear_denominators(self):
        """Left multiple with coprime integer polynomial coefficients and
        positive leading coefficient."""
        if not self.coeffs:
            return self
        d = self.coeffs[0].den
        for c in self.coeffs[1:]:
            d = d * c.den // d.gcd(c.den)
        nums = [c.num * (d // c.den) for c in self.coeffs]
        g = nums[0]
        for n in nums[1:]:
            g = g.gcd(n)
        nums = [n // g for n in nums]
        coeffs = [a for n in nums for a in n.coeffs()]
        den = reduce(lcm, (int(a.q) for a in coeffs), 1)
        content = reduce(gcd, (int(a.p) * (den // int(a.q)) for a in coeffs), 0)
        c = fmpq(content, den)
        if nums[-1].leading_coefficient() < 0:
            c = -c
        return OreOperator._raw([RationalFunction.coerce(n / c) for n in nums])

    # action on sequences

    def apply(self, seq, x):
        """Evaluate sum_i c_i(x) * seq(x + i) at a rational point x.

        ``seq`` is any callable from rationals to rationals.
        """
        x = to_rational(x)
        total = 0
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            total += c(x) * seq(x + i)
        return total

    def __str__(self):
        return operator_str(self)

    def __repr__(self):
        return f"OreOperator({self})"


def _needs_parens(s):
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-/" and i > 0:
            return True
    return False


def operator_str(L, var="t"):
    if L.is_zero():
        return "0"
    parts = []
    for k in range(L.order, -1, -1):
        c = L.coeffs[k]
        if c.is_zero():
            continue
        cs = str(c)
        if k == 0:
            term = cs
        else:
            mono = var if k == 1 else f"{var}^{k}"
            if cs == "1":
                term = mono
            elif cs == "-1":
                term = "-" + mono
            elif _needs_parens(cs):
                term = f"({cs})*{mono}"
            else:
                term = f"{cs}*{mono}"
        parts.append(term)
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


t = OreOperator.tau(1)


def mul(A, B):
    """Product A*B in Q(x)[t]."""
    if A.is_zero() or B.is_zero():
        return OreOperator._raw([])
    out = [ZERO] * (A.order + B.order + 1)
    for i, a in enumerate(A.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(B.coeffs):
            if b.is_zero():
                continue
            out[i + j] = out[i + j] + a * b.shift(i)
    return OreOperator._raw(out)


def rdivide(A, B):
    """Right division: A = Q*B + R with ord(R) < ord(B)."""
    if B.is_zero():
        raise ZeroDivisionError("right division by the zero operator")
    n = B.order
    lcB = B.coeffs[-1]
    R = list(A.coeffs)
    Q = [ZERO] * max(len(R) - n, 0)
    shifted_lc = {}
    shifted_B = {}
    for k in range(len(R) - 1 - n, -1, -1):
        top = R[k + n]
        if top.is_zero():
            continue
        if k not in shifted_lc:
            shifted_lc[k] = lcB.shift(k).inverse()
            shifted_B[k] = [b.shift(k) for b in B.coeffs]
        c = top * shifted_lc[k]
        Q[k] = c
        for i, b in enumerate(shifted_B[k]):
            if not b.is_zero():
                R[k + i] = R[k + i] - c * b
        R[k + n] = ZERO
    return OreOperator._raw(Q), OreOperator._raw(R[:n] if n > 0 else [])


def rem(A, B):
    return rdivide(A, B)[1]


def right_divides(B, A):
    """True if B is a right factor of A."""
    return rem(A, B).is_zero()


def gcrd_ext(A, B):
    """Extended Euclid: returns (G, u, v) with u*A + v*B = G, G monic."""
    if A.is_zero() and B.is_zero():
        raise ValueError("gcrd of two zero operators")
    one = OreOperator((ONE,))
    zero = OreOperator(())
    if not A.is_zero() and rem(B, A).is_zero():
        lc = A.leading_coefficient().inverse()
        return lc * A, OreOperator((lc,)), zero
    r0, r1 = A, B
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero():
        q, r = rdivide(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - mul(q, s1)
        t0, t1 = t1, t0 - mul(q, t1)
    lc = r0.leading_coefficient().inverse()
    return lc * r0, lc * s0, lc * t0


def gcrd(A, B):
    return gcrd_ext(A, B)[0]


def lclm(A, B, method="auto"):
    """Least common left multiple, monic.

    ``method`` is "euclid", "linalg" or "auto" (Euclid, switching to the
    linear-algebra ansatz when coefficient sizes explode).
    """
    if A.is_zero() or B.is_zero():
        raise ValueError("lclm with the zero operator")
    if method == "linalg":
        return _lclm_linalg(A, B)
    try:
        return _lclm_euclid(A, B, guard=(method == "auto"))
    except _Blowup:
        return _lclm_linalg(A, B)


class _Blowup(Exception):
    pass


def _size(L):
    return max((c.weight() for c in L.coeffs), default=0)


def _lclm_euclid(A, B, guard=True):
    bound = 4 * (_size(A) + _size(B)) + 40
    one = OreOperator((ONE,))
    zero = OreOperator(())
    r0, r1 = A, B
    s0, s1 = one, zero
    while not r1.is_zero():
        q, r = rdivide(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - mul(q, s1)
        if guard and _size(s1) > bound:
            raise _Blowup
    return mul(s1, A).monic()


def _lclm_linalg(A, B):
    from .linalg import first_dependence

    ra, rb = remainder_sequence(A), remainder_sequence(B)
    n = A.order + B.order
    vecs = []
    for _ in range(n + 1):
        vecs.append(next(ra) + next(rb))
    dep = first_dependence(vecs)
    return OreOperator._raw(dep).monic()


def remainder_sequence(L, step=1, start=0):
    """Yield t^(start + k*step) mod L, k = 0, 1, ..., as coefficient lists of length ord(L)."""
    n = L.order
    if n < 0:
        raise ValueError("zero operator")
    Lm = L.monic()
    low = [-c for c in Lm.coeffs[:n]]
    cur = [ZERO] * n
    if n == 0:
        while True:
            yield []
    cur[0] = ONE
    pos = 0

    def times_tau(v):
        # t * sum v_j t^j = sum v_j(x+1) t^(j+1), reduce t^n
        top = v[-1].shift(1)
        w = [ZERO] + [c.shift(1) for c in v[:-1]]
        if not top.is_zero():
            w = [w[j] + top * low[j] for j in range(n)]
        return w

    while pos < start:
        cur = times_tau(cur)
        pos += 1
    while True:
        yield list(cur)
        for _ in range(step):
            cur = times_tau(cur)


def reduce_mod(P, L):
    """Remainder of P right-divided by L as a padded coefficient list."""
    r = rem(P, L)
    return [r[i] for i in range(L.order)]
