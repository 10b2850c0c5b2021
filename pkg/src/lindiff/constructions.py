"""
Symmetric products, section operators and gauge transformations.
"""

from dataclasses import dataclass

from .field import ONE, ZERO
from .linalg import IncrementalDependence
from .ore import OreOperator, gcrd_ext, lclm, mul, rdivide, rem, remainder_sequence


class GaugeError(ValueError):
    pass


def _companion_tail(L):
    """Coefficients of t^n mod L in the basis 1, t, ..., t^(n-1)."""
    Lm = L.monic()
    return [-c for c in Lm.coeffs[:-1]]


def symmetric_product(A, B):
    """Monic minimal operator of 1 (x) 1 in D/DA (x) D/DB."""
    if A.is_zero() or B.is_zero():
        raise ValueError("symmetric product with the zero operator")
    n1, n2 = A.order, B.order
    if n1 == 0 or n2 == 0:
        return OreOperator((ONE,))
    tailA, tailB = _companion_tail(A), _companion_tail(B)

    def step(c):
        # t(e_i (x) e_j) = t e_i (x) t e_j, coefficients shift by one
        new = [[ZERO] * n2 for _ in range(n1)]
        for i in range(n1):
            for j in range(n2):
                cij = c[i][j]
                if cij.is_zero():
                    continue
                cij = cij.shift(1)
                imgA = [(i + 1, ONE)] if i + 1 < n1 else [(k, a) for k, a in enumerate(tailA) if not a.is_zero()]
                imgB = [(j + 1, ONE)] if j + 1 < n2 else [(k, b) for k, b in enumerate(tailB) if not b.is_zero()]
                for k, a in imgA:
                    ca = cij * a
                    for l, b in imgB:
                        new[k][l] = new[k][l] + ca * b
        return new

    c = [[ZERO] * n2 for _ in range(n1)]
    c[0][0] = ONE
    inc = IncrementalDependence()
    while True:
        dep = inc.add([c[i][j] for i in range(n1) for j in range(n2)])
        if dep is not None:
            return OreOperator(dep)
        c = step(c)


def symmetric_square(L):
    return symmetric_product(L, L)


def section_operator(L, m):
    """The m-th section operator L^(m).

    Finds the first relation among t^(m*i) mod L, i = 0, 1, ..., and maps
    t^m -> t, x -> m*x.
    """
    if m < 1:
        raise ValueError("section index must be a positive integer")
    if L.order < 0:
        raise ValueError("zero operator")
    if L.trailing_coefficient().is_zero():
        raise ValueError("trailing coefficient vanishes")
    if L.order == 0 or m == 1:
        return L.monic()
    inc = IncrementalDependence()
    for vec in remainder_sequence(L, step=m):
        dep = inc.add(vec)
        if dep is not None:
            return OreOperator(dep).scale_x(m).monic()


def psi(L, m):
    """Ring embedding D -> D_m: t -> t^m, x -> x/m."""
    from fractions import Fraction

    scaled = L.scale_x(Fraction(1, m))
    coeffs = [ZERO] * (m * max(L.order, 0) + 1)
    for i, c in enumerate(scaled.coeffs):
        coeffs[m * i] = c
    return OreOperator(coeffs)


def psi_inverse(L, m):
    """Inverse of ``psi`` on operators lying in D_m."""
    if not L.in_subring(m):
        raise ValueError(f"operator is not in Q(x)[t^{m}]")
    return OreOperator([L[m * i] for i in range(L.order // m + 1)]).scale_x(m)


def apply_gauge(L, G):
    """Operator whose solution space is G(V(L)): lclm(L, G) right-divided by G."""
    if G.is_zero():
        raise GaugeError("zero gauge operator")
    if G.order == 0:
        return (L.monic() * G[0].inverse()).monic()
    M = lclm(L, G)
    q, r = rdivide(M, G)
    if not r.is_zero():
        raise GaugeError("lclm(L, G) is not right-divisible by G")
    if q.order != L.order:
        raise GaugeError("gauge operator shares solutions with L")
    return q.monic()


@dataclass(frozen=True)
class GaugeMap:
    """G maps V(source) onto V(target); ``inverse`` maps back."""

    G: OreOperator
    source: OreOperator
    target: OreOperator
    inverse: OreOperator

    def check(self):
        """Return a dict of certificate name -> bool."""
        one = OreOperator((ONE,))
        return {
            "target*G in D*source": rem(mul(self.target, self.G), self.source).is_zero(),
            "inverse*G = 1 mod source": rem(mul(self.inverse, self.G) - one, self.source).is_zero(),
            "G*inverse = 1 mod target": rem(mul(self.G, self.inverse) - one, self.target).is_zero(),
            "order": self.G.order < self.source.order,
        }

    def verified(self):
        return all(self.check().values())


def invert_gauge(G, L2):
    """Build the gauge map G: V(L2) -> V(L_G) together with its inverse."""
    if G.is_zero():
        raise GaugeError("gauge map not invertible")
    G = rem(G, L2) if G.order >= L2.order else G
    if G.is_zero():
        raise GaugeError("gauge map not invertible")
    g, u, _ = gcrd_ext(G, L2)
    if g.order != 0:
        raise GaugeError("gauge map not invertible")
    target = apply_gauge(L2, G)
    inverse = rem(u, target)
    return GaugeMap(G=G, source=L2.monic(), target=target, inverse=inverse)
