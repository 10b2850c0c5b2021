"""
Absolute factorization: factors of L over Qbar(x) up to gauge equivalence.

An irreducible L that factors over Qbar(x) does so through a section
operator L^(p) for a prime p dividing ord(L): either ord(L^(p)) < ord(L), or
L^(p) splits into p factors of order ord(L)/p that the eigenring detects.
"""

from dataclasses import dataclass, field

from sympy import primefactors

from .constructions import psi_inverse, section_operator
from .field import ONE, QuadExtElement, RationalFunction, is_rational_square, rational_sqrt
from .ore import OreOperator, lclm, mul, rdivide, rem
from .solve import eigenring_decompose, hom_space, hypergeometric_right_factors


class ReducibleOperatorError(ValueError):
    """Raised when the input has a right factor over Q(x); ``witness`` is it."""

    def __init__(self, message, witness):
        super().__init__(f"input reducible: {message}")
        self.witness = witness


ABSOLUTELY_IRREDUCIBLE = "AbsolutelyIrreducible"
FACTORED = "Factored"


@dataclass
class AbsFactorResult:
    """Verdict plus, when factored, ``p`` and right factors of L^(p).

    ``factors == [1]`` flags the case where the section operator has lower
    order than L.
    """

    verdict: str
    p: int = None
    factors: list = field(default_factory=list)
    section: OreOperator = None
    extension_needed: list = field(default_factory=list)

    @property
    def factored(self):
        return self.verdict == FACTORED

    @property
    def order_drop(self):
        return self.factored and len(self.factors) == 1 and self.factors[0].order == 0

    def as_pair(self):
        return [self.p, set(self.factors)] if self.factored else None

    def __str__(self):
        if not self.factored:
            return ABSOLUTELY_IRREDUCIBLE
        if not self.factors:
            return f"[{self.p}, extension needed]"
        inner = ", ".join(str(F) for F in self.factors)
        return f"[{self.p}, {{{inner}}}]"


def check_irreducible(L):
    """Raise ReducibleOperatorError if an order-1 factor on either side or an
    eigenring splitting shows L is reducible over Q(x).  Complete for
    ord(L) <= 3; for ord(L) >= 4 a product of two irreducible order-2
    factors with trivial eigenring passes."""
    if L.order < 2:
        return
    hyp = hypergeometric_right_factors(L, limit=1)
    if hyp:
        raise ReducibleOperatorError("first-order right factor over Q(x)", hyp[0].operator)
    hyp = hypergeometric_right_factors(L.adjoint(), limit=1)
    if hyp:
        B = _left_cofactor(L, hyp[0].r)
        if not rem(L, B).is_zero():
            raise ArithmeticError("adjoint factor does not give a factorization")
        raise ReducibleOperatorError("first-order left factor over Q(x)", B.monic())
    split = eigenring_decompose(L).factors
    if split:
        raise ReducibleOperatorError("eigenring splitting over Q(x)", split[0])


def _left_cofactor(L, r):
    """B with L = (1 - r t)*B, from the right factor t - r of the adjoint."""
    A, _ = rdivide(L.adjoint(), OreOperator([-r, ONE]))
    n = L.order
    return OreOperator([A[n - 1 - k].shift(k - n) for k in range(n)])


def _validate(L):
    if L.is_zero() or L.order < 1:
        raise ValueError("operator of positive order required")
    if L.trailing_coefficient().is_zero():
        raise ValueError("trailing coefficient vanishes")


def abs_factorization(L, check=True):
    """Run the section-operator test for each prime p | ord(L), smallest first."""
    _validate(L)
    if check:
        check_irreducible(L)
    n = L.order
    for p in primefactors(n):
        S = section_operator(L, p)
        if S.order < n:
            return AbsFactorResult(FACTORED, p=p, factors=[OreOperator((ONE,))], section=S)
        split = eigenring_decompose(S)
        facs = [F for F in split.factors if F.order == n // p]
        if facs:
            return AbsFactorResult(FACTORED, p=p, factors=facs, section=S)
        if split.extension_needed:
            return AbsFactorResult(FACTORED, p=p, factors=[], section=S,
                                   extension_needed=split.extension_needed)
    return AbsFactorResult(ABSOLUTELY_IRREDUCIBLE)


def twist_hom(L):
    """Hom space certifying L ~ L (x) (t + 1): all G with L~ * G in D*L."""
    return hom_space(L.negate_tau(), L)


def abs_irreducibility(L, check=True):
    """True if L is absolutely irreducible.

    For p = 2 this only needs one Hom computation between L and L with
    t -> -t; odd primes go through the section operator.
    """
    _validate(L)
    if check:
        check_irreducible(L)
    n = L.order
    for p in primefactors(n):
        if p == 2:
            if not twist_hom(L).is_trivial():
                return False
            continue
        S = section_operator(L, p)
        if S.order < n:
            return False
        split = eigenring_decompose(S)
        if split.extension_needed or any(F.order == n // p for F in split.factors):
            return False
    return True


@dataclass
class Subfactors:
    """Right factors of the restriction of L to Q(x)[t^2].

    ``c`` is the constant rem(G~ G, L); ``G`` the scaled gauge map with
    G~ G = 1 mod L; ``restricted`` are operators in t^2, ``factors`` their
    images under t^2 -> t, x -> 2x.
    """

    c: object
    G: OreOperator
    restricted: list
    factors: list


def _image_operator(L, H):
    """Annihilator of H(V(L)): lclm(L, H) right-divided by H."""
    if H.order == 0:
        return L.monic()
    M = lclm(L, H, method="euclid")
    q, r = rdivide(M, H)
    if not r.is_zero():
        raise ArithmeticError("lclm not right-divisible")
    return q.monic()


def extract_subfactors_p2(L, G):
    """Split the restriction of L to Q(x)[t^2] using G in twist_hom(L)."""
    _validate(L)
    if G.is_zero():
        raise ValueError("zero gauge map")
    Gt = G.negate_tau()
    c = rem(mul(Gt, G), L)
    if c.order != 0 or not c[0].is_constant():
        raise ReducibleOperatorError("rem(G~ G, L) is not a constant", c)
    cval = c[0].constant_value()
    if is_rational_square(cval):
        Gs = RationalFunction(rational_sqrt(cval)).inverse() * G
    else:
        Gs = QuadExtElement(0, RationalFunction(1 / cval), cval) * G
    one = OreOperator((ONE,))
    restricted = []
    for H in (one + Gs, one - Gs):
        H = rem(H, L)
        if H.is_zero():
            continue
        F = _image_operator(L, H)
        if F.in_subring(2):
            restricted.append(F)
    if len(restricted) == 1:
        # L already lies in Q(x)[t^2]; the second factor is the image under t
        F = restricted[0]
        restricted.append(_image_operator(F, OreOperator.tau(1)))
    factors = [psi_inverse(F, 2) for F in restricted]
    return Subfactors(c=cval, G=Gs, restricted=restricted, factors=factors)
