"""
Rational and hypergeometric solutions, Hom spaces and eigenring splitting.

All routines work with exact Q(x) coefficients and return Q-bases.
"""

import itertools
import random
from dataclasses import dataclass, field
from math import factorial

from flint import fmpq, fmpq_mat, fmpq_poly

from .field import ONE, ZERO, RationalFunction, monic, poly_factor, poly_shift
from .linalg import IncrementalDependence, solve as rf_solve
from .ore import OreOperator, gcrd, lclm, mul, rem

X = fmpq_poly([0, 1])


# --- Q-linear algebra -------------------------------------------------------


def q_nullspace(columns, nrows):
    """Right kernel over Q of the matrix whose columns are given (lists of fmpq)."""
    ncols = len(columns)
    if ncols == 0:
        return []
    if nrows == 0:
        return [[fmpq(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    M = fmpq_mat(nrows, ncols)
    for j, col in enumerate(columns):
        for i, a in enumerate(col):
            if a != 0:
                M[i, j] = a
    R, rank = M.rref()
    pivots = []
    r = 0
    for c in range(ncols):
        if r < rank and R[r, c] != 0:
            pivots.append(c)
            r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [fmpq(0)] * ncols
        v[f] = fmpq(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i, f]
        basis.append(v)
    return basis


def _poly_columns(vectors):
    """Turn Q(x)-vectors into Q-columns so that Q-relations among the
    vectors are exactly the kernel of the resulting matrix."""
    m = len(vectors[0]) if vectors else 0
    cols = [[] for _ in vectors]
    for comp in range(m):
        den = fmpq_poly([1])
        for v in vectors:
            d = v[comp].den
            den = den * d // den.gcd(d)
        polys = [v[comp].num * (den // v[comp].den) for v in vectors]
        deg = max((p.degree() for p in polys), default=-1)
        for j, p in enumerate(polys):
            cs = p.coeffs()
            cols[j].extend(cs[k] if k < len(cs) else fmpq(0) for k in range(deg + 1))
    return cols


def q_relations(vectors):
    """Q-basis of {c : sum c_j v_j = 0} for vectors over Q(x)."""
    if not vectors:
        return []
    cols = _poly_columns(vectors)
    return q_nullspace(cols, len(cols[0]))


# --- shift structure --------------------------------------------------------


def shift_offset(f, g):
    """Integer k with g(x) = f(x + k) for monic f, g; None if there is none."""
    d = f.degree()
    if d != g.degree() or d < 1:
        return None
    fc, gc = f.coeffs(), g.coeffs()
    k = (gc[d - 1] - fc[d - 1]) / d
    if k.q != 1:
        return None
    k = int(k.p)
    return k if poly_shift(f, k) == g else None


def shift_classes(factor_lists):
    """Group monic irreducible factors into integer-shift classes.

    ``factor_lists`` is a list of [(factor, multiplicity), ...]; the result
    is a list of (representative, [ {offset: multiplicity}, ... ]) with one
    dict per input list, where factor = representative(x + offset).
    """
    classes = []
    for idx, facs in enumerate(factor_lists):
        for f, e in facs:
            if f.degree() < 1:
                continue
            for rep, mults in classes:
                k = shift_offset(rep, f)
                if k is not None:
                    mults[idx][k] = mults[idx].get(k, 0) + e
                    break
            else:
                mults = [dict() for _ in factor_lists]
                mults[idx][0] = e
                classes.append((f, mults))
    return classes


def universal_denominator(left, right):
    """Denominator bound for rational solutions.

    A pole p of a solution forces, for the leftmost pole of its chain, a root
    of ``left`` and, for the rightmost, a root of ``right``; the pole order at
    p is at most min(sum of ``left`` multiplicities at or left of p, sum of
    ``right`` multiplicities at or right of p).
    """
    if left.is_zero() or right.is_zero():
        raise ValueError("zero coefficient in universal denominator")
    _, fl = poly_factor(left)
    _, fr = poly_factor(right)
    U = fmpq_poly([1])
    for rep, (ml, mr) in shift_classes([fl, fr]):
        if not ml or not mr:
            continue
        # position s <-> factor rep(x - s), root moves right as s grows
        pl = {-k: e for k, e in ml.items()}
        pr = {-k: e for k, e in mr.items()}
        lo, hi = min(pl), max(pr)
        for s in range(lo, hi + 1):
            left_sum = sum(e for q, e in pl.items() if q <= s)
            right_sum = sum(e for q, e in pr.items() if q >= s)
            nu = min(left_sum, right_sum)
            if nu > 0:
                U = U * poly_shift(rep, -s) ** nu
    return U


# --- polynomial and rational solutions --------------------------------------


def _poly_coeffs(L):
    """Polynomial coefficient list of a left multiple of L."""
    return [c.num for c in L.clear_denominators().coeffs]


def degree_bound(coeffs):
    """Largest possible degree of a polynomial solution, or -1 if none."""
    n = len(coeffs) - 1
    cs = []
    for k in range(n + 1):
        c = fmpq_poly([])
        for i, a in enumerate(coeffs):
            if i ** k != 0 or k == 0:
                c += a * fmpq(i ** k, factorial(k))
        cs.append(c)
    b = max(c.degree() - k for k, c in enumerate(cs) if not c.is_zero())
    ind = fmpq_poly([])
    for k, c in enumerate(cs):
        if c.is_zero() or c.degree() - k != b:
            continue
        ff = fmpq_poly([1])
        for j in range(k):
            ff *= fmpq_poly([-j, 1])
        ind += c.leading_coefficient() * ff
    roots = [r for r, _ in ind.roots() if r.q == 1 and r >= 0]
    return int(max(roots).p) if roots else -1


def poly_solutions(L):
    """Q-basis of polynomial solutions of L (as fmpq_poly)."""
    if L.is_zero():
        raise ValueError("zero operator")
    coeffs = _poly_coeffs(L)
    D = degree_bound(coeffs)
    if D < 0:
        return []
    shifts = [fmpq_poly([i, 1]) for i in range(len(coeffs))]
    powers = [fmpq_poly([1]) for _ in coeffs]
    images = []
    for j in range(D + 1):
        img = fmpq_poly([])
        for i, a in enumerate(coeffs):
            if not a.is_zero():
                img += a * powers[i]
        images.append(img)
        powers = [p * s for p, s in zip(powers, shifts)]
    nrows = max((p.degree() for p in images), default=-1) + 1
    cols = []
    for p in images:
        cs = p.coeffs()
        cols.append([cs[k] if k < len(cs) else fmpq(0) for k in range(nrows)])
    basis = []
    for v in q_nullspace(cols, nrows):
        basis.append(fmpq_poly(v))
    return basis


def rational_solutions(L):
    """Q-basis of solutions of L in Q(x)."""
    if L.is_zero():
        raise ValueError("zero operator")
    if L.order == 0:
        return []
    coeffs = _poly_coeffs(L)
    n = len(coeffs) - 1
    if coeffs[0].is_zero():
        raise ValueError("trailing coefficient vanishes")
    U = universal_denominator(poly_shift(coeffs[-1], -n), coeffs[0])
    if U.is_one():
        return [RationalFunction(p) for p in poly_solutions(L)]
    Lu = OreOperator([RationalFunction(a, poly_shift(U, i)) for i, a in enumerate(coeffs)])
    return [RationalFunction(p, U) for p in poly_solutions(Lu)]


# --- hypergeometric right factors -------------------------------------------


@dataclass(frozen=True)
class HypergeometricFactor:
    """The first-order right factor t - r."""

    r: RationalFunction

    @property
    def operator(self):
        return OreOperator([-self.r, ONE])


def _sym_first_order(coeffs, rho):
    """Coefficients of L applied to h*y where h(x+1)/h(x) = rho."""
    out = []
    prod = ONE
    for i, a in enumerate(coeffs):
        out.append(RationalFunction(a) * prod)
        prod = prod * rho.shift(i)
    return OreOperator(out)


def hypergeometric_right_factors(L, limit=None):
    """All monic first-order right factors t - r with r in Q(x).

    When a ratio class carries a rational solution space of dimension > 1
    one factor per basis element is returned.  Output is sorted canonically.
    """
    if L.is_zero():
        raise ValueError("zero operator")
    if L.order == 0:
        return []
    if L.trailing_coefficient().is_zero():
        raise ValueError("trailing coefficient vanishes")
    coeffs = _poly_coeffs(L)
    n = len(coeffs) - 1
    if n == 1:
        return [HypergeometricFactor(RationalFunction(-coeffs[0], coeffs[1]))]
    _, f0 = poly_factor(coeffs[0])
    _, fn = poly_factor(poly_shift(coeffs[-1], -n + 1))
    classes = shift_classes([f0, fn])
    reps, ranges = [], []
    for rep, (m0, mn) in classes:
        reps.append(rep)
        ranges.append(range(-sum(mn.values()), sum(m0.values()) + 1))
    degs = [c.degree() for c in coeffs]
    lcs = [c.leading_coefficient() if not c.is_zero() else fmpq(0) for c in coeffs]
    found = {}
    z_cache = {}
    for gs in itertools.product(*ranges):
        d = sum(g * rep.degree() for g, rep in zip(gs, reps))
        if d not in z_cache:
            top = max(degs[i] + i * d for i in range(n + 1) if not coeffs[i].is_zero())
            zpoly = fmpq_poly([lcs[i] if degs[i] + i * d == top and not coeffs[i].is_zero() else 0
                               for i in range(n + 1)])
            z_cache[d] = [r for r, _ in zpoly.roots() if r != 0]
        if not z_cache[d]:
            continue
        P = RationalFunction(1)
        for g, rep in zip(gs, reps):
            if g:
                P = P * RationalFunction(rep) ** g
        for z in z_cache[d]:
            rho = P * RationalFunction(z)
            Lh = _sym_first_order(coeffs, rho)
            for R in rational_solutions(Lh):
                r = rho * R.shift(1) / R
                found[r] = HypergeometricFactor(r)
                if limit is not None and len(found) >= limit:
                    return _sorted_factors(found)
    return _sorted_factors(found)


def _sorted_factors(found):
    return [found[k] for k in sorted(found, key=lambda r: (r.num.degree() + r.den.degree(), str(r)))]


# --- Hom spaces -------------------------------------------------------------


@dataclass
class HomBasis:
    """Q-basis of a Hom space, as returned by ``hom_space``."""

    elements: list
    source: OreOperator
    target: OreOperator

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def is_trivial(self):
        return not self.elements


class _HomSystem:
    """The difference system sum_i a_i C_i sigma^i(g) = 0 for G = sum g_j t^j."""

    def __init__(self, L1, L2):
        self.L1, self.L2 = L1, L2
        n1, n2 = L1.order, L2.order
        self.n1, self.n2 = n1, n2
        tail = [-c for c in L2.monic().coeffs[:-1]]
        C = [[ZERO] * n2 for _ in range(n2)]
        for j in range(n2):
            if j + 1 < n2:
                C[j + 1][j] = ONE
            else:
                for l in range(n2):
                    C[l][j] = tail[l]
        self.C = C
        # C_i with C_0 = I and C_{i+1} = C * sigma(C_i)
        Cs = [[[ONE if a == b else ZERO for b in range(n2)] for a in range(n2)]]
        for _ in range(n1):
            Cs.append(_matmul(C, _mshift(Cs[-1], 1)))
        self.Cs = Cs
        a = L1.coeffs
        lead = [[a[n1] * e for e in row] for row in Cs[n1]]
        inv = _matinv(lead)
        self.K = [_matmul(inv, [[-a[i] * e for e in row] for row in Cs[i]]) for i in range(n1)]

    @property
    def size(self):
        return self.n1 * self.n2

    def residual(self, g):
        """Coordinates of L1*G mod L2 for G with coefficient vector g."""
        out = [ZERO] * self.n2
        for i, a in enumerate(self.L1.coeffs):
            if a.is_zero():
                continue
            sg = [c.shift(i) for c in g]
            Ci = self.Cs[i]
            for l in range(self.n2):
                s = ZERO
                for j in range(self.n2):
                    if not Ci[l][j].is_zero() and not sg[j].is_zero():
                        s = s + Ci[l][j] * sg[j]
                out[l] = out[l] + a * s
        return out

    def functional_sequence(self, lam):
        """Row vectors w_k with sigma^k(lam . g) = w_k . Z, Z = (g, sigma g, ...)."""
        n1, n2 = self.n1, self.n2
        w = [[ZERO] * n2 for _ in range(n1)]
        w[0] = list(lam)
        while True:
            yield [e for blk in w for e in blk]
            sw = [[e.shift(1) for e in blk] for blk in w]
            last = sw[n1 - 1]
            new = []
            for i in range(n1):
                blk = list(sw[i - 1]) if i >= 1 else [ZERO] * n2
                Ki = self.K[i]
                for col in range(n2):
                    s = ZERO
                    for r in range(n2):
                        if not last[r].is_zero() and not Ki[r][col].is_zero():
                            s = s + last[r] * Ki[r][col]
                    if not s.is_zero():
                        blk[col] = blk[col] + s
                new.append(blk)
            w = new

    def annihilator(self, lam):
        """Scalar operator P with P(lam . g) = 0 for every solution, plus the
        elimination state of w_0 .. w_{ord P - 1}."""
        inc = IncrementalDependence()
        for vec in self.functional_sequence(lam):
            dep = inc.add(vec)
            if dep is not None:
                return OreOperator(dep), inc


def _mshift(M, q):
    return [[e.shift(q) for e in row] for row in M]


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = [[ZERO] * p for _ in range(n)]
    for i in range(n):
        for k in range(m):
            a = A[i][k]
            if a.is_zero():
                continue
            row = B[k]
            for j in range(p):
                if not row[j].is_zero():
                    out[i][j] = out[i][j] + a * row[j]
    return out


def _matinv(A):
    n = len(A)
    cols = []
    for j in range(n):
        e = [ONE if i == j else ZERO for i in range(n)]
        cols.append(rf_solve(A, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _random_functionals(n2, rng):
    yield [ONE] + [ZERO] * (n2 - 1)
    for _ in range(3):
        yield [RationalFunction(rng.randint(-5, 5) or 1) for _ in range(n2)]
    for _ in range(3):
        yield [RationalFunction(fmpq_poly([rng.randint(-5, 5), rng.randint(1, 5)])) for _ in range(n2)]


def _canonical_basis(vectors):
    """Echelon form over Q of a list of coefficient vectors (Q(x)^m)."""
    if not vectors:
        return []
    cols = _poly_columns(vectors)
    # rows of the transposed problem: each vector flattened over Q
    k = len(vectors)
    nflat = len(cols[0])
    M = fmpq_mat(k, nflat)
    for i, col in enumerate(cols):
        for j, a in enumerate(col):
            if a != 0:
                M[i, j] = a
    R, rank = M.rref()
    # recover combinations: solve for coefficients expressing each echelon row
    basis = []
    T = fmpq_mat(nflat, k)
    for i, col in enumerate(cols):
        for j, a in enumerate(col):
            if a != 0:
                T[j, i] = a
    for r in range(rank):
        target = fmpq_mat(nflat, 1, [R[r, j] for j in range(nflat)])
        coeffs = _q_solve(T, target)
        vec = [ZERO] * len(vectors[0])
        for c, v in zip(coeffs, vectors):
            if c != 0:
                vec = [a + RationalFunction(c) * b for a, b in zip(vec, v)]
        basis.append(vec)
    return basis


def _q_solve(T, target):
    aug = fmpq_mat(T.nrows(), T.ncols() + 1)
    for i in range(T.nrows()):
        for j in range(T.ncols()):
            aug[i, j] = T[i, j]
        aug[i, T.ncols()] = target[i, 0]
    R, rank = aug.rref()
    sol = [fmpq(0)] * T.ncols()
    r = 0
    for c in range(T.ncols()):
        if r < rank and R[r, c] != 0:
            sol[c] = R[r, T.ncols()]
            r += 1
    return sol


def hom_space(L1, L2, method="cyclic", seed=0):
    """Q-basis of {G : ord(G) < ord(L2), L1*G in D*L2}.

    Each G maps V(L2) into V(L1).  ``method`` is "cyclic" (one scalar
    operator for a cyclic functional of the unknowns) or "direct" (one scalar
    operator per unknown followed by a Q-linear ansatz).
    """
    if L1.order < 1 or L2.order < 1:
        raise ValueError("hom_space needs operators of positive order")
    if L1.trailing_coefficient().is_zero() or L2.trailing_coefficient().is_zero():
        raise ValueError("trailing coefficient vanishes")
    system = _HomSystem(L1, L2)
    if method == "cyclic":
        vecs = _hom_cyclic(system, random.Random(seed))
        if vecs is None:
            vecs = _hom_direct(system)
    elif method == "direct":
        vecs = _hom_direct(system)
    else:
        raise ValueError(f"unknown method {method!r}")
    elements = [OreOperator(v) for v in _canonical_basis(vecs)]
    return HomBasis(elements=elements, source=L1, target=L2)


def _hom_cyclic(system, rng):
    N = system.size
    for lam in _random_functionals(system.n2, rng):
        P, inc = system.annihilator(lam)
        if P.order < N:
            continue
        sols = rational_solutions(P)
        out = []
        for y in sols:
            Y = [y.shift(k) for k in range(N)]
            Z = inc.solve(Y)
            out.append(Z[: system.n2])
        return out
    return None


def _hom_direct(system):
    n2 = system.n2
    per_unknown = []
    for j in range(n2):
        lam = [ONE if i == j else ZERO for i in range(n2)]
        P, _ = system.annihilator(lam)
        per_unknown.append(rational_solutions(P) if P.order > 0 else [])
    ansatz = []
    for j, sols in enumerate(per_unknown):
        for y in sols:
            g = [ZERO] * n2
            g[j] = y
            ansatz.append(g)
    if not ansatz:
        return []
    residuals = [system.residual(g) for g in ansatz]
    rels = q_relations(residuals)
    out = []
    for c in rels:
        g = [ZERO] * n2
        for cj, a in zip(c, ansatz):
            if cj != 0:
                g = [u + RationalFunction(cj) * v for u, v in zip(g, a)]
        out.append(g)
    return out


# --- eigenring ----------------------------------------------------------------


@dataclass
class EigenringSplit:
    factors: list
    endomorphisms: list
    extension_needed: list = field(default_factory=list)


def _minimal_polynomial(E, L, limit=None):
    """Minimal polynomial over Q of the endomorphism E of D/DL."""
    n = L.order
    limit = limit or n * n + 1
    powers = [OreOperator((ONE,))]
    for _ in range(limit):
        vecs = [[P[i] for i in range(n)] for P in powers]
        rels = q_relations(vecs)
        if rels:
            c = rels[0]
            return fmpq_poly(c) / c[max(i for i, a in enumerate(c) if a != 0)]
        powers.append(rem(mul(E, powers[-1]), L))
    raise ValueError("no minimal polynomial found")


def eigenring_decompose(L, hom=None):
    if L.trailing_coefficient().is_zero():
        raise ValueError("trailing coefficient vanishes")
    if L.order < 2:
        return EigenringSplit(factors=[], endomorphisms=[OreOperator((ONE,))])
    End = hom if hom is not None else hom_space(L, L)
    factors = {}
    ext = []
    for E in End.elements:
        if E.order <= 0 and E[0].is_constant():
            continue
        mu = _minimal_polynomial(E, L)
        if mu.degree() <= 1:
            continue
        lams = [r for r, _ in mu.roots()]
        for lam in lams:
            F = gcrd(L, E - OreOperator((RationalFunction(lam),)))
            if 0 < F.order < L.order:
                factors[F] = F
        _, facs = poly_factor(mu)
        for f, _ in facs:
            if f.degree() > 1:
                ext.append(f)
    out = sorted(factors.values(), key=lambda F: (F.order, str(F)))
    return EigenringSplit(factors=out, endomorphisms=list(End.elements), extension_needed=ext)


def eigenring_split(L):
    """Right factors gcrd(L, E - lambda) from endomorphisms E with rational
    eigenvalues lambda; [] when End(D/DL) = Q or nothing splits over Q."""
    return eigenring_decompose(L).factors
