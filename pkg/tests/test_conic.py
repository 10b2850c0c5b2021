import random

import pytest
from flint import fmpq, fmpq_poly

from lindiff import RationalFunction
from lindiff.conic import (
    ConicForm,
    NoPoint,
    congruent,
    conic_point,
    diagonalize_conic,
    hilbert_symbol,
    solve_conic,
)
from lindiff.field import is_rational_square
from support import X, rand_poly

RF = RationalFunction
Xp = fmpq_poly([0, 1])


def on_diagonal_conic(c, pt):
    return sum((RF.coerce(ci) * p * p for ci, p in zip(c, pt)), RF(0)).is_zero()


def nontrivial(pt):
    return any(not RF.coerce(p).is_zero() for p in pt)


def diag(a, b, c):
    z = RF(0)
    return ConicForm(((a, z, z), (z, b, z), (z, z, c)))


def test_from_monomials_convention():
    C = ConicForm.from_monomials({(0, 0): 1, (1, 1): X, (2, 2): -1})
    assert C == diag(RF(1), X, RF(-1))
    C = ConicForm.from_monomials({(0, 1): 1})
    assert C.M[0][1] == RF(fmpq(1, 2)) and C.M[1][0] == RF(fmpq(1, 2))
    with pytest.raises(ValueError):
        ConicForm(((1, 2, 0), (0, 1, 0), (0, 0, 1)))


def test_diagonal_input_unchanged():
    C = diag(RF(1), RF(1), RF(-1))
    D = diagonalize_conic(C)
    assert D.c == [RF(1), RF(1), RF(-1)] and D.rank == 3
    pt = conic_point(C)
    assert C(pt).is_zero() and nontrivial(pt)


def test_off_diagonal_only():
    C = ConicForm.from_monomials({(0, 1): 1})
    D = diagonalize_conic(C)
    assert D.rank == 2
    assert congruent(C.M, D.T) == [[D.c[i] if i == j else RF(0) for j in range(3)] for i in range(3)]
    pt = conic_point(C)
    assert C(pt).is_zero() and nontrivial(pt)


def test_random_congruences():
    rng = random.Random("congruence")
    for _ in range(100):
        M = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(i, 3):
                M[i][j] = M[j][i] = RF(rand_poly(rng, 2, nonzero=False))
        C = ConicForm(tuple(tuple(r) for r in M))
        if C.is_zero():
            continue
        D = diagonalize_conic(C)
        TMT = congruent(C.M, D.T)
        for i in range(3):
            for j in range(3):
                assert TMT[i][j] == (D.c[i] if i == j else RF(0))
        for c in D.c:
            if not c.is_zero():
                assert c.is_polynomial()
                sq = c.num.gcd(c.num.derivative())
                assert sq.degree() == 0


def test_small_examples():
    pt = solve_conic(1, 1, -2)
    assert on_diagonal_conic((1, 1, -2), pt)
    assert all(RF.coerce(p).is_constant() and not RF.coerce(p).is_zero() for p in pt)
    res = solve_conic(1, 1, 1)
    assert isinstance(res, NoPoint) and res.kind == "real"


def test_unsolvable_at_a_place():
    # x = 0 forces X1^2 = 0 mod x, then -X2^2 * x ... leaves -1 to be a square
    res = solve_conic(1, -Xp, Xp * Xp - Xp)
    assert isinstance(res, NoPoint) and res.kind == "place"
    assert res.where == Xp and not is_rational_square(res.value(0))


def test_obstruction_at_a_prime():
    # x^2 + y^2 = 3 z^2 has no rational point; the descent sees (3, 3)_p = -1
    res = solve_conic(1, 1, -3)
    assert isinstance(res, NoPoint) and res.kind == "prime"
    assert res.where in (2, 3) and hilbert_symbol(3, 3, res.where) == -1


def test_planted_diagonal_points():
    rng = random.Random("planted-diagonal")
    solved = 0
    while solved < 100:
        c1, c2 = rand_poly(rng, rng.randint(0, 3)), rand_poly(rng, rng.randint(0, 3))
        x1, x2 = rand_poly(rng, rng.randint(0, 2)), rand_poly(rng, rng.randint(0, 2))
        c3 = -(c1 * x1 * x1 + c2 * x2 * x2)
        if c3.is_zero():
            continue
        pt = solve_conic(c1, c2, c3)
        assert not isinstance(pt, NoPoint), (c1, c2, c3)
        assert nontrivial(pt) and on_diagonal_conic((c1, c2, c3), pt)
        solved += 1


def test_planted_general_points():
    rng = random.Random("planted-general")
    solved = 0
    while solved < 100:
        p = [RF(rand_poly(rng, rng.randint(0, 1), nonzero=False)) for _ in range(3)]
        if p[2].is_zero():
            continue
        M = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(i, 3):
                M[i][j] = M[j][i] = RF(rand_poly(rng, 1, nonzero=False))
        rest = sum((M[i][j] * p[i] * p[j] for i in range(3) for j in range(3) if (i, j) != (2, 2)), RF(0))
        M[2][2] = -rest / (p[2] * p[2])
        C = ConicForm(tuple(tuple(r) for r in M)).cleared()
        pt = conic_point(C)
        assert not isinstance(pt, NoPoint)
        assert nontrivial(pt) and C(pt).is_zero()
        solved += 1


def test_certificates_are_consistent_with_specialization():
    # a NoPoint at a linear place x - a is checked against the specialized conic
    rng = random.Random("certificates")
    seen = 0
    for _ in range(300):
        cs = [rand_poly(rng, rng.randint(0, 2)) for _ in range(3)]
        res = solve_conic(*cs)
        if isinstance(res, NoPoint):
            seen += 1
            if res.kind == "place" and res.where.degree() == 1:
                v = res.value(-res.where[0] / res.where[1])
                assert not is_rational_square(v)
        else:
            assert nontrivial(res) and on_diagonal_conic(cs, res)
    assert seen > 0
