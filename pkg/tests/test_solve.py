from flint import fmpq, fmpq_mat, fmpq_poly
from hypothesis import given, settings
from hypothesis import strategies as st

from lindiff import OreOperator, RationalFunction, parse_operator
from lindiff.constructions import GaugeError, apply_gauge, symmetric_square
from lindiff.field import poly_shift
from lindiff.ore import lclm, mul, rem
from lindiff.solve import (
    eigenring_decompose,
    eigenring_split,
    hom_space,
    hypergeometric_right_factors,
    poly_solutions,
    q_relations,
    rational_solutions,
    universal_denominator,
)
from support import (
    L3_A295371,
    R,
    R_PRIME,
    SECTION_A260772,
    X,
    apply_window,
    coeff_at,
    rand_operator,
    rand_poly,
    rand_rf,
    residuals,
    rng_for,
    solution,
)

T = OreOperator.tau()
ONE = OreOperator([1])
G8 = OreOperator([(2 - 4 * X) / (1 + 10 * X), (2 * X + 2) / (1 + 10 * X)])


def op(s):
    return parse_operator(s)


def in_q_span(f, basis):
    rels = q_relations([[b] for b in basis] + [[f]])
    return any(r[-1] != 0 for r in rels)


def test_poly_solution_examples():
    assert poly_solutions(T - 1) == [fmpq_poly([1])]
    assert poly_solutions(op("(x+1)*t - x")) == []
    sols = [RationalFunction(p) for p in poly_solutions(op("t^2 - 2*t + 1"))]
    assert len(sols) == 2
    assert in_q_span(RationalFunction(1), sols) and in_q_span(X, sols)


def test_rational_solution_examples():
    sols = rational_solutions(op("(x+1)*t - x"))
    assert len(sols) == 1 and in_q_span(1 / X, sols)
    assert rational_solutions(T - 2) == []
    sols = rational_solutions(op("t^2 - (2*x+1)/x*t + (x+1)/x"))
    assert in_q_span(RationalFunction(1), sols)


def test_universal_denominator_bounds_poles():
    f = 1 / (X * (X + 1) ** 2 * (X**2 + 1) * (2 * X + 7))
    P = OreOperator([-f.shift(1), f]).clear_denominators()
    U = universal_denominator(poly_shift(P[1].num, -1), P[0].num)
    assert (U % f.den).is_zero()


def test_rational_solutions_recover_planted_solution():
    rng = rng_for("ratsol")
    for _ in range(15):
        f = rand_rf(rng, 2)
        if f.is_zero():
            continue
        annihilator = OreOperator([-f.shift(1), f])
        L = mul(rand_operator(rng, 1, 1), annihilator)
        sols = rational_solutions(L)
        assert in_q_span(f, sols)
        for g in sols:
            assert _apply(L, g).is_zero()


def _apply(L, g):
    total = RationalFunction(0)
    for i, c in enumerate(L.coeffs):
        total = total + c * g.shift(i)
    return total


def test_rational_solutions_satisfy_recurrence_numerically():
    rng = rng_for("ratsol-num")
    for _ in range(10):
        f = rand_rf(rng, 2)
        if f.is_zero():
            continue
        L = mul(rand_operator(rng, 1, 1), OreOperator([-f.shift(1), f]))
        for g in rational_solutions(L):
            window = []
            for n in range(10, 40):
                v = coeff_at(g, n)
                if v is None:
                    window = []
                    continue
                window.append(v)
            assert all(r == 0 for r in residuals(L, 40 - len(window), window))


def test_hypergeometric_examples():
    assert sorted(str(F.operator) for F in hypergeometric_right_factors(op("t^2 - 1"))) == ["t + 1", "t - 1"]
    assert hypergeometric_right_factors(op("t^2 - x")) == []
    facs = hypergeometric_right_factors(symmetric_square(L3_A295371.monic()))
    assert facs
    for F in facs:
        assert rem(symmetric_square(L3_A295371.monic()), F.operator).is_zero()


def test_planted_hypergeometric_factor_is_found():
    rng = rng_for("hyper")
    for _ in range(12):
        r = rand_rf(rng, 2)
        if r.is_zero():
            continue
        L = mul(rand_operator(rng, 1, 1), T - r)
        found = hypergeometric_right_factors(L)
        assert any(F.r == r for F in found)
        for F in found:
            assert rem(L, F.operator).is_zero()


def test_hom_space_examples():
    assert any(G == ONE for G in hom_space(R, R))
    assert hom_space(T - 1, T - 2).is_trivial()
    H = hom_space(R_PRIME, R.shift_x(fmpq(-1, 2)))
    assert len(H) == 1
    G = H.elements[0]
    c = G[1] / G8[1]
    assert c.is_constant() and G == OreOperator([c * G8[0], c * G8[1]])


def _gauge_pair(rng):
    while True:
        L2 = rand_operator(rng, 2, 1)
        G0 = rand_operator(rng, 1, 1, positive_ends=False)
        if G0.order < 1:
            continue
        try:
            return apply_gauge(L2, G0), L2, G0
        except GaugeError:
            continue


def test_hom_space_transports_solutions():
    rng = rng_for("hom-transport")
    x0 = fmpq(2, 9)
    for _ in range(6):
        L1, L2, G0 = _gauge_pair(rng)
        H = hom_space(L1, L2)
        assert not H.is_trivial()
        assert in_q_span(G0[1], [G[1] for G in H]) or len(H) > 1
        basis = [solution(L2, x0, [1, 0], 33), solution(L2, x0, [0, 1], 33)]
        images = []
        for G in H:
            assert G.order < L2.order
            assert rem(mul(L1, G), L2).is_zero()
            for u in basis:
                w = apply_window(G, x0, u)
                assert len(w) >= 30
                assert all(v == 0 for v in residuals(L1, x0, w[:30]))
                images.append(w[:30])
        # the induced maps on V(L2) are Q-linearly independent
        flat = [sum((images[2 * k + i] for i in range(2)), []) for k in range(len(H))]
        assert fmpq_mat(flat).rank() == len(H)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10**6))
def test_cyclic_and_direct_hom_agree(seed):
    import random

    rng = random.Random(seed)
    L1, L2, _ = _gauge_pair(rng)
    a = hom_space(L1, L2, method="cyclic")
    b = hom_space(L1, L2, method="direct")
    assert a.elements == b.elements
    e1 = hom_space(L2, L2, method="cyclic").elements
    assert e1 == hom_space(L2, L2, method="direct").elements


def test_eigenring_examples():
    facs = eigenring_split(SECTION_A260772)
    assert sorted(facs, key=str) == sorted([R.monic(), R_PRIME.monic()], key=str)
    assert sorted(str(F) for F in eigenring_split(op("t^2 - 1"))) == ["t + 1", "t - 1"]
    assert eigenring_split(op("t^2 - x")) == []


def test_eigenring_reports_irrational_eigenvalues():
    # t^2 - 2 has End = Q(t) with t^2 = 2
    split = eigenring_decompose(op("t^2 - 2"))
    assert split.factors == []
    assert split.extension_needed == [fmpq_poly([-2, 0, 1])]


def test_eigenring_factors_divide():
    rng = rng_for("eigen")
    for _ in range(4):
        A = rand_operator(rng, 1, 1)
        B = rand_operator(rng, 1, 1)
        L = lclm(A, B)
        for F in eigenring_split(L):
            assert rem(L, F).is_zero()
