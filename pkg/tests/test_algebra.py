import random
from fractions import Fraction

import pytest

from qmkit.algebra import (
    AlgebraError,
    EtaleFactor,
    InternalConsistencyError,
    algebra_embeddings,
    build_algebra,
    decompose_commutative,
    is_commutative,
    isogeny_pattern,
    restriction_endomorphism_description,
)
from qmkit.cohomology import (
    MultiquadGroup,
    char_sqrt_cocycle,
    coboundary,
    cup_cocycle,
    degree_term_cocycle,
    trivial_cocycle,
)

G = MultiquadGroup((-6, -3))
XI1 = degree_term_cocycle(G, -3, 6)
XI2 = XI1 * char_sqrt_cocycle(G, -6) * char_sqrt_cocycle(G, -3)


def test_build_algebra_trivial_group_algebra():
    G2 = MultiquadGroup((2,))
    alg = build_algebra(trivial_cocycle(G2))
    assert alg.dim == 2
    assert alg.lambda_square(1) == 1
    x = alg.basis_vector(1)
    assert alg.mul(x, x) == alg.one()


def test_xi1_xi2_lambda_squares():
    a1 = build_algebra(XI1)
    # generator bit 1 flips sqrt(-6) (lambda^2 = 1), bit 2 flips sqrt(-3) (lambda^2 = 6)
    assert a1.lambda_square(0b01) == 1
    assert a1.lambda_square(0b10) == 6
    assert is_commutative(a1)
    a2 = build_algebra(XI2)
    assert a2.lambda_square(0b01) == -1
    assert a2.lambda_square(0b10) == -6
    assert a2.lambda_square(0b11) == 6
    assert is_commutative(a2)
    assert not is_commutative(build_algebra(cup_cocycle(G, -6, -3)))


def test_commutativity_iff_symmetric():
    rng = random.Random(97)
    from qmkit.cohomology import basis_combination
    for _ in range(60):
        coords = tuple(rng.randint(0, 1) for _ in range(3))
        c = basis_combination(G, coords)
        assert is_commutative(build_algebra(c)) == c.is_symmetric()


def test_decompose_paper_cases():
    # Q^{xi1}[G] = Q(sqrt 6) x Q(sqrt 6)
    f1 = decompose_commutative(build_algebra(XI1))
    assert f1 == [EtaleFactor((6,), 2)]
    # Q^{xi2}[G] = Q(sqrt 6, sqrt -6), recognized through span{-1, 6} = span{6, -6}
    f2 = decompose_commutative(build_algebra(XI2))
    assert f2 == [EtaleFactor((-1, 6), 1)]
    from qmkit.arith import SquareClassSpan
    assert SquareClassSpan([-1, 6]) == SquareClassSpan([6, -6])
    # trivial cocycle on (Z/2)^2: Q^4
    f0 = decompose_commutative(build_algebra(trivial_cocycle(G)))
    assert f0 == [EtaleFactor((), 4)]


def test_decompose_rejects_noncommutative():
    with pytest.raises(AlgebraError):
        decompose_commutative(build_algebra(cup_cocycle(G, -6, -3)))


def test_decompose_dimension_and_coboundary_invariance():
    rng = random.Random(101)
    from qmkit.cohomology import basis_combination
    for _ in range(200):
        coords = (rng.randint(0, 1), rng.randint(0, 1), 0)
        deg = rng.choice([None, (-3, 6), (-6, 2), (2, 3)])
        c = basis_combination(G, coords)
        if deg:
            c = c * degree_term_cocycle(G, *deg)
        base = decompose_commutative(build_algebra(c))
        assert sum(f.multiplicity * f.field_degree for f in base) == 4
        alpha = [Fraction(1)] + [Fraction(rng.choice([1, 2, 3, -1, -6]),
                                          rng.choice([1, 2])) for _ in range(3)]
        pert = c * coboundary(G, alpha)
        assert decompose_commutative(build_algebra(pert)) == base


def test_embeddings_are_multiplicative():
    rng = random.Random(103)
    for c in (XI1, XI2, trivial_cocycle(G)):
        alg = build_algebra(c)
        for phi in algebra_embeddings(alg):
            for _ in range(25):
                x = tuple(Fraction(rng.randint(-4, 4)) for _ in range(4))
                y = tuple(Fraction(rng.randint(-4, 4)) for _ in range(4))
                lhs = phi(alg.mul(x, y))
                rhs = phi(x) * phi(y)
                assert lhs == rhs


def test_restriction_description_paper_cases():
    # D = (2,3), factor Q(sqrt6, sqrt-6): splits, giving A ~ A_f^2
    reps = restriction_endomorphism_description((2, 3), [EtaleFactor((-1, 6), 1)])
    assert reps[0].splits and reps[0].matrix_size == 2
    assert isogeny_pattern(reps) == "A_1^2"
    # factors Q(sqrt6) x Q(sqrt6): both split, A ~ A_g^2 x A_h^2
    reps = restriction_endomorphism_description((2, 3), [EtaleFactor((6,), 2)])
    assert reps[0].splits and reps[0].matrix_size == 2
    assert isogeny_pattern(reps) == "A_1^2 x A_2^2"
    # trivial quaternion pair
    reps = restriction_endomorphism_description((1, 1), [EtaleFactor((6,), 2)])
    assert reps[0].splits and reps[0].matrix_size == 1
    assert isogeny_pattern(reps) == "A_1 x A_2"


def test_restriction_description_consistency_gate():
    # 7 = 1 mod 3, so Q(sqrt 7) has local degree 1 at the ramified place 3
    with pytest.raises(InternalConsistencyError):
        restriction_endomorphism_description((2, 3), [EtaleFactor((7,), 2)])
    reps = restriction_endomorphism_description((2, 3), [EtaleFactor((7,), 2)], symmetric=False)
    assert not reps[0].splits
