import random
from fractions import Fraction

import pytest

from qmkit.arith import ArithmeticError_, SquareClassSpan
from qmkit.brauer import quaternion_class
from qmkit.cohomology import DegreeMap, MultiquadGroup, degree_fixed_field
from qmkit.family import (
    JContext,
    KTooSmall,
    absolute_class,
    analyze,
    curve_model,
    find_prime_for_order,
    moduli_fields,
    splitting_order_bound,
)

K = MultiquadGroup((-6, -3))


def test_jcontext_validation():
    with pytest.raises(ArithmeticError_):
        JContext(Fraction(0))
    with pytest.raises(ArithmeticError_):
        JContext(Fraction(-16, 27))
    with pytest.raises(ArithmeticError_):
        JContext(Fraction(-6))  # -6j = 36 is a square
    ctx = JContext(Fraction(1, 81))
    assert ctx.m == -6 and ctx.n16 == Fraction(49, 3)


def test_curve_model_examples():
    model = curve_model(JContext(Fraction(1, 81)))
    vals = model.coefficient_values()
    # leading coefficient -4 + sqrt(-6)/3, constant term 8 (49/3)^3 (4 + sqrt(-6)/3)
    assert vals[6].a == -4 and vals[6].b == Fraction(1, 3) and vals[6].m == -6
    n = Fraction(49, 3)
    assert vals[0].a == 8 * n**3 * 4 and vals[0].b == 8 * n**3 * Fraction(1, 3)
    # j = -4/27: coefficients in Q(sqrt 2), 27j + 16 = 12
    ctx = JContext(Fraction(-4, 27))
    assert ctx.m == 2 and ctx.n16 == 12
    assert curve_model(ctx).gens == (2,)


def test_moduli_fields_examples():
    m = moduli_fields(JContext(Fraction(1, 81)))
    assert m.k_R6 == () and m.k_R2 == (-3,) and m.k_R3 == (-3,) and m.k_O == (-3,)
    m = moduli_fields(JContext(Fraction(-4, 27)))
    # 27j+16 = 12, so k_R2 ~ Q(sqrt -3); -j(27j+16) = 16/9 ~ 1, so k_R3 = Q
    assert m.k_R2 == (-3,) and m.k_R6 == (-3,) and m.k_R3 == () and m.k_O == (-3,)
    m = moduli_fields(JContext(Fraction(1)))
    assert m.k_R2 == (-43,) and m.k_R6 == () and m.k_R3 == (-43,)


def test_absolute_class_examples():
    ac = absolute_class(JContext(Fraction(1, 81)))
    assert ac.degree == DegreeMap.of([(-3, 6)])
    assert ac.sign_brauer.is_trivial
    ac = absolute_class(JContext(Fraction(-4, 27)))
    assert ac.degree == DegreeMap.of([(-3, 3)])
    assert ac.sign_brauer == quaternion_class(2, 3)


def test_absolute_class_lemma_prime():
    # j = 1/p with p = 1 mod 16 and p = -1 mod 3: sign class has local component -1 at p
    ac = absolute_class(JContext(Fraction(1, 17)))
    assert 17 in ac.sign_brauer.ramified


def test_degree_fixed_field_inside_k_O():
    rng = random.Random(131)
    for _ in range(40):
        j = Fraction(rng.randint(-60, 60), rng.randint(1, 60))
        try:
            ctx = JContext(j)
        except ArithmeticError_:
            continue
        ac = absolute_class(ctx)
        ko = SquareClassSpan(moduli_fields(ctx).k_O)
        for t in degree_fixed_field(ac.degree):
            assert ko.contains(t)
        assert len(ac.sign_brauer.ramified) % 2 == 0


def test_sign_formula_is_brauer_identity():
    # (2,3)_Q = [c_B] * (-(27j+16),3)_Q * (-j(27j+16),2)_Q as classes
    rng = random.Random(137)
    done = 0
    while done < 20:
        j = Fraction(rng.randint(-60, 60), rng.randint(1, 60))
        try:
            ctx = JContext(j)
        except ArithmeticError_:
            continue
        done += 1
        ac = absolute_class(ctx)
        n = ctx.n16
        prod = ac.sign_brauer * quaternion_class(-n, 3) * quaternion_class(-ctx.j * n, 2)
        assert prod == quaternion_class(2, 3)


def test_analyze_j_1_81():
    report = analyze(JContext(Fraction(1, 81)), K)
    assert report.verdict.verdict == "yes"
    assert report.candidates == ((0, 0, 0), (1, 1, 0))
    fields = {tuple(d.factors[0].generators): d.factors[0].multiplicity
              for d in report.details}
    assert fields == {(6,): 2, (-1, 6): 1}
    patterns = {d.pattern for d in report.details}
    assert patterns == {"A ~ A_1^2 x A_2^2", "A ~ A_1^2"}


def test_analyze_j_m4_27():
    report = analyze(JContext(Fraction(-4, 27)), K)
    assert report.verdict.verdict == "no"
    assert report.candidates == ((0, 1, 1), (1, 0, 1))
    assert all(not d.symmetric for d in report.details)


def test_analyze_j_m4_27_octic():
    L = MultiquadGroup((2, -3, -1))
    report = analyze(JContext(Fraction(-4, 27)), L)
    assert report.verdict.verdict == "conditional"
    assert len(report.verdict.symmetric) > 0
    # verdicts stable under an equivalent generator presentation of the field
    L2 = MultiquadGroup((-6, -3, -1))
    report2 = analyze(JContext(Fraction(-4, 27)), L2)
    assert report2.verdict.verdict == "conditional"


def test_analyze_k_too_small():
    with pytest.raises(KTooSmall):
        analyze(JContext(Fraction(1, 81)), MultiquadGroup((-6,)))  # misses sqrt(-3)
    with pytest.raises(KTooSmall):
        # misses both sqrt(-3) (= k_O) and sqrt(2) (coefficient field)
        analyze(JContext(Fraction(-4, 27)), MultiquadGroup((-6, -1)))


def test_splitting_order_bound_examples():
    b = splitting_order_bound(17, 4)
    assert b.order_bound == 16 and b.symbols == (-1, 1, 1)
    with pytest.raises(ArithmeticError_):
        splitting_order_bound(13, 2)  # 13 = 1 mod 3 fails the -1 mod 3 condition
    with pytest.raises(ArithmeticError_):
        splitting_order_bound(97, 5)  # 97 = 1 mod 3 likewise
    with pytest.raises(ArithmeticError_):
        splitting_order_bound(19, 2)  # 19 != 1 mod 4


def test_find_prime_for_order_examples():
    r2 = find_prime_for_order(2)
    assert (r2.p, r2.splitting_field_degree, r2.gl2_dimension) == (5, 4, 2)
    r4 = find_prime_for_order(4)
    assert (r4.p, r4.splitting_field_degree, r4.gl2_dimension) == (17, 16, 8)
    assert find_prime_for_order(3).p == 17
    with pytest.raises(ArithmeticError_):
        find_prime_for_order(1)
