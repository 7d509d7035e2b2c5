from fractions import Fraction as Fr
import math

import pytest
from hypothesis import given, settings, strategies as st

from slicecalc.clifford import (
    CliffordError,
    InexactError,
    Multivector,
    NotInConeError,
    Signature,
    SignatureMismatch,
    ZeroNormError,
    blade_name,
    blade_sign,
    conjugation_sign,
    decompose,
    in_quadratic_cone,
    mv_conjugate,
    mv_inverse,
    mv_power,
    mv_product,
    norm,
    parse_blade,
    trace,
)

R3 = Signature(3, "exact")
R3f = Signature(3)


def e(i, sig=R3):
    return Multivector.e(sig, i)


def blade(name, sig=R3):
    return Multivector.blade(sig, parse_blade(name))


def one(sig=R3):
    return Multivector.scalar(sig, 1)


# -- product ------------------------------------------------------------------

def test_generator_squares_to_minus_one():
    for i in (1, 2, 3):
        assert e(i) * e(i) == Multivector.scalar(R3, -1)


def test_anticommutation():
    assert e(1) * e(2) == blade("e12")
    assert e(2) * e(1) == -blade("e12")
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i != j:
                assert mv_product(e(i), e(j)) == -mv_product(e(j), e(i))


def test_distributed_product():
    got = (one() + e(1)) * (one() + e(2))
    assert got == one() + e(1) + e(2) + blade("e12")


def test_sign_convention_on_bitmasks():
    # e1 e23 = e123, e23 e1 = e123 (two transpositions), e12 e12 = -1
    assert blade_sign(0b001, 0b110) == 1
    assert blade_sign(0b110, 0b001) == 1
    assert blade_sign(0b011, 0b011) == -1
    assert blade_name(0b101) == "e13" and parse_blade("e13") == 5 and blade_name(0) == "1"


def test_signature_mismatch_raises():
    with pytest.raises(SignatureMismatch):
        mv_product(e(1), Multivector.e(Signature(2, "exact"), 1))
    with pytest.raises(SignatureMismatch):
        e(1) + e(1, R3f)


def test_signature_bounds():
    with pytest.raises(CliffordError):
        Signature(0)
    with pytest.raises(CliffordError):
        Signature(9)


def test_exact_regime_rejects_floats():
    with pytest.raises(InexactError):
        Multivector(R3, [0.5] + [0] * 7)


# -- conjugation, trace, norm -------------------------------------------------------

def test_conjugation_examples():
    assert mv_conjugate(e(1)) == -e(1)
    assert mv_conjugate(Multivector.scalar(R3, 5)) == Multivector.scalar(R3, 5)
    assert mv_conjugate(blade("e123")) == blade("e123")
    assert [conjugation_sign(b) for b in (0, 1, 3, 7)] == [1, -1, -1, 1]


def test_trace_norm_paravector():
    x = Multivector.from_coords(3, [1, 2, -3, 5])
    assert trace(x) == Multivector.scalar(R3, 2)
    assert norm(x) == Multivector.scalar(R3, 1 + 4 + 9 + 25)


def test_trace_of_e123_is_not_real():
    assert trace(blade("e123")) == blade("e123") * 2
    assert trace(Multivector.zero(R3)).is_zero() and norm(Multivector.zero(R3)).is_zero()


# -- quadratic cone ---------------------------------------------------------------

def test_cone_membership():
    assert in_quadratic_cone(Multivector.from_coords(3, [1, 2, 3, 4]))
    assert not in_quadratic_cone(blade("e123"))
    x = e(1) * 2 + blade("e23") * 3
    assert not in_quadratic_cone(x)


def test_cone_contains_non_paravectors_satisfying_the_cone_equation():
    # x1 x23 - x2 x13 + x3 x12 = 0 holds for e1 + e12, and e12 is an imaginary unit
    x = e(1) + blade("e12")
    assert in_quadratic_cone(x)
    assert norm(x) == Multivector.scalar(R3, 2)
    assert in_quadratic_cone(blade("e12"))
    assert not in_quadratic_cone(e(1) + blade("e23"))


def test_decompose_examples():
    d = decompose(Multivector.from_coords(3, [1, 2, 0, 0]))
    assert (d.alpha, d.beta, d.J) == (1, 2, e(1))
    d = decompose(Multivector.scalar(R3, 7))
    assert d.alpha == 7 and d.beta == 0 and d.J is None
    s = 4 / math.sqrt(2)
    d = decompose(Multivector.from_coords(3, [3.0, s, s, 0.0]))
    assert d.alpha == 3 and d.beta == pytest.approx(4, abs=1e-14)
    assert d.J.allclose((e(1, R3f) + e(2, R3f)) / math.sqrt(2))


def test_decompose_rational_roundtrip_and_irrational():
    x = Multivector.from_coords(3, [Fr(1, 2), 3, 4, 0])
    d = decompose(x)
    assert d.beta == 5 and d.reconstruct(R3) == x
    with pytest.raises(InexactError):
        decompose(Multivector.from_coords(3, [0, 1, 1, 0]))


def test_decompose_outside_cone():
    with pytest.raises(NotInConeError):
        decompose(blade("e123"))


def test_near_real_point_has_no_unit():
    d = decompose(Multivector.from_coords(3, [2.0, 1e-14, 0.0, 0.0]))
    assert d.beta == 0 and d.J is None


# -- inverse and powers -------------------------------------------------------------

def test_inverse_examples():
    assert mv_inverse(e(1)) == -e(1)
    assert mv_inverse(one() + e(1)) == (one() - e(1)) * Fr(1, 2)
    with pytest.raises(ZeroNormError):
        mv_inverse(Multivector.zero(R3))


def test_power_examples():
    assert mv_power(e(1), 4) == one()
    assert mv_power(Multivector.scalar(R3, 2), -1) == Multivector.scalar(R3, Fr(1, 2))
    assert mv_power(one() + e(2), 3) == Multivector.from_coords(3, [-2, 0, 2, 0])
    x = Multivector.from_coords(3, [2, 1, -1, 3])
    # (x0 + v)^2 = x0^2 - |v|^2 + 2 x0 v
    assert x ** 2 == Multivector.from_coords(3, [4 - 11, 4, -4, 12])
    assert x ** 0 == one()


# -- properties ---------------------------------------------------------------------

small = st.integers(min_value=-4, max_value=4)


def mv_strategy(sig=R3):
    return st.lists(small, min_size=sig.dim, max_size=sig.dim).map(lambda c: Multivector(sig, c))


@settings(max_examples=60, deadline=None)
@given(mv_strategy(), mv_strategy(), mv_strategy())
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=60, deadline=None)
@given(mv_strategy(), mv_strategy())
def test_conjugation_is_antiinvolution(a, b):
    assert mv_conjugate(a * b) == mv_conjugate(b) * mv_conjugate(a)
    assert mv_conjugate(mv_conjugate(a)) == a


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=4, max_size=4))
def test_cone_trace_norm_real_and_inverse(coords):
    x = Multivector.from_coords(3, coords)
    assert trace(x).nonscalar().is_zero() and norm(x).nonscalar().is_zero()
    assert norm(x).scalar_part >= 0
    if any(coords):
        inv = mv_inverse(x)
        assert x * inv == one() and inv * x == one()


def test_float_inverse_on_random_cone_samples():
    import numpy as np
    rng = np.random.default_rng(0)
    for _ in range(50):
        x = Multivector.from_coords(3, list(rng.uniform(-2, 2, 4)))
        assert (x * mv_inverse(x)).allclose(one(R3f), 1e-12)
