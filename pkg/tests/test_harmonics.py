"""Zonal harmonics, Gegenbauer polynomials, Poisson kernel, Kelvin transform, Koebe function."""
import math
from fractions import Fraction as Fr

import numpy as np
import pytest

from slicecalc import harmonics as hm
from slicecalc.clifford import CliffordError, Multivector, Signature, mv_power
from slicecalc.diffops import EvaluableField, FDScheme, apply_laplacian_fd
from slicecalc.polycalc import spherical_derivative_poly
from slicecalc.slicefn import DomainError, power_spherical_derivative

RNG = np.random.default_rng(11)


def unit4(rng=RNG):
    v = rng.standard_normal(4)
    return list(v / np.linalg.norm(v))


def ball4(r, rng=RNG):
    return [c * rng.uniform(0, r) for c in unit4(rng)]


# zonal ---------------------------------------------------------------------------------

def test_degree_zero_is_one():
    for _ in range(5):
        assert hm.zonal(0, ball4(3.0), unit4()) == pytest.approx(1.0, abs=1e-14)


def test_value_at_pole_is_m_squared_exactly():
    one = (1, 0, 0, 0)
    for m in range(1, 21):
        assert hm.zonal(m - 1, one, one) == m * m


def test_degree_one_is_4x0():
    x = (Fr(1, 2), 2, -1, 3)
    assert hm.zonal(1, x) == 2


def test_non_unit_pole_rejected():
    with pytest.raises(CliffordError):
        hm.zonal(2, (1, 0, 0, 0), (2, 0, 0, 0))


def test_zonal_real_valued_and_pole_rotation():
    for algebra in ("R3", "H"):
        for _ in range(10):
            x, a = ball4(1.5), unit4()
            for m in range(0, 10):
                v = hm.zonal_mv(m, x, a, algebra)
                assert v.nonscalar().abs() < 1e-10
                assert float(v.scalar_part) == pytest.approx(hm.zonal_from_gegenbauer(m, x, a), abs=1e-10 * (m + 1) ** 2)


def test_zonal_harmonic_exact():
    # Z_m(., 1) = (m+1) (x^{m+1})'_s is harmonic
    for m in range(0, 8):
        assert spherical_derivative_poly(m + 1, 3).laplacian().is_zero()


def test_zonal_harmonic_numeric_at_rotated_pole():
    a = unit4()
    f = EvaluableField(3, lambda x: Multivector.scalar(x.sig, float(hm.zonal(4, x.coords(hm.ALGEBRAS["R3"][1]), a))))
    for _ in range(5):
        assert apply_laplacian_fd(f, ball4(1.0)).abs() < 1e-4


# gegenbauer ----------------------------------------------------------------------------

def test_gegenbauer_examples():
    assert hm.gegenbauer_c1(0, 0.3) == 1
    for m in range(1, 15):
        assert hm.gegenbauer_c1(m - 1, 1) == m
    assert hm.gegenbauer_c1(1, 0.25) == 0.5


def test_gegenbauer_is_chebyshev_second_kind():
    for k in range(8):
        t = math.cos(0.7)
        assert hm.gegenbauer_c1(k, t) == pytest.approx(math.sin((k + 1) * 0.7) / math.sin(0.7))


def test_sphere_restriction():
    for _ in range(20):
        x = unit4()
        for m in range(1, 21):
            assert abs(float(hm.zonal(m - 1, x)) - m * hm.gegenbauer_c1(m - 1, x[0])) < 1e-10


# poisson -------------------------------------------------------------------------------

def test_poisson_examples():
    assert hm.poisson((0, 0, 0, 0), unit4()) == pytest.approx(1.0)
    assert hm.poisson((0.5, 0, 0, 0)) == pytest.approx(12.0)
    with pytest.raises(DomainError):
        hm.poisson((1.0, 0, 0, 0))


def test_partial_sums_stay_within_tail_bound():
    for _ in range(5):
        x = ball4(0.7)
        for row in hm.poisson_partial_sums(x, 60):
            assert row["error"] <= row["bound"] * (1 + 1e-12) + 1e-15
        assert row["error"] < 1e-6


def test_tail_bound_full_series():
    r = 0.5
    assert hm.tail_bound(r, -1) == pytest.approx((1 + r) / (1 - r) ** 3)


# kelvin --------------------------------------------------------------------------------

def test_kelvin_examples():
    sd2 = hm.kelvin(hm.power_sd_field(2))
    one = hm.kelvin(EvaluableField(3, lambda x: Multivector.scalar(x.sig, 1.0)))
    for _ in range(10):
        p = ball4(2.0)
        r2 = sum(c * c for c in p)
        assert sd2(p).scalar_part == pytest.approx(2 * p[0] / r2 ** 2)
        neg = power_spherical_derivative(-2, hm.to_mv(p).to_float())
        assert neg.scalar_part == pytest.approx(-2 * p[0] / r2 ** 2)
        assert one(p).scalar_part == pytest.approx(1 / r2)


def test_kelvin_is_an_involution():
    f = hm.power_sd_field(3)
    kk = hm.kelvin(hm.kelvin(f))
    for _ in range(10):
        p = ball4(2.0)
        assert (kk(p) - f(p)).abs() < 1e-12 * (1 + f(p).abs())


def test_kelvin_at_origin():
    with pytest.raises(DomainError):
        hm.kelvin(hm.power_sd_field(2))([0.0, 0.0, 0.0, 0.0])


def test_negative_power_spherical_derivative_harmonic():
    scheme = FDScheme(laplacian_h=1e-4)
    for m in (1, 2, 3):
        f = hm.power_sd_field(-m)
        for _ in range(5):
            p = [c * 1.2 for c in unit4()]
            assert apply_laplacian_fd(f, p, scheme).abs() < 1e-3


# koebe ---------------------------------------------------------------------------------

def test_koebe_examples():
    assert hm.koebe((0, 0, 0, 0)).is_zero()
    assert hm.koebe_spherical_derivative((0.5, 0, 0, 0)) == pytest.approx(12.0)
    z = 0.5
    assert hm.koebe_spherical_derivative((z, 0, 0, 0)) == pytest.approx((1 + z) / (1 - z) ** 3)
    with pytest.raises(DomainError):
        hm.koebe((1, 0, 0, 0))


def test_koebe_matches_its_slice_function():
    f = hm.koebe_slice(Signature(3))
    for _ in range(10):
        x = hm.to_mv(ball4(0.9))
        assert (hm.koebe(x) - f(x)).abs() < 1e-10


def test_koebe_spherical_derivative_is_poisson():
    f = hm.koebe_slice(Signature(3))
    for _ in range(30):
        x, a = ball4(0.9), unit4()
        y = hm.to_mv(x) * hm.to_mv(a).conj()
        assert abs(f.spherical_derivative(y).scalar_part - hm.poisson(x, a)) < 1e-10


# power reconstruction -----------------------------------------------------------------

def test_power_from_zonal_examples():
    x = hm.to_mv((Fr(1, 3), 2, -1, Fr(1, 2)))
    assert hm.power_from_zonal(1, x) == x
    assert hm.power_from_zonal(2, hm.to_mv((1, 0, 0, 0))) == Multivector.scalar(x.sig, 1)
    for m in range(1, 8):
        assert hm.power_from_zonal(m, x) == mv_power(x, m)


def test_power_from_zonal_float_and_quaternion():
    for algebra in ("R3", "H"):
        for _ in range(10):
            x = hm.to_mv(ball4(1.0), algebra)
            for m in range(1, 11):
                assert (hm.power_from_zonal(m, x, algebra) - mv_power(x, m)).abs() < 1e-10


def test_unknown_algebra():
    with pytest.raises(CliffordError):
        hm.to_mv((1, 0, 0, 0), "O")
