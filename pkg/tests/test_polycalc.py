import random
from fractions import Fraction as Fr

import pytest

from slicecalc.clifford import CliffordError, Multivector, Signature, mv_power
from slicecalc.polycalc import (
    CoordPoly,
    evaluate,
    expand_power,
    expand_slice,
    from_g,
    is_zero,
    joint_kernel_dimension,
    power_g_polys,
    slice_derivative_of_sd_poly,
    spherical_derivative_poly,
    spherical_value_poly,
)
from slicecalc.slicefn import power_spherical_derivative, power_g_terms

QUAT = (0, 1, 2, 3)


def var(n, i, basis=None):
    return CoordPoly.variable(n, i, basis)


def test_expand_power_small_cases():
    assert expand_power(0, 3) == CoordPoly.constant(3, 1)
    x0, x1, x2, x3 = (var(3, i) for i in range(4))
    sig = Signature(3, "exact")
    e = [Multivector.e(sig, i) for i in (1, 2, 3)]
    expected = x0 * x0 - x1 * x1 - x2 * x2 - x3 * x3 + (x0 * x1 * e[0] + x0 * x2 * e[1] + x0 * x3 * e[2]) * 2
    assert expand_power(2, 3) == expected


def test_expand_power_matches_mv_power_at_rational_points():
    rnd = random.Random(5)
    p = expand_power(3, 3)
    for _ in range(100):
        pt = [Fr(rnd.randint(-9, 9), rnd.randint(1, 5)) for _ in range(4)]
        x = Multivector.from_coords(3, pt)
        assert p.evaluate(pt) == mv_power(x, 3)


def test_e1_component_of_cube():
    x0, x1, x2, x3 = (var(3, i) for i in range(4))
    comp = CoordPoly(3, {m: c[1] for m, c in expand_power(3, 3).terms.items() if c[1] != 0})
    assert comp == x0 * x0 * x1 * 3 - x1 * x1 * x1 - x1 * x2 * x2 - x1 * x3 * x3


def test_partials_and_laplacian():
    x0, x1 = var(3, 0), var(3, 1)
    assert (x0 * x0 + x1 * x1).laplacian() == CoordPoly.constant(3, 4)
    assert (CoordPoly.constant(3, 3) * x0 * x0 - x1 * x1 - var(3, 2) ** 2 - var(3, 3) ** 2).laplacian().is_zero()
    e1 = Multivector.e(Signature(3, "exact"), 1)
    assert (x0 * x1 * e1).partial(0) == x1 * e1


def test_cube_renderings():
    p = expand_power(3, 3)
    assert p.apply_cr().render() == "-2*(3*x0^2 - x1^2 - x2^2 - x3^2)"
    assert p.laplacian().render() == "-4*(3*x0 + x1*e1 + x2*e2 + x3*e3)"
    assert CoordPoly.constant(3, 1).apply_cr().is_zero()


def test_gamma_and_angular_momenta():
    for n in (2, 3, 4, 5):
        im = CoordPoly.imag(n)
        assert im.apply_gamma() == im * (n - 1)
    assert var(3, 0).apply_Lij(1, 2).is_zero()
    with pytest.raises(CliffordError):
        var(3, 0).apply_Lij(2, 1)
    with pytest.raises(CliffordError):
        var(3, 0).apply_Lij(0, 1)


def test_laplace_beltrami_factorization():
    p = expand_power(4, 3)
    g = p.apply_gamma()
    assert p.apply_laplace_beltrami() == (-g).apply_gamma() + g * (3 - 2)


def test_evaluate_and_is_zero():
    assert evaluate(expand_power(2, 3), (1, 1, 0, 0)) == Multivector.from_coords(3, [0, 2, 0, 0])
    assert is_zero(CoordPoly.zero(3))
    assert is_zero(spherical_derivative_poly(3, 3).laplacian())
    v = expand_power(2, 3).evaluate((0.5, 1.0, 0.0, 0.0))
    assert v.sig.regime == "float" and v.allclose(Multivector.from_coords(3, [-0.75, 1.0, 0.0, 0.0]))


def test_spherical_derivative_poly_examples():
    assert spherical_derivative_poly(1, 3) == CoordPoly.constant(3, 1)
    assert spherical_derivative_poly(2, 3) == var(3, 0) * 2
    x0, x1, x2, x3 = (var(3, i) for i in range(4))
    assert spherical_derivative_poly(3, 3) == x0 * x0 * 3 - x1 * x1 - x2 * x2 - x3 * x3
    for m in range(1, 9):
        p = spherical_derivative_poly(m, 3)
        assert p.is_real() and p.is_homogeneous(m - 1)


def test_spherical_derivative_poly_matches_pointwise():
    pt = [Fr(1, 2), Fr(-2, 3), 1, Fr(3, 7)]
    x = Multivector.from_coords(3, pt)
    for m in range(1, 10):
        assert spherical_derivative_poly(m, 3).evaluate(pt) == power_spherical_derivative(m, x)


def test_g_substitution_agrees_with_sum_formula():
    for m in range(1, 9):
        _, g2 = power_g_polys(m, 4)
        assert g2 == spherical_derivative_poly(m, 4)
        g1, _ = power_g_polys(m, 4)
        assert g1 == spherical_value_poly(m, 4)
        assert from_g(power_g_terms(m)[1], 4) == g2


def _random_poly(rnd, n, basis=None, degree=6, terms=6):
    sig = Signature(n, "exact")
    nv = len(basis) if basis else n + 1
    out = {}
    for _ in range(terms):
        d = rnd.randint(0, degree)
        mono = [0] * nv
        for _ in range(d):
            mono[rnd.randrange(nv)] += 1
        blade = rnd.randrange(sig.dim)
        out[tuple(mono)] = Multivector.blade(sig, blade, Fr(rnd.randint(-5, 5), rnd.randint(1, 3)))
    return CoordPoly(n, out, basis)


@pytest.mark.parametrize("n,basis", [(2, None), (3, None), (5, None), (2, QUAT)])
def test_cauchy_riemann_factorizes_laplacian(n, basis):
    rnd = random.Random(n)
    for _ in range(5):
        p = _random_poly(rnd, n, basis)
        assert p.apply_cr_conj().apply_cr() == p.laplacian() == p.apply_cr().apply_cr_conj()


def test_quaternion_gamma_explicit_form():
    # Gamma_H = -i L23 + j L13 - k L12 (coordinates x1, x2, x3 along i, j, k)
    sig = Signature(2, "exact")
    i, j, k = (Multivector.blade(sig, b) for b in (1, 2, 3))
    p = expand_power(4, 2, QUAT)
    explicit = i * p.apply_Lij(2, 3) * -1 + j * p.apply_Lij(1, 3) - k * p.apply_Lij(1, 2)
    assert p.apply_gamma() == explicit


def test_slice_derivative_of_sd_poly_for_cube():
    assert slice_derivative_of_sd_poly(3, 3) == var(3, 0) * 3 + CoordPoly.imag(3)


def test_degree_cap():
    with pytest.raises(CliffordError):
        CoordPoly(3, {(65, 0, 0, 0): 1})


def test_expand_slice_with_right_coefficients():
    sig = Signature(3, "exact")
    a = [Multivector.blade(sig, 3), Multivector.zero(sig), Multivector.e(sig, 2)]
    p = expand_slice(a)
    pt = [1, 2, -1, 3]
    x = Multivector.from_coords(3, pt)
    assert p.evaluate(pt) == a[0] + x * x * a[2]


def test_render_is_deterministic_and_ordered():
    p = expand_power(2, 2)
    # graded-lex on exponents, then blade index
    assert p.render(factor=False) == "x0^2 + 2*x0*x1*e1 + 2*x0*x2*e2 - x1^2 - x2^2"
    assert str(expand_power(2, 2, QUAT)) == str(expand_power(2, 2, QUAT))


def test_only_constants_in_both_kernels_paravector():
    dims = joint_kernel_dimension(6, 3)
    assert dims == {0: 8, 1: 0, 2: 0, 3: 0, 4: 0, 5: 0, 6: 0}
