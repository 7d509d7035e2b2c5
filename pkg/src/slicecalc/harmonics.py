"""Four-dimensional zonal harmonics, Poisson kernel, Kelvin transform, Koebe function.

Points of R^4 are read either as paravectors of R_3 (``algebra="R3"``) or
as quaternions (``algebra="H"``).  Zonal harmonics are computed from the
spherical derivative of Clifford powers,

    Z_m(x, a) = (m + 1) (x^{m+1})'_s  evaluated at  x a^c,

and the Gegenbauer polynomials C^(1)_k (standard three-term recurrence, the
one formula here not derived from slice calculus) serve as the independent
check.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .clifford import (
    CliffordError,
    Multivector,
    Signature,
    infer_regime,
    mv_conjugate,
    mv_inverse,
    mv_power,
    mv_product,
    paravector_basis,
)
from .diffops import EvaluableField
from .slicefn import (
    DomainError,
    SliceFunction,
    StemFunction,
    power_spherical_derivative,
    punctured_plane,
    spherical_derivative,
)

ALGEBRAS = {"R3": (3, paravector_basis(3)), "H": (2, (0, 1, 2, 3))}
UNIT_TOL = 1e-12


def _algebra(name: str):
    try:
        return ALGEBRAS[name]
    except KeyError:
        raise CliffordError(f"unknown algebra {name!r}; use 'R3' or 'H'") from None


def to_mv(p, algebra: str = "R3") -> Multivector:
    """Point4 (four coordinates) -> Multivector; Multivectors pass through."""
    if isinstance(p, Multivector):
        return p
    n, basis = _algebra(algebra)
    return Multivector.from_coords(n, list(p), basis)


def coords4(x: Multivector, algebra: str = "R3") -> tuple:
    return x.coords(_algebra(algebra)[1])


def _sq_norm4(p) -> object:
    return sum(c * c for c in p)


def _check_pole(a: Multivector, algebra: str):
    r2 = _sq_norm4(coords4(a, algebra))
    if a.sig.exact:
        ok = r2 == 1
    else:
        ok = abs(float(r2) - 1.0) <= UNIT_TOL * 4
    if not ok:
        raise CliffordError(f"pole must be a unit vector, |a|^2 = {r2}")


def _same_regime(x: Multivector, a: Multivector) -> tuple[Multivector, Multivector]:
    if x.sig == a.sig:
        return x, a
    return x.to_float(), a.to_float()


def zonal_mv(m: int, x, a=(1, 0, 0, 0), algebra: str = "R3") -> Multivector:
    """(m+1) (x^{m+1})'_s at x a^c, as a Multivector (real up to rounding)."""
    if m < 0:
        raise CliffordError("zonal harmonic degree must be >= 0")
    X, A = _same_regime(to_mv(x, algebra), to_mv(a, algebra))
    _check_pole(A, algebra)
    y = mv_product(X, mv_conjugate(A))
    return power_spherical_derivative(m + 1, y) * (m + 1)


def zonal(m: int, x, a=(1, 0, 0, 0), algebra: str = "R3"):
    return zonal_mv(m, x, a, algebra).scalar_part


def gegenbauer_c1(k: int, t):
    """C^(1)_k(t): C_0 = 1, C_1 = 2t, C_{j+1} = 2t C_j - C_{j-1}."""
    if k < 0:
        raise ValueError("Gegenbauer degree must be >= 0")
    prev, cur = 1, 2 * t
    if k == 0:
        return prev + 0 * t
    for _ in range(k - 1):
        prev, cur = cur, 2 * t * cur - prev
    return cur


def zonal_from_gegenbauer(m: int, x: Sequence[float], a: Sequence[float]) -> float:
    """|x|^m (m+1) C^(1)_m(<x, a>/|x|), the classical form of the 4-D zonal harmonic."""
    r = math.sqrt(sum(float(c) ** 2 for c in x))
    if r == 0:
        return 1.0 if m == 0 else 0.0
    t = sum(float(p) * float(q) for p, q in zip(x, a)) / r
    return r ** m * (m + 1) * gegenbauer_c1(m, t)


def poisson(x, a=(1, 0, 0, 0)) -> float:
    """(1 - |x|^2) / |x - a|^4 for |x| < 1, |a| = 1."""
    x = [float(c) for c in (coords4(x) if isinstance(x, Multivector) else x)]
    a = [float(c) for c in (coords4(a) if isinstance(a, Multivector) else a)]
    r2 = sum(c * c for c in x)
    if r2 >= 1.0:
        raise DomainError("Poisson kernel needs |x| < 1")
    if abs(sum(c * c for c in a) - 1.0) > UNIT_TOL * 4:
        raise CliffordError("pole must be a unit vector")
    d2 = sum((p - q) ** 2 for p, q in zip(x, a))
    return (1.0 - r2) / (d2 * d2)


def tail_bound(r: float, M: int) -> float:
    """sum_{m > M} (m+1)^2 r^m, a bound for |P - sum_{m<=M} Z_m| at |x| = r."""
    if not 0 <= r < 1:
        raise ValueError("tail bound needs 0 <= r < 1")
    total, m = 0.0, M + 1
    while True:
        term = (m + 1) ** 2 * r ** m
        total += term
        if term < 1e-18 * max(total, 1e-300) or term == 0.0:
            return total
        m += 1


def poisson_partial_sums(x, M: int, a=(1, 0, 0, 0), algebra: str = "R3") -> list[dict]:
    """Rows {M, partial_sum, exact, error, bound} for the zonal expansion of P(x, a)."""
    exact = poisson(x, a)
    X, A = _same_regime(to_mv(x, algebra).to_float(), to_mv(a, algebra).to_float())
    _check_pole(A, algebra)
    y = mv_product(X, mv_conjugate(A))
    r = math.sqrt(sum(float(c) ** 2 for c in coords4(X, algebra)))
    rows = []
    partial = 0.0
    for m in range(M + 1):
        partial += float(power_spherical_derivative(m + 1, y).scalar_part) * (m + 1)
        rows.append({"M": m, "partial_sum": partial, "exact": exact,
                     "error": abs(partial - exact), "bound": tail_bound(r, m)})
    return rows


def kelvin(f: EvaluableField) -> EvaluableField:
    """K[f](x) = |x|^{-2} f(x / |x|^2)."""
    def fn(x: Multivector) -> Multivector:
        r2 = sum(c * c for c in x.coords(f.basis))
        if r2 == 0:
            raise DomainError("Kelvin transform undefined at 0")
        v = f.fn(x / r2)
        if not isinstance(v, Multivector):
            v = Multivector.scalar(x.sig, v)
        return v / r2
    return EvaluableField(f.n, fn, f.basis)


def power_sd_field(m: int, algebra: str = "R3") -> EvaluableField:
    """x -> (x^m)'_s as a field on R^4."""
    n, basis = _algebra(algebra)
    return EvaluableField(n, lambda x: power_spherical_derivative(m, x), basis)


def koebe(x) -> Multivector:
    """f_K(x) = (1 - x)^{-2} x."""
    if not isinstance(x, Multivector):
        x = to_mv(x)
    w = 1 - x
    if w.is_zero():
        raise DomainError("the Koebe function has a pole at 1")
    return mv_product(mv_inverse(mv_power(w, 2)), x)


def koebe_slice(sig: Signature) -> SliceFunction:
    """Slice function of the stem z / (1 - z)^2 (derivative (1 + z)/(1 - z)^3)."""
    return SliceFunction(StemFunction.from_holomorphic(
        sig, lambda z: z / (1 - z) ** 2, lambda z: (1 + z) / (1 - z) ** 3,
        domain=punctured_plane(1.0)))


def koebe_spherical_derivative(x, algebra: str = "R3") -> float:
    X = to_mv(x, algebra)
    f = koebe_slice(Signature(X.n))
    return float(spherical_derivative(f, X).scalar_part)


def power_from_zonal(m: int, x, algebra: str = "R3") -> Multivector:
    """x^m = Z_m(x,1)/(m+1) - x^c Z_{m-1}(x,1)/m."""
    if m < 1:
        raise CliffordError("power_from_zonal needs m >= 1")
    X = to_mv(x, algebra)
    one = to_mv((1, 0, 0, 0), algebra)
    if X.sig.exact:
        z_m = zonal(m, X, one, algebra) * Fraction(1, m + 1)
        z_prev = zonal(m - 1, X, one, algebra) * Fraction(1, m)
    else:
        z_m = float(zonal(m, X, one.to_float(), algebra)) / (m + 1)
        z_prev = float(zonal(m - 1, X, one.to_float(), algebra)) / m
    return Multivector.scalar(X.sig, z_m) - mv_conjugate(X) * z_prev


def regime_of(p) -> str:
    return p.sig.regime if isinstance(p, Multivector) else infer_regime(p)
