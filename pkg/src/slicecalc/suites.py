"""Named verification suites: each one turns a family of statements into reports.

A suite is a function ``(config) -> list[IdentityReport]``.  Numeric reports
come from finite differences (see :mod:`slicecalc.diffops`); exact reports
carry ``tol = 0`` and pass only when every difference polynomial is the zero
polynomial.  Nothing here depends on wall-clock time or global state, so a
fixed seed gives byte-identical reports.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import harmonics as hm
from . import quat
from .clifford import Multivector, Signature, mv_power, paravector_basis
from .diffops import (
    EvaluableField,
    FDScheme,
    IdentityReport,
    apply_laplacian_fd,
    sample_points,
    verify_identity,
)
from .polycalc import (
    CoordPoly,
    expand_power,
    expand_conj_power,
    joint_kernel_dimension,
    power_g_polys,
    slice_derivative_of_sd_poly,
    spherical_derivative_poly,
    spherical_value_poly,
)
from .slicefn import (
    PolynomialSlice,
    SliceFunction,
    StemFunction,
    Plane,
    power_spherical_derivative,
)

# second-difference step for fields with a singularity near the sample region
SINGULAR_LAPLACIAN_H = 1e-4


@dataclass(frozen=True)
class SuiteConfig:
    n: int = 3
    seed: int = 42
    samples: int = 200
    tol: float = 1e-5
    h: float = 1e-4

    @property
    def scheme(self) -> FDScheme:
        return FDScheme(h=self.h)

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])


# -- report helpers -----------------------------------------------------------------

def exact_report(identity: str, n: int, cases: Iterable[tuple[str, CoordPoly]]) -> IdentityReport:
    """Report on exact identities given as (label, lhs - rhs) pairs."""
    residuals, failures = [], []
    for label, diff in cases:
        r = float(diff.max_abs_coeff()) if not diff.is_zero() else 0.0
        residuals.append(r)
        if r != 0.0:
            failures.append({"x": label, "residual": r})
    mx = max(residuals, default=0.0)
    mean = sum(residuals) / len(residuals) if residuals else 0.0
    return IdentityReport(identity, n, None, len(residuals), 0.0, mx, mean, mx == 0.0,
                          failures[:20], residuals)


def pointwise_report(identity: str, n: int, seed, points, residual: Callable, tol: float,
                     expected: bool = True) -> IdentityReport:
    res = [float(residual(p)) for p in points]
    return IdentityReport.from_residuals(identity, n, seed, points, res, tol, expected)


def _rand_unit_mv(rng: np.random.Generator, sig: Signature) -> Multivector:
    v = rng.standard_normal(sig.dim)
    v /= np.linalg.norm(v)
    return Multivector(sig, [float(c) for c in v])


def random_polynomial(rng: np.random.Generator, sig: Signature, degree: int) -> PolynomialSlice:
    """sum_{m<=degree} x^m a_m with each a_m a random unit-norm multivector."""
    return PolynomialSlice([_rand_unit_mv(rng, sig) for _ in range(degree + 1)])


def _test_functions(cfg: SuiteConfig, n: int, salt: int, count: int = 3) -> list[tuple[str, SliceFunction]]:
    sig = Signature(n)
    rng = cfg.rng(salt)
    degrees = [5] + [int(d) for d in rng.integers(1, 6, size=count - 1)]
    funcs = [(f"random(deg={d})", random_polynomial(rng, sig, d)) for d in degrees]
    ex = PolynomialSlice([Multivector.zero(sig), Multivector.blade(sig, 2 if n >= 2 else 1),
                          Multivector.zero(sig), Multivector.scalar(sig, 1.0)])
    return [("x^3 + x e2", ex)] + funcs


def conj_slice(sig: Signature) -> SliceFunction:
    """x -> x^c, the slice function of the (anti-holomorphic) stem zbar."""
    return SliceFunction.from_complex(sig, lambda z: z.conjugate(), dz=lambda z: 0j,
                                      dzbar=lambda z: 1 + 0j)


def _tag(rep: IdentityReport, label: str) -> IdentityReport:
    rep.identity = f"{rep.identity}[{label}]"
    return rep


# -- section: spherical operators on paravectors ---------------------------------

def suite_teo2(cfg: SuiteConfig) -> list[IdentityReport]:
    out = []
    for label, f in _test_functions(cfg, cfg.n, salt=1):
        for name in ("teo2a", "teo2b"):
            out.append(_tag(verify_identity(name, f, cfg.samples, cfg.scheme, cfg.tol, cfg.seed), label))
    return out


def suite_cor1(cfg: SuiteConfig) -> list[IdentityReport]:
    sig = Signature(cfg.n)
    out = []
    funcs = _test_functions(cfg, cfg.n, salt=2, count=2)
    for label, f in funcs:
        for name in ("cor1a", "cor1c", "cor1c_sd"):
            out.append(_tag(verify_identity(name, f, cfg.samples, cfg.scheme, cfg.tol, cfg.seed), label))
    # the non-regular witness must fail dbar f = (1-n) f'_s, and by a wide margin
    out.append(_tag(verify_identity("cor1a", conj_slice(sig), cfg.samples, cfg.scheme,
                                    cfg.tol, cfg.seed, expected=False), "x^c"))
    constant = PolynomialSlice([Multivector.scalar(sig, 1.0) + Multivector.blade(sig, 1) * 0.5])
    identity = PolynomialSlice.monomial(sig, 1)
    out.append(_tag(verify_identity("cor1b", constant, cfg.samples, cfg.scheme, cfg.tol, cfg.seed),
                    "constant"))
    out.append(_tag(verify_identity("cor1b", identity, cfg.samples, cfg.scheme, cfg.tol, cfg.seed), "x"))
    out.append(_tag(verify_identity("cor1b", funcs[1][1], cfg.samples, cfg.scheme, cfg.tol, cfg.seed),
                    funcs[1][0]))
    return out


# -- section: Laplacian of slice functions (exact) -------------------------------

def _falling_odd(n: int, k: int, start: int) -> int:
    """prod_{j<k} (n - start - 2j)."""
    out = 1
    for j in range(k):
        out *= n - start - 2 * j
    return out


def suite_laplacian(cfg: SuiteConfig, max_m: int = 8) -> list[IdentityReport]:
    n = cfg.n
    a_cases, b_cases, c_cases = [], [], []
    r2 = CoordPoly.radius_sq(n)
    for m in range(1, max_m + 1):
        sd = spherical_derivative_poly(m, n)
        sv = spherical_value_poly(m, n)
        _, d2g2 = power_g_polys(m, n, d_s=1)
        a_cases.append((f"m={m}", sd.laplacian() - d2g2 * (2 * (n - 3))))
        lap = sd
        for k in range(1, (n - 1) // 2 + 1):
            lap = lap.laplacian()
            _, dkg2 = power_g_polys(m, n, d_s=k)
            b_cases.append((f"m={m},k={k}", lap - dkg2 * (2 ** k * _falling_odd(n, k, 3))))
        c_cases.append((f"m={m}", r2 * sd.laplacian() - (sv.partial(0) - sd) * (n - 3)))
    return [exact_report("lap_sd", n, a_cases), exact_report("iterlap_sd", n, b_cases),
            exact_report("lap_sd_cleared", n, c_cases)]


def _twisted_identity(sig: Signature) -> SliceFunction:
    """x (1 - (Im x/|Im x|) e1): stem F1 = alpha + beta e1, F2 = beta - alpha e1 off the axis."""
    e1 = Multivector.blade(sig, 1)
    one = Multivector.scalar(sig, 1.0)
    return SliceFunction(StemFunction(
        sig,
        lambda a, b: one * a + e1 * b,
        lambda a, b: one * b - e1 * a,
        domain=Plane(off_axis=True),
        partials=lambda a, b: (one, -e1, e1, one),
        holomorphic=True,
    ))


def suite_cor2(cfg: SuiteConfig, max_m: int = 10) -> list[IdentityReport]:
    n = 3
    harm, fueter, bih, d_case = [], [], [], []
    for m in range(1, 13):
        harm.append((f"m={m}", spherical_derivative_poly(m, n).laplacian()))
    for m in range(1, max_m + 1):
        p = expand_power(m, n)
        lap = p.laplacian()
        fueter.append((f"m={m}", lap.apply_cr()))
        fueter.append((f"m={m} (commuted)", p.apply_cr().laplacian()))
        bih.append((f"m={m}", lap.laplacian()))
        d_case.append((f"m={m}", lap + slice_derivative_of_sd_poly(m, n) * 4))
    # worked examples with x^3 and (x^c)^3
    x3 = expand_power(3, n)
    x0 = CoordPoly.variable(n, 0)
    sd3 = spherical_derivative_poly(3, n)
    xc3 = expand_conj_power(3, n)
    # for a slice-preserving f, (f - f^c)/2 = Im(x) f'_s
    im_sd_c3 = (xc3 - xc3.conj()) * Fraction(1, 2)
    xi = [CoordPoly.variable(n, i) for i in range(1, 4)]
    sd3_form = x0 * x0 * 3 - sum((v * v for v in xi), CoordPoly.zero(n))
    examples = [
        ("dbar x^3 = -2(3x0^2 - |x'|^2)", x3.apply_cr() + sd3_form * 2),
        ("(x^3)'_s = 3x0^2 - |x'|^2", sd3 - sd3_form),
        ("lap x^3 = -4(3x0 + Im x)", x3.laplacian() + (x0 * 3 + CoordPoly.imag(n)) * 4),
        ("((x^c)^3)'_s = -(x^3)'_s", CoordPoly.imag(n) * sd3_form * -1 - im_sd_c3),
        ("lap (x^c)^3 = 4(-3x0 + Im x)", xc3.laplacian() - (x0 * -3 + CoordPoly.imag(n)) * 4),
        # not monogenic: the residual is 1 exactly when dbar lap (x^c)^3 vanishes
        ("dbar lap (x^c)^3 != 0", CoordPoly.constant(n, int(xc3.laplacian().apply_cr().is_zero()))),
    ]
    return [exact_report("cor2a", n, harm), exact_report("cor2b", n, fueter),
            exact_report("cor2c", n, bih), exact_report("cor2d", n, d_case),
            exact_report("cor2_examples", n, examples), *suite_twisted_identity(cfg)]


def suite_twisted_identity(cfg: SuiteConfig, samples: int = 50) -> list[IdentityReport]:
    """Example with f'_s = 1 - (x0/|Im x|) e1: closed forms vs numeric operators."""
    sig = Signature(3)
    f = _twisted_identity(sig)
    basis = paravector_basis(3)
    field = EvaluableField(3, f, basis)
    sd_field = EvaluableField(3, f.spherical_derivative_function(), basis)
    rng = cfg.rng(30)
    pts = sample_points(rng, 4, samples, beta=(0.3, 2.0))
    e1 = Multivector.blade(sig, 1)

    def sd_closed(p):
        r = float(np.linalg.norm(p[1:]))
        return Multivector.scalar(sig, 1.0) - e1 * (p[0] / r)

    def lap_closed(p):
        x0, x1, x2, x3 = p
        r = float(np.linalg.norm(p[1:]))
        v = Multivector.from_dict(sig, {0: -x0 * x1, 1: x1 * x1 + x2 * x2 + x3 * x3,
                                        3: -x0 * x2, 5: -x0 * x3})
        return v * (2.0 / r ** 3)

    # 1/|Im x|^3 terms have large fourth derivatives; a finer second-difference step
    # keeps truncation below the 1e-4 target
    scheme = FDScheme(h=cfg.h, laplacian_h=SINGULAR_LAPLACIAN_H)
    return [
        pointwise_report("twisted_sd", 3, cfg.seed, pts,
                         lambda p: (sd_field(p) - sd_closed(p)).abs(), 1e-10),
        pointwise_report("twisted_laplacian", 3, cfg.seed, pts,
                         lambda p: (apply_laplacian_fd(field, p, scheme) - lap_closed(p)).abs(), 1e-4),
        pointwise_report("twisted_sd_harmonic", 3, cfg.seed, pts,
                         lambda p: apply_laplacian_fd(sd_field, p, scheme).abs(), 1e-3),
    ]


def suite_cor_n_odd(cfg: SuiteConfig, max_m: int = 8) -> list[IdentityReport]:
    n = cfg.n if cfg.n > 3 and cfg.n % 2 == 1 else 5
    a_cases, b_cases, c_cases = [], [], []
    for m in range(1, max_m + 1):
        sd = spherical_derivative_poly(m, n).iterated_laplacian((n - 3) // 2)
        a_cases.append((f"m={m}", sd.laplacian()))
        lap = expand_power(m, n).iterated_laplacian((n - 1) // 2)
        b_cases.append((f"m={m}", lap.apply_cr()))
        c_cases.append((f"m={m}", lap.laplacian()))
    return [exact_report("cor_n_odd_a", n, a_cases), exact_report("cor_n_odd_b", n, b_cases),
            exact_report("cor_n_odd_c", n, c_cases)]


def suite_vs(cfg: SuiteConfig, max_m: int = 8) -> list[IdentityReport]:
    n = cfg.n
    a_cases, b_cases, c_cases, d_cases = [], [], [], []
    for m in range(1, max_m + 1):
        sv = spherical_value_poly(m, n)
        sd = spherical_derivative_poly(m, n)
        p = expand_power(m, n)
        lap_p = p.laplacian()
        d2g1, _ = power_g_polys(m, n, d_s=1)
        a_cases.append((f"m={m}", sv.laplacian() - d2g1 * (2 * (n - 1))))
        a_cases.append((f"m={m} (sv of lap)", sv.laplacian() - (lap_p + lap_p.conj()) * Fraction(1, 2)))
        lap = sv
        for k in range(1, (n - 1) // 2 + 1):
            lap = lap.laplacian()
            dkg1, _ = power_g_polys(m, n, d_s=k)
            b_cases.append((f"m={m},k={k}", lap - dkg1 * (2 ** k * _falling_odd(n, k, 1))))
        c_cases.append((f"m={m}", sv.laplacian() - sd.partial(0) * (1 - n)))
        if n % 2 == 1:
            d_cases.append((f"m={m}", sv.iterated_laplacian((n + 1) // 2)))
    reports = [exact_report("lap_sv", n, a_cases), exact_report("iterlap_sv", n, b_cases),
               exact_report("lap_sv_d0", n, c_cases)]
    if d_cases:
        reports.append(exact_report("sv_polyharmonic", n, d_cases))
    return reports


# -- section: four-dimensional harmonics -----------------------------------------

def _unit4(rng) -> np.ndarray:
    v = rng.standard_normal(4)
    return v / np.linalg.norm(v)


def _ball4(rng, r_max: float, r_min: float = 0.0) -> np.ndarray:
    return _unit4(rng) * rng.uniform(r_min, r_max)


def _zonal_reports(cfg: SuiteConfig, algebra: str, prefix: str) -> list[IdentityReport]:
    n = 3 if algebra == "R3" else 2
    rng = cfg.rng(40 if algebra == "R3" else 41)
    exact_one = hm.to_mv((1, 0, 0, 0), algebra)
    z11 = [(f"m={m}", CoordPoly.constant(n, hm.zonal(m - 1, exact_one, exact_one, algebra) - m * m))
           for m in range(1, 21)]
    basis = hm.ALGEBRAS[algebra][1]
    harm = [(f"m={m}", spherical_derivative_poly(m, n, basis).laplacian()) for m in range(1, 13)]
    dbar = [(f"m={m}", expand_power(m, n, basis).apply_cr()
             + spherical_derivative_poly(m, n, basis) * 2) for m in range(1, 11)]

    sphere = [_unit4(rng) for _ in range(100)]
    poles = [_unit4(rng) for _ in range(100)]

    def gegen(i, p):
        return max(abs(float(hm.zonal(m - 1, p, (1, 0, 0, 0), algebra)) - m * hm.gegenbauer_c1(m - 1, p[0]))
                   for m in range(1, 21))

    def rotated(i, p):
        a = poles[i]
        return max(abs(float(hm.zonal(m, p, a, algebra)) - hm.zonal_from_gegenbauer(m, p, a))
                   / (m + 1) ** 2 for m in range(0, 21))

    def real_valued(i, p):
        return max(hm.zonal_mv(m, p, poles[i], algebra).nonscalar().abs() for m in range(0, 21))

    ball = [_ball4(rng, 1.0) for _ in range(100)]

    def reconstruct(i, p):
        x = hm.to_mv(p, algebra).to_float()
        return max((hm.power_from_zonal(m, x, algebra) - mv_power(x, m)).abs() for m in range(1, 11))

    shells = [_ball4(rng, 2.0, 0.5) for _ in range(100)]

    def kelvin(i, p):
        worst = 0.0
        for m in range(1, 9):
            k = hm.kelvin(hm.power_sd_field(m, algebra))
            neg = power_spherical_derivative(-m, hm.to_mv(p, algebra).to_float())
            worst = max(worst, (neg + k(p)).abs())
        return worst

    def kelvin_harmonic(i, p):
        scheme = FDScheme(h=cfg.h, laplacian_h=SINGULAR_LAPLACIAN_H)
        return max(apply_laplacian_fd(hm.power_sd_field(-m, algebra), p, scheme).abs()
                   for m in range(1, 5))

    def rep(name, pts, fn, tol):
        res = [fn(i, p) for i, p in enumerate(pts)]
        return IdentityReport.from_residuals(prefix + name, n, cfg.seed, pts, res, tol)

    return [
        exact_report(prefix + "zonal_Z11", n, z11),
        exact_report(prefix + "zonal_harmonic", n, harm),
        exact_report(prefix + "zonal_dbar", n, dbar),
        rep("zonal_gegenbauer", sphere, gegen, 1e-10),
        rep("zonal_pole", sphere, rotated, 1e-10),
        rep("zonal_real", sphere, real_valued, 1e-10),
        rep("zonal_power", ball, reconstruct, 1e-10),
        rep("zonal_kelvin", shells, kelvin, 1e-10),
        rep("zonal_kelvin_harmonic", shells[:20], kelvin_harmonic, 1e-3),
    ]


def _koebe_reports(cfg: SuiteConfig, algebra: str, prefix: str) -> list[IdentityReport]:
    n = 3 if algebra == "R3" else 2
    rng = cfg.rng(50 if algebra == "R3" else 51)
    sig = Signature(n)
    f = hm.koebe_slice(sig)
    xs = [_ball4(rng, 0.9) for _ in range(100)]
    poles = [_unit4(rng) for _ in range(100)]

    def kernel(i, p):
        a = poles[i]
        y = hm.to_mv(p, algebra) * hm.to_mv(a, algebra).conj()
        return abs(float(f.spherical_derivative(y).scalar_part) - hm.poisson(p, a))

    def koebe_value(i, p):
        x = hm.to_mv(p, algebra)
        return (hm.koebe(x) - f(x)).abs() / (1 + f(x).abs())

    inner = [_ball4(rng, 0.7) for _ in range(20)]

    def partial_sums(i, p):
        rows = hm.poisson_partial_sums(p, 60, algebra=algebra)
        # residual > 0 only if some partial sum leaves its tail-bound envelope
        # (relative to the bound: at real points the bound is attained exactly)
        return max(max(r["error"] - r["bound"], 0.0) / max(1.0, r["bound"]) for r in rows)

    def rep(name, pts, fn, tol):
        res = [fn(i, p) for i, p in enumerate(pts)]
        return IdentityReport.from_residuals(prefix + name, n, cfg.seed, pts, res, tol)

    return [rep("koebe_poisson", xs, kernel, 1e-10),
            rep("koebe_value", xs, koebe_value, 1e-10),
            rep("poisson_partial_sums", inner, partial_sums, 1e-12)]


def suite_zonal(cfg: SuiteConfig) -> list[IdentityReport]:
    return _zonal_reports(cfg, "R3", "")


def suite_koebe(cfg: SuiteConfig) -> list[IdentityReport]:
    return _koebe_reports(cfg, "R3", "")


# -- section: quaternions ------------------------------------------------------------

def _quat_functions(cfg: SuiteConfig, salt: int, count: int = 3) -> list[tuple[str, SliceFunction]]:
    sig = Signature(2)
    rng = cfg.rng(salt)
    ex = PolynomialSlice([Multivector.zero(sig), Multivector.blade(sig, 1),
                          Multivector.zero(sig), Multivector.scalar(sig, 1.0)])
    degrees = [5] + [int(d) for d in rng.integers(1, 6, size=count - 1)]
    return [("x^3 + x i", ex)] + [(f"random(deg={d})", random_polynomial(rng, sig, d)) for d in degrees]


def suite_propH(cfg: SuiteConfig) -> list[IdentityReport]:
    out = []
    for label, f in _quat_functions(cfg, salt=60):
        for name in ("H_propH_a", "H_propH_b"):
            out.append(_tag(quat.verify_identity_H(name, f, cfg.samples, cfg.scheme, cfg.tol, cfg.seed),
                            label))
    return out


def suite_corH(cfg: SuiteConfig) -> list[IdentityReport]:
    sig = Signature(2)
    out = []
    funcs = _quat_functions(cfg, salt=61, count=2)
    for label, f in funcs:
        for name in ("H_corH_a", "H_corH_c", "H_corH_c_sd"):
            out.append(_tag(quat.verify_identity_H(name, f, cfg.samples, cfg.scheme, cfg.tol, cfg.seed),
                            label))
    out.append(_tag(quat.verify_identity_H("H_corH_a", conj_slice(sig), cfg.samples, cfg.scheme,
                                           cfg.tol, cfg.seed, expected=False), "conj(x)"))
    out.append(_tag(quat.verify_identity_H("H_corH_b", PolynomialSlice.monomial(sig, 1), cfg.samples,
                                           cfg.scheme, cfg.tol, cfg.seed), "x"))
    # exact witness: dbar_CRF x = 1 + i^2 + j^2 + k^2 = -2
    x = CoordPoly.identity(2, quat.QUAT_BASIS)
    out.append(exact_report("H_corH_b_witness", 2, [("dbar_CRF x + 2", x.apply_cr() + 2)]))
    # only constants lie in both kernels, degree <= 6, exact rank over Q
    dims = joint_kernel_dimension(6, 2, quat.QUAT_BASIS)
    cases = [(f"degree={d}", CoordPoly.constant(2, dim - (4 if d == 0 else 0))) for d, dim in dims.items()]
    out.append(exact_report("H_corH_b_kernel", 2, cases))
    return out


def suite_teo12(cfg: SuiteConfig) -> list[IdentityReport]:
    basis = quat.QUAT_BASIS
    harm, bih, fueter, d_case = [], [], [], []
    for m in range(1, 13):
        harm.append((f"m={m}", spherical_derivative_poly(m, 2, basis).laplacian()))
    for m in range(1, 11):
        lap = expand_power(m, 2, basis).laplacian()
        bih.append((f"m={m}", lap.laplacian()))
        fueter.append((f"m={m}", lap.apply_cr()))
        d_case.append((f"m={m}", lap + slice_derivative_of_sd_poly(m, 2, basis) * 4))
    x3 = PolynomialSlice.monomial(Signature(2), 3)
    numeric = quat.verify_identity_H("H_teo12_c", x3, cfg.samples, cfg.scheme, 1e-4, cfg.seed)
    out = [exact_report("H_teo12_a", 2, harm), exact_report("H_teo12_b_biharmonic", 2, bih),
           exact_report("H_teo12_b_fueter", 2, fueter), exact_report("H_teo12_c_exact", 2, d_case),
           numeric]
    out += _zonal_reports(cfg, "H", "H_")
    out += _koebe_reports(cfg, "H", "H_")
    return out


SUITES: dict[str, Callable[[SuiteConfig], list[IdentityReport]]] = {
    "teo2": suite_teo2,
    "cor1": suite_cor1,
    "laplacian": suite_laplacian,
    "cor2": suite_cor2,
    "cor_n_odd": suite_cor_n_odd,
    "vs": suite_vs,
    "zonal": suite_zonal,
    "koebe": suite_koebe,
    "propH": suite_propH,
    "corH": suite_corH,
    "teo12": suite_teo12,
}


def run_suite(name: str, cfg: SuiteConfig) -> dict:
    reports = SUITES[name](cfg)
    return {
        "suite": name,
        "n": cfg.n,
        "pass": all(r.ok for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
