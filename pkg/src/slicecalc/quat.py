"""Quaternions as R_2 with e1 = i, e2 = j, e12 = k.

The quadratic cone of R_2 is the whole algebra, so slice functions live on
all of H and the operators below differentiate in all four coordinates.
"""
from __future__ import annotations

import numpy as np

from .clifford import Multivector, Signature
from .diffops import (
    FDScheme,
    EvaluableField,
    IdentityReport,
    _draw,
    _imag,
    apply_laplacian_fd,
    cr_from_grad,
    fd_gradient,
    gamma_from_grad,
    kernel_equivalence_report,
    thetabar_from_grad,
)
from .polycalc import CoordPoly, expand_power, slice_derivative_of_sd_poly, spherical_derivative_poly
from .slicefn import SliceFunction, sd_derivative

QUAT_BASIS = (0, 1, 2, 3)
QUAT_NAMES = {1: "i", 2: "j", 3: "k"}
H = Signature(2)


def quaternion(x0, x1=0, x2=0, x3=0, regime: str | None = None) -> Multivector:
    return Multivector.from_coords(2, [x0, x1, x2, x3], QUAT_BASIS, regime)


def components(q: Multivector) -> tuple:
    return q.coords(QUAT_BASIS)


def quat_str(q: Multivector) -> str:
    names = ("", "i", "j", "k")
    parts = []
    for name, c in zip(names, components(q)):
        if c != 0:
            parts.append(f"{c}{'*' + name if name else ''}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def field_H(f) -> EvaluableField:
    """Wrap a callable on R_2 (e.g. a SliceFunction) as a field on H."""
    return EvaluableField(2, f, QUAT_BASIS)


def _field(f) -> EvaluableField:
    return f if isinstance(f, EvaluableField) else field_H(f)


def crf(f, x, scheme: FDScheme | None = None) -> Multivector:
    """Cauchy-Riemann-Fueter operator d_0 + i d_1 + j d_2 + k d_3."""
    fl = _field(f)
    x = np.asarray(x, dtype=float)
    return cr_from_grad(fl, x, fd_gradient(fl, x, scheme), +1)


def crf_conj(f, x, scheme: FDScheme | None = None) -> Multivector:
    fl = _field(f)
    x = np.asarray(x, dtype=float)
    return cr_from_grad(fl, x, fd_gradient(fl, x, scheme), -1)


def thetabar_H(f, x, scheme: FDScheme | None = None, min_imag: float = 0.1) -> Multivector:
    fl = _field(f)
    x = np.asarray(x, dtype=float)
    return thetabar_from_grad(fl, x, fd_gradient(fl, x, scheme), +1, min_imag)


def theta_H(f, x, scheme: FDScheme | None = None, min_imag: float = 0.1) -> Multivector:
    fl = _field(f)
    x = np.asarray(x, dtype=float)
    return thetabar_from_grad(fl, x, fd_gradient(fl, x, scheme), -1, min_imag)


def gamma_H(f, x, scheme: FDScheme | None = None) -> Multivector:
    """-i L_23 + j L_13 - k L_12, i.e. -sum_{a<b} u_a u_b L_ab with u = (i, j, k)."""
    fl = _field(f)
    x = np.asarray(x, dtype=float)
    return gamma_from_grad(fl, x, fd_gradient(fl, x, scheme))


def laplacian_H(f, x, scheme: FDScheme | None = None) -> Multivector:
    return apply_laplacian_fd(_field(f), x, scheme)


# -- exact polynomial side -----------------------------------------------------------

def expand_power_H(m: int) -> CoordPoly:
    return expand_power(m, 2, QUAT_BASIS)


def spherical_derivative_poly_H(m: int) -> CoordPoly:
    return spherical_derivative_poly(m, 2, QUAT_BASIS)


def sd_derivative_poly_H(m: int) -> CoordPoly:
    return slice_derivative_of_sd_poly(m, 2, QUAT_BASIS)


# -- identity reports ------------------------------------------------------------------

H_IDENTITIES = ("propH_a", "propH_b", "corH_a", "corH_b", "corH_c", "corH_c_sd", "teo12_c")


def _residual(name: str, f: SliceFunction, fl: EvaluableField, sdl: EvaluableField,
              x: np.ndarray, scheme: FDScheme) -> float:
    sd = sdl(x)
    if name == "teo12_c":
        lhs = apply_laplacian_fd(fl, x, scheme)
        rhs = sd_derivative(f, fl.point(x)) * -4
        return (lhs - rhs).abs()
    grad = fd_gradient(fl, x, scheme)
    if name == "propH_a":
        im, _ = _imag(fl, x)
        lhs, rhs = gamma_from_grad(fl, x, grad), im * sd * 2
    elif name == "propH_b":
        lhs = cr_from_grad(fl, x, grad, +1) - thetabar_from_grad(fl, x, grad, +1)
        rhs = sd * -2
    elif name == "corH_a":
        lhs, rhs = cr_from_grad(fl, x, grad, +1), sd * -2
    elif name == "corH_c":
        lhs = cr_from_grad(fl, x, grad, -1) - thetabar_from_grad(fl, x, grad, -1)
        rhs = sd * 2
    else:  # corH_c_sd
        sgrad = fd_gradient(sdl, x, scheme)
        lhs = thetabar_from_grad(sdl, x, sgrad, -1)
        rhs = cr_from_grad(sdl, x, sgrad, -1)
    return (lhs - rhs).abs()


def verify_identity_H(name: str, f: SliceFunction, samples=200, scheme: FDScheme | None = None,
                      tol: float = 1e-5, seed: int | None = 42, expected: bool = True) -> IdentityReport:
    """Residual report for the quaternionic identities; names may carry the ``H_`` prefix."""
    short = name[2:] if name.startswith("H_") else name
    if short not in H_IDENTITIES:
        raise KeyError(f"unknown identity {name!r}; known: {', '.join('H_' + s for s in H_IDENTITIES)}")
    if f.n != 2:
        raise ValueError("quaternionic identities need a slice function over R_2")
    scheme = scheme or FDScheme()
    fl = field_H(f)
    points, seed = _draw(samples, 4, seed)
    if short == "corH_b":
        rep = kernel_equivalence_report("H_corH_b", f, fl, points, scheme, tol, seed,
                                        lambda g, x, gr: cr_from_grad(g, x, gr, +1))
        rep.expected = expected
        return rep
    sdl = field_H(f.spherical_derivative_function())
    residuals = [_residual(short, f, fl, sdl, x, scheme) for x in points]
    return IdentityReport.from_residuals("H_" + short, 2, seed, points, residuals, tol, expected)
