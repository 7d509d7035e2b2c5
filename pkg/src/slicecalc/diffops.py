"""Finite-difference differential operators and residual reports.

Fields are evaluated on points given by real coordinates ``(x_0, ..., x_N)``;
coordinate ``x_i`` sits on the unit blade ``basis[i]`` (paravector basis of
R_n by default).  All first-order operators are assembled from one shared
central-difference gradient.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .clifford import CliffordError, Multivector, Signature, mv_product, paravector_basis
from .slicefn import DomainError, SliceFunction

MIN_IMAG = 0.1


@dataclass(frozen=True)
class FDScheme:
    h: float = 1e-4
    laplacian_h: float = 1e-3
    scale_by_point: bool = False
    order: int = 2

    def __post_init__(self):
        if self.h <= 0 or self.laplacian_h <= 0:
            raise ValueError("finite-difference steps must be positive")
        if self.order != 2:
            raise ValueError("only second-order central differences are implemented")

    def step(self, x: np.ndarray, second: bool = False) -> float:
        h = self.laplacian_h if second else self.h
        if self.scale_by_point:
            h *= 1.0 + float(np.linalg.norm(x))
        return h


class EvaluableField:
    """A map from coordinates to Multivectors, with an optional domain predicate."""

    def __init__(self, n: int, fn: Callable[[Multivector], Multivector],
                 basis: Sequence[int] | None = None,
                 domain: Callable[[np.ndarray], bool] | None = None):
        self.n = n
        self.fn = fn
        self.basis = tuple(basis) if basis is not None else paravector_basis(n)
        self.domain = domain
        self.sig = Signature(n)

    @property
    def nvars(self) -> int:
        return len(self.basis)

    def point(self, coords: Sequence[float]) -> Multivector:
        return Multivector.from_coords(self.n, [float(c) for c in coords], self.basis, "float")

    def __call__(self, coords) -> Multivector:
        v = self.fn(self.point(coords))
        if not isinstance(v, Multivector):
            v = Multivector.scalar(self.sig, v)
        return v

    def contains(self, coords) -> bool:
        return self.domain is None or bool(self.domain(np.asarray(coords, dtype=float)))

    def unit(self, i: int) -> Multivector:
        return Multivector.blade(self.sig, self.basis[i])

    @classmethod
    def from_slice(cls, f: SliceFunction, basis=None, domain=None) -> "EvaluableField":
        return cls(f.n, f, basis, domain)

    @classmethod
    def from_callable(cls, n: int, fn, basis=None, domain=None) -> "EvaluableField":
        return cls(n, fn, basis, domain)


def _as_point(x) -> np.ndarray:
    if isinstance(x, Multivector):
        raise TypeError("pass coordinates, not a Multivector")
    return np.asarray(x, dtype=float)


def _check_margin(f: EvaluableField, x: np.ndarray, h: float):
    if len(x) != f.nvars:
        raise CliffordError(f"expected {f.nvars} coordinates, got {len(x)}")
    if f.domain is None:
        return
    if not f.contains(x):
        raise DomainError(f"point {x.tolist()} outside the field's domain")
    for i in range(f.nvars):
        for s in (-2.0, 2.0):
            y = x.copy()
            y[i] += s * h
            if not f.contains(y):
                raise DomainError(f"finite-difference margin {2 * h:g} violated at {x.tolist()}")


def fd_partial(f: EvaluableField, x, i: int, scheme: FDScheme | None = None) -> Multivector:
    """(f(x + h u_i) - f(x - h u_i)) / (2h)."""
    scheme = scheme or FDScheme()
    x = _as_point(x)
    h = scheme.step(x)
    _check_margin(f, x, h)
    xp, xm = x.copy(), x.copy()
    xp[i] += h
    xm[i] -= h
    return (f(xp) - f(xm)) / (2 * h)


def fd_gradient(f: EvaluableField, x, scheme: FDScheme | None = None) -> list[Multivector]:
    scheme = scheme or FDScheme()
    x = _as_point(x)
    h = scheme.step(x)
    _check_margin(f, x, h)
    out = []
    for i in range(f.nvars):
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        out.append((f(xp) - f(xm)) / (2 * h))
    return out


# -- operators assembled from a gradient ------------------------------------------

def _imag(f: EvaluableField, x: np.ndarray) -> tuple[Multivector, float]:
    im = Multivector.zero(f.sig)
    for i in range(1, f.nvars):
        im = im + f.unit(i) * float(x[i])
    return im, float(np.sum(x[1:] ** 2))


def cr_from_grad(f, x, grad, sign: int = 1) -> Multivector:
    out = grad[0]
    for i in range(1, f.nvars):
        term = mv_product(f.unit(i), grad[i])
        out = out + term if sign > 0 else out - term
    return out


def thetabar_from_grad(f, x, grad, sign: int = 1, min_imag: float = MIN_IMAG) -> Multivector:
    im, r2 = _imag(f, x)
    if math.sqrt(r2) < min_imag:
        raise DomainError(f"|Im(x)| = {math.sqrt(r2):.3g} is below {min_imag}")
    radial = Multivector.zero(f.sig)
    for i in range(1, f.nvars):
        radial = radial + grad[i] * float(x[i])
    term = mv_product(im, radial) / r2
    return grad[0] + term if sign > 0 else grad[0] - term


def gamma_from_grad(f, x, grad) -> Multivector:
    out = Multivector.zero(f.sig)
    for i in range(1, f.nvars):
        for j in range(i + 1, f.nvars):
            lij = grad[j] * float(x[i]) - grad[i] * float(x[j])
            out = out - mv_product(mv_product(f.unit(i), f.unit(j)), lij)
    return out


def apply_cr_fd(f, x, scheme=None) -> Multivector:
    """dbar f = d_0 f + sum_i u_i d_i f."""
    x = _as_point(x)
    return cr_from_grad(f, x, fd_gradient(f, x, scheme), +1)


def apply_cr_conj_fd(f, x, scheme=None) -> Multivector:
    """d f = d_0 f - sum_i u_i d_i f."""
    x = _as_point(x)
    return cr_from_grad(f, x, fd_gradient(f, x, scheme), -1)


def apply_thetabar_fd(f, x, scheme=None, min_imag: float = MIN_IMAG) -> Multivector:
    """thetabar f = d_0 f + Im(x)/|Im(x)|^2 sum_i x_i d_i f."""
    x = _as_point(x)
    return thetabar_from_grad(f, x, fd_gradient(f, x, scheme), +1, min_imag)


def apply_theta_fd(f, x, scheme=None, min_imag: float = MIN_IMAG) -> Multivector:
    x = _as_point(x)
    return thetabar_from_grad(f, x, fd_gradient(f, x, scheme), -1, min_imag)


def apply_gamma_fd(f, x, scheme=None) -> Multivector:
    """Gamma f = -sum_{i<j} u_i u_j (x_i d_j f - x_j d_i f)."""
    x = _as_point(x)
    return gamma_from_grad(f, x, fd_gradient(f, x, scheme))


def apply_laplacian_fd(f, x, scheme=None) -> Multivector:
    scheme = scheme or FDScheme()
    x = _as_point(x)
    h = scheme.step(x, second=True)
    _check_margin(f, x, h)
    center = f(x)
    out = Multivector.zero(f.sig)
    for i in range(f.nvars):
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        out = out + (f(xp) - center * 2 + f(xm))
    return out / (h * h)


# -- sampling -------------------------------------------------------------------------

def sample_unit_imaginary(rng: np.random.Generator, dim: int) -> np.ndarray:
    while True:
        v = rng.standard_normal(dim)
        r = np.linalg.norm(v)
        if r > 1e-8:
            return v / r


def sample_points(rng: np.random.Generator, nvars: int, count: int,
                  alpha=(-2.0, 2.0), beta=(0.1, 2.0)) -> list[np.ndarray]:
    """x = alpha + beta J, J uniform on the unit sphere of the imaginary coordinates."""
    pts = []
    for _ in range(count):
        a = rng.uniform(*alpha)
        b = rng.uniform(*beta)
        J = sample_unit_imaginary(rng, nvars - 1)
        pts.append(np.concatenate([[a], b * J]))
    return pts


# -- identity reports -------------------------------------------------------------------

@dataclass
class IdentityReport:
    identity: str
    n: int
    seed: int | None
    samples: int
    tol: float
    max_residual: float
    mean_residual: float
    passed: bool
    failures: list = field(default_factory=list)
    residuals: list = field(default_factory=list, repr=False)
    expected: bool = True

    @property
    def ok(self) -> bool:
        """True when the outcome matches what the report was run to show."""
        return self.passed == self.expected

    def to_dict(self, detail: bool = False) -> dict:
        d = {
            "identity": self.identity,
            "n": self.n,
            "seed": self.seed,
            "samples": self.samples,
            "tol": self.tol,
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "pass": self.passed,
            "expected": self.expected,
            "failures": self.failures,
        }
        if detail:
            d["residuals"] = self.residuals
        return d

    def to_json(self, detail: bool = False) -> str:
        return json.dumps(self.to_dict(detail), sort_keys=True)

    @classmethod
    def from_residuals(cls, identity: str, n: int, seed, points, residuals, tol: float,
                       expected: bool = True, max_failures: int = 20) -> "IdentityReport":
        residuals = [float(r) for r in residuals]
        failures = [{"x": _point_repr(p), "residual": r}
                    for p, r in zip(points, residuals) if not r < tol][:max_failures]
        mx = max(residuals, default=0.0)
        mean = sum(residuals) / len(residuals) if residuals else 0.0
        return cls(identity, n, seed, len(residuals), tol, mx, mean, mx < tol,
                   failures, residuals, expected)


def _point_repr(p):
    if isinstance(p, np.ndarray):
        return [float(v) for v in p]
    return p


def _spherical_derivative_field(f: SliceFunction, basis) -> EvaluableField:
    return EvaluableField(f.n, f.spherical_derivative_function(), basis)


def _residuals_clifford(name: str, f: SliceFunction, field_: EvaluableField,
                        sd_field: EvaluableField, x: np.ndarray, scheme: FDScheme) -> float:
    n = f.n
    grad = fd_gradient(field_, x, scheme)
    sd = sd_field(x)
    im, _ = _imag(field_, x)
    if name == "teo2a":
        lhs = gamma_from_grad(field_, x, grad)
        rhs = mv_product(im, sd) * (n - 1)
    elif name == "teo2b":
        lhs = cr_from_grad(field_, x, grad, +1) - thetabar_from_grad(field_, x, grad, +1)
        rhs = sd * (1 - n)
    elif name == "cor1a":
        lhs = cr_from_grad(field_, x, grad, +1)
        rhs = sd * (1 - n)
    elif name == "cor1c":
        lhs = cr_from_grad(field_, x, grad, -1) - thetabar_from_grad(field_, x, grad, -1)
        rhs = sd * (n - 1)
    elif name == "cor1c_sd":
        sgrad = fd_gradient(sd_field, x, scheme)
        lhs = thetabar_from_grad(sd_field, x, sgrad, -1)
        rhs = cr_from_grad(sd_field, x, sgrad, -1)
    else:  # pragma: no cover - guarded by caller
        raise KeyError(name)
    return (lhs - rhs).abs()


CLIFFORD_IDENTITIES = ("teo2a", "teo2b", "cor1a", "cor1b", "cor1c", "cor1c_sd")


def _draw(samples, nvars: int, seed) -> tuple[list[np.ndarray], int | None]:
    if isinstance(samples, int):
        rng = np.random.default_rng(seed)
        return sample_points(rng, nvars, samples), seed
    return [np.asarray(p, dtype=float) for p in samples], seed


def kernel_equivalence_report(identity: str, f: SliceFunction, field_: EvaluableField,
                              points, scheme, tol, seed, cr_sign_fn) -> IdentityReport:
    """Check "f in ker(dbar) and ker(thetabar)  <=>  f constant" on samples.

    Per-sample residual is |dbar f| + |thetabar f|; the report passes when the
    equivalence holds on the sample set.
    """
    residuals = []
    values = []
    for x in points:
        grad = fd_gradient(field_, x, scheme)
        residuals.append(cr_sign_fn(field_, x, grad).abs()
                         + thetabar_from_grad(field_, x, grad, +1).abs())
        values.append(field_(x))
    spread = max(((v - values[0]).abs() for v in values), default=0.0)
    in_kernels = max(residuals, default=0.0) < tol
    constant = spread < tol
    passed = in_kernels == constant
    failures = [] if passed else [{"x": _point_repr(points[0]), "residual": float(max(residuals))}]
    mx = float(max(residuals, default=0.0))
    mean = float(sum(residuals) / len(residuals)) if residuals else 0.0
    return IdentityReport(identity, f.n, seed, len(points), tol, mx, mean, passed,
                          failures, [float(r) for r in residuals])


def verify_identity(name: str, f: SliceFunction, samples=200, scheme: FDScheme | None = None,
                    tol: float = 1e-5, seed: int | None = 42, expected: bool = True) -> IdentityReport:
    """Residual report for one of the paravector identities of slice functions.

    ``teo2a``: Gamma f = (n-1) Im(x) f'_s;  ``teo2b``: dbar f - thetabar f = (1-n) f'_s;
    ``cor1a``: dbar f = (1-n) f'_s;  ``cor1b``: both kernels <=> constant;
    ``cor1c``: d f - theta f = (n-1) f'_s;  ``cor1c_sd``: theta f'_s = d f'_s.
    """
    if name not in CLIFFORD_IDENTITIES:
        raise KeyError(f"unknown identity {name!r}; known: {', '.join(CLIFFORD_IDENTITIES)}")
    scheme = scheme or FDScheme()
    basis = paravector_basis(f.n)
    field_ = EvaluableField.from_slice(f, basis)
    points, seed = _draw(samples, len(basis), seed)
    if name == "cor1b":
        rep = kernel_equivalence_report(name, f, field_, points, scheme, tol, seed,
                                        lambda fl, x, g: cr_from_grad(fl, x, g, +1))
        rep.expected = expected
        return rep
    sd_field = _spherical_derivative_field(f, basis)
    residuals = [_residuals_clifford(name, f, field_, sd_field, x, scheme) for x in points]
    return IdentityReport.from_residuals(name, f.n, seed, points, residuals, tol, expected)
