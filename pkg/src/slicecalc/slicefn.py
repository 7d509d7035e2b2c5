"""Stem functions, slice functions and their spherical/slice derivatives.

A stem ``F = F1 + i F2`` on a conjugation-symmetric planar set induces the
slice function ``f(alpha + beta J) = F1(alpha, beta) + J F2(alpha, beta)``.
Because ``F1`` is even and ``F2`` odd in ``beta`` we can also write
``F1 = G1(alpha, beta^2)`` and ``F2 = beta G2(alpha, beta^2)``; polynomial
stems keep ``G1``/``G2`` as exact integer tables, which lets every
evaluation on exact cone points stay rational (no square roots needed).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Callable, Sequence

from .clifford import (
    CliffordError,
    Multivector,
    Signature,
    SignatureMismatch,
    ZeroNormError,
    _require_cone,
    decompose,
    imag_norm_sq,
    imag_part,
    mv_conjugate,
    mv_power,
    mv_product,
    norm,
    trace,
)


class DomainError(CliffordError):
    """Point outside the domain of a stem or too close to a singular set."""


class NotRegularError(CliffordError):
    pass


# -- planar domain descriptors --------------------------------------------------

@dataclass(frozen=True)
class Plane:
    off_axis: bool = False

    def contains(self, alpha: float, beta: float) -> bool:
        return not (self.off_axis and beta == 0)


@dataclass(frozen=True)
class Rectangle:
    """alpha_min < alpha < alpha_max and |beta| < beta_max."""

    alpha_min: float = -math.inf
    alpha_max: float = math.inf
    beta_max: float = math.inf
    off_axis: bool = False

    def contains(self, alpha, beta) -> bool:
        if self.off_axis and beta == 0:
            return False
        return self.alpha_min < alpha < self.alpha_max and abs(beta) < self.beta_max


@dataclass(frozen=True)
class Annulus:
    """r_min < |z - center| < r_max, center on the real axis.

    With ``r_min == 0`` the center itself belongs to the set unless ``punctured``.
    """

    r_min: float = 0.0
    r_max: float = math.inf
    center: float = 0.0
    off_axis: bool = False
    punctured: bool = False

    def contains(self, alpha, beta) -> bool:
        if self.off_axis and beta == 0:
            return False
        r = math.hypot(float(alpha) - self.center, float(beta))
        if r == 0:
            return self.r_min == 0 and not self.punctured and self.r_max > 0
        return self.r_min < r < self.r_max


def punctured_plane(at: float = 0.0) -> Annulus:
    return Annulus(r_min=0.0, r_max=math.inf, center=at, punctured=True)


# -- bivariate integer polynomials for G1/G2 -------------------------------------

def power_g_terms(m: int) -> tuple[dict, dict]:
    """Tables ``{(p, q): c}`` with Re(z^m) = G1(a, b^2), Im(z^m) = b G2(a, b^2).

    ``G(a, s) = sum c * a**p * s**q``.
    """
    g1, g2 = {}, {}
    for k in range(m + 1):
        c = comb(m, k)
        if k % 2 == 0:
            g1[(m - k, k // 2)] = c * (-1) ** (k // 2)
        else:
            g2[(m - k, (k - 1) // 2)] = c * (-1) ** ((k - 1) // 2)
    return g1, g2


def _falling(p: int, d: int) -> int:
    out = 1
    for i in range(d):
        out *= p - i
    return out


def bipoly_derivative(terms: dict, d_alpha: int = 0, d_s: int = 0) -> dict:
    out = {}
    for (p, q), c in terms.items():
        if p < d_alpha or q < d_s:
            continue
        out[(p - d_alpha, q - d_s)] = c * _falling(p, d_alpha) * _falling(q, d_s)
    return out


def bipoly_eval(terms: dict, alpha, s):
    total = 0
    for (p, q), c in terms.items():
        total += c * alpha ** p * s ** q
    return total


# -- stems ------------------------------------------------------------------------

class StemFunction:
    """Closed-form stem: callables ``f1(alpha, beta)``, ``f2(alpha, beta)``.

    ``partials(alpha, beta)`` (optional) returns the planar partial
    derivatives ``(dF1/dalpha, dF2/dalpha, dF1/dbeta, dF2/dbeta)``; without it
    the slice derivatives are unavailable.
    """

    kind = "closed-form"

    def __init__(self, sig: Signature, f1: Callable, f2: Callable, domain=None,
                 partials: Callable | None = None, holomorphic: bool = False):
        self.sig = sig
        self._f1 = f1
        self._f2 = f2
        self.domain = domain if domain is not None else Plane()
        self._partials = partials
        self.holomorphic = holomorphic

    @property
    def regular(self) -> bool:
        return self.holomorphic

    def contains(self, alpha, beta) -> bool:
        return self.domain.contains(alpha, beta)

    def _as_mv(self, v) -> Multivector:
        if isinstance(v, Multivector):
            return v
        return Multivector.scalar(self.sig, v)

    def __call__(self, alpha, beta) -> tuple[Multivector, Multivector]:
        return self._as_mv(self._f1(alpha, beta)), self._as_mv(self._f2(alpha, beta))

    @property
    def differentiable(self) -> bool:
        return self._partials is not None

    def planar_partials(self, alpha, beta):
        if self._partials is None:
            raise NotRegularError("stem has no planar partial derivatives")
        return tuple(self._as_mv(v) for v in self._partials(alpha, beta))

    def dz(self) -> "StemFunction":
        """Stem of dF/dz = (F_alpha - i F_beta) / 2."""
        def f1(a, b):
            f1a, f2a, f1b, f2b = self.planar_partials(a, b)
            return (f1a + f2b) / 2

        def f2(a, b):
            f1a, f2a, f1b, f2b = self.planar_partials(a, b)
            return (f2a - f1b) / 2
        if not self.differentiable:
            raise NotRegularError("stem is not differentiable")
        return StemFunction(self.sig, f1, f2, self.domain, None, self.holomorphic)

    def dzbar(self) -> "StemFunction":
        """Stem of dF/dzbar = (F_alpha + i F_beta) / 2."""
        def f1(a, b):
            f1a, f2a, f1b, f2b = self.planar_partials(a, b)
            return (f1a - f2b) / 2

        def f2(a, b):
            f1a, f2a, f1b, f2b = self.planar_partials(a, b)
            return (f2a + f1b) / 2
        if not self.differentiable:
            raise NotRegularError("stem is not differentiable")
        return StemFunction(self.sig, f1, f2, self.domain, None, False)

    def g_partials(self, alpha, s, k: int = 0, h: float | None = None):
        """``(d^k G1/ds^k, d^k G2/ds^k)`` at ``(alpha, s)`` by central differences in s."""
        if s <= 0:
            raise DomainError("closed-form stems need s = beta^2 > 0")
        alpha, s = float(alpha), float(s)

        def g(si):
            if si <= 0:
                raise DomainError("finite-difference stencil crosses s = 0")
            b = math.sqrt(si)
            f1, f2 = self(alpha, b)
            return f1, f2 / b
        if k == 0:
            return g(s)
        if h is None:
            h = (1e-4 if k == 1 else 1e-3) * (1.0 + s)
        acc1 = acc2 = Multivector.zero(self.sig)
        for j in range(k + 1):
            w = (-1) ** j * comb(k, j)
            v1, v2 = g(s + (k / 2 - j) * h)
            acc1 = acc1 + v1 * w
            acc2 = acc2 + v2 * w
        return acc1 / h ** k, acc2 / h ** k

    # -- factories -------------------------------------------------------------
    @classmethod
    def from_complex(cls, sig: Signature, g: Callable[[complex], complex],
                     dz: Callable | None = None, dzbar: Callable | None = None,
                     coeff: Multivector | None = None, domain=None) -> "StemFunction":
        """Stem ``g(z) * coeff`` for a complex function ``g`` with real symmetry.

        ``dz``/``dzbar`` are the Wirtinger derivatives of ``g``; give both (or
        ``dz`` alone with ``holomorphic``) to enable slice derivatives.
        """
        c = coeff if coeff is not None else Multivector.scalar(sig, 1)

        def f1(a, b):
            return c * g(complex(a, b)).real

        def f2(a, b):
            return c * g(complex(a, b)).imag

        partials = None
        if dz is not None:
            dzb = dzbar if dzbar is not None else (lambda z: 0j)

            def partials(a, b):
                z = complex(a, b)
                gz, gzb = dz(z), dzb(z)
                fa = gz + gzb
                fb = 1j * (gz - gzb)
                return c * fa.real, c * fa.imag, c * fb.real, c * fb.imag
        return cls(sig, f1, f2, domain, partials, holomorphic=dz is not None and dzbar is None)

    @classmethod
    def from_holomorphic(cls, sig, g, dg, coeff=None, domain=None) -> "StemFunction":
        return cls.from_complex(sig, g, dg, None, coeff, domain)


class PolynomialStem(StemFunction):
    """Stem ``F(z) = sum_m z^m a_m`` with Multivector coefficients ``a_m``."""

    kind = "polynomial"

    def __init__(self, coeffs: Sequence[Multivector], domain=None):
        if not coeffs:
            raise CliffordError("a polynomial stem needs at least one coefficient")
        sig = coeffs[0].sig
        for a in coeffs:
            if a.sig != sig:
                raise SignatureMismatch("coefficients must share one signature")
        super().__init__(sig, None, None, domain, None, holomorphic=True)
        self.coeffs = tuple(coeffs)
        self._g = [power_g_terms(m) for m in range(len(coeffs))]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @cached_property
    def _float_coeffs(self):
        return tuple(a.to_float() for a in self.coeffs)

    def _coeffs_for(self, exact: bool):
        if exact:
            if not self.sig.exact:
                raise SignatureMismatch("float polynomial evaluated at an exact point")
            return self.coeffs
        return self.coeffs if not self.sig.exact else self._float_coeffs

    def g_values(self, alpha, s, d_alpha: int = 0, d_s: int = 0, exact: bool | None = None):
        """``(G1, G2)`` (or their partial derivatives) at ``(alpha, s)``."""
        if exact is None:
            exact = not isinstance(alpha, float) and not isinstance(s, float)
        coeffs = self._coeffs_for(exact)
        sig = coeffs[0].sig
        g1 = g2 = Multivector.zero(sig)
        for (t1, t2), a in zip(self._g, coeffs):
            if a.is_zero():
                continue
            v1 = bipoly_eval(bipoly_derivative(t1, d_alpha, d_s), alpha, s)
            v2 = bipoly_eval(bipoly_derivative(t2, d_alpha, d_s), alpha, s)
            if v1:
                g1 = g1 + a * v1
            if v2:
                g2 = g2 + a * v2
        return g1, g2

    def __call__(self, alpha, beta):
        g1, g2 = self.g_values(alpha, beta * beta)
        return g1, g2 * beta

    @property
    def differentiable(self) -> bool:
        return True

    def planar_partials(self, alpha, beta):
        p1, p2 = self.dz()(alpha, beta)
        return p1, p2, -p2, p1

    def dz(self) -> "PolynomialStem":
        return self._derived

    @cached_property
    def _derived(self) -> "PolynomialStem":
        if len(self.coeffs) == 1:
            return PolynomialStem([Multivector.zero(self.sig)], self.domain)
        return PolynomialStem([a * m for m, a in enumerate(self.coeffs) if m > 0], self.domain)

    def dzbar(self) -> "PolynomialStem":
        return PolynomialStem([Multivector.zero(self.sig)], self.domain)

    def g_partials(self, alpha, s, k: int = 0, h=None):
        return self.g_values(alpha, s, 0, k)


class SphericalDerivativeStem(StemFunction):
    """Stem ``(F2 / beta, 0)`` of the spherical derivative of a slice function."""

    def __init__(self, stem: StemFunction):
        super().__init__(stem.sig, None, None, stem.domain, None, holomorphic=False)
        self.base = stem

    def __call__(self, alpha, beta):
        value = _spherical_derivative_from_stem(self.base, alpha, beta)
        return value, Multivector.zero(value.sig)


class SphericalValueStem(StemFunction):
    def __init__(self, stem: StemFunction):
        super().__init__(stem.sig, None, None, stem.domain, None, holomorphic=False)
        self.base = stem

    def __call__(self, alpha, beta):
        f1, _ = self.base(alpha, beta)
        return f1, Multivector.zero(f1.sig)


def _spherical_derivative_from_stem(stem: StemFunction, alpha, beta) -> Multivector:
    if isinstance(stem, PolynomialStem):
        return stem.g_values(alpha, beta * beta)[1]
    if beta != 0:
        return stem(alpha, beta)[1] / beta
    if stem.regular and stem.differentiable:
        # F2(alpha, beta)/beta -> dF2/dbeta(alpha, 0), the slice derivative
        return stem.planar_partials(alpha, 0.0)[3]
    raise NotRegularError("spherical derivative at a real point of a non-regular function")


# -- slice functions --------------------------------------------------------------

def _check_sig(stem: StemFunction, x: Multivector):
    if stem.sig.n != x.sig.n:
        raise SignatureMismatch(f"stem over R_{stem.sig.n}, point in R_{x.sig.n}")


def _poly_point(stem: PolynomialStem, x: Multivector):
    _require_cone(x)
    alpha = x.scalar_part
    s = imag_norm_sq(x)
    if not stem.contains(alpha, math.sqrt(max(float(s), 0.0))):
        raise DomainError("point outside the stem domain")
    return alpha, s


def induce(stem: StemFunction, x: Multivector) -> Multivector:
    """f(x) = F1(alpha, beta) + J F2(alpha, beta) for x = alpha + beta J."""
    _check_sig(stem, x)
    if isinstance(stem, PolynomialStem):
        alpha, s = _poly_point(stem, x)
        g1, g2 = stem.g_values(alpha, s)
        # J F2 = Im(x) G2, no square root required
        return g1 + imag_part(x) * g2
    xf = x.to_float() if x.sig.exact else x
    d = decompose(xf)
    if not stem.contains(d.alpha, d.beta):
        raise DomainError("point outside the stem domain")
    f1, f2 = stem(d.alpha, d.beta)
    if d.J is None:
        return f1
    return f1 + d.J * f2


def spherical_value(f: "SliceFunction | StemFunction", x: Multivector) -> Multivector:
    stem = f.stem if isinstance(f, SliceFunction) else f
    _check_sig(stem, x)
    if isinstance(stem, PolynomialStem):
        alpha, s = _poly_point(stem, x)
        return stem.g_values(alpha, s)[0]
    d = decompose(x.to_float() if x.sig.exact else x)
    if not stem.contains(d.alpha, d.beta):
        raise DomainError("point outside the stem domain")
    return stem(d.alpha, d.beta)[0]


def spherical_derivative(f: "SliceFunction | StemFunction", x: Multivector) -> Multivector:
    stem = f.stem if isinstance(f, SliceFunction) else f
    _check_sig(stem, x)
    if isinstance(stem, PolynomialStem):
        alpha, s = _poly_point(stem, x)
        return stem.g_values(alpha, s)[1]
    d = decompose(x.to_float() if x.sig.exact else x)
    if not stem.contains(d.alpha, d.beta):
        raise DomainError("point outside the stem domain")
    return _spherical_derivative_from_stem(stem, d.alpha, d.beta)


def representation(f: "SliceFunction | StemFunction", x: Multivector) -> Multivector:
    """f°_s(x) + Im(x) f'_s(x)."""
    sv = spherical_value(f, x)
    sd = spherical_derivative(f, x)
    im = imag_part(x)
    if im.sig != sd.sig:
        im = im.to_float()
    return sv + im * sd


def slice_derivative(f: "SliceFunction | StemFunction", x: Multivector) -> Multivector:
    stem = f.stem if isinstance(f, SliceFunction) else f
    return induce(stem.dz(), x)


def slice_derivative_conj(f: "SliceFunction | StemFunction", x: Multivector) -> Multivector:
    stem = f.stem if isinstance(f, SliceFunction) else f
    return induce(stem.dzbar(), x)


def sd_derivative(f: "SliceFunction | StemFunction", x: Multivector) -> Multivector:
    """Slice derivative of f'_s: (1/2) d_1 G2(alpha, s) - Im(x) d_2 G2(alpha, s).

    Closed-form stems use their planar partials, so ``x`` must be non-real.
    """
    stem = f.stem if isinstance(f, SliceFunction) else f
    _check_sig(stem, x)
    if isinstance(stem, PolynomialStem):
        alpha, s = _poly_point(stem, x)
        _, da = stem.g_values(alpha, s, d_alpha=1)
        _, ds = stem.g_values(alpha, s, d_s=1)
        return da / 2 - imag_part(x) * ds
    xf = x.to_float() if x.sig.exact else x
    d = decompose(xf)
    if d.J is None:
        raise DomainError("sd_derivative of a closed-form stem needs a non-real point")
    b = d.beta
    _, f2 = stem(d.alpha, b)
    _, f2a, _, f2b = stem.planar_partials(d.alpha, b)
    d1 = f2a / b
    # d/ds (F2/beta) with s = beta^2
    d2 = (f2b / b - f2 / (b * b)) / (2 * b)
    return d1 / 2 - imag_part(xf) * d2


def g_partials(stem: StemFunction, alpha, s, order_k: int = 0):
    return stem.g_partials(alpha, s, order_k)


class SliceFunction:
    """The slice function induced by a stem; callable on cone elements."""

    def __init__(self, stem: StemFunction):
        self.stem = stem

    @property
    def sig(self) -> Signature:
        return self.stem.sig

    @property
    def n(self) -> int:
        return self.stem.sig.n

    @property
    def regular(self) -> bool:
        return self.stem.regular

    def __call__(self, x: Multivector) -> Multivector:
        return induce(self.stem, x)

    def spherical_value(self, x):
        return spherical_value(self, x)

    def spherical_derivative(self, x):
        return spherical_derivative(self, x)

    def representation(self, x):
        return representation(self, x)

    def slice_derivative(self, x):
        return slice_derivative(self, x)

    def slice_derivative_conj(self, x):
        return slice_derivative_conj(self, x)

    def spherical_derivative_function(self) -> "SliceFunction":
        return SliceFunction(SphericalDerivativeStem(self.stem))

    def spherical_value_function(self) -> "SliceFunction":
        return SliceFunction(SphericalValueStem(self.stem))

    def derivative(self) -> "SliceFunction":
        return SliceFunction(self.stem.dz())

    @classmethod
    def from_complex(cls, sig, g, dz=None, dzbar=None, coeff=None, domain=None):
        return cls(StemFunction.from_complex(sig, g, dz, dzbar, coeff, domain))


class PolynomialSlice(SliceFunction):
    """f(x) = sum_m x^m a_m (coefficients on the right)."""

    def __init__(self, coeffs: Sequence[Multivector], domain=None):
        super().__init__(PolynomialStem(coeffs, domain))

    @property
    def coeffs(self) -> tuple[Multivector, ...]:
        return self.stem.coeffs

    @property
    def degree(self) -> int:
        return self.stem.degree

    @classmethod
    def monomial(cls, sig: Signature, m: int, coeff: Multivector | None = None) -> "PolynomialSlice":
        zero = Multivector.zero(sig)
        a = coeff if coeff is not None else Multivector.scalar(sig, 1)
        return cls([zero] * m + [a])

    def derivative(self) -> "PolynomialSlice":
        return PolynomialSlice(self.stem.dz().coeffs)

    def to_dict(self) -> dict:
        rows = []
        for a in self.coeffs:
            row = []
            for idx, c in a.nonzero():
                q = Fraction(c)
                row.append([idx, q.numerator, q.denominator])
            rows.append(row)
        return {"n": self.n, "coeffs": rows}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "PolynomialSlice":
        try:
            n = int(data["n"])
            rows = data["coeffs"]
        except (KeyError, TypeError) as exc:
            raise CliffordError(f"bad polynomial JSON: {exc}") from None
        sig = Signature(n, "exact")
        coeffs = []
        for row in rows:
            terms = {}
            for idx, num, den in row:
                idx = int(idx)
                terms[idx] = terms.get(idx, 0) + Fraction(int(num), int(den))
            coeffs.append(Multivector.from_dict(sig, terms))
        if not coeffs:
            coeffs = [Multivector.zero(sig)]
        return cls(coeffs)

    @classmethod
    def from_json(cls, text: str) -> "PolynomialSlice":
        return cls.from_dict(json.loads(text))


# -- spherical derivative of powers -------------------------------------------------

def power_spherical_derivative(m: int, x: Multivector) -> Multivector:
    """(x^m)'_s = sum_{k<m} x^{m-1-k} (x^c)^k; negative m via -n(x)^m (x^|m|)'_s."""
    if m == 0:
        return Multivector.zero(x.sig)
    if m < 0:
        _require_cone(x)
        nval = norm(x).scalar_part
        if nval == 0:
            raise ZeroNormError("x is not invertible")
        inv = 1 / Fraction(nval) if x.sig.exact else 1.0 / nval
        return power_spherical_derivative(-m, x) * (-inv ** (-m))
    xc = mv_conjugate(x)
    left = [Multivector.scalar(x.sig, 1)]
    right = [Multivector.scalar(x.sig, 1)]
    for _ in range(m - 1):
        left.append(mv_product(left[-1], x))
        right.append(mv_product(right[-1], xc))
    total = Multivector.zero(x.sig)
    for k in range(m):
        total = total + mv_product(left[m - 1 - k], right[k])
    return total


def power_spherical_derivative_tn(m: int, x: Multivector) -> Multivector:
    """Trace/norm form: sum_nu t(x^{m-1-2nu}) n(x)^nu (+ n(x)^{(m-1)/2} for odd m)."""
    if m < 1:
        raise CliffordError("trace/norm form needs m >= 1")
    nx = norm(x)
    total = Multivector.zero(x.sig)
    for nu in range((m - 2) // 2 + 1):
        total = total + mv_product(trace(mv_power(x, m - 1 - 2 * nu)), mv_power(nx, nu))
    if m % 2 == 1:
        total = total + mv_power(nx, (m - 1) // 2)
    return total
