"""Arithmetic of the real Clifford algebra R_{0,n}.

Multivectors are stored densely: ``coeffs[k]`` is the coefficient of the
blade whose bitmask is ``k`` (bit ``i-1`` set means ``e_i`` is a factor,
index 0 is the scalar part).  Two scalar regimes share the same class:
``"exact"`` keeps :class:`fractions.Fraction` coefficients, ``"float"`` keeps
Python floats.  Mixing the two raises instead of silently rounding.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

EXACT = "exact"
FLOAT = "float"

CONE_TOL = 1e-10
REAL_TOL = 1e-12


class CliffordError(ValueError):
    """Base class for algebra errors."""


class SignatureMismatch(CliffordError):
    pass


class NotInConeError(CliffordError):
    pass


class InexactError(CliffordError):
    """An exact-regime computation would need an irrational value."""


class ZeroNormError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class Signature:
    n: int
    regime: str = FLOAT

    def __post_init__(self):
        if not isinstance(self.n, int) or not 1 <= self.n <= 8:
            raise CliffordError(f"n must be an integer in [1, 8], got {self.n!r}")
        if self.regime not in (EXACT, FLOAT):
            raise CliffordError(f"unknown regime {self.regime!r}")

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def exact(self) -> bool:
        return self.regime == EXACT

    def scalar(self, value):
        """Coerce ``value`` into this regime's scalar type."""
        if self.exact:
            if isinstance(value, float):
                raise InexactError("float scalar given to an exact multivector")
            return Fraction(value)
        return float(value)

    def with_regime(self, regime: str) -> "Signature":
        return Signature(self.n, regime)


@lru_cache(maxsize=None)
def blade_sign(a: int, b: int) -> int:
    """Sign of ``e_a * e_b`` in R_{0,n} (the product blade is ``a ^ b``)."""
    swaps = 0
    rest = a >> 1
    while rest:
        swaps += bin(rest & b).count("1")
        rest >>= 1
    # every shared generator contributes e_i^2 = -1
    swaps += bin(a & b).count("1")
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=None)
def sign_table(n: int) -> tuple[tuple[int, ...], ...]:
    dim = 1 << n
    return tuple(tuple(blade_sign(a, b) for b in range(dim)) for a in range(dim))


def grade(blade: int) -> int:
    return bin(blade).count("1")


def conjugation_sign(blade: int) -> int:
    """Clifford conjugation scales a grade-k blade by (-1)^{k(k+1)/2}."""
    k = grade(blade)
    return -1 if (k * (k + 1) // 2) & 1 else 1


def blade_name(blade: int) -> str:
    if blade == 0:
        return "1"
    return "e" + "".join(str(i + 1) for i in range(8) if blade >> i & 1)


def parse_blade(name: str) -> int:
    """``"e13"`` -> 0b101; ``"1"`` or ``""`` -> 0."""
    name = name.strip()
    if name in ("", "1"):
        return 0
    if not name.startswith("e") or not name[1:].isdigit():
        raise CliffordError(f"bad blade name {name!r}")
    digits = [int(c) for c in name[1:]]
    if sorted(set(digits)) != digits or 0 in digits:
        raise CliffordError(f"blade indices must be strictly increasing and >= 1: {name!r}")
    return sum(1 << (d - 1) for d in digits)


def paravector_basis(n: int) -> tuple[int, ...]:
    """Blade indices of the coordinates x_0, x_1, ..., x_n of a paravector."""
    return (0,) + tuple(1 << i for i in range(n))


def infer_regime(values: Iterable) -> str:
    """Exact when every value is an int or a Fraction, float otherwise."""
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (numbers.Rational, Fraction)):
            return FLOAT
    return EXACT


def _is_zero(c) -> bool:
    return c == 0


class Multivector:
    """Immutable element of R_{0,n}."""

    __slots__ = ("sig", "coeffs")

    def __init__(self, sig: Signature, coeffs: Sequence):
        if len(coeffs) != sig.dim:
            raise CliffordError(f"expected {sig.dim} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "coeffs", tuple(sig.scalar(c) for c in coeffs))

    @classmethod
    def _raw(cls, sig: Signature, coeffs: tuple) -> "Multivector":
        # coeffs already in the right scalar type
        obj = object.__new__(cls)
        object.__setattr__(obj, "sig", sig)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, sig: Signature) -> "Multivector":
        z = sig.scalar(0)
        return cls._raw(sig, (z,) * sig.dim)

    @classmethod
    def scalar(cls, sig: Signature, value) -> "Multivector":
        return cls.blade(sig, 0, value)

    @classmethod
    def blade(cls, sig: Signature, index: int, value=1) -> "Multivector":
        if not 0 <= index < sig.dim:
            raise CliffordError(f"blade index {index} out of range for n={sig.n}")
        c = [sig.scalar(0)] * sig.dim
        c[index] = sig.scalar(value)
        return cls._raw(sig, tuple(c))

    @classmethod
    def e(cls, sig: Signature, i: int) -> "Multivector":
        """Generator e_i, 1 <= i <= n."""
        if not 1 <= i <= sig.n:
            raise CliffordError(f"generator e{i} out of range for n={sig.n}")
        return cls.blade(sig, 1 << (i - 1))

    @classmethod
    def from_dict(cls, sig: Signature, terms: dict) -> "Multivector":
        c = [sig.scalar(0)] * sig.dim
        for key, value in terms.items():
            idx = parse_blade(key) if isinstance(key, str) else key
            c[idx] = c[idx] + sig.scalar(value)
        return cls._raw(sig, tuple(c))

    @classmethod
    def from_coords(cls, n: int, coords: Sequence, basis: Sequence[int] | None = None,
                    regime: str | None = None) -> "Multivector":
        """Place ``coords[i]`` on blade ``basis[i]`` (paravector basis by default)."""
        if basis is None:
            basis = paravector_basis(n)
        if len(coords) != len(basis):
            raise CliffordError(f"expected {len(basis)} coordinates, got {len(coords)}")
        sig = Signature(n, regime or infer_regime(coords))
        c = [sig.scalar(0)] * sig.dim
        for b, v in zip(basis, coords):
            c[b] = sig.scalar(v)
        return cls._raw(sig, tuple(c))

    # -- accessors ----------------------------------------------------------
    @property
    def n(self) -> int:
        return self.sig.n

    def __getitem__(self, blade) -> object:
        if isinstance(blade, str):
            blade = parse_blade(blade)
        return self.coeffs[blade]

    def coords(self, basis: Sequence[int] | None = None) -> tuple:
        if basis is None:
            basis = paravector_basis(self.n)
        return tuple(self.coeffs[b] for b in basis)

    def nonzero(self) -> list[tuple[int, object]]:
        return [(i, c) for i, c in enumerate(self.coeffs) if c != 0]

    @property
    def scalar_part(self):
        return self.coeffs[0]

    def grade_part(self, k: int) -> "Multivector":
        z = self.sig.scalar(0)
        return Multivector._raw(self.sig, tuple(
            c if grade(i) == k else z for i, c in enumerate(self.coeffs)))

    def nonscalar(self) -> "Multivector":
        z = self.sig.scalar(0)
        return Multivector._raw(self.sig, (z,) + self.coeffs[1:])

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.sig.exact or tol == 0.0:
            return all(c == 0 for c in self.coeffs)
        return self.abs() <= tol

    def is_scalar(self, tol: float = 0.0) -> bool:
        return self.nonscalar().is_zero(tol)

    def abs(self) -> float:
        """Euclidean norm of the coefficient vector (as a float)."""
        return math.sqrt(float(sum(c * c for c in self.coeffs)))

    def to_float(self) -> "Multivector":
        sig = self.sig.with_regime(FLOAT)
        return Multivector._raw(sig, tuple(float(c) for c in self.coeffs))

    def to_exact(self) -> "Multivector":
        """Exact copy; float coefficients are converted by their binary value."""
        sig = self.sig.with_regime(EXACT)
        return Multivector._raw(sig, tuple(Fraction(c) for c in self.coeffs))

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "Multivector"):
        if self.sig != other.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")

    def _coerce(self, other) -> "Multivector | None":
        if isinstance(other, Multivector):
            self._check(other)
            return other
        if isinstance(other, numbers.Real):
            return Multivector.scalar(self.sig, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Multivector._raw(self.sig, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Multivector._raw(self.sig, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Multivector._raw(self.sig, tuple(-a for a in self.coeffs))

    def scale(self, s) -> "Multivector":
        s = self.sig.scalar(s)
        return Multivector._raw(self.sig, tuple(a * s for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return mv_product(self, other)
        if isinstance(other, numbers.Real):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            if other == 0:
                raise ZeroDivisionError("division of a multivector by zero")
            if self.sig.exact:
                return self.scale(1 / Fraction(other))
            return self.scale(1.0 / other)
        if isinstance(other, Multivector):
            return mv_product(self, mv_inverse(other))
        return NotImplemented

    def __pow__(self, m: int):
        return mv_power(self, m)

    def conj(self) -> "Multivector":
        return mv_conjugate(self)

    def __eq__(self, other):
        if isinstance(other, numbers.Real):
            other = Multivector.scalar(self.sig, other) if not (
                self.sig.exact and isinstance(other, float)) else None
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.sig == other.sig and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.sig, self.coeffs))

    def allclose(self, other: "Multivector", tol: float = 1e-12) -> bool:
        if self.n != other.n:
            return False
        return max(abs(float(a) - float(b)) for a, b in zip(self.coeffs, other.coeffs)) <= tol

    def __repr__(self):
        return f"Multivector(n={self.n}, {self})"

    def __str__(self):
        parts = []
        for i, c in self.nonzero():
            name = blade_name(i)
            if name == "1":
                parts.append(f"{c}")
            elif c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c}*{name}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


def mv_product(a: Multivector, b: Multivector) -> Multivector:
    """Geometric product in R_{0,n}."""
    a._check(b)
    sig = a.sig
    table = sign_table(sig.n)
    out = [0] * sig.dim
    bnz = b.nonzero()
    for i, ca in a.nonzero():
        row = table[i]
        for j, cb in bnz:
            if row[j] > 0:
                out[i ^ j] += ca * cb
            else:
                out[i ^ j] -= ca * cb
    return Multivector._raw(sig, tuple(sig.scalar(c) for c in out) if sig.exact
                            else tuple(float(c) for c in out))


def mv_conjugate(a: Multivector) -> Multivector:
    return Multivector._raw(a.sig, tuple(
        c if conjugation_sign(i) > 0 else -c for i, c in enumerate(a.coeffs)))


def trace(x: Multivector) -> Multivector:
    return x + mv_conjugate(x)


def norm(x: Multivector) -> Multivector:
    return mv_product(x, mv_conjugate(x))


def real_part(x: Multivector) -> Multivector:
    return trace(x) / 2


def imag_part(x: Multivector) -> Multivector:
    return (x - mv_conjugate(x)) / 2


def _cone_tol(x: Multivector, tol: float | None) -> float:
    if tol is None:
        tol = CONE_TOL
    return tol * (1.0 + x.abs() ** 2)


def in_quadratic_cone(x: Multivector, tol: float | None = None) -> bool:
    """True iff t(x) and n(x) are real (exactly, or within ``tol*(1+|x|^2)``)."""
    t, nx = trace(x), norm(x)
    if x.sig.exact:
        return t.is_scalar() and nx.is_scalar()
    eps = _cone_tol(x, tol)
    return t.nonscalar().abs() <= eps and nx.nonscalar().abs() <= eps


def _require_cone(x: Multivector, tol: float | None = None):
    if not in_quadratic_cone(x, tol):
        raise NotInConeError(f"{x} is not in the quadratic cone")


def exact_sqrt(q: Fraction) -> Fraction:
    q = Fraction(q)
    if q < 0:
        raise CliffordError("square root of a negative number")
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn != q.numerator or rd * rd != q.denominator:
        raise InexactError(f"sqrt({q}) is irrational")
    return Fraction(rn, rd)


@dataclass(frozen=True)
class ConeDecomposition:
    """x = alpha + beta*J with beta >= 0; ``J`` is None at real points."""

    alpha: object
    beta: object
    J: Multivector | None

    def reconstruct(self, sig: Signature) -> Multivector:
        x = Multivector.scalar(sig, self.alpha)
        if self.J is not None:
            x = x + self.J * self.beta
        return x


def imag_norm_sq(x: Multivector):
    """|Im(x)|^2 = n(Im(x)) for cone elements, returned as a scalar."""
    return norm(imag_part(x)).scalar_part


def decompose(x: Multivector, tol: float | None = None) -> ConeDecomposition:
    _require_cone(x, tol)
    alpha = x.scalar_part
    im = imag_part(x)
    beta_sq = norm(im).scalar_part
    if x.sig.exact:
        if beta_sq == 0:
            return ConeDecomposition(alpha, Fraction(0), None)
        beta = exact_sqrt(beta_sq)
    else:
        beta = math.sqrt(max(beta_sq, 0.0))
        if beta < REAL_TOL * (1.0 + x.abs()):
            return ConeDecomposition(alpha, 0.0, None)
    return ConeDecomposition(alpha, beta, im / beta)


def mv_inverse(x: Multivector, tol: float | None = None) -> Multivector:
    """x^{-1} = x^c / n(x) for cone elements."""
    _require_cone(x, tol)
    nx = norm(x).scalar_part
    if nx == 0:
        raise ZeroNormError(f"{x} has zero norm")
    return mv_conjugate(x) / nx


def mv_power(x: Multivector, m: int) -> Multivector:
    if m < 0:
        return mv_power(mv_inverse(x), -m)
    result = Multivector.scalar(x.sig, 1)
    base = x
    # binary exponentiation; powers of one element commute
    while m:
        if m & 1:
            result = mv_product(result, base)
        m >>= 1
        if m:
            base = mv_product(base, base)
    return result
