"""Exact polynomial calculus in the coordinates of a paravector (or quaternion).

A :class:`CoordPoly` is a polynomial in real variables ``x_0, ..., x_N`` with
exact-rational Multivector coefficients.  Variable ``x_i`` multiplies the unit
blade ``basis[i]``: for paravectors of R_n that is ``(1, e1, ..., en)``; for
quaternions inside R_2 it is ``(1, e1, e2, e12) = (1, i, j, k)``.  Every
differential operator here is applied formally, so the vanishing statements
become exact comparisons of term maps.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .clifford import (
    EXACT,
    CliffordError,
    Multivector,
    Signature,
    SignatureMismatch,
    blade_name,
    infer_regime,
    mv_conjugate,
    mv_product,
    paravector_basis,
)
from .slicefn import bipoly_derivative, power_g_terms

MAX_DEGREE = 64


class CoordPoly:
    """Immutable polynomial with Multivector coefficients."""

    __slots__ = ("sig", "basis", "terms")

    def __init__(self, n: int, terms: dict | None = None, basis: Sequence[int] | None = None):
        sig = Signature(n, EXACT)
        basis = tuple(basis) if basis is not None else paravector_basis(n)
        if basis[0] != 0:
            raise CliffordError("the first coordinate must be the real one")
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != len(basis):
                raise CliffordError(f"monomial {mono} has wrong arity")
            if sum(mono) > MAX_DEGREE:
                raise CliffordError(f"degree exceeds {MAX_DEGREE}")
            if not isinstance(c, Multivector):
                c = Multivector.scalar(sig, c)
            elif c.sig != sig:
                raise SignatureMismatch(f"coefficient in {c.sig}, polynomial over R_{n} exact")
            if not c.is_zero():
                clean[mono] = c
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("CoordPoly is immutable")

    @property
    def n(self) -> int:
        return self.sig.n

    @property
    def nvars(self) -> int:
        return len(self.basis)

    def _new(self, terms: dict) -> "CoordPoly":
        return CoordPoly(self.n, terms, self.basis)

    def _compatible(self, other: "CoordPoly"):
        if self.n != other.n or self.basis != other.basis:
            raise SignatureMismatch("polynomials over different coordinate spaces")

    def unit(self, i: int) -> Multivector:
        """Unit blade multiplying coordinate ``x_i``."""
        return Multivector.blade(self.sig, self.basis[i])

    # -- constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, n: int, basis=None) -> "CoordPoly":
        return cls(n, {}, basis)

    @classmethod
    def constant(cls, n: int, value, basis=None) -> "CoordPoly":
        b = tuple(basis) if basis is not None else paravector_basis(n)
        return cls(n, {(0,) * len(b): value}, b)

    @classmethod
    def variable(cls, n: int, i: int, basis=None) -> "CoordPoly":
        """The real coordinate ``x_i`` (scalar-valued)."""
        b = tuple(basis) if basis is not None else paravector_basis(n)
        mono = [0] * len(b)
        mono[i] = 1
        return cls(n, {tuple(mono): 1}, b)

    @classmethod
    def identity(cls, n: int, basis=None) -> "CoordPoly":
        """x = x_0 + sum_i x_i u_i."""
        b = tuple(basis) if basis is not None else paravector_basis(n)
        sig = Signature(n, EXACT)
        terms = {}
        for i, blade in enumerate(b):
            mono = [0] * len(b)
            mono[i] = 1
            terms[tuple(mono)] = Multivector.blade(sig, blade)
        return cls(n, terms, b)

    @classmethod
    def imag(cls, n: int, basis=None) -> "CoordPoly":
        x = cls.identity(n, basis)
        return x - cls.variable(n, 0, basis) * 1

    @classmethod
    def radius_sq(cls, n: int, basis=None) -> "CoordPoly":
        """r^2 = |Im(x)|^2 = sum_{i >= 1} x_i^2."""
        b = tuple(basis) if basis is not None else paravector_basis(n)
        terms = {}
        for i in range(1, len(b)):
            mono = [0] * len(b)
            mono[i] = 2
            terms[tuple(mono)] = 1
        return cls(n, terms, b)

    # -- arithmetic -----------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, CoordPoly):
            other = CoordPoly.constant(self.n, other, self.basis)
        self._compatible(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms[mono] + c if mono in terms else c
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, CoordPoly):
            other = CoordPoly.constant(self.n, other, self.basis)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CoordPoly):
            self._compatible(other)
            terms: dict = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    mono = tuple(a + b for a, b in zip(m1, m2))
                    prod = mv_product(c1, c2)
                    terms[mono] = terms[mono] + prod if mono in terms else prod
            return self._new(terms)
        if isinstance(other, Multivector):
            return self._new({m: mv_product(c, other) for m, c in self.terms.items()})
        return self._new({m: c * Fraction(other) for m, c in self.terms.items()})

    def __rmul__(self, other):
        if isinstance(other, Multivector):
            return self._new({m: mv_product(other, c) for m, c in self.terms.items()})
        return self._new({m: c * Fraction(other) for m, c in self.terms.items()})

    def __pow__(self, k: int) -> "CoordPoly":
        if k < 0:
            raise CliffordError("negative power of a polynomial")
        out = CoordPoly.constant(self.n, 1, self.basis)
        for _ in range(k):
            out = out * self
        return out

    def conj(self) -> "CoordPoly":
        """Coefficient-wise Clifford conjugation (coordinates are real)."""
        return self._new({m: mv_conjugate(c) for m, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, CoordPoly):
            return NotImplemented
        return (self.n, self.basis, self.terms) == (other.n, other.basis, other.terms)

    def __hash__(self):
        return hash((self.n, self.basis, frozenset(self.terms.items())))

    # -- inspection ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(m) for m in self.terms}
        if d is None:
            return len(degs) <= 1
        return degs <= {d}

    def is_real(self) -> bool:
        return all(c.is_scalar() for c in self.terms.values())

    def max_abs_coeff(self) -> Fraction:
        return max((abs(v) for c in self.terms.values() for v in c.coeffs), default=Fraction(0))

    def evaluate(self, coords: Sequence) -> Multivector:
        """Value at a point; exact for rational coordinates, float otherwise."""
        if len(coords) != self.nvars:
            raise CliffordError(f"expected {self.nvars} coordinates")
        regime = infer_regime(coords)
        if regime == EXACT:
            coords = [Fraction(c) for c in coords]
            total = Multivector.zero(self.sig)
            for mono, c in self.terms.items():
                total = total + c * math.prod(v ** e for v, e in zip(coords, mono))
            return total
        sig = self.sig.with_regime("float")
        coords = [float(c) for c in coords]
        acc = [0.0] * sig.dim
        for mono, c in self.terms.items():
            w = math.prod(v ** e for v, e in zip(coords, mono))
            for idx, val in c.nonzero():
                acc[idx] += float(val) * w
        return Multivector(sig, acc)

    # -- differential operators --------------------------------------------------
    def partial(self, i: int) -> "CoordPoly":
        if not 0 <= i < self.nvars:
            raise CliffordError(f"coordinate index {i} out of range")
        terms = {}
        for mono, c in self.terms.items():
            e = mono[i]
            if e == 0:
                continue
            m2 = mono[:i] + (e - 1,) + mono[i + 1:]
            terms[m2] = c * e
        return self._new(terms)

    def laplacian(self) -> "CoordPoly":
        out = CoordPoly.zero(self.n, self.basis)
        for i in range(self.nvars):
            out = out + self.partial(i).partial(i)
        return out

    def iterated_laplacian(self, k: int) -> "CoordPoly":
        p = self
        for _ in range(k):
            p = p.laplacian()
        return p

    def apply_cr(self) -> "CoordPoly":
        """dbar p = d_0 p + sum_i u_i (d_i p), units acting on the left."""
        out = self.partial(0)
        for i in range(1, self.nvars):
            out = out + self.unit(i) * self.partial(i)
        return out

    def apply_cr_conj(self) -> "CoordPoly":
        out = self.partial(0)
        for i in range(1, self.nvars):
            out = out - self.unit(i) * self.partial(i)
        return out

    def apply_Lij(self, i: int, j: int) -> "CoordPoly":
        """L_ij p = x_i d_j p - x_j d_i p for 1 <= i < j."""
        if not 1 <= i < j < self.nvars:
            raise CliffordError(f"need 1 <= i < j <= {self.nvars - 1}, got ({i}, {j})")
        xi = CoordPoly.variable(self.n, i, self.basis)
        xj = CoordPoly.variable(self.n, j, self.basis)
        return xi * self.partial(j) - xj * self.partial(i)

    def apply_gamma(self) -> "CoordPoly":
        """Gamma p = -sum_{i<j} u_i u_j L_ij p (u_i u_j = e_ij on paravectors)."""
        out = CoordPoly.zero(self.n, self.basis)
        for i in range(1, self.nvars):
            for j in range(i + 1, self.nvars):
                out = out - mv_product(self.unit(i), self.unit(j)) * self.apply_Lij(i, j)
        return out

    def apply_laplace_beltrami(self) -> "CoordPoly":
        out = CoordPoly.zero(self.n, self.basis)
        for i in range(1, self.nvars):
            for j in range(i + 1, self.nvars):
                out = out + self.apply_Lij(i, j).apply_Lij(i, j)
        return out

    def radial_part(self) -> "CoordPoly":
        """sum_{i >= 1} x_i d_i p."""
        out = CoordPoly.zero(self.n, self.basis)
        for i in range(1, self.nvars):
            out = out + CoordPoly.variable(self.n, i, self.basis) * self.partial(i)
        return out

    def apply_thetabar_cleared(self) -> "CoordPoly":
        """r^2 * thetabar p = r^2 d_0 p + Im(x) sum_i x_i d_i p (a polynomial)."""
        r2 = CoordPoly.radius_sq(self.n, self.basis)
        return r2 * self.partial(0) + CoordPoly.imag(self.n, self.basis) * self.radial_part()

    def apply_theta_cleared(self) -> "CoordPoly":
        r2 = CoordPoly.radius_sq(self.n, self.basis)
        return r2 * self.partial(0) - CoordPoly.imag(self.n, self.basis) * self.radial_part()

    # -- rendering ------------------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple, int, Fraction]]:
        """(monomial, blade, coefficient) in graded-lex order, then by blade."""
        out = []
        for mono in sorted(self.terms, key=_grlex_key):
            for blade, c in self.terms[mono].nonzero():
                out.append((mono, blade, c))
        return out

    def render(self, factor: bool = True, names: dict | None = None) -> str:
        terms = self.sorted_terms()
        if not terms:
            return "0"
        content = Fraction(1)
        if factor and len(terms) > 1:
            num = 0
            den = 1
            for _, _, c in terms:
                num = math.gcd(num, c.numerator)
                den = den * c.denominator // math.gcd(den, c.denominator)
            content = Fraction(num, den)
            if terms[0][2] < 0:
                content = -content
        body = _render_terms([(m, b, c / content) for m, b, c in terms], names)
        if content == 1:
            return body
        if content == -1:
            return f"-({body})"
        return f"{_fmt(content)}*({body})"

    def __str__(self):
        return self.render(factor=False)

    def __repr__(self):
        return f"CoordPoly(n={self.n}, {self.render(factor=False)})"


def _grlex_key(mono):
    return (-sum(mono), tuple(-e for e in mono))


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _render_terms(terms, names=None) -> str:
    pieces = []
    for k, (mono, blade, c) in enumerate(terms):
        factors = []
        for i, e in enumerate(mono):
            if e == 1:
                factors.append(f"x{i}")
            elif e > 1:
                factors.append(f"x{i}^{e}")
        if blade:
            factors.append(names.get(blade, blade_name(blade)) if names else blade_name(blade))
        mag = abs(c)
        if not factors:
            text = _fmt(mag)
        elif mag == 1:
            text = "*".join(factors)
        else:
            text = _fmt(mag) + "*" + "*".join(factors)
        if k == 0:
            pieces.append(("-" if c < 0 else "") + text)
        else:
            pieces.append((" - " if c < 0 else " + ") + text)
    return "".join(pieces)


# -- module-level operations ------------------------------------------------------

def expand_power(m: int, n: int, basis=None) -> CoordPoly:
    """Coordinate expansion of x^m for x = x_0 + sum x_i u_i."""
    if m < 0:
        raise CliffordError("expand_power needs m >= 0")
    x = CoordPoly.identity(n, basis)
    out = CoordPoly.constant(n, 1, x.basis)
    for _ in range(m):
        out = out * x
    return out


def expand_conj_power(m: int, n: int, basis=None) -> CoordPoly:
    """(x^c)^m, the conjugate of x^m."""
    return expand_power(m, n, basis).conj()


def expand_slice(coeffs: Sequence[Multivector], n: int | None = None, basis=None) -> CoordPoly:
    """sum_m x^m a_m."""
    if n is None:
        n = coeffs[0].n
    sig = Signature(n, EXACT)
    x = CoordPoly.identity(n, basis)
    out = CoordPoly.zero(n, x.basis)
    power = CoordPoly.constant(n, 1, x.basis)
    for a in coeffs:
        a = a if a.sig.exact else a.to_exact()
        if a.sig != sig:
            raise SignatureMismatch("coefficient signature differs from the polynomial's")
        if not a.is_zero():
            out = out + power * a
        power = power * x
    return out


def spherical_derivative_poly(m: int, n: int, basis=None) -> CoordPoly:
    """(x^m)'_s = sum_{k<m} x^{m-1-k} (x^c)^k, expanded exactly.

    Built with S_1 = 1, S_{j+1} = x S_j + (x^c)^j.
    """
    if m < 1:
        raise CliffordError("spherical_derivative_poly needs m >= 1")
    x = CoordPoly.identity(n, basis)
    xc = x.conj()
    s = CoordPoly.constant(n, 1, x.basis)
    xc_pow = CoordPoly.constant(n, 1, x.basis)
    for _ in range(m - 1):
        xc_pow = xc_pow * xc
        s = x * s + xc_pow
    return s


def spherical_value_poly(m: int, n: int, basis=None) -> CoordPoly:
    """(x^m)°_s = (x^m + (x^m)^c) / 2."""
    p = expand_power(m, n, basis)
    return (p + p.conj()) * Fraction(1, 2)


def from_g(terms: dict, n: int, basis=None, coeff: Multivector | None = None) -> CoordPoly:
    """Substitute alpha -> x_0 and s -> |Im(x)|^2 in ``sum c alpha^p s^q``."""
    x0 = CoordPoly.variable(n, 0, basis)
    r2 = CoordPoly.radius_sq(n, basis)
    out = CoordPoly.zero(n, x0.basis)
    for (p, q), c in terms.items():
        if c:
            out = out + (x0 ** p) * (r2 ** q) * c
    if coeff is not None:
        out = out * coeff
    return out


def power_g_polys(m: int, n: int, basis=None, d_s: int = 0, d_alpha: int = 0) -> tuple[CoordPoly, CoordPoly]:
    """(d_alpha^a d_s^k G1, ... G2)(x_0, r^2) for the stem z^m, as CoordPolys."""
    g1, g2 = power_g_terms(m)
    return (from_g(bipoly_derivative(g1, d_alpha, d_s), n, basis),
            from_g(bipoly_derivative(g2, d_alpha, d_s), n, basis))


def slice_derivative_of_sd_poly(m: int, n: int, basis=None) -> CoordPoly:
    """d/dx of the slice function (x^m)'_s: (1/2) d_1 G2 - Im(x) d_2 G2."""
    _, da = power_g_polys(m, n, basis, d_alpha=1)
    _, ds = power_g_polys(m, n, basis, d_s=1)
    return da * Fraction(1, 2) - CoordPoly.imag(n, basis) * ds


# thin functional aliases matching the operator names used elsewhere
def partial(p: CoordPoly, i: int) -> CoordPoly:
    return p.partial(i)


def laplacian(p: CoordPoly) -> CoordPoly:
    return p.laplacian()


def iterated_laplacian(p: CoordPoly, k: int) -> CoordPoly:
    return p.iterated_laplacian(k)


def apply_cr(p: CoordPoly) -> CoordPoly:
    return p.apply_cr()


def apply_cr_conj(p: CoordPoly) -> CoordPoly:
    return p.apply_cr_conj()


def apply_Lij(p: CoordPoly, i: int, j: int) -> CoordPoly:
    return p.apply_Lij(i, j)


def apply_gamma(p: CoordPoly) -> CoordPoly:
    return p.apply_gamma()


def apply_laplace_beltrami(p: CoordPoly) -> CoordPoly:
    return p.apply_laplace_beltrami()


def is_zero(p: CoordPoly) -> bool:
    return p.is_zero()


def evaluate(p: CoordPoly, x: Sequence | Multivector) -> Multivector:
    if isinstance(x, Multivector):
        x = x.coords(p.basis)
    return p.evaluate(x)


def slice_monomials(d: int, n: int, basis=None) -> list[CoordPoly]:
    """x^a (x^c)^b e_B for a + b = d and every blade B: a basis of the homogeneous
    degree-d slice polynomials (stems z^a zbar^b with right coefficients)."""
    x = CoordPoly.identity(n, basis)
    sig = x.sig
    out = []
    for a in range(d + 1):
        base = (x ** a) * (x.conj() ** (d - a))
        for blade in range(sig.dim):
            out.append(base * Multivector.blade(sig, blade))
    return out


def _constraint_vectors(polys: Sequence[CoordPoly]) -> tuple[list[list[Fraction]], int]:
    keys = sorted({(mono, blade) for p in polys for mono, c in p.terms.items()
                   for blade, _ in c.nonzero()})
    index = {k: i for i, k in enumerate(keys)}
    cols = []
    for p in polys:
        col = [Fraction(0)] * len(keys)
        for mono, c in p.terms.items():
            for blade, v in c.nonzero():
                col[index[(mono, blade)]] = Fraction(v)
        cols.append(col)
    return cols, len(keys)


def joint_kernel_dimension(max_degree: int, n: int, basis=None) -> dict[int, int]:
    """Per degree d, dim of {p slice polynomial of degree d : dbar p = 0 and r^2 thetabar p = 0}.

    Exact rank over Q.  Since both operators are linear and lower the degree
    homogeneously, the kernel of the full space is the direct sum over d.
    """
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix

    dims = {}
    for d in range(max_degree + 1):
        mons = slice_monomials(d, n, basis)
        images = [p.apply_cr() for p in mons]
        images_t = [p.apply_thetabar_cleared() for p in mons]
        cols_a, ra = _constraint_vectors(images)
        cols_b, rb = _constraint_vectors(images_t)
        rows = ra + rb
        if rows == 0:
            dims[d] = len(mons)
            continue
        mat = [[QQ(cols_a[j][i].numerator, cols_a[j][i].denominator) for j in range(len(mons))]
               for i in range(ra)]
        mat += [[QQ(cols_b[j][i].numerator, cols_b[j][i].denominator) for j in range(len(mons))]
                for i in range(rb)]
        rank = DomainMatrix(mat, (rows, len(mons)), QQ).rank()
        dims[d] = len(mons) - rank
    return dims
