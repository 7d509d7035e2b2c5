"""Slice-function calculus on the Clifford algebras R_{0,n} and on the quaternions.

Modules
-------
clifford   multivectors, conjugation, trace/norm, quadratic cone
slicefn    stem functions, slice functions, spherical value/derivative
polycalc   exact polynomial calculus in the coordinates x_0..x_n
diffops    finite-difference operators and identity reports
harmonics  zonal harmonics, Poisson kernel, Kelvin transform, Koebe function
quat       quaternionic operators (R_2 with e1 = i, e2 = j, e12 = k)
suites     named verification suites used by the command line
"""

__version__ = "0.1.0"

from .clifford import (  # noqa: E402
    CliffordError,
    InexactError,
    Multivector,
    NotInConeError,
    Signature,
    SignatureMismatch,
    ZeroNormError,
    decompose,
    in_quadratic_cone,
    mv_conjugate,
    mv_inverse,
    mv_power,
    mv_product,
    norm,
    trace,
)
from .slicefn import (  # noqa: E402
    DomainError,
    NotRegularError,
    PolynomialSlice,
    SliceFunction,
    StemFunction,
    induce,
    power_spherical_derivative,
    representation,
    slice_derivative,
    slice_derivative_conj,
    spherical_derivative,
    spherical_value,
)
from .polycalc import CoordPoly, expand_power, spherical_derivative_poly  # noqa: E402
from .diffops import EvaluableField, FDScheme, IdentityReport, verify_identity  # noqa: E402
from .quat import quaternion, verify_identity_H  # noqa: E402

__all__ = [name for name in dir() if not name.startswith("_")]
