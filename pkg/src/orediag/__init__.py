"""Diagonal and Jacobson forms of matrices over Ore algebras.

Matrices over K[x1..xn][d; sigma, delta] are diagonalized fraction-free with
Groebner bases of modules; a Euclidean baseline over K(x)[d] and a Jacobson
strengthening over the rational Weyl algebra sit on top.
"""

from .coeff import QQ, BasePoly, PrimeField, parse_field
from .diagonalize import (DiagResult, RunStats, VerificationReport, clear_denominators, diagonalize,
                          is_unimodular_over_r, is_unimodular_over_rstar, normalize_diagonal,
                          verify_decomposition)
from .errors import (IncompatibleDerivation, IterationCapExceeded, NoExponentFound, NoInvolution,
                     NonInvertibleSigma, NonReducedBasis, NotSimpleDomain, OreError, ParseError, SpecError,
                     SpecMismatch, VerificationError, ZeroDenominator, ZeroPolynomialError)
from .gb import GBResult, ModuleOrder, groebner_extended, left_reduce, select_gstar
from .jacobson import (JacobsonResult, ProbeResult, cyclic_vector_probe, find_shift_exponent,
                       strengthen_diagonal)
from .matrix import OreFraction, OreMatrix
from .ore import AlgebraSpec, InvolutionSpec, OrePoly, ore_mul, validate_algebra_spec
from .parse import parse_base_poly, parse_expression, parse_matrix
from .rational import (RatFunc, RatOrePoly, diagonalize_rational, gcd_lclm, lclm, left_divide,
                       right_divide)

preset_algebra = AlgebraSpec.preset_algebra

__version__ = "0.1.0"
