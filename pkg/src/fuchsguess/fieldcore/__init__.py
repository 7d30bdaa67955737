"""Exact arithmetic substrate: fields, polynomials, linear algebra, CRT."""

from .fields import (GF, QQ, AlgebraicElement, AlgebraicField, FieldElement, PrimeField,
                     PrimeModulus, RationalField, field_of, parse_field, reduce_rational)
from .linalg import nullspace, nullspace_mod_p, rank, rref_mod_p, row_profile_mod_p, solve
from .modular import (ResidueSystem, crt_combine, crt_pair, crt_vector, default_bound,
                      maximal_quotient_reconstruct, rational_reconstruct, reconstruct_vector)
from .poly import DensePoly, poly_gcd
from .ratfunc import RatFunc

__all__ = [
    "GF", "QQ", "AlgebraicElement", "AlgebraicField", "FieldElement", "PrimeField",
    "PrimeModulus", "RationalField", "field_of", "parse_field", "reduce_rational",
    "nullspace", "nullspace_mod_p", "rank", "rref_mod_p", "row_profile_mod_p", "solve",
    "ResidueSystem", "crt_combine", "crt_pair", "crt_vector", "default_bound",
    "maximal_quotient_reconstruct", "rational_reconstruct", "reconstruct_vector",
    "DensePoly", "poly_gcd", "RatFunc",
]
