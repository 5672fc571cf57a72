"""Exact arithmetic: scalars, sparse polynomials, dense and sparse linear algebra."""

from .scalars import (
    QQ,
    QQj,
    QQt,
    QJ,
    ModP,
    PrimeField,
    RatFunc,
    configured_primes,
    field_of,
    format_scalar,
    is_prime,
    parse_scalar,
    prev_prime,
    specialize,
    to_mod_p,
    word_primes,
)
from .multipoly import MultiPoly, NotDivisible, parse
from .matrix import (
    ExactMatrix,
    det_cofactor,
    det_fraction_free,
    rank_and_kernel,
    resultant,
    rref,
    sylvester_matrix,
)
from .sparse import SparseEchelon, SparseEchelonModP

__all__ = [
    "QQ", "QQj", "QQt", "QJ", "ModP", "PrimeField", "RatFunc",
    "configured_primes", "field_of", "format_scalar", "is_prime", "parse_scalar",
    "prev_prime", "specialize", "to_mod_p", "word_primes",
    "MultiPoly", "NotDivisible", "parse",
    "ExactMatrix", "det_cofactor", "det_fraction_free", "rank_and_kernel",
    "resultant", "rref", "sylvester_matrix",
    "SparseEchelon", "SparseEchelonModP",
]
