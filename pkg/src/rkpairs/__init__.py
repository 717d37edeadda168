"""Toolkit for pairs of r-primitive, k-normal elements of finite fields.

The package is organized in layers:

* ``intarith``  -- exact integer number theory (factoring, arithmetic
  functions, prime streams, log-space magnitudes).
* ``fqpoly``    -- dense polynomial arithmetic over finite fields,
  including the factorization of x^n - 1.
* ``ffield``    -- the tower F_p < F_q < F_{q^n}: contexts, Frobenius,
  traces, orders, discrete logs.
* ``elems``     -- classification of field elements (multiplicative
  order, F_q-order, k-normality, freeness).
* ``ratfun``    -- rational functions, the admissible class used by the
  pair-existence criteria, exceptional sets.
* ``chars``     -- additive/multiplicative characters and numerical
  verification of the character-sum identities and bounds.
* ``criteria``  -- exact per-(q, n) decision procedures and sweeps.
* ``boundscan`` -- log-space asymptotic bound chains.
* ``search``    -- brute-force ground truth and witness certification.
* ``cli``       -- command-line interface.
"""

from .intarith import Factorization, LogMagnitude, factor_integer
from .ffield import FieldCtx, make_ctx

__all__ = [
    "Factorization",
    "LogMagnitude",
    "factor_integer",
    "FieldCtx",
    "make_ctx",
]

__version__ = "0.1.0"
