"""thetacalc: exact stability-weight calculus and rank-1 quantum operations.

Subpackages:
  laurent   exact Laurent polynomials and truncated series in z^-1
  transfer  two/three-point operations, generating series, consistency report
  strata    stratum labels, weight vectors, certified admissible enumeration
  hn        numerical invariant on filtrations, closed-form and numeric optimizers
  graphs    directed modular graphs: cut, contract, glue, orientation flips
  chains    splitting types of bundles on contracted rational chains
  cli       the thetacalc command line tool
"""

from .errors import DomainError

__all__ = ["DomainError"]
__version__ = "0.1.0"
