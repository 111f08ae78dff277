"""Olson degrees, exact imaginary quadratic class numbers and divisibility
constraints for torsion of CM elliptic curves."""

from .arith import FactoredInteger, factorize, is_prime, kronecker, primes_in
from .classnum import ClassNumberTable, ImQuadField, class_number, class_number_sweep
from .config import RunConfig
from .divisibility import feasible_orders, lambda_set
from .errors import ContractError, DependencyError, DomainError
from .olson import count_olson, generators, is_olson, is_prime_power_olson, prime_power_scan
from .tcm import tcm_lower_bound

__version__ = "0.1.0"

__all__ = [
    "FactoredInteger", "factorize", "is_prime", "kronecker", "primes_in",
    "ClassNumberTable", "ImQuadField", "class_number", "class_number_sweep",
    "RunConfig", "feasible_orders", "lambda_set",
    "ContractError", "DependencyError", "DomainError",
    "count_olson", "generators", "is_olson", "is_prime_power_olson", "prime_power_scan",
    "tcm_lower_bound",
]
