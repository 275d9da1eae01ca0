"""Exact construction and verification of the attenuated space poset A_q(N, M)."""

from attenuated.gflinalg import CapacityError
from attenuated.poset import PosetInstance, build_poset
from attenuated.qcomb import ExactScalar, mu, q_binomial, q_int

__all__ = ["CapacityError", "ExactScalar", "PosetInstance", "build_poset", "mu", "q_binomial", "q_int"]
__version__ = "0.1.0"
