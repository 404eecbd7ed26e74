"""Statevector simulation of the Generalized Deutsch and Deutsch-Jozsa algorithms,
with ensemble-classifier and key-distribution experiments built on top."""

from .algorithm import AlgorithmOutcome, decode_outcome, run_gd, run_gdj
from .errors import DecodeError, InputError, PreconditionError, PromiseViolation, ResourceError
from .oracle import FunctionClass, FunctionSpec, build_marking_oracle, build_oracle_phase, make_function
from .statevector import RandomSource, StateVector, basis_state

__all__ = [
    "AlgorithmOutcome", "DecodeError", "FunctionClass", "FunctionSpec", "InputError",
    "PreconditionError", "PromiseViolation", "RandomSource", "ResourceError", "StateVector",
    "basis_state", "build_marking_oracle", "build_oracle_phase", "decode_outcome",
    "make_function", "run_gd", "run_gdj",
]
