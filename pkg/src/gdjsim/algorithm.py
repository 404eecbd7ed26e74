"""End-to-end Generalized Deutsch / Deutsch-Jozsa runs and outcome decoding.

A noiseless run under the promise leaves the x register in ``a * 1^n`` and
the y register in ``(1 - b) * 1^n`` where ``(a, b)`` are the register values,
so decoding is a lookup on two repeated-bit patterns. For n = 1:

    (i, j) = (0, 1) -> constant00      (1, 0) -> constant11
    (i, j) = (0, 0) -> balanced01      (1, 1) -> balanced10
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DecodeError, InputError, PromiseViolation, ResourceError
from .oracle import FunctionClass, FunctionSpec, build_marking_oracle, build_oracle_phase
from .statevector import MAX_QUBITS, RandomSource, StateVector, basis_state, index_to_bits

MAX_GDJ_WIDTH = (MAX_QUBITS - 2) // 2
DEFAULT_SHOTS = 4000

DJ_KINDS = ("constant", "balanced")


@dataclass
class AlgorithmOutcome:
    spec: FunctionSpec
    i_bits: str
    j_bits: str
    decoded_class: Optional[FunctionClass]
    probability: Optional[float] = None
    shots: Optional[int] = None
    counts: Optional[dict[str, int]] = None

    @property
    def decoded_kind(self) -> Optional[str]:
        return self.decoded_class.kind if self.decoded_class else None

    @property
    def value_x(self) -> Optional[int]:
        return self.decoded_class.values[0] if self.decoded_class else None

    @property
    def value_y(self) -> Optional[int]:
        return self.decoded_class.values[1] if self.decoded_class else None

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "i": self.i_bits,
            "j": self.j_bits,
            "class": self.decoded_class.value if self.decoded_class else None,
            "kind": self.decoded_kind,
            "values": list(self.decoded_class.values) if self.decoded_class else None,
            "shots": self.shots,
            "counts": self.counts,
        }


# decoding

def decode_table(n: int) -> dict[tuple[str, str], FunctionClass]:
    ones, zeros = "1" * n, "0" * n
    return {
        (zeros, ones): FunctionClass.CONSTANT00,
        (ones, zeros): FunctionClass.CONSTANT11,
        (zeros, zeros): FunctionClass.BALANCED01,
        (ones, ones): FunctionClass.BALANCED10,
    }


def decode_outcome(i_bits: str, j_bits: str, n: int) -> tuple[FunctionClass, str, int, int]:
    """Map a measured ``(i, j)`` pair to (class, kind, value_x, value_y)."""
    if len(i_bits) != n or len(j_bits) != n:
        raise InputError(f"patterns must both have length {n}")
    fclass = decode_table(n).get((i_bits, j_bits))
    if fclass is None:
        raise DecodeError(i_bits, j_bits)
    return (fclass, fclass.kind, *fclass.values)


def decode_nearest(i_bits: str, j_bits: str) -> FunctionClass:
    """Majority-vote decode, tolerating flipped bits within each register.

    A register with as many ones as zeros is ambiguous and raises DecodeError.
    """
    n = len(i_bits)
    if len(j_bits) != n:
        raise InputError("registers must have equal width")
    ones_i, ones_j = i_bits.count("1"), j_bits.count("1")
    if 2 * ones_i == n or 2 * ones_j == n:
        raise DecodeError(i_bits, j_bits)
    a = int(2 * ones_i > n)
    b = int(2 * ones_j < n)
    return FunctionClass.from_values(a, b)


def decode_dj(bits: str) -> str:
    return "constant" if "1" not in bits else "balanced"


# circuits

def gdj_reference_circuit(spec: FunctionSpec) -> list[tuple]:
    """Full gate list (prep, Hadamards, marking oracle, Hadamards, measurements)."""
    n = spec.n
    anc1, anc2 = 2 * n, 2 * n + 1
    gates: list[tuple] = [("x", q) for q in range(n, 2 * n)]
    gates += [("x", anc1), ("h", anc1), ("cx", anc1, anc2)]
    gates += [("h", q) for q in range(2 * n)]
    gates += build_marking_oracle(spec)
    gates += [("h", q) for q in range(2 * n)]
    gates += [("measure", q) for q in range(2 * n)]
    return gates


def dj_oracle_gates(kind: str, n: int) -> list[tuple]:
    """Constant: f = 0 (no gates). Balanced: f(x) = parity(x), one CNOT per input."""
    if kind not in DJ_KINDS:
        raise InputError(f"unknown DJ kind {kind!r}")
    return [("cx", q, n) for q in range(n)] if kind == "balanced" else []


def dj_reference_circuit(kind: str, n: int) -> list[tuple]:
    gates: list[tuple] = [("x", n)]
    gates += [("h", q) for q in range(n + 1)]
    gates += dj_oracle_gates(kind, n)
    gates += [("h", q) for q in range(n)]
    gates += [("measure", q) for q in range(n)]
    return gates


def circuit_gate_count(algorithm: str, n: int) -> int:
    """Worst-case gate count (measurements included) of the reference circuits."""
    algorithm = algorithm.upper()
    if algorithm in ("DJ", "DJA"):
        return len(dj_reference_circuit("balanced", n))
    if algorithm in ("GDJ", "GDJA"):
        return len(gdj_reference_circuit(FunctionSpec(n, FunctionClass.CONSTANT11)))
    raise InputError(f"unknown algorithm {algorithm!r}")


def _check_width(n: int) -> None:
    if n < 1:
        raise InputError("register width n must be >= 1")
    if n > MAX_GDJ_WIDTH:
        raise ResourceError(f"n = {n} needs {2 * n + 2} qubits; the limit is {MAX_QUBITS}")


def gdj_initial_state(n: int) -> StateVector:
    """|0>^n |1>^n (x) |Phi->, before any Hadamard."""
    _check_width(n)
    sv = basis_state(2 * n + 2, "0" * n + "1" * n + "00")
    return sv.prepare_bell_phi_minus(2 * n, 2 * n + 1)


def gdj_encoded_state(spec: FunctionSpec, oracle: str = "phase") -> StateVector:
    """State after the first Hadamard layer and the oracle: what Alice transmits."""
    n = spec.n
    sv = gdj_initial_state(n)
    for q in range(2 * n):
        sv.apply_hadamard(q)
    if oracle == "phase":
        sv.apply_diagonal_phase(build_oracle_phase(spec).extended(2))
    elif oracle == "marking":
        sv.apply_gates(build_marking_oracle(spec))
    else:
        raise InputError(f"unknown oracle form {oracle!r}")
    return sv


def apply_index_hadamards(sv: StateVector, n_index: int) -> StateVector:
    for q in range(n_index):
        sv.apply_hadamard(q)
    return sv


def gdj_final_state(spec: FunctionSpec, oracle: str = "phase") -> StateVector:
    return apply_index_hadamards(gdj_encoded_state(spec, oracle), 2 * spec.n)


def dj_encoded_state(kind: str, n: int) -> StateVector:
    if n + 1 > MAX_QUBITS:
        raise ResourceError(f"n = {n} exceeds the simulator limit")
    sv = basis_state(n + 1, "0" * n + "1")
    for q in range(n + 1):
        sv.apply_hadamard(q)
    return sv.apply_gates(dj_oracle_gates(kind, n))


def dj_final_state(kind: str, n: int) -> StateVector:
    return apply_index_hadamards(dj_encoded_state(kind, n), n)


@functools.lru_cache(maxsize=None)
def _exact_distribution(algorithm: str, label: str, n: int) -> np.ndarray:
    if algorithm == "GDJ":
        sv = gdj_final_state(FunctionSpec(n, FunctionClass(label)))
        dist = sv.marginal(range(2 * n))
    else:
        dist = dj_final_state(label, n).marginal(range(n))
    dist = np.where(dist < 1e-14, 0.0, dist)
    dist = dist / dist.sum()
    dist.setflags(write=False)
    return dist


def exact_distribution(algorithm: str, label, n: int) -> np.ndarray:
    """Noiseless distribution over the measured register, cached per (algorithm, label, n)."""
    algorithm = algorithm.upper().rstrip("A")
    if isinstance(label, FunctionClass):
        label = label.value
    return _exact_distribution(algorithm, label, n)


# runs

def _modal_pattern(counts: dict[str, int]) -> str:
    return min(counts, key=lambda k: (-counts[k], k))


def run_gdj(spec: FunctionSpec, rng: Optional[RandomSource] = None, shots: Optional[int] = None,
            force: bool = False, oracle: str = "phase") -> AlgorithmOutcome:
    """Run the GDJ circuit and decode the index registers.

    Without ``shots`` the decode reads the most probable pattern off the exact
    probability vector. With ``shots`` the pattern is the mode of sampled counts.
    """
    n = spec.n
    _check_width(n)
    if not spec.is_promise and not force:
        raise PromiseViolation("function is not constant on each register; pass force=True")
    sv = gdj_final_state(spec, oracle if spec.is_promise else "phase")
    index_qubits = list(range(2 * n))

    counts = None
    if shots is None:
        marg = sv.marginal(index_qubits)
        k = int(np.argmax(marg))
        pattern, prob = index_to_bits(k, 2 * n), float(marg[k])
    else:
        if rng is None:
            raise InputError("sampling mode needs a RandomSource")
        counts = dict(sorted(sv.sample_counts(index_qubits, shots, rng).items()))
        pattern = _modal_pattern(counts)
        prob = None

    i_bits, j_bits = pattern[:n], pattern[n:]
    try:
        fclass = decode_outcome(i_bits, j_bits, n)[0]
    except DecodeError:
        if not force:
            raise
        fclass = None
    return AlgorithmOutcome(spec, i_bits, j_bits, fclass, prob, shots, counts)


def run_gd(spec: FunctionSpec, rng: Optional[RandomSource] = None, shots: Optional[int] = None,
           force: bool = False) -> AlgorithmOutcome:
    if spec.n != 1:
        raise InputError("the Generalized Deutsch circuit takes n = 1")
    return run_gdj(spec, rng, shots, force)


def run_dj(kind: str, n: int) -> str:
    """Standard Deutsch-Jozsa decision on the exact final state."""
    marg = dj_final_state(kind, n).marginal(range(n))
    return decode_dj(index_to_bits(int(np.argmax(marg)), n))
