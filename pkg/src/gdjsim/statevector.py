"""Dense statevector engine.

Qubit 0 is the most significant bit of the basis index, so the bitstring
``"10"`` on two qubits is index 2. Gates act in place on a view of the
amplitude array reshaped to ``(2,) * num_qubits``; every method returns the
instance so calls can be chained.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, PreconditionError, ResourceError

MAX_QUBITS = 24
PROB_TOL = 1e-10
AMP_TOL = 1e-12

_SQRT1_2 = 1.0 / np.sqrt(2.0)


class RandomSource:
    """Seeded PCG64 generator with reproducible child streams.

    Children are derived through :class:`numpy.random.SeedSequence`, so a
    parallel trial never shares state with its parent or its siblings.
    """

    def __init__(self, seed: int = 0):
        self.seed = int(seed)
        self._seq = np.random.SeedSequence(self.seed)
        self.generator = np.random.Generator(np.random.PCG64(self._seq))

    @classmethod
    def _from_sequence(cls, seq: np.random.SeedSequence) -> "RandomSource":
        obj = cls.__new__(cls)
        obj.seed = int(seq.generate_state(1, dtype=np.uint64)[0])
        obj._seq = seq
        obj.generator = np.random.Generator(np.random.PCG64(seq))
        return obj

    def spawn(self, count: int) -> list["RandomSource"]:
        return [RandomSource._from_sequence(s) for s in self._seq.spawn(count)]

    def child(self) -> "RandomSource":
        return self.spawn(1)[0]

    def random(self, size=None):
        return self.generator.random(size)

    def integers(self, low, high=None, size=None):
        return self.generator.integers(low, high, size=size)

    def choice(self, a, size=None, p=None):
        return self.generator.choice(a, size=size, p=p)


def bits_to_index(bits: str) -> int:
    return int(bits, 2) if bits else 0


def index_to_bits(index: int, width: int) -> str:
    return format(index, f"0{width}b") if width else ""


class StateVector:
    def __init__(self, amplitudes: np.ndarray):
        amps = np.asarray(amplitudes, dtype=np.complex128)
        size = amps.shape[0]
        num_qubits = size.bit_length() - 1
        if amps.ndim != 1 or size != 1 << num_qubits or num_qubits < 1:
            raise InputError(f"amplitude vector length {size} is not 2^q with q >= 1")
        if num_qubits > MAX_QUBITS:
            raise ResourceError(f"{num_qubits} qubits exceeds the limit of {MAX_QUBITS}")
        self.num_qubits = num_qubits
        self.amplitudes = amps.copy()

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes)

    def __len__(self):
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def _tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def _check_qubit(self, qubit: int) -> None:
        if not 0 <= qubit < self.num_qubits:
            raise InputError(f"qubit {qubit} out of range for {self.num_qubits} qubits")

    # gates

    def apply_hadamard(self, qubit: int) -> "StateVector":
        self._check_qubit(qubit)
        t = np.moveaxis(self._tensor(), qubit, 0)
        a0, a1 = t[0].copy(), t[1].copy()
        t[0] = (a0 + a1) * _SQRT1_2
        t[1] = (a0 - a1) * _SQRT1_2
        return self

    def apply_x(self, qubit: int) -> "StateVector":
        self._check_qubit(qubit)
        t = np.moveaxis(self._tensor(), qubit, 0)
        t[[0, 1]] = t[[1, 0]]
        return self

    def apply_cnot(self, control: int, target: int) -> "StateVector":
        self._check_qubit(control)
        self._check_qubit(target)
        if control == target:
            raise InputError("control and target must differ")
        t = np.moveaxis(self._tensor(), (control, target), (0, 1))
        t[1, [0, 1]] = t[1, [1, 0]]
        return self

    def apply_diagonal_phase(self, phases: Sequence[int] | np.ndarray) -> "StateVector":
        signs = np.asarray(phases)
        if signs.shape != self.amplitudes.shape:
            raise InputError(f"phase vector has length {signs.size}, expected {len(self)}")
        if not np.all(np.abs(signs) == 1) or np.any(np.imag(signs) != 0):
            raise InputError("phase entries must be +1 or -1")
        self.amplitudes *= signs.real
        return self

    def apply_gates(self, gates: Iterable[tuple]) -> "StateVector":
        """Run a gate list of ``("h", q)``, ``("x", q)`` or ``("cx", c, t)`` tuples."""
        for gate in gates:
            name, *wires = gate
            if name == "h":
                self.apply_hadamard(*wires)
            elif name == "x":
                self.apply_x(*wires)
            elif name == "cx":
                self.apply_cnot(*wires)
            else:
                raise InputError(f"unknown gate {name!r}")
        return self

    def prepare_bell_phi_minus(self, q1: int, q2: int) -> "StateVector":
        """Turn the pair (q1, q2), currently |00>, into (|00> - |11>)/sqrt(2)."""
        if q1 == q2:
            raise InputError("Bell pair needs two distinct qubits")
        marginal = self.marginal([q1, q2])
        if abs(marginal[0] - 1.0) > PROB_TOL:
            raise PreconditionError(f"qubits ({q1}, {q2}) are not in |00>")
        return self.apply_x(q1).apply_hadamard(q1).apply_cnot(q1, q2)

    # readout

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def probability_dict(self, cutoff: float = PROB_TOL) -> dict[str, float]:
        probs = self.probabilities()
        return {index_to_bits(i, self.num_qubits): float(p)
                for i, p in enumerate(probs) if p > cutoff}

    def marginal(self, qubits: Sequence[int]) -> np.ndarray:
        """Marginal distribution over ``qubits``, indexed in the listed order."""
        qubits = list(qubits)
        if not qubits:
            raise InputError("qubit list is empty")
        for q in qubits:
            self._check_qubit(q)
        if len(set(qubits)) != len(qubits):
            raise InputError("qubit list has duplicates")
        probs = self.probabilities().reshape((2,) * self.num_qubits)
        rest = tuple(q for q in range(self.num_qubits) if q not in qubits)
        summed = probs.sum(axis=rest) if rest else probs
        # summed keeps the kept axes in ascending order; permute to the requested order
        order = sorted(qubits)
        summed = np.transpose(summed, [order.index(q) for q in qubits])
        return summed.reshape(-1)

    def marginal_dict(self, qubits: Sequence[int], cutoff: float = PROB_TOL) -> dict[str, float]:
        marg = self.marginal(qubits)
        return {index_to_bits(i, len(qubits)): float(p) for i, p in enumerate(marg) if p > cutoff}

    def measure_subset(self, qubits: Sequence[int], rng: RandomSource) -> str:
        """Sample ``qubits`` from their marginal and collapse the state onto the result."""
        qubits = list(qubits)
        marg = self.marginal(qubits)
        marg = marg / marg.sum()
        outcome = int(rng.choice(marg.size, p=marg))
        bits = index_to_bits(outcome, len(qubits))

        mask = np.ones((2,) * self.num_qubits, dtype=bool)
        for q, b in zip(qubits, bits):
            sl = [slice(None)] * self.num_qubits
            sl[q] = 1 - int(b)
            mask[tuple(sl)] = False
        self.amplitudes[~mask.reshape(-1)] = 0.0
        self.amplitudes /= np.sqrt(self.norm())
        return bits

    def sample_counts(self, qubits: Sequence[int], shots: int, rng: RandomSource) -> dict[str, int]:
        """Repeated measurement of ``qubits`` on fresh copies of this state."""
        if shots < 1:
            raise InputError("shots must be >= 1")
        marg = self.marginal(qubits)
        marg = marg / marg.sum()
        draws = rng.generator.multinomial(shots, marg)
        width = len(qubits)
        return {index_to_bits(i, width): int(c) for i, c in enumerate(draws) if c}


def basis_state(num_qubits: int, bits: str) -> StateVector:
    if len(bits) != num_qubits or any(b not in "01" for b in bits):
        raise InputError(f"bitstring {bits!r} does not describe {num_qubits} qubits")
    if num_qubits > MAX_QUBITS:
        raise ResourceError(f"{num_qubits} qubits exceeds the limit of {MAX_QUBITS}")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[bits_to_index(bits)] = 1.0
    return StateVector(amps)


# Functional aliases; each mutates ``sv`` and returns it.

def apply_hadamard(sv: StateVector, qubit: int) -> StateVector:
    return sv.apply_hadamard(qubit)


def apply_x(sv: StateVector, qubit: int) -> StateVector:
    return sv.apply_x(qubit)


def apply_cnot(sv: StateVector, control: int, target: int) -> StateVector:
    return sv.apply_cnot(control, target)


def apply_diagonal_phase(sv: StateVector, phases) -> StateVector:
    return sv.apply_diagonal_phase(phases)


def prepare_bell_phi_minus(sv: StateVector, q1: int, q2: int) -> StateVector:
    return sv.prepare_bell_phi_minus(q1, q2)


def probabilities(sv: StateVector) -> dict[str, float]:
    return sv.probability_dict()


def measure_subset(sv: StateVector, qubits: Sequence[int], rng: RandomSource) -> str:
    return sv.measure_subset(qubits, rng)
