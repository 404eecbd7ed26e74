"""Promise functions and the two-register phase oracle.

The oracle multiplies ``|x, y>`` by ``(-1)^(parity(~x) * f_x(x) + parity(y) * f_y(y))``
where ``~x`` is the bitwise complement of the n-bit string ``x``. For n = 1
parity is the bit itself, so the exponent is ``(1 - x) f(x) + y f(y)``.

Register layout for a width-n oracle: qubits ``0..n-1`` hold x, ``n..2n-1``
hold y and the Bell ancilla pair sits on ``2n`` and ``2n+1``.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .errors import InputError


class FunctionClass(enum.Enum):
    CONSTANT00 = "constant00"
    CONSTANT11 = "constant11"
    BALANCED01 = "balanced01"
    BALANCED10 = "balanced10"

    @property
    def values(self) -> tuple[int, int]:
        """(value on the x register, value on the y register)."""
        return _VALUES[self]

    @property
    def kind(self) -> str:
        a, b = self.values
        return "constant" if a == b else "balanced"

    @classmethod
    def from_values(cls, a: int, b: int) -> "FunctionClass":
        return _BY_VALUES[(int(a), int(b))]

    @classmethod
    def parse(cls, name: str) -> "FunctionClass":
        try:
            return cls(name.lower())
        except ValueError:
            choices = ", ".join(c.value for c in cls)
            raise InputError(f"unknown function class {name!r}; choose one of {choices}") from None


_VALUES = {
    FunctionClass.CONSTANT00: (0, 0),
    FunctionClass.CONSTANT11: (1, 1),
    FunctionClass.BALANCED01: (0, 1),
    FunctionClass.BALANCED10: (1, 0),
}
_BY_VALUES = {v: k for k, v in _VALUES.items()}


def _parity(values: np.ndarray) -> np.ndarray:
    return np.array([bin(int(v)).count("1") & 1 for v in values], dtype=np.int64)


@dataclass(frozen=True)
class FunctionSpec:
    """A function on two n-bit registers.

    ``fclass`` is set for promise functions. General truth tables, indexed
    by the integer value of the register bitstring, can be given instead for
    exercising behaviour outside the promise.
    """

    n: int
    fclass: Optional[FunctionClass] = None
    f_x: tuple[int, ...] = field(default=())
    f_y: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.n < 1:
            raise InputError("register width n must be >= 1")
        size = 1 << self.n
        if self.fclass is not None:
            a, b = self.fclass.values
            if not self.f_x:
                object.__setattr__(self, "f_x", (a,) * size)
            if not self.f_y:
                object.__setattr__(self, "f_y", (b,) * size)
        for name in ("f_x", "f_y"):
            table = getattr(self, name)
            if len(table) != size:
                raise InputError(f"{name} has {len(table)} entries, expected {size}")
            if any(v not in (0, 1) for v in table):
                raise InputError(f"{name} entries must be bits")
        if self.fclass is None and is_valid_promise(self.f_x, self.f_y):
            object.__setattr__(
                self, "fclass", FunctionClass.from_values(self.f_x[0], self.f_y[0]))
        elif self.fclass is not None and (set(self.f_x), set(self.f_y)) != (
                {self.fclass.values[0]}, {self.fclass.values[1]}):
            raise InputError("truth tables disagree with the declared class")

    @property
    def is_promise(self) -> bool:
        return self.fclass is not None

    @property
    def values(self) -> tuple[int, int]:
        if self.fclass is None:
            raise InputError("function is not constant on each register")
        return self.fclass.values

    def to_json(self) -> dict:
        if self.fclass is None:
            return {"n": self.n, "f_x": list(self.f_x), "f_y": list(self.f_y)}
        return {"n": self.n, "class": self.fclass.value}

    @classmethod
    def from_json(cls, obj: Mapping | str) -> "FunctionSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if "class" in obj:
            return make_function(FunctionClass.parse(obj["class"]), int(obj["n"]))
        return cls(int(obj["n"]), None, tuple(obj["f_x"]), tuple(obj["f_y"]))


def make_function(fclass: FunctionClass | str, n: int) -> FunctionSpec:
    if isinstance(fclass, str):
        fclass = FunctionClass.parse(fclass)
    return FunctionSpec(n, fclass)


def is_valid_promise(f_x, f_y) -> bool:
    """True iff both truth tables are constant."""
    for table in (f_x, f_y):
        size = len(table)
        if size == 0 or size & (size - 1):
            raise InputError(f"truth table of length {size} does not cover 2^n inputs")
    return len(set(f_x)) == 1 and len(set(f_y)) == 1


@dataclass(frozen=True)
class OraclePhase:
    num_index_qubits: int
    signs: np.ndarray

    def extended(self, extra_qubits: int) -> np.ndarray:
        """Sign vector over index qubits followed by ``extra_qubits`` untouched qubits."""
        return np.repeat(self.signs, 1 << extra_qubits)


def build_oracle_phase(spec: FunctionSpec) -> OraclePhase:
    n = spec.n
    size = 1 << n
    idx = np.arange(size)
    fx = np.asarray(spec.f_x, dtype=np.int64)
    fy = np.asarray(spec.f_y, dtype=np.int64)
    x_term = _parity(idx ^ (size - 1)) * fx
    y_term = _parity(idx) * fy
    exponent = (x_term[:, None] + y_term[None, :]) & 1
    signs = (1 - 2 * exponent).reshape(-1)
    return OraclePhase(2 * n, signs)


def build_marking_oracle(spec: FunctionSpec) -> list[tuple]:
    """CNOT circuit realising the phase oracle by kickback off the Bell ancilla.

    (|00> - |11>)/sqrt(2) is the -1 eigenstate of X (x) X, so a control that
    drives CNOTs into both ancilla qubits contributes ``(-1)^control``. The
    x-register term uses the complemented bit, obtained by an X before and
    after. Only promise functions are supported; their exponent is linear.
    """
    a, b = spec.values
    n = spec.n
    anc1, anc2 = 2 * n, 2 * n + 1
    gates: list[tuple] = []
    if a:
        for q in range(n):
            gates += [("x", q), ("cx", q, anc1), ("cx", q, anc2), ("x", q)]
    if b:
        for q in range(n, 2 * n):
            gates += [("cx", q, anc1), ("cx", q, anc2)]
    return gates
