"""Weighted ensembles of threshold classifiers evaluated through the GDJ oracle,
plus the analytic and Monte-Carlo models behind the noise, information-gain,
resource and accuracy-spread panels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import binom

from .algorithm import DJ_KINDS, circuit_gate_count, exact_distribution
from .errors import InputError
from .oracle import FunctionClass
from .statevector import RandomSource, StateVector

CLASS_LABELS = ("00", "01", "10", "11")
BERRY_ESSEEN_C = 0.4748
DEFAULT_BETA = 0.8
DEFAULT_GAMMA = 0.3
DEFAULT_STD_ETA = 0.02
DEFAULT_NOISE_WIDTH = 5


@dataclass(frozen=True)
class ClassifierSpec:
    theta: tuple[float, ...]
    phi: float
    weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        if not 0.0 <= self.weight <= 1.0:
            raise InputError(f"classifier weight {self.weight} is outside [0, 1]")


def heaviside_classify(spec: ClassifierSpec, x: Sequence[int]) -> int:
    """Threshold unit: 1 when theta . x - phi >= 0, else 0."""
    if len(spec.theta) != len(x):
        raise InputError(f"theta has dimension {len(spec.theta)}, feature vector {len(x)}")
    return int(float(np.dot(spec.theta, x)) - spec.phi >= 0.0)


@dataclass
class EnsembleConfig:
    """Classifiers with weights rescaled to sum to one on construction."""

    classifiers: list[ClassifierSpec]
    feature_dim: int
    n: int = field(init=False)

    def __post_init__(self):
        if not self.classifiers:
            raise InputError("ensemble needs at least one classifier")
        if self.feature_dim < 1:
            raise InputError("feature dimension must be >= 1")
        for c in self.classifiers:
            if len(c.theta) != self.feature_dim:
                raise InputError("classifier dimension does not match the feature dimension")
        total = sum(c.weight for c in self.classifiers)
        if total <= 0:
            raise InputError("classifier weights sum to zero")
        self.classifiers = [ClassifierSpec(c.theta, c.phi, c.weight / total) for c in self.classifiers]
        self.n = math.ceil(math.log2(self.feature_dim))

    @property
    def weights(self) -> list[float]:
        return [c.weight for c in self.classifiers]


def encode_feature_superposition(n: int) -> StateVector:
    if n < 1:
        raise InputError("n must be >= 1")
    size = 1 << n
    return StateVector(np.full(size, size ** -0.5, dtype=np.complex128))


def classifier_label(spec: ClassifierSpec, x: Sequence[int], y: Sequence[int]) -> str:
    return f"{heaviside_classify(spec, x)}{heaviside_classify(spec, y)}"


def class_probabilities(config: EnsembleConfig, pair: tuple[Sequence[int], Sequence[int]]) -> dict[str, float]:
    """Probability of each two-register class: the summed weight of classifiers landing in it."""
    weights = config.weights
    if abs(sum(weights) - 1.0) > 1e-12:
        raise InputError("weights are not normalized")
    x, y = pair
    probs = dict.fromkeys(CLASS_LABELS, 0.0)
    for c in config.classifiers:
        probs[classifier_label(c, x, y)] += c.weight
    return probs


def collapse_positive(probs: Mapping[str, float]) -> dict[str, float]:
    """Two-way view: a pair is positive when either register output is 1."""
    neg = probs.get("00", 0.0)
    return {"negative": neg, "positive": sum(probs.values()) - neg}


def decide(probs: Mapping[str, float], rng: RandomSource, tol: float = 1e-12) -> str:
    """Argmax label; exact ties (within ``tol``) are broken uniformly by ``rng``."""
    if not probs:
        raise InputError("empty distribution")
    top = max(probs.values())
    tied = [k for k, v in probs.items() if top - v <= tol]
    if len(tied) == 1:
        return tied[0]
    return tied[int(rng.integers(len(tied)))]


def toy_majority_state(votes: Sequence[int]) -> StateVector:
    """(1/sqrt(B)) sum_j |j>|vote_j>; the vote qubit is the last one."""
    votes = [int(v) for v in votes]
    if not votes or any(v not in (0, 1) for v in votes):
        raise InputError("votes must be a non-empty list of bits")
    width = max(1, math.ceil(math.log2(len(votes))))
    amps = np.zeros(1 << (width + 1), dtype=np.complex128)
    for j, v in enumerate(votes):
        amps[(j << 1) | v] = 1.0
    amps /= math.sqrt(len(votes))
    return StateVector(amps)


def vote_probability(sv: StateVector) -> float:
    """Probability that the last (vote) qubit reads 1."""
    return float(sv.marginal([sv.num_qubits - 1])[1])


# analytic models

def _check_model(model: str) -> str:
    m = model.upper()
    if m in ("DJ", "DJA"):
        return "DJA"
    if m in ("GDJ", "GDJA"):
        return "GDJA"
    raise InputError(f"unknown model {model!r}; choose DJA or GDJA")


def noise_accuracy(model: str, eta: float, beta: float = DEFAULT_BETA, gamma: float = DEFAULT_GAMMA) -> float:
    """Linear (DJA) or quadratic (GDJA) accuracy loss in the noise level, clamped to [0, 1]."""
    model = _check_model(model)
    if gamma >= beta:
        raise InputError("the quadratic coefficient gamma must be below beta")
    if not 0.0 <= eta <= 1.0:
        raise InputError("eta must lie in [0, 1]")
    acc = 1.0 - beta * eta if model == "DJA" else 1.0 - gamma * eta ** 2
    return min(1.0, max(0.0, acc))


def information_gain(model: str, n: int) -> float:
    model = _check_model(model)
    if n < 1:
        raise InputError("n must be >= 1")
    return 1.0 if model == "DJA" else 1.0 + math.log2(n)


# Per-qubit gate constants anchored on the measured n = 1 reference circuits.
GATE_CONST_DJA = circuit_gate_count("DJA", 1)
GATE_CONST_GDJA = circuit_gate_count("GDJA", 1)


def resource_counts(model: str, n: int) -> tuple[int, int]:
    """(qubits, gates) under the n + 1 / 2n + 1 qubit and O(n) / O(n^2) gate models."""
    model = _check_model(model)
    if n < 1:
        raise InputError("n must be >= 1")
    if model == "DJA":
        return n + 1, GATE_CONST_DJA * n
    return 2 * n + 1, GATE_CONST_GDJA * n * n


def berry_esseen_bound(n: int, sigma: float = 1.0, rho: float = 1.0, C: float = BERRY_ESSEEN_C) -> float:
    if sigma <= 0 or rho <= 0:
        raise InputError("sigma and rho must be positive")
    if n < 1:
        raise InputError("sample count must be >= 1")
    return C * rho / (sigma ** 3 * math.sqrt(n))


# noisy decoding

def _register_majority(bits: np.ndarray, n: int) -> np.ndarray:
    """Per-row majority of an (m, n) bit array: 1, 0, or -1 on a tie."""
    ones = bits.sum(axis=1)
    out = np.where(2 * ones > n, 1, 0)
    return np.where(2 * ones == n, -1, out)


def _unpack(indices: np.ndarray, width: int) -> np.ndarray:
    shifts = np.arange(width - 1, -1, -1)
    return (indices[:, None] >> shifts) & 1


def noisy_decode_hits(model: str, n: int, eta: float, labels: np.ndarray, rng: RandomSource) -> np.ndarray:
    """Boolean array: did each noisy run decode its label correctly?

    ``labels`` indexes the symbol set (DJ_KINDS for DJA, FunctionClass order
    for GDJA). Each trial draws the measured pattern from the noiseless
    distribution and flips every measured bit independently with probability
    ``eta``. DJA uses the standard zero test; GDJA decodes each register by
    majority vote, a tie counting as a failure.
    """
    model = _check_model(model)
    gen = rng.generator
    symbols = DJ_KINDS if model == "DJA" else tuple(FunctionClass)
    width = n if model == "DJA" else 2 * n
    outcomes = np.empty(labels.size, dtype=np.int64)
    for k, sym in enumerate(symbols):
        sel = labels == k
        count = int(sel.sum())
        if count:
            dist = exact_distribution("DJ" if model == "DJA" else "GDJ", sym, n)
            outcomes[sel] = gen.choice(dist.size, size=count, p=dist)
    bits = _unpack(outcomes, width)
    bits ^= (gen.random(bits.shape) < eta).astype(np.int64)

    if model == "DJA":
        decoded = (bits.sum(axis=1) > 0).astype(np.int64)
        return decoded == labels
    a = _register_majority(bits[:, :n], n)
    b = 1 - _register_majority(bits[:, n:], n)
    ok = (a >= 0) & (b <= 1)
    values = np.array([c.values for c in FunctionClass])
    return ok & (a == values[labels, 0]) & (b == values[labels, 1])


def monte_carlo_noise_accuracy(model: str, n: int, eta: float, trials: int, rng: RandomSource) -> float:
    """Fraction of correct decodes over ``trials`` runs with uniformly drawn symbols."""
    model = _check_model(model)
    if trials < 1:
        raise InputError("trials must be >= 1")
    if not 0.0 <= eta <= 1.0:
        raise InputError("eta must lie in [0, 1]")
    n_symbols = 2 if model == "DJA" else 4
    labels = rng.integers(n_symbols, size=trials)
    return float(noisy_decode_hits(model, n, eta, labels, rng).mean())


def analytic_noise_accuracy(model: str, n: int, eta: float) -> float:
    """Closed-form expectation of :func:`monte_carlo_noise_accuracy`."""
    model = _check_model(model)
    if model == "DJA":
        # constant -> 0^n must survive untouched; balanced (parity) -> 1^n fails only if all flip
        return 0.5 * ((1 - eta) ** n + 1 - eta ** n)
    register_ok = binom.cdf((n - 1) // 2, n, eta)
    return float(register_ok ** 2)


def accuracy_std_vs_dimension(model: str, dims: Sequence[int], trials: int, rng: RandomSource,
                              eta: float = DEFAULT_STD_ETA) -> list[float]:
    """Spread of batch accuracy across ``trials`` batches at each feature dimension d.

    A batch at dimension d scores d noisy decodes on registers of
    n = max(1, ceil(log2 d)) qubits, each with a uniformly drawn symbol.
    """
    model = _check_model(model)
    if trials < 2:
        raise InputError("need at least two trials for a standard deviation")
    n_symbols = 2 if model == "DJA" else 4
    out = []
    for d, child in zip(dims, rng.spawn(len(dims))):
        if d < 1:
            raise InputError("dimensions must be >= 1")
        n = max(1, math.ceil(math.log2(d)))
        labels = child.integers(n_symbols, size=trials * d)
        hits = noisy_decode_hits(model, n, eta, labels, child).reshape(trials, d)
        out.append(float(hits.mean(axis=1).std(ddof=1)))
    return out
