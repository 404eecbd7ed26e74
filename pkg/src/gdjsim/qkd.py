"""DJ/GDJ key-distribution sessions with an intercept-resend eavesdropper.

Each trial runs Alice -> channel -> Bob:

1. Alice draws a symbol (constant/balanced for DJ, one of four classes for
   GDJ), applies the Hadamard layer and the oracle, and sends every qubit.
2. With probability ``eta`` Eve measures all qubits in the computational
   basis and resends the basis state she saw.
3. Bob applies Hadamards to the index registers, measures and decodes.

On publicly compared trials a flag is raised when Bob's symbol differs from
Alice's, when his pattern is outside the decode table, or through background
noise at rate ``q0``.

The quantum steps are exact statevector computations, cached per symbol and
per resent basis state, so a session costs a handful of vectorized draws.
"""
from __future__ import annotations

import functools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .algorithm import (DJ_KINDS, MAX_GDJ_WIDTH, apply_index_hadamards, decode_table,
                        dj_encoded_state, exact_distribution, gdj_encoded_state)
from .errors import InputError, ResourceError
from .oracle import FunctionClass, FunctionSpec
from .statevector import MAX_QUBITS, RandomSource, StateVector

PROTOCOLS = ("DJ", "GDJ")
IDEAL_ALPHA = {"DJ": 0.5, "GDJ": 0.75}
K_DJ = 8e-4
K_GDJ = 2.5e-3
DEFAULT_ETA = 0.1
DECODE_ERROR = "decode_error"


def _protocol(name: str) -> str:
    p = name.upper()
    if p not in PROTOCOLS:
        raise InputError(f"unknown protocol {name!r}; choose DJ or GDJ")
    return p


def _symbols(protocol: str) -> tuple[str, ...]:
    return DJ_KINDS if protocol == "DJ" else tuple(c.value for c in FunctionClass)


@dataclass(frozen=True)
class AttackModel:
    kind: str = "intercept_resend"
    basis: str = "computational"


@dataclass
class QkdConfig:
    protocol: str = "GDJ"
    n: int = 1
    d: int = 1000
    eta: float = 0.0
    q0: float = 0.0
    k: Optional[float] = None
    test_fraction: float = 1.0
    seed: int = 0

    def __post_init__(self):
        self.protocol = _protocol(self.protocol)
        if self.n < 1:
            raise InputError("n must be >= 1")
        limit = MAX_GDJ_WIDTH if self.protocol == "GDJ" else MAX_QUBITS - 1
        if self.n > limit:
            raise ResourceError(f"n = {self.n} exceeds the simulator capacity for {self.protocol}")
        if self.d < 1:
            raise InputError("d must be >= 1")
        if not 0.0 <= self.eta <= 1.0:
            raise InputError("eta must lie in [0, 1]")
        if not 0.0 <= self.q0 < 1.0:
            raise InputError("q0 must lie in [0, 1)")
        if not 0.0 < self.test_fraction <= 1.0:
            raise InputError("test_fraction must lie in (0, 1]")
        if self.k is not None and self.k <= 0:
            raise InputError("k must be positive")

    @property
    def alpha(self) -> float:
        return IDEAL_ALPHA[self.protocol]

    @property
    def rate_constant(self) -> float:
        return self.k if self.k is not None else rate_constant_from_alpha(self.alpha)

    @property
    def q1_estimate(self) -> float:
        return self.q0 + self.alpha * self.eta

    @property
    def threshold(self) -> float:
        return 0.5 * (self.q0 + self.q1_estimate)


@dataclass(frozen=True)
class TrialRecord:
    alice: str
    attacked: bool
    tested: bool
    bob: str
    flagged: bool


@dataclass
class QkdTranscript:
    config: QkdConfig
    alice: np.ndarray
    attacked: np.ndarray
    tested: np.ndarray
    bob: np.ndarray
    flagged: np.ndarray
    attack: AttackModel = field(default_factory=AttackModel)

    @property
    def symbols(self) -> tuple[str, ...]:
        return _symbols(self.config.protocol)

    @property
    def flag_count(self) -> int:
        return int(self.flagged.sum())

    @property
    def compared(self) -> int:
        return int(self.tested.sum())

    @property
    def sample_mean(self) -> float:
        return self.flag_count / self.compared if self.compared else float("nan")

    @property
    def detected(self) -> bool:
        return self.compared > 0 and self.sample_mean > self.config.threshold

    @property
    def key_trials(self) -> int:
        """Non-test trials whose pattern decoded to a symbol."""
        return int(np.count_nonzero(~self.tested & (self.bob >= 0)))

    @property
    def raw_key_bits(self) -> int:
        return key_rate(self.config.protocol) * self.key_trials

    @property
    def raw_key_bits_entropy(self) -> int:
        return entropy_key_rate(self.config.protocol) * self.key_trials

    @property
    def alpha_measured(self) -> float:
        """Mismatch rate on compared attacked trials, before background noise."""
        sel = self.tested & self.attacked
        if not sel.any():
            return float("nan")
        return float(np.mean(self.bob[sel] != self.alice[sel]))

    @property
    def trials(self) -> Iterator[TrialRecord]:
        syms = self.symbols
        for a, e, t, b, f in zip(self.alice, self.attacked, self.tested, self.bob, self.flagged):
            yield TrialRecord(syms[a], bool(e), bool(t), syms[b] if b >= 0 else DECODE_ERROR, bool(f))

    def summary(self) -> dict:
        cfg = self.config
        return {
            "config": asdict(cfg),
            "attack": asdict(self.attack),
            "flag_count": self.flag_count,
            "compared": self.compared,
            "sample_mean": self.sample_mean if self.compared else None,
            "threshold": cfg.threshold,
            "detected": self.detected,
            "alpha_ideal": cfg.alpha,
            "alpha_measured": None if math.isnan(self.alpha_measured) else self.alpha_measured,
            "raw_key_bits": self.raw_key_bits,
            "raw_key_bits_with_type_bit": self.raw_key_bits,
            "raw_key_bits_entropy": self.raw_key_bits_entropy,
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps({"t": t, **asdict(rec)}, sort_keys=True)
                 for t, rec in enumerate(self.trials)]
        lines.append(json.dumps({"summary": self.summary()}, sort_keys=True))
        return "\n".join(lines) + "\n"


# channel model

@functools.lru_cache(maxsize=None)
def _encoded(protocol: str, symbol: str, n: int) -> StateVector:
    if protocol == "GDJ":
        return gdj_encoded_state(FunctionSpec(n, FunctionClass(symbol)))
    return dj_encoded_state(symbol, n)


def _index_width(protocol: str, n: int) -> int:
    return 2 * n if protocol == "GDJ" else n


@functools.lru_cache(maxsize=None)
def eve_distribution(protocol: str, symbol: str, n: int) -> np.ndarray:
    """Distribution of Eve's computational-basis reading of everything Alice sends."""
    p = _encoded(protocol, symbol, n).probabilities()
    p = np.where(p < 1e-14, 0.0, p)
    return p / p.sum()


@functools.lru_cache(maxsize=None)
def bob_after_resend(protocol: str, n: int, basis_index: int) -> np.ndarray:
    """Bob's outcome distribution when Eve resends basis state ``basis_index``."""
    total = 2 * n + 2 if protocol == "GDJ" else n + 1
    width = _index_width(protocol, n)
    sv = StateVector(np.eye(1, 1 << total, basis_index, dtype=np.complex128)[0])
    dist = apply_index_hadamards(sv, width).marginal(range(width))
    return dist / dist.sum()


@functools.lru_cache(maxsize=None)
def _decode_lookup(protocol: str, n: int) -> np.ndarray:
    """Pattern index -> symbol index, -1 outside the decode table."""
    width = _index_width(protocol, n)
    table = np.full(1 << width, -1, dtype=np.int64)
    if protocol == "DJ":
        table[:] = 1
        table[0] = 0
    else:
        order = list(FunctionClass)
        for (i, j), cls in decode_table(n).items():
            table[int(i + j, 2)] = order.index(cls)
    return table


def run_session(config: QkdConfig, rng: Optional[RandomSource] = None) -> QkdTranscript:
    proto, n, d = config.protocol, config.n, config.d
    rng = rng if rng is not None else RandomSource(config.seed)
    gen = rng.generator
    symbols = _symbols(proto)

    alice = gen.integers(len(symbols), size=d)
    attacked = gen.random(d) < config.eta
    n_test = max(1, int(round(config.test_fraction * d)))
    tested = np.zeros(d, dtype=bool)
    tested[gen.permutation(d)[:n_test]] = True
    noise = gen.random(d) < config.q0

    outcome = np.empty(d, dtype=np.int64)
    for s, sym in enumerate(symbols):
        honest = (alice == s) & ~attacked
        if honest.any():
            dist = exact_distribution(proto, sym, n)
            outcome[honest] = gen.choice(dist.size, size=int(honest.sum()), p=dist)
        hit = (alice == s) & attacked
        if hit.any():
            eve_dist = eve_distribution(proto, sym, n)
            seen = gen.choice(eve_dist.size, size=int(hit.sum()), p=eve_dist)
            resent = np.empty(seen.size, dtype=np.int64)
            for k in np.unique(seen):
                sel = seen == k
                bob_dist = bob_after_resend(proto, n, int(k))
                resent[sel] = gen.choice(bob_dist.size, size=int(sel.sum()), p=bob_dist)
            outcome[hit] = resent

    bob = _decode_lookup(proto, n)[outcome]
    flagged = tested & ((bob != alice) | noise)
    return QkdTranscript(config, alice, attacked, tested, bob, flagged)


def session_blocks(config: QkdConfig, blocks: int, rng: Optional[RandomSource] = None) -> np.ndarray:
    """Sample means of ``blocks`` independent sessions of ``config.d`` fully compared trials.

    Trials are i.i.d. given the config, so one long session cut into blocks is
    distributed exactly like ``blocks`` separate sessions.
    """
    if blocks < 1:
        raise InputError("blocks must be >= 1")
    long_cfg = QkdConfig(config.protocol, config.n, config.d * blocks, config.eta, config.q0,
                         config.k, 1.0, config.seed)
    tr = run_session(long_cfg, rng)
    return tr.flagged.reshape(blocks, config.d).mean(axis=1)


def miss_rate_monte_carlo(config: QkdConfig, sessions: int, rng: Optional[RandomSource] = None) -> float:
    """Fraction of attacked sessions whose flag rate stays at or below the midpoint threshold."""
    means = session_blocks(config, sessions, rng)
    return float(np.mean(means <= config.threshold))


# analytic formulas

def detection_probability(d: float, k: float, eta: float) -> float:
    if k <= 0:
        raise InputError("k must be positive")
    if not 0.0 <= eta <= 1.0:
        raise InputError("eta must lie in [0, 1]")
    return -math.expm1(-k * d * eta)


def waypoint_dimension(target_p: float, k: float, eta: float) -> float:
    """Dimension at which the detection probability reaches ``target_p``."""
    if not 0.0 < target_p < 1.0:
        raise InputError("target probability must lie in (0, 1)")
    if k <= 0 or eta <= 0:
        raise InputError("k and eta must be positive")
    return -math.log1p(-target_p) / (k * eta)


def key_rate(protocol: str) -> int:
    """Raw key bits per successful query as the protocols count them (type bit + value bits)."""
    return 1 if _protocol(protocol) == "DJ" else 1 + int(math.log2(4))


def entropy_key_rate(protocol: str) -> int:
    """Bits per query from the symbol alphabet alone; the GDJ type bit is the XOR of the values."""
    return 1 if _protocol(protocol) == "DJ" else 2


def chernoff_information(q0: float, q1: float) -> float:
    """Chernoff information between Bernoulli(q0) and Bernoulli(q1).

    A 1e-3 grid over s locates the minimum of the log-affinity, then ternary
    search narrows the bracket to 1e-9. The objective is convex in s.
    """
    for q in (q0, q1):
        if not 0.0 < q < 1.0:
            raise InputError("probabilities must lie strictly inside (0, 1)")
    if q0 == q1:
        return 0.0

    def log_affinity(s):
        return np.log(q0 ** s * q1 ** (1 - s) + (1 - q0) ** s * (1 - q1) ** (1 - s))

    grid = np.linspace(0.0, 1.0, 1001)
    k = int(np.argmin(log_affinity(grid)))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    while hi - lo > 1e-9:
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if log_affinity(m1) <= log_affinity(m2):
            hi = m2
        else:
            lo = m1
    best = min(float(log_affinity(0.5 * (lo + hi))), float(log_affinity(grid[k])))
    return max(0.0, -best)


def rate_constant_from_alpha(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise InputError("alpha must lie in (0, 1)")
    return -math.log1p(-alpha)


def detection_curve_analytic(protocol: str, eta: float, d_values: Sequence[float]) -> list[tuple[float, float]]:
    """Idealized detection law 1 - exp(-alpha eta d) with alpha = 1/2 (DJ) or 3/4 (GDJ)."""
    alpha = IDEAL_ALPHA[_protocol(protocol)]
    if not 0.0 <= eta <= 1.0:
        raise InputError("eta must lie in [0, 1]")
    return [(d, -math.expm1(-alpha * eta * d)) for d in d_values]


def bernoulli_stats(transcript: QkdTranscript) -> tuple[float, float]:
    """Sample flag rate and its variance estimate q(1 - q)/m over compared trials."""
    m = transcript.compared
    if m == 0:
        raise InputError("transcript has no compared trials")
    q = transcript.sample_mean
    return q, q * (1 - q) / m


def chernoff_miss_bound(m: int, C: float) -> float:
    if C < 0:
        raise InputError("Chernoff information must be non-negative")
    return math.exp(-C * m)
