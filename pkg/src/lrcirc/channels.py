"""Small-dimension density-matrix engine for the leakage/dephasing identity.

Leaking the value of n wires through a function l is, on the quantum side,
an isometry |s>|0> -> |s>|l(s)> followed by discarding the receiver.  The
surviving state keeps coherence exactly within the level sets of l, i.e. it
is the projector sum over those level sets.  The same channel is produced by
a uniform mixture of diagonal phase operators F^k = diag(w^{k l(s)}) with w
a primitive d-th root of unity, d the number of distinct values l takes.
This module builds both forms and certifies their equality on an input
basis spanning operator space, which is the footing for treating leakage as
phase noise.

Dimensions are capped at 2^4; everything is dense numpy.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

_MAX_WIRES = 4
_HERMITIAN_TOL = 1e-12
_TRACE_TOL = 1e-12
_PSD_TOL = 1e-10
_COMPLETENESS_TOL = 1e-10


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class LeakageFunction:
    """Total function from n-bit wire assignments to a finite alphabet.

    `table[s]` is the value on the basis state with index s; wire 1 is the
    most significant bit of s.  The effective alphabet is the realized image
    (relabeled 0..d-1 in value order), so unused symbols add no phases.
    """

    n: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1 or self.n > _MAX_WIRES:
            raise DimensionError(f"wire count must be in 1..{_MAX_WIRES}")
        if len(self.table) != 2 ** self.n:
            raise ValueError("table must cover all 2^n assignments")

    @property
    def dim(self) -> int:
        return 2 ** self.n

    def ranks(self) -> tuple[int, ...]:
        """Table relabeled onto 0..d-1 preserving value order."""
        values = sorted(set(self.table))
        rank = {v: i for i, v in enumerate(values)}
        return tuple(rank[v] for v in self.table)

    @property
    def alphabet_size(self) -> int:
        return len(set(self.table))

    @classmethod
    def identity(cls, n: int) -> LeakageFunction:
        return cls(n, tuple(range(2 ** n)))

    @classmethod
    def constant(cls, n: int, value: int = 0) -> LeakageFunction:
        return cls(n, (value,) * 2 ** n)

    @classmethod
    def parity(cls, n: int) -> LeakageFunction:
        return cls(n, tuple(bin(s).count("1") & 1 for s in range(2 ** n)))

    @classmethod
    def random(cls, n: int, d: int, rng: np.random.Generator) -> LeakageFunction:
        return cls(n, tuple(int(v) for v in rng.integers(0, d, size=2 ** n)))


@dataclass(frozen=True)
class Channel:
    """Operator-sum map rho -> sum_k weight_k E_k rho E_k^dag."""

    terms: tuple[tuple[float, np.ndarray], ...]
    dim: int

    def __post_init__(self):
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for w, op in self.terms:
            if op.shape != (self.dim, self.dim):
                raise DimensionError("operator shape does not match channel dim")
            total += w * (op.conj().T @ op)
        if np.abs(total - np.eye(self.dim)).max() > _COMPLETENESS_TOL:
            raise ValueError("operator-sum terms are not trace preserving")

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho, dtype=complex)
        for w, op in self.terms:
            out += w * (op @ rho @ op.conj().T)
        return out

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return self.apply(rho)


def leakage_channel(l: LeakageFunction) -> Channel:
    """Isometry-then-discard form: one projector per realized leak value."""
    ranks = l.ranks()
    terms = []
    for v in range(l.alphabet_size):
        diag = np.array([1.0 if r == v else 0.0 for r in ranks])
        terms.append((1.0, np.diag(diag).astype(complex)))
    return Channel(tuple(terms), l.dim)


def dephasing_channel(l: LeakageFunction) -> Channel:
    """Uniform mixture of the diagonal phase powers F^k, k = 0..d-1."""
    d = l.alphabet_size
    omega = np.exp(2j * np.pi / d)
    ranks = np.array(l.ranks())
    terms = []
    for k in range(d):
        terms.append((1.0 / d, np.diag(omega ** (k * ranks)).astype(complex)))
    return Channel(tuple(terms), l.dim)


def mixture_channel(requests: list[tuple[LeakageFunction, float]]) -> Channel:
    """Convex combination of per-function dephasing channels.

    Each function is normalized by its own alphabet size (1/d_j); the
    probabilities must sum to 1.
    """
    if not requests:
        raise ValueError("empty request list")
    probs = [p for _, p in requests]
    if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-12:
        raise ValueError("request probabilities must be a distribution")
    dim = requests[0][0].dim
    terms = []
    for l, p in requests:
        if l.dim != dim:
            raise DimensionError("mixed functions must share a wire count")
        for w, op in dephasing_channel(l).terms:
            terms.append((p * w, op))
    return Channel(tuple(terms), dim)


def _probe_states(dim: int) -> list[np.ndarray]:
    """Pure-state inputs spanning operator space (dim^2 matrix units).

    |i><i| recovers the diagonal units; (|i>+|j>)/sqrt2 and (|i>+i|j>)/sqrt2
    recover the real and imaginary parts of the off-diagonal units.
    """
    states = []
    for i in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[i] = 1.0
        states.append(np.outer(v, v.conj()))
    for i in range(dim):
        for j in range(i + 1, dim):
            for phase in (1.0, 1j):
                v = np.zeros(dim, dtype=complex)
                v[i] = 1 / np.sqrt(2)
                v[j] = phase / np.sqrt(2)
                states.append(np.outer(v, v.conj()))
    return states


def channel_distance(c1: Channel, c2: Channel) -> float:
    """Max entrywise output difference over the spanning probe basis.

    Zero exactly when the channels agree on every probe; since the probes
    span operator space and both maps are linear, zero implies equality.
    """
    if c1.dim != c2.dim:
        raise DimensionError("channels act on different dimensions")
    return max(
        float(np.abs(c1.apply(rho) - c2.apply(rho)).max())
        for rho in _probe_states(c1.dim)
    )


# -- density-matrix utilities ------------------------------------------------


def assert_density_matrix(rho: np.ndarray) -> None:
    if np.abs(rho - rho.conj().T).max() > _HERMITIAN_TOL:
        raise ValueError("not Hermitian")
    if abs(np.trace(rho) - 1.0) > _TRACE_TOL:
        raise ValueError("trace is not 1")
    if np.linalg.eigvalsh(rho).min() < -_PSD_TOL:
        raise ValueError("not positive semidefinite")


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def equivalence_sweep(max_exhaustive_wires: int = 2, alphabet: int = 4,
                      random_wires: int = 3, trials: int = 20,
                      seed: int = 0) -> dict:
    """Compare the two channel constructions across a function sweep.

    Exhausts every function on up to `max_exhaustive_wires` wires with
    values below `alphabet`, then adds seeded random functions on
    `random_wires` wires.  Returns the worst distances observed.
    """
    worst = 0.0
    count = 0
    for n in range(1, max_exhaustive_wires + 1):
        for table in product(range(alphabet), repeat=2 ** n):
            l = LeakageFunction(n, table)
            worst = max(worst, channel_distance(leakage_channel(l), dephasing_channel(l)))
            count += 1
    rng = np.random.default_rng(seed)
    worst_random = 0.0
    for _ in range(trials):
        l = LeakageFunction.random(random_wires, 2 ** random_wires, rng)
        worst_random = max(
            worst_random, channel_distance(leakage_channel(l), dephasing_channel(l))
        )
    return {
        "exhaustive_functions": count,
        "exhaustive_max_distance": worst,
        "random_functions": trials,
        "random_wires": random_wires,
        "random_max_distance": worst_random,
        "seed": seed,
    }
