"""Seeded sample containers and deterministic substream derivation.

Every sampler in the package draws from PCG64 generators keyed by
``(seed, stream, offset)`` through :func:`substream`.  Fixed offsets per
role (0 for U, 1 for V, 2 for the Bernoulli mixer) mean that changing a
mixture parameter never perturbs the underlying uniform draws, which keeps
parameter sweeps pathwise comparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SeedSpec",
    "USample",
    "TriSample",
    "substream",
    "uniform_open",
]

_U53 = 1 << 53  # uniform resolution; k/2^53 with k in [1, 2^53) stays inside (0, 1)


@dataclass(frozen=True)
class SeedSpec:
    """Reproducibility key: same (seed, stream) always replays the same draws."""

    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if not (0 <= int(v) < 2**64):
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {v!r}")


def substream(seed: SeedSpec, offset: int) -> np.random.Generator:
    """Independent generator for one role of one sampler call.

    Derivation goes through ``SeedSequence([seed, stream, offset])`` so
    distinct offsets (and distinct streams) give statistically independent,
    bit-reproducible PCG64 states.
    """
    ss = np.random.SeedSequence([int(seed.seed), int(seed.stream), int(offset)])
    return np.random.Generator(np.random.PCG64(ss))


def uniform_open(rng: np.random.Generator, n: int) -> np.ndarray:
    """n uniforms strictly inside (0, 1).

    Raw 53-bit integers from [1, 2^53) divided by 2^53: the division is exact
    and the endpoints 0.0 and 1.0 are unreachable, so downstream quantile
    transforms never see them.
    """
    k = rng.integers(1, _U53, size=n, dtype=np.int64)
    return k / _U53


@dataclass(frozen=True)
class USample:
    """n x 3 table of copula realizations with uniform margins.

    Columns are stored as the rows of a C-contiguous (3, n) array so each
    margin is a contiguous block for streaming estimation.
    """

    u: np.ndarray  # shape (3, n)
    seed: SeedSpec = field(default_factory=SeedSpec)

    def __post_init__(self):
        u = np.ascontiguousarray(np.asarray(self.u, dtype=float))
        if u.ndim != 2 or u.shape[0] != 3:
            raise ValueError(f"expected a (3, n) array, got shape {u.shape}")
        if u.size and (u.min() < 0.0 or u.max() > 1.0):
            raise ValueError("copula realizations must lie in [0, 1]")
        object.__setattr__(self, "u", u)

    @property
    def n(self) -> int:
        return self.u.shape[1]

    @property
    def u1(self) -> np.ndarray:
        return self.u[0]

    @property
    def u2(self) -> np.ndarray:
        return self.u[1]

    @property
    def u3(self) -> np.ndarray:
        return self.u[2]

    def row(self, i: int) -> tuple[float, float, float]:
        return (float(self.u[0, i]), float(self.u[1, i]), float(self.u[2, i]))


@dataclass(frozen=True)
class TriSample:
    """n x d table of realizations in data space, carrying its generating seed.

    d is 3 for everything except the coskewness-matrix estimator, which
    accepts any d >= 2.
    """

    x: np.ndarray  # shape (d, n)
    seed: SeedSpec = field(default_factory=SeedSpec)

    def __post_init__(self):
        x = np.ascontiguousarray(np.asarray(self.x, dtype=float))
        if x.ndim != 2:
            raise ValueError(f"expected a (d, n) array, got shape {x.shape}")
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return self.x.shape[1]

    @property
    def d(self) -> int:
        return self.x.shape[0]

    def column(self, j: int) -> np.ndarray:
        return self.x[j]

    def row(self, i: int) -> tuple[float, ...]:
        return tuple(float(v) for v in self.x[:, i])
