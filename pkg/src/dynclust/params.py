"""Run parameters shared by the static and incremental layers."""

import math
from dataclasses import dataclass, field, replace  # noqa: F401  (replace re-exported for callers)


def log2n(n: int) -> float:
    # the "log n" every threshold uses; clamped so tiny graphs stay sane
    return math.log2(max(n, 2))


def ceil_frac(beta: float, size: int) -> int:
    """ceil(beta * size), the retained-block size.  One shared definition so
    the cardinality identity is checked against the same arithmetic that
    produced it."""
    return math.ceil(beta * size)


@dataclass(frozen=True)
class ClusteringParams:
    k: int
    z: float = 1.0
    alpha: float = 4.0
    beta: float = 0.25
    gamma: float = 0.5
    eps: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not (0 < self.beta < 1):
            raise ValueError(f"beta must lie in (0,1), got {self.beta}")
        if not (self.beta <= self.gamma < 1):
            raise ValueError(f"gamma must lie in [beta,1), got {self.gamma}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.z < 1:
            raise ValueError(f"z must be >= 1, got {self.z}")

    def sample_threshold(self, n: int) -> float:
        """Levels keep peeling while |U_i| exceeds alpha * k * log n."""
        return self.alpha * self.k * log2n(n)

    def sample_prob(self, u_size: int, n: int) -> float:
        return min(self.sample_threshold(n) / u_size, 1.0) if u_size > 0 else 0.0

    def level_bound(self, n: int) -> float:
        """Upper bound on the number of complete levels: each level removes a
        ceil(beta |U|) block, so sizes decay geometrically."""
        return log2n(n) / math.log2(1.0 / (1.0 - self.beta)) + 1.0
