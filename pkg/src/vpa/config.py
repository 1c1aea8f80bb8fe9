"""Run configuration: tolerances, radius schedule, seeds, and budgets.

A single frozen dataclass flows through every operation so that reports can
echo the exact numeric environment they were computed under.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass


@dataclass(frozen=True)
class RunConfig:
    # tolerances
    tol_feas: float = 1e-8          # feasibility: max |g|, max(0, -h)
    tol_active: float = 1e-6        # |h_j| below this counts as active
    tol_membership: float = 1e-7    # tangency residual (scaled by gradient size)
    tol_stationary: float = 1e-6    # Rabier residual accepted as stationary
    tol_limit: float = 1e-4         # "-> 0" trend threshold at the largest radius
    tol_cluster: float = 1e-3       # relative f-spread for a convergent tail
    tol_rank: float = 1e-10         # singular-value cutoff relative to the largest
    tol_margin: float = 1e-9        # LP margin that certifies a strict direction
    # radius schedule r_k = radius_base * radius_factor**k
    radius_base: float = 10.0
    radius_factor: float = 2.0
    radius_count: int = 14
    # randomness
    seed: int = 0
    # budgets
    weights_per_radius: int = 8
    weight_grid: int = 5
    starts_per_weight: int = 4
    section_budget: int = 32
    projection_max_iter: int = 200
    projection_restarts: int = 8
    divergence_cap: float = 1e6

    def __post_init__(self):
        for name in (
            "tol_feas", "tol_active", "tol_membership", "tol_stationary",
            "tol_limit", "tol_cluster", "tol_rank", "tol_margin",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.radius_count < 4:
            raise ValueError("radius schedule needs at least 4 entries")
        if self.radius_base <= 0 or self.radius_factor <= 1:
            raise ValueError("radius schedule must be positive and increasing")
        if min(self.weights_per_radius, self.weight_grid,
               self.starts_per_weight, self.section_budget) < 1:
            raise ValueError("budgets must be at least 1")

    def radii(self) -> list[float]:
        return [self.radius_base * self.radius_factor ** k
                for k in range(self.radius_count)]

    def replace(self, **kwargs) -> "RunConfig":
        return dataclasses.replace(self, **kwargs)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


DEFAULT_CONFIG = RunConfig()
