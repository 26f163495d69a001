"""Seeded point samplers for the polydisc and the ball."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .errors import BadParameter
from .functions import RADIUS_CAP, Domain, polydisc

DEFAULT_RADIUS = 0.7
DEFAULT_SETS = 20
DEFAULT_SET_SIZE = 8


@dataclass(frozen=True)
class SamplerConfig:
    domain: Domain = polydisc(1)
    radius: float = DEFAULT_RADIUS
    sets: int = DEFAULT_SETS
    size: int = DEFAULT_SET_SIZE
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.radius <= RADIUS_CAP:
            raise BadParameter(f"radius cap must lie in (0, {RADIUS_CAP}], got {self.radius}")
        if self.sets < 1 or self.size < 1:
            raise BadParameter("need at least one set of at least one point")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise BadParameter("seed must be a 64-bit unsigned integer")


def _coordinate_radii(domain: Domain, radius: float) -> np.ndarray:
    # a ball block of dimension k gets radius/sqrt(k) per coordinate
    return np.concatenate([np.full(k, radius / np.sqrt(k)) for _, k in domain.blocks])


def random_points(rng: np.random.Generator, domain: Domain, radius: float, shape) -> np.ndarray:
    """Points of shape ``shape + (d,)``, each coordinate uniform in a disc."""
    shape = tuple(np.atleast_1d(shape))
    caps = _coordinate_radii(domain, radius)
    r = caps * np.sqrt(rng.random(shape + (domain.dim,)))
    theta = 2 * np.pi * rng.random(shape + (domain.dim,))
    return r * np.exp(1j * theta)


def sample_points(cfg: SamplerConfig) -> List[np.ndarray]:
    """``cfg.sets`` arrays of ``cfg.size`` points; identical configs give identical points."""
    rng = np.random.default_rng(int(cfg.seed))
    pts = random_points(rng, cfg.domain, cfg.radius, (cfg.sets, cfg.size))
    return [pts[i] for i in range(cfg.sets)]


def real_grid(domain: Domain, levels) -> np.ndarray:
    """Real grid ``{0, ±l}^d`` restricted to the domain, in lexicographic order."""
    values = [0.0]
    for lv in levels:
        values.extend([float(lv), -float(lv)])
    d = domain.dim
    mesh = np.array(np.meshgrid(*([values] * d), indexing="ij")).reshape(d, -1).T
    mesh = mesh.astype(complex)
    return mesh[domain.contains(mesh)]
