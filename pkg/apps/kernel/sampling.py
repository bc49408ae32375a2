"""
Seeded sampling of specialization values
"""

from typing import List

import numpy as np

from .field import FieldElement, PrimeField


class FieldSampler:
    """
    Draws field elements in [1, bound] from a numpy generator.

    The stream is a pure function of (seed, attempt, stream), so a resample
    after an unlucky point is reproducible too. Separate streams keep one
    group of draws independent of how many draws another group takes.
    """

    def __init__(self, *, field: PrimeField, seed: int, bound: int, attempt: int = 0, stream: int = 0):
        self.field = field
        self.seed = seed
        self.attempt = attempt
        self.bound = min(bound, field.p - 1)
        self._rng = np.random.default_rng(np.random.SeedSequence([seed, attempt, stream]))

    def draw(self) -> FieldElement:
        return int(self._rng.integers(1, self.bound, endpoint=True))

    def draw_many(self, count: int) -> List[FieldElement]:
        if count == 0:
            return []
        return [int(v) for v in self._rng.integers(1, self.bound, size=count, endpoint=True)]
