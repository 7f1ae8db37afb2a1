"""
面积保持的 Hénon 映射 L₁ = H₁∘G₁

G₁: (x, y) ↦ (y, x)
H₁: (x, y) ↦ (x, -y + x² + a)
"""

from typing import Dict

import numpy as np

from core.ffield import FieldElement, PrimeField
from utils.logging_config import get_logger
from .base import FixedSets, ReversiblePair

logger = get_logger(__name__)


class HenonPair(ReversiblePair):
    dimension = 2

    def __init__(self, field: PrimeField, a: int = 1):
        super().__init__(field)
        self.a = int(a) % field.p

    def get_map_name(self) -> str:
        return "henon"

    def parameters(self) -> Dict[str, int]:
        return {"a": self.a}

    def apply_g(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(coords, dtype=np.int64)[::-1].copy()

    def apply_h(self, coords: np.ndarray) -> np.ndarray:
        x, y = np.asarray(coords, dtype=np.int64)
        p = self.p
        return np.stack([x, (x * x % p - y + self.a) % p])

    def closed_form_fixed_sets(self) -> FixedSets:
        """Fix G₁ = {(x, x)}，Fix H₁ = {(x, (x²+a)/2)}"""
        p = self.p
        x = np.arange(p, dtype=np.int64)
        y_h = (x * x % p + self.a) % p * self.field.two_inverse % p
        fix_g = self.to_indices(np.stack([x, x]))
        fix_h = self.to_indices(np.stack([x, y_h]))
        return FixedSets(np.sort(fix_g), np.sort(fix_h))


def henon_pair(field: PrimeField, a=1) -> HenonPair:
    value = a.value if isinstance(a, FieldElement) else a
    return HenonPair(field, value)
