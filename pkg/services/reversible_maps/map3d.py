"""
三维有理可逆映射 L₂ = H₂∘G₂

G₂: (x, y, z) ↦ (x + e(2y-k)(z + e(y-k)), k - y, z + e(2y-k))
H₂: (x, y, z) ↦ (y(2 - 2x/F + x²/F²), x/F, -z)，F = 1 + (1-y)²

只在 p ≡ 3 (mod 4) 上使用：此时 -1 不是平方剩余，F 恒不为零。
"""

from typing import Dict

import numpy as np

from core.errors import ParameterError
from core.ffield import FieldElement, PrimeField, is_three_mod_four
from utils.logging_config import get_logger
from .base import FixedSets, ReversiblePair

logger = get_logger(__name__)


class Map3DPair(ReversiblePair):
    dimension = 3

    def __init__(self, field: PrimeField, e: int = 1, k: int = 1):
        if not is_three_mod_four(field.p):
            raise ParameterError(
                f"p={field.p} ≡ 1 (mod 4)：-1 是平方剩余，F = 1+(1-y)² 会取零，H₂ 无定义；请选 p ≡ 3 (mod 4)"
            )
        super().__init__(field)
        self.e = int(e) % field.p
        self.k = int(k) % field.p

    def get_map_name(self) -> str:
        return "map3d"

    def parameters(self) -> Dict[str, int]:
        return {"e": self.e, "k": self.k}

    def _denominator(self, y: np.ndarray) -> np.ndarray:
        p = self.p
        d = (1 - y) % p
        denominator = (1 + d * d) % p
        if np.any(denominator == 0):
            raise ParameterError(f"F = 1+(1-y)² 在 𝔽_{p} 中取到零")
        return denominator

    def apply_g(self, coords: np.ndarray) -> np.ndarray:
        x, y, z = np.asarray(coords, dtype=np.int64)
        p, e, k = self.p, self.e, self.k
        slope = e * ((2 * y - k) % p) % p
        shift = (z + e * ((y - k) % p)) % p
        return np.stack([(x + slope * shift) % p, (k - y) % p, (z + slope) % p])

    def apply_h(self, coords: np.ndarray) -> np.ndarray:
        x, y, z = np.asarray(coords, dtype=np.int64)
        p = self.p
        q = x * self.field.inv_array(self._denominator(y)) % p
        # 2 - 2q + q² = F(q)
        return np.stack([y * ((2 - 2 * q + q * q) % p) % p, q, (-z) % p])

    def closed_form_fixed_sets(self) -> FixedSets:
        """Fix G₂ = {(x, k/2, z)}（p² 个点），Fix H₂ = {(y·F(y), y, 0)}（p 个点）"""
        p = self.p
        half_k = self.k * self.field.two_inverse % p
        xs, zs = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64), indexing="ij")
        xs, zs = xs.ravel(), zs.ravel()
        fix_g = self.to_indices(np.stack([xs, np.full_like(xs, half_k), zs]))

        y = np.arange(p, dtype=np.int64)
        fix_h = self.to_indices(np.stack([y * self._denominator(y) % p, y, np.zeros_like(y)]))
        return FixedSets(np.sort(fix_g), np.sort(fix_h))


def _unwrap(value) -> int:
    return value.value if isinstance(value, FieldElement) else int(value)


def map3d_pair(field: PrimeField, e=1, k=1) -> Map3DPair:
    return Map3DPair(field, _unwrap(e), _unwrap(k))
