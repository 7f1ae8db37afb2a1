"""
可逆映射基类

L = H∘G，G、H 为 𝔽_p^n 上的对合。所有映射都在 numpy 坐标数组上求值，
形状 (n, M)，一次处理 M 个点；单点求值只是 M=1 的特例。
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Iterator, Tuple

import numpy as np

from core.ffield import FieldElement, PrimeField, coords_array, index_array
from utils.logging_config import get_logger

logger = get_logger(__name__)

# 逐块求值时每块的点数
CHUNK_POINTS = 1 << 20


@dataclass(frozen=True)
class FixedSets:
    """Fix G 与 Fix H 的点编号（升序）"""
    fix_g: np.ndarray
    fix_h: np.ndarray

    @property
    def g(self) -> int:
        return int(self.fix_g.shape[0])

    @property
    def h(self) -> int:
        return int(self.fix_h.shape[0])


class ReversiblePair(ABC):
    """可逆映射对 (G, H) 的统一接口"""

    dimension: int = 0

    def __init__(self, field: PrimeField):
        self.field = field
        self.p = field.p

    @abstractmethod
    def apply_g(self, coords: np.ndarray) -> np.ndarray:
        """G 作用在形状 (n, M) 的坐标数组上"""
        pass

    @abstractmethod
    def apply_h(self, coords: np.ndarray) -> np.ndarray:
        """H 作用在形状 (n, M) 的坐标数组上"""
        pass

    @abstractmethod
    def closed_form_fixed_sets(self) -> FixedSets:
        """Fix G、Fix H 的闭式枚举"""
        pass

    @abstractmethod
    def get_map_name(self) -> str:
        pass

    @abstractmethod
    def parameters(self) -> Dict[str, int]:
        pass

    def apply_l(self, coords: np.ndarray) -> np.ndarray:
        return self.apply_h(self.apply_g(coords))

    @property
    def size(self) -> int:
        """相空间点数 pⁿ"""
        return self.p ** self.dimension

    def describe(self) -> Dict[str, object]:
        return {"map": self.get_map_name(), "p": self.p, "dimension": self.dimension, **self.parameters()}

    # -- 编号与分块 ---------------------------------------------------------

    def to_coords(self, indices: np.ndarray) -> np.ndarray:
        return coords_array(indices, self.p, self.dimension)

    def to_indices(self, coords: np.ndarray) -> np.ndarray:
        return index_array(coords, self.p)

    def index_chunks(self, chunk: int = CHUNK_POINTS) -> Iterator[np.ndarray]:
        for start in range(0, self.size, chunk):
            yield np.arange(start, min(start + chunk, self.size), dtype=np.int64)

    def image_indices(self, indices: np.ndarray, which: str) -> np.ndarray:
        """which ∈ {"G", "H", "L"}：编号数组的像"""
        apply = {"G": self.apply_g, "H": self.apply_h, "L": self.apply_l}[which]
        return self.to_indices(apply(self.to_coords(indices)))

    # -- 单点求值 -----------------------------------------------------------

    def _point(self, point: Tuple[FieldElement, ...], apply) -> Tuple[FieldElement, ...]:
        coords = np.array([[int(c)] for c in point], dtype=np.int64)
        return tuple(self.field(int(v)) for v in apply(coords)[:, 0])

    def g(self, point: Tuple[FieldElement, ...]) -> Tuple[FieldElement, ...]:
        return self._point(point, self.apply_g)

    def h(self, point: Tuple[FieldElement, ...]) -> Tuple[FieldElement, ...]:
        return self._point(point, self.apply_h)

    def l(self, point: Tuple[FieldElement, ...]) -> Tuple[FieldElement, ...]:
        return self._point(point, self.apply_l)
