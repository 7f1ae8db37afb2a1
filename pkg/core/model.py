"""
对合、置换与带对称分类的循环分解

相空间的点预先编号为 0..N-1，本模块不依赖任何域结构。
对合 G、H 与复合 L = H∘G 都以稠密 int64 数组保存，构造后只读。
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from core.errors import ParameterError
from utils.logging_config import get_logger

logger = get_logger(__name__)


class SymmetryClass(str, Enum):
    """循环的对称类型，由循环与 Fix G、Fix H 的交点数 (|C∩Fix G|, |C∩Fix H|) 决定"""

    SYMMETRIC_ODD = "SymmetricOdd"          # (1, 1)
    SYMMETRIC_EVEN_G = "SymmetricEvenOnG"   # (2, 0)
    SYMMETRIC_EVEN_H = "SymmetricEvenOnH"   # (0, 2)
    ASYMMETRIC = "Asymmetric"               # (0, 0)

    @property
    def is_symmetric(self) -> bool:
        return self is not SymmetryClass.ASYMMETRIC


# 紧凑编码，供 numpy 路径使用
CLASS_CODES: Tuple[SymmetryClass, ...] = (
    SymmetryClass.SYMMETRIC_ODD,
    SymmetryClass.SYMMETRIC_EVEN_G,
    SymmetryClass.SYMMETRIC_EVEN_H,
    SymmetryClass.ASYMMETRIC,
)

_SIGNATURES: Dict[Tuple[int, int], SymmetryClass] = {
    (1, 1): SymmetryClass.SYMMETRIC_ODD,
    (2, 0): SymmetryClass.SYMMETRIC_EVEN_G,
    (0, 2): SymmetryClass.SYMMETRIC_EVEN_H,
    (0, 0): SymmetryClass.ASYMMETRIC,
}


def classify_signature(on_fix_g: int, on_fix_h: int) -> SymmetryClass:
    """按 Fix 交点签名分类；其它签名只可能来自 l ≠ H∘G 的输入"""
    try:
        return _SIGNATURES[(on_fix_g, on_fix_h)]
    except KeyError:
        raise ParameterError(
            f"循环的 Fix 签名 ({on_fix_g}, {on_fix_h}) 不可能出现在 H∘G 中"
        ) from None


def _frozen_index_array(values, n: Optional[int] = None) -> np.ndarray:
    array = np.array(values, dtype=np.int64, copy=True).reshape(-1)
    if n is not None and array.shape[0] != n:
        raise ParameterError(f"数组长度 {array.shape[0]} 与 n={n} 不一致")
    if array.size and (array.min() < 0 or array.max() >= array.shape[0]):
        raise ParameterError("索引超出 0..N-1 范围")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Permutation:
    """{0..N-1} 上的置换，image[i] 为 i 的像"""

    n: int
    image: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"n 必须为正整数: {self.n}")
        object.__setattr__(self, "image", _frozen_index_array(self.image, self.n))
        if not np.all(np.bincount(self.image, minlength=self.n) == 1):
            raise ParameterError("image 不是双射")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(n, np.arange(n, dtype=np.int64))

    def inverse(self) -> "Permutation":
        inv = np.empty(self.n, dtype=np.int64)
        inv[self.image] = np.arange(self.n, dtype=np.int64)
        return Permutation(self.n, inv)

    def __call__(self, i: int) -> int:
        return int(self.image[i])

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.image, other.image)

    def __hash__(self) -> int:
        return hash(self.image.tobytes())


@dataclass(frozen=True, eq=False)
class Involution:
    """
    自逆置换：pairing[pairing[i]] = i

    fixed_count 即 g = #Fix G（或 h = #Fix H），N - fixed_count 必为偶数。
    """

    n: int
    pairing: np.ndarray
    fixed_count: int = -1

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"n 必须为正整数: {self.n}")
        pairing = _frozen_index_array(self.pairing, self.n)
        if not np.array_equal(pairing[pairing], np.arange(self.n)):
            raise ParameterError("pairing 不是对合（pairing∘pairing ≠ id）")
        fixed = int(np.count_nonzero(pairing == np.arange(self.n)))
        if self.fixed_count >= 0 and self.fixed_count != fixed:
            raise ParameterError(f"fixed_count={self.fixed_count} 与实际不动点数 {fixed} 不符")
        object.__setattr__(self, "pairing", pairing)
        object.__setattr__(self, "fixed_count", fixed)

    @classmethod
    def identity(cls, n: int) -> "Involution":
        return cls(n, np.arange(n, dtype=np.int64))

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "Involution":
        """由不相交的二元组 (i, j) 构造，未出现的点为不动点"""
        pairing = np.arange(n, dtype=np.int64)
        for i, j in pairs:
            pairing[i], pairing[j] = j, i
        return cls(n, pairing)

    def fixed_points(self) -> np.ndarray:
        return np.flatnonzero(self.pairing == np.arange(self.n))

    def fixed_mask(self) -> np.ndarray:
        return self.pairing == np.arange(self.n)

    def as_permutation(self) -> Permutation:
        return Permutation(self.n, self.pairing)

    def key(self) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.pairing)

    def __call__(self, i: int) -> int:
        return int(self.pairing[i])

    def __eq__(self, other) -> bool:
        return isinstance(other, Involution) and np.array_equal(self.pairing, other.pairing)

    def __hash__(self) -> int:
        return hash(self.pairing.tobytes())


@dataclass(frozen=True)
class Cycle:
    points: Tuple[int, ...]
    length: int
    symmetry: SymmetryClass


@dataclass(frozen=True)
class CycleDecomposition:
    """L 的全部循环，按最小点出现的顺序排列，每个循环内按轨道顺序"""

    n: int
    cycles: Tuple[Cycle, ...]

    def __iter__(self) -> Iterator[Cycle]:
        return iter(self.cycles)

    def __len__(self) -> int:
        return len(self.cycles)

    def period_counts(self, symmetric_only: bool = False) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for cycle in self.cycles:
            if symmetric_only and not cycle.symmetry.is_symmetric:
                continue
            counts[cycle.length] = counts.get(cycle.length, 0) + 1
        return counts

    def symmetric_count(self) -> int:
        return sum(1 for cycle in self.cycles if cycle.symmetry.is_symmetric)

    def by_class(self, symmetry: SymmetryClass) -> List[Cycle]:
        return [cycle for cycle in self.cycles if cycle.symmetry is symmetry]


def compose(g_inv: Involution, h_inv: Involution) -> Permutation:
    """L = H∘G，即 L[i] = H[G[i]]"""
    if g_inv.n != h_inv.n:
        raise ParameterError(f"对合尺寸不一致: {g_inv.n} ≠ {h_inv.n}")
    return Permutation(g_inv.n, h_inv.pairing[g_inv.pairing])


def g_image(points, g_inv: Involution) -> frozenset:
    """G(C) 作为点集"""
    return frozenset(int(g_inv.pairing[x]) for x in points)


def decompose(
    l: Permutation,
    g_inv: Involution,
    h_inv: Involution,
    validate: bool = True,
) -> CycleDecomposition:
    """
    按首次返回求出 L 的每个循环，并用 Fix 交点签名分类。

    validate=True 时检查 l = H∘G，并对每个循环独立验证
    “对称 ⇔ G(C) = C（作为集合）”。
    """
    n = l.n
    if g_inv.n != n or h_inv.n != n:
        raise ParameterError("l、G、H 的尺寸不一致")
    if validate and not np.array_equal(l.image, h_inv.pairing[g_inv.pairing]):
        raise ParameterError("l ≠ H∘G")

    image = l.image.tolist()
    fix_g = g_inv.fixed_mask().tolist()
    fix_h = h_inv.fixed_mask().tolist()
    visited = bytearray(n)
    cycles: List[Cycle] = []

    for start in range(n):
        if visited[start]:
            continue
        orbit = []
        on_g = on_h = 0
        x = start
        while not visited[x]:
            visited[x] = 1
            orbit.append(x)
            on_g += fix_g[x]
            on_h += fix_h[x]
            x = image[x]
        symmetry = classify_signature(on_g, on_h)
        if validate:
            invariant = g_image(orbit, g_inv) == frozenset(orbit)
            if invariant != symmetry.is_symmetric:
                raise ParameterError(
                    f"循环 {orbit[:4]}… 的签名分类 {symmetry.value} 与 G(C)=C 检验不一致"
                )
        cycles.append(Cycle(tuple(orbit), len(orbit), symmetry))

    return CycleDecomposition(n, tuple(cycles))


def fraction_in_period(d: CycleDecomposition, t: int) -> Fraction:
    """P_t：被 t-循环占据的相空间比例（精确有理数）"""
    if t < 1:
        raise ParameterError(f"周期 t 必须 ≥ 1: {t}")
    count = sum(1 for cycle in d.cycles if cycle.length == t)
    return Fraction(t * count, d.n)


@dataclass(frozen=True)
class CycleSummary:
    """
    只保留循环长度与类别编码的快速分解结果

    lengths[c] 为第 c 个循环的长度，classes[c] 为 CLASS_CODES 中的下标。
    """

    n: int
    lengths: np.ndarray
    classes: np.ndarray

    def symmetric_count(self) -> int:
        return int(np.count_nonzero(self.classes != CLASS_CODES.index(SymmetryClass.ASYMMETRIC)))


def cycle_summary(
    l: Permutation,
    g_inv: Involution,
    h_inv: Involution,
) -> CycleSummary:
    """
    统计热路径：置换的循环即其函数图的连通分量。

    用 scipy 的 connected_components 求分量标签，再用 bincount 得到每个循环的
    长度和 Fix G / Fix H 交点数。
    """
    n = l.n
    graph = csr_matrix(
        (np.ones(n, dtype=np.int8), (np.arange(n), l.image)),
        shape=(n, n),
    )
    n_cycles, labels = connected_components(graph, directed=True, connection="weak")
    lengths = np.bincount(labels, minlength=n_cycles).astype(np.int64)
    on_g = np.bincount(labels[g_inv.fixed_points()], minlength=n_cycles)
    on_h = np.bincount(labels[h_inv.fixed_points()], minlength=n_cycles)

    # 签名 → 类别编码；非法签名标记为 -1
    code_table = np.full((3, 3), -1, dtype=np.int8)
    for (sg, sh), symmetry in _SIGNATURES.items():
        code_table[sg, sh] = CLASS_CODES.index(symmetry)
    if on_g.max(initial=0) > 2 or on_h.max(initial=0) > 2:
        raise ParameterError("存在与 Fix 集相交超过两点的循环，l ≠ H∘G")
    classes = code_table[on_g, on_h]
    if np.any(classes < 0):
        raise ParameterError("存在非法 Fix 签名的循环，l ≠ H∘G")

    return CycleSummary(n, lengths, classes)
