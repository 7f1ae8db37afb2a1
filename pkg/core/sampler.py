"""
对合的均匀采样与穷举

- sample_involution: 先取均匀随机的 g 元不动点子集，再对其余 N-g 个点做均匀完美匹配
  （一次随机置换即可同时完成两步）
- enumerate_pairs: 按字典序的不动点子集 × “最小未匹配点优先”的递归匹配，顺序确定
- 随机源：numpy SeedSequence(master_seed, spawn_key=(k,))，第 k 次试验只依赖 (master_seed, k)
"""

import itertools
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from app.config import settings
from core.errors import ParameterError, ResourceCapError
from core.model import Involution
from utils.logging_config import get_logger

logger = get_logger(__name__)

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


def outside_base_range(g: int, h: int) -> bool:
    """g·h = 0 时超出 1 ≤ g,h 的原始设定，结果需要标注"""
    return g == 0 or h == 0


def check_admissible(n: int, g: int, h: Optional[int] = None) -> None:
    """检查 0 ≤ g,h ≤ N 以及 N-g、N-h 为偶数"""
    if n < 1:
        raise ParameterError(f"N 必须为正整数: {n}")
    for name, value in (("g", g), ("h", h)):
        if value is None:
            continue
        if not 0 <= value <= n:
            raise ParameterError(f"{name}={value} 超出 0..N={n}")
        if (n - value) % 2:
            raise ParameterError(f"奇偶性不满足: N-{name} = {n}-{value} 为奇数")


@lru_cache(maxsize=4096)
def pair_space_size(n: int, g: int, h: int) -> int:
    """
    #E(g,h,N) 的宽松版本：结构上不可能（负数、g>N、奇偶不符）时返回 0。

    N=0 时唯一的空对合对计为 1。
    """
    if n < 0 or g < 0 or h < 0 or g > n or h > n:
        return 0
    if (n - g) % 2 or (n - h) % 2:
        return 0
    numerator = factorial(n) ** 2
    denominator = (
        2 ** (n - (g + h) // 2)
        * factorial(g)
        * factorial(h)
        * factorial((n - g) // 2)
        * factorial((n - h) // 2)
    )
    quotient, remainder = divmod(numerator, denominator)
    assert remainder == 0, "#E 的计数公式必为整数"
    return quotient


def count_pairs(n: int, g: int, h: int) -> int:
    """#E(g,h,N) = 2^{-(N-(g+h)/2)} (N!)² / (g! h! ((N-g)/2)! ((N-h)/2)!)"""
    check_admissible(n, g, h)
    return pair_space_size(n, g, h)


def involution_count(n: int, g: int) -> int:
    """N 点上恰有 g 个不动点的对合个数：C(N,g)·(N-g-1)!!"""
    check_admissible(n, g)
    m = (n - g) // 2
    return comb(n, g) * factorial(n - g) // (2 ** m * factorial(m))


class PairSpace(BaseModel):
    """概率空间 E(g,h,N) = G × H，均匀分布"""

    n: int = Field(ge=1, description="相空间大小 N")
    g: int = Field(ge=0, description="#Fix G")
    h: int = Field(ge=0, description="#Fix H")
    cardinality: int = Field(default=0, description="#E(g,h,N)，由计数公式精确计算")

    @model_validator(mode="after")
    def _fill_cardinality(self):
        check_admissible(self.n, self.g, self.h)
        self.cardinality = pair_space_size(self.n, self.g, self.h)
        return self

    @property
    def outside_base_range(self) -> bool:
        return outside_base_range(self.g, self.h)


def trial_seed(master_seed: int, k: int) -> np.random.SeedSequence:
    """第 k 次试验的种子，只依赖 (master_seed, k)"""
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(k,))


def sample_involution(n: int, g: int, rng_seed: SeedLike) -> Involution:
    """在 N 点上恰有 g 个不动点的对合中均匀抽取一个"""
    check_admissible(n, g)
    rng = np.random.default_rng(rng_seed)
    order = rng.permutation(n)
    rest = order[g:]
    pairing = np.arange(n, dtype=np.int64)
    left, right = rest[0::2], rest[1::2]
    pairing[left] = right
    pairing[right] = left
    return Involution(n, pairing, g)


def sample_pair(n: int, g: int, h: int, rng_seed: SeedLike) -> Tuple[Involution, Involution]:
    """从同一个随机流中依次独立抽取 G 与 H"""
    rng = np.random.default_rng(rng_seed)
    return sample_involution(n, g, rng), sample_involution(n, h, rng)


def _matchings(points: Tuple[int, ...]) -> Iterator[List[Tuple[int, int]]]:
    """最小未匹配点优先的递归完美匹配"""
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for i, partner in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for tail in _matchings(remaining):
            yield [(first, partner)] + tail


def enumerate_involutions(n: int, g: int) -> Iterator[Involution]:
    """按确定顺序枚举 N 点上恰有 g 个不动点的全部对合"""
    check_admissible(n, g)
    everything = tuple(range(n))
    for fixed in itertools.combinations(everything, g):
        fixed_set = set(fixed)
        moved = tuple(x for x in everything if x not in fixed_set)
        for matching in _matchings(moved):
            yield Involution.from_pairs(n, matching)


def enumerate_pairs(
    n: int,
    g: int,
    h: int,
    cap: Optional[int] = None,
) -> Iterator[Tuple[Involution, Involution]]:
    """逐一给出 E(g,h,N) 的每个元素，恰好一次"""
    check_admissible(n, g, h)
    cap = settings.REVMAP_ENUM_CAP if cap is None else cap
    if n > cap:
        raise ResourceCapError(f"拒绝枚举: N={n} 超过上限 {cap}（组合爆炸）")

    logger.debug(f"[sampler] 枚举 E(g={g},h={h},N={n})，共 {pair_space_size(n, g, h)} 对")
    g_list = list(enumerate_involutions(n, g))
    h_list = g_list if h == g else list(enumerate_involutions(n, h))
    return itertools.product(g_list, h_list)
