"""
𝔽_p^n 上可逆映射的分析

两条路径：
- build_permutation：把 G、H 展开成稠密对合数组，交给 core.model 做完整分解（pⁿ 受上限约束）
- symmetric_cycle_spectrum：只从对称线上的点出发迭代 L，O((g+h)·t) 次求值
两条路径在都能运行的范围内必须一致。
"""

from typing import Dict, Optional, Tuple

import numpy as np

from app.config import settings
from core.errors import ParameterError, ResourceCapError
from core.model import Involution, compose, cycle_summary
from services.reversible_maps import FixedSets, ReversiblePair
from utils.logging_config import get_logger

logger = get_logger(__name__)

EXHAUSTIVE_LIMIT = 10 ** 6
SAMPLE_POINTS = 10 ** 5


def _scan_fixed(pair: ReversiblePair, which: str) -> np.ndarray:
    found = []
    for indices in pair.index_chunks():
        found.append(indices[pair.image_indices(indices, which) == indices])
    return np.concatenate(found) if found else np.empty(0, dtype=np.int64)


def fixed_sets(pair: ReversiblePair, method: str = "auto") -> FixedSets:
    """
    Fix G 与 Fix H。

    method="scan" 逐点扫描全部 pⁿ 个点；"closed" 用闭式枚举；
    "auto" 在 pⁿ ≤ 10⁶ 时扫描，否则用闭式。
    """
    if method == "auto":
        method = "scan" if pair.size <= EXHAUSTIVE_LIMIT else "closed"
    if method == "closed":
        return pair.closed_form_fixed_sets()
    if method != "scan":
        raise ParameterError(f"未知的 fixed_sets 方法: {method}")
    if pair.size > settings.REVMAP_CAP_POINTS:
        raise ResourceCapError(f"pⁿ = {pair.size} 超过扫描上限 {settings.REVMAP_CAP_POINTS}")
    return FixedSets(_scan_fixed(pair, "G"), _scan_fixed(pair, "H"))


def build_permutation(pair: ReversiblePair, cap: Optional[int] = None) -> Tuple[Involution, Involution]:
    """把 G、H 展开为 pⁿ 个点上的稠密对合"""
    cap = settings.REVMAP_CAP_POINTS if cap is None else cap
    if pair.size > cap:
        raise ResourceCapError(
            f"pⁿ = {pair.size} 超过稠密置换上限 {cap}（REVMAP_CAP_POINTS）；"
            f"请改用 symmetric_cycle_count"
        )
    logger.debug(f"[maps] 展开 {pair.get_map_name()} 映射，p={pair.p}，共 {pair.size} 个点")
    g_image = np.empty(pair.size, dtype=np.int64)
    h_image = np.empty(pair.size, dtype=np.int64)
    for indices in pair.index_chunks():
        g_image[indices] = pair.image_indices(indices, "G")
        h_image[indices] = pair.image_indices(indices, "H")
    return Involution(pair.size, g_image), Involution(pair.size, h_image)


def full_symmetric_cycle_count(pair: ReversiblePair) -> Dict[str, int]:
    """完整分解后的对称 / 非对称循环数"""
    g_inv, h_inv = build_permutation(pair)
    summary = cycle_summary(compose(g_inv, h_inv), g_inv, h_inv)
    symmetric = summary.symmetric_count()
    return {
        "g": g_inv.fixed_count,
        "h": h_inv.fixed_count,
        "symmetric": symmetric,
        "asymmetric": len(summary.lengths) - symmetric,
        "cycles": len(summary.lengths),
    }


def _first_return_times(pair: ReversiblePair, seeds: np.ndarray, t_max: int) -> np.ndarray:
    """每个种子点在 L 下的最小周期（t_max 步内未返回记为 0）"""
    start = pair.to_coords(seeds)
    current = start
    first = np.zeros(seeds.shape[0], dtype=np.int64)
    for step in range(1, t_max + 1):
        current = pair.apply_l(current)
        returned = np.all(current == start, axis=0) & (first == 0)
        first[returned] = step
    return first


def symmetric_cycle_spectrum(
    pair: ReversiblePair,
    t_max: int,
    fixed: Optional[FixedSets] = None,
) -> Dict[int, int]:
    """
    t = 1..t_max 的对称 t-循环个数，不展开整个置换。

    奇周期对称循环与 Fix G 恰交于一点；偶周期对称循环或与 Fix G 交于两点，
    或与 Fix H 交于两点。
    """
    if t_max < 1:
        raise ParameterError(f"周期 t 必须 ≥ 1: {t_max}")
    if t_max > settings.REVMAP_PERIOD_LIMIT:
        raise ParameterError(f"t={t_max} 超过周期上限 {settings.REVMAP_PERIOD_LIMIT}（REVMAP_PERIOD_LIMIT）")
    fixed = fixed or fixed_sets(pair, method="closed")

    from_g = np.bincount(_first_return_times(pair, fixed.fix_g, t_max), minlength=t_max + 1)
    from_h = np.bincount(_first_return_times(pair, fixed.fix_h, t_max), minlength=t_max + 1)

    spectrum: Dict[int, int] = {}
    for t in range(1, t_max + 1):
        if t % 2:
            spectrum[t] = int(from_g[t])
        else:
            if from_g[t] % 2 or from_h[t] % 2:
                raise ParameterError(f"偶周期 t={t} 的对称线交点数为奇数，G 或 H 不是对合")
            spectrum[t] = int(from_g[t] // 2 + from_h[t] // 2)
    return spectrum


def symmetric_cycle_count(pair: ReversiblePair, t: int, fixed: Optional[FixedSets] = None) -> int:
    """最小周期恰为 t 的对称循环个数"""
    return symmetric_cycle_spectrum(pair, t, fixed)[t]


def _check_points(pair: ReversiblePair, sample: Optional[int], seed: int) -> np.ndarray:
    if pair.size <= EXHAUSTIVE_LIMIT and sample is None:
        return np.arange(pair.size, dtype=np.int64)
    rng = np.random.default_rng(seed)
    return rng.integers(0, pair.size, size=sample or SAMPLE_POINTS, dtype=np.int64)


def verify_involutions(pair: ReversiblePair, sample: Optional[int] = None, seed: int = 0) -> Dict[str, object]:
    """
    检查 G∘G = H∘H = id（良约化）。

    pⁿ ≤ 10⁶ 且未指定 sample 时穷举，否则随机抽取 sample（默认 10⁵）个点。
    """
    points = _check_points(pair, sample, seed)
    coords = pair.to_coords(points)
    g_ok = bool(np.array_equal(pair.apply_g(pair.apply_g(coords)), coords))
    h_ok = bool(np.array_equal(pair.apply_h(pair.apply_h(coords)), coords))
    exhaustive = points.shape[0] == pair.size and sample is None
    if not (g_ok and h_ok):
        logger.warning(f"[maps] {pair.get_map_name()} p={pair.p} 约化后不是对合: G={g_ok}, H={h_ok}")
    return {"g": g_ok, "h": h_ok, "points": int(points.shape[0]), "exhaustive": exhaustive}


def verify_reversibility(pair: ReversiblePair, sample: Optional[int] = None, seed: int = 0) -> bool:
    """G∘L∘G = L⁻¹，等价于 L∘G∘L∘G = id"""
    coords = pair.to_coords(_check_points(pair, sample, seed))
    once = pair.apply_l(pair.apply_g(coords))
    return bool(np.array_equal(pair.apply_l(pair.apply_g(once)), coords))
