"""
Monte Carlo 试验与经验估计量

单次试验：按 (master_seed, k) 派生种子独立均匀抽取 G、H，复合、分解、计数。
所有估计量只依赖试验结果的多重集合，与试验顺序和 worker 数量无关。
"""

import math
from collections import Counter
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.stats import poisson

from app.config import settings
from core.errors import ParameterError, ResourceCapError
from core.model import CLASS_CODES, CycleSummary, SymmetryClass, compose, cycle_summary
from core.sampler import sample_pair, trial_seed
from core.theory import TheoryParams, period_cutoff, r_limit_array
from utils.logging_config import get_logger

logger = get_logger(__name__)

# R̂ 的默认网格 x ∈ {0.05, 0.10, …, 5.00}
DEFAULT_GRID: Tuple[float, ...] = tuple(round(0.05 * i, 2) for i in range(1, 101))

SYMMETRIC_CLASSES = tuple(c.value for c in CLASS_CODES if c.is_symmetric)


class TrialResult(BaseModel):
    """一次试验的结果；period_histogram[t][class] = 落在该类 t-循环上的点数"""

    seed: int = Field(description="试验序号 k，随机流由 (master_seed, k) 决定")
    master_seed: int = Field(default=0)
    n: int = Field(ge=1)
    period_histogram: Dict[int, Dict[str, int]] = Field(default_factory=dict)
    sym_cycle_count: int = Field(ge=0)
    asym_cycle_count: int = Field(ge=0)
    cycle_count: int = Field(ge=0)

    def points_on(self, t: int, classes: Optional[Iterable[str]] = None) -> int:
        row = self.period_histogram.get(t, {})
        if classes is None:
            return sum(row.values())
        return sum(row.get(c, 0) for c in classes)

    def cycles_of_period(self, t: int, include_asymmetric: bool = False) -> int:
        classes = None if include_asymmetric else SYMMETRIC_CLASSES
        return self.points_on(t, classes) // t

    def check(self, params: TheoryParams) -> None:
        """逐次试验的不变量：总质量为 N，对称循环数为 (g+h)/2，非对称循环成对出现"""
        total = sum(sum(row.values()) for row in self.period_histogram.values())
        if total != params.n:
            raise ParameterError(f"试验 {self.seed}: 直方图总质量 {total} ≠ N={params.n}")
        if self.sym_cycle_count != (params.g + params.h) // 2:
            raise ParameterError(
                f"试验 {self.seed}: 对称循环数 {self.sym_cycle_count} ≠ (g+h)/2"
            )
        if self.asym_cycle_count % 2:
            raise ParameterError(f"试验 {self.seed}: 非对称循环数 {self.asym_cycle_count} 为奇数")


class EmpiricalDistribution(BaseModel):
    params: TheoryParams
    trials: int = Field(ge=1)
    grid: List[float]
    values: List[float] = Field(description="R̂_N(x)")
    theory: List[float] = Field(description="R(x) = 1 - e^{-x}(1+x)")

    def sup_distance(self) -> float:
        return float(np.max(np.abs(np.asarray(self.values) - np.asarray(self.theory)), initial=0.0))

    def rows(self) -> List[Tuple[float, float, float]]:
        return list(zip(self.grid, self.values, self.theory))


class RepetitionHistogram(BaseModel):
    t: int = Field(ge=1)
    counts: Dict[int, int] = Field(default_factory=dict, description="i → 恰有 i 个 t-循环的试验数")
    trials: int = Field(ge=0)
    include_asymmetric: bool = False

    def frequencies(self) -> Dict[int, float]:
        if not self.trials:
            return {}
        return {i: c / self.trials for i, c in sorted(self.counts.items())}

    def mean_count(self) -> float:
        if not self.trials:
            return 0.0
        return sum(i * c for i, c in self.counts.items()) / self.trials

    def period_mass(self, n: int) -> float:
        """⟨P_t⟩ 的估计：平均 t-循环数 × t / N"""
        return self.mean_count() * self.t / n


# ---------------------------------------------------------------------------
# 试验
# ---------------------------------------------------------------------------

def result_from_summary(summary: CycleSummary, seed: int = 0, master_seed: int = 0) -> TrialResult:
    """把一次循环分解汇总成 TrialResult（试验或具体映射都适用）"""
    keys = summary.lengths * len(CLASS_CODES) + summary.classes
    unique, counts = np.unique(keys, return_counts=True)
    histogram: Dict[int, Dict[str, int]] = {}
    for key, count in zip(unique.tolist(), counts.tolist()):
        t, code = divmod(key, len(CLASS_CODES))
        histogram.setdefault(t, {})[CLASS_CODES[code].value] = t * count

    sym = summary.symmetric_count()
    return TrialResult(
        seed=seed,
        master_seed=master_seed,
        n=summary.n,
        period_histogram=histogram,
        sym_cycle_count=sym,
        asym_cycle_count=len(summary.lengths) - sym,
        cycle_count=len(summary.lengths),
    )


def run_trial(params: TheoryParams, master_seed: int, k: int) -> TrialResult:
    """第 k 次试验，只依赖 (params, master_seed, k)"""
    g_inv, h_inv = sample_pair(params.n, params.g, params.h, trial_seed(master_seed, k))
    summary = cycle_summary(compose(g_inv, h_inv), g_inv, h_inv)
    return result_from_summary(summary, seed=k, master_seed=master_seed)


def check_work_cap(params: TheoryParams, trials: int) -> None:
    work = params.n * trials
    if work > settings.REVMAP_WORK_CAP:
        raise ResourceCapError(
            f"N·trials = {work:.3g} 超过上限 {settings.REVMAP_WORK_CAP:.3g}；"
            f"请减少 --trials 或调大 REVMAP_WORK_CAP"
        )


def run_trials(
    params: TheoryParams,
    trials: int,
    master_seed: int,
    start: int = 0,
) -> List[TrialResult]:
    """在当前进程内顺序执行试验 start .. start+trials-1"""
    if trials < 1:
        raise ParameterError(f"trials 必须为正整数: {trials}")
    check_work_cap(params, trials)
    return [run_trial(params, master_seed, k) for k in range(start, start + trials)]


def merge_histograms(results: Iterable[TrialResult]) -> Dict[int, Dict[str, int]]:
    """把多次试验的直方图相加（交换、结合）"""
    merged: Dict[int, Counter] = {}
    for result in results:
        for t, row in result.period_histogram.items():
            merged.setdefault(t, Counter()).update(row)
    return {t: dict(merged[t]) for t in sorted(merged)}


def _require(results: Sequence[TrialResult]) -> Tuple[int, int]:
    if not results:
        raise ParameterError("没有试验结果")
    n = results[0].n
    if any(r.n != n for r in results):
        raise ParameterError("试验结果的 N 不一致")
    return n, len(results)


# ---------------------------------------------------------------------------
# 估计量
# ---------------------------------------------------------------------------

def empirical_R(
    results: Sequence[TrialResult],
    params: TheoryParams,
    grid: Sequence[float] = DEFAULT_GRID,
) -> EmpiricalDistribution:
    """R̂_N(x) = 各试验中周期 ≤ ⌊x·z⌋ 的点所占比例的平均"""
    n, trials = _require(results)
    per_period = np.zeros(n + 1)
    for t, row in merge_histograms(results).items():
        per_period[t] = sum(row.values())
    cumulative = np.cumsum(per_period) / (n * trials)

    z = params.z
    values = [float(cumulative[min(period_cutoff(x, z), n)]) for x in grid]
    return EmpiricalDistribution(
        params=params,
        trials=trials,
        grid=list(grid),
        values=values,
        theory=r_limit_array(grid).tolist(),
    )


def mean_period_mass(
    results: Sequence[TrialResult],
    t: int,
    classes: Optional[Iterable[str]] = None,
) -> float:
    """⟨P_t⟩ 的样本均值，可限定类别"""
    n, trials = _require(results)
    classes = None if classes is None else tuple(classes)
    return sum(r.points_on(t, classes) for r in results) / (n * trials)


def asymmetric_mass(results: Sequence[TrialResult]) -> float:
    n, trials = _require(results)
    asym = SymmetryClass.ASYMMETRIC.value
    total = sum(row.get(asym, 0) for r in results for row in r.period_histogram.values())
    return total / (n * trials)


def symmetric_class_mass(results: Sequence[TrialResult]) -> Dict[str, float]:
    """每个对称类别所占的平均点质量"""
    n, trials = _require(results)
    totals = Counter()
    for row in merge_histograms(results).values():
        totals.update(row)
    return {c.value: totals.get(c.value, 0) / (n * trials) for c in CLASS_CODES}


def repetition_histogram(
    results: Sequence[TrialResult],
    t: int,
    include_asymmetric: bool = False,
) -> RepetitionHistogram:
    """每次试验中周期为 t 的（默认只计对称）循环个数的分布"""
    if t < 1:
        raise ParameterError(f"周期 t 必须 ≥ 1: {t}")
    counts = Counter(r.cycles_of_period(t, include_asymmetric) for r in results)
    return RepetitionHistogram(
        t=t,
        counts=dict(sorted(counts.items())),
        trials=len(results),
        include_asymmetric=include_asymmetric,
    )


def even_odd_mass(results: Sequence[TrialResult]) -> Tuple[float, float]:
    """(偶周期点比例, 奇周期点比例)"""
    n, trials = _require(results)
    even = odd = 0
    for t, row in merge_histograms(results).items():
        if t % 2:
            odd += sum(row.values())
        else:
            even += sum(row.values())
    return even / (n * trials), odd / (n * trials)


def mean_cycle_length(results: Sequence[TrialResult]) -> float:
    """全部循环的平均长度：总点数 / 总循环数"""
    n, trials = _require(results)
    return n * trials / sum(r.cycle_count for r in results)


def total_variation(p: Mapping[int, float], q: Mapping[int, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(float(p.get(k, 0.0)) - float(q.get(k, 0.0))) for k in keys)


def poisson_tv(histogram: RepetitionHistogram, alpha: float) -> float:
    """经验频率与 Poisson(α) 的全变差距离，Poisson 尾部质量计入距离"""
    freqs = histogram.frequencies()
    top = max(max(freqs, default=0), math.ceil(alpha + 10 * math.sqrt(alpha) + 10))
    support = np.arange(top + 1)
    pmf = poisson.pmf(support, alpha) if alpha > 0 else (support == 0).astype(float)
    reference = dict(zip(support.tolist(), pmf.tolist()))
    tail = max(0.0, 1.0 - float(pmf.sum()))
    return total_variation(freqs, reference) + 0.5 * tail


def binomial_standard_error(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / trials)
