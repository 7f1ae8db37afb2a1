"""
穷举预言机：在 E(g,h,N) 上逐一枚举，得到精确平均值

N 很小时（默认 N ≤ 6）用于校验 theory 的精确有理式：
各类 t-循环的平均质量 ⟨P_t⟩，以及“恰有 i 个对称 t-循环”的精确频率。
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from core.model import SymmetryClass, compose, decompose
from core.sampler import enumerate_pairs
from core.theory import (
    TheoryParams,
    expected_p_asym,
    expected_p_sym_even,
    expected_p_sym_odd,
    mu_exact,
    reconstruct_p_from_mu,
)
from utils.logging_config import get_logger

logger = get_logger(__name__)

ORACLE_MAX_N = 6


@dataclass
class EnumerationSummary:
    params: TheoryParams
    pairs: int = 0
    # class → t → 所有对上 t-循环点数之和
    points: Dict[str, Counter] = field(default_factory=dict)
    # t → i → 恰有 i 个对称 t-循环的对数
    repetitions: Dict[int, Counter] = field(default_factory=dict)
    # t → i → 恰有 i 个 t-循环（含非对称）的对数
    repetitions_all: Dict[int, Counter] = field(default_factory=dict)

    def mass(self, symmetry: SymmetryClass, t: int) -> Fraction:
        total = self.points.get(symmetry.value, Counter()).get(t, 0)
        return Fraction(total, self.params.n * self.pairs)

    def frequency(self, t: int, i: int, include_asymmetric: bool = False) -> Fraction:
        table = self.repetitions_all if include_asymmetric else self.repetitions
        return Fraction(table.get(t, Counter()).get(i, 0), self.pairs)


def enumerate_summary(params: TheoryParams, cap: Optional[int] = None) -> EnumerationSummary:
    """遍历 E(g,h,N) 的每一对 (G,H)，累计循环统计"""
    n = params.n
    summary = EnumerationSummary(params=params)
    for g_inv, h_inv in enumerate_pairs(n, params.g, params.h, cap=cap):
        d = decompose(compose(g_inv, h_inv), g_inv, h_inv)
        summary.pairs += 1
        symmetric = Counter()
        everything = Counter()
        for cycle in d:
            summary.points.setdefault(cycle.symmetry.value, Counter())[cycle.length] += cycle.length
            everything[cycle.length] += 1
            if cycle.symmetry.is_symmetric:
                symmetric[cycle.length] += 1
        for t in range(1, n + 1):
            summary.repetitions.setdefault(t, Counter())[symmetric.get(t, 0)] += 1
            summary.repetitions_all.setdefault(t, Counter())[everything.get(t, 0)] += 1
    logger.debug(f"[enumeration] 枚举完成 N={n}, g={params.g}, h={params.h}: {summary.pairs} 对")
    return summary


def compare_masses(summary: EnumerationSummary) -> List[Dict[str, object]]:
    """逐个 t 比较穷举平均与精确公式"""
    params = summary.params
    rows = []
    for t in range(1, params.n + 1):
        if t % 2:
            pairs = [("odd", summary.mass(SymmetryClass.SYMMETRIC_ODD, t), expected_p_sym_odd(params, (t + 1) // 2))]
        else:
            k = t // 2
            pairs = [
                ("even_g", summary.mass(SymmetryClass.SYMMETRIC_EVEN_G, t), expected_p_sym_even(params, k, "G")),
                ("even_h", summary.mass(SymmetryClass.SYMMETRIC_EVEN_H, t), expected_p_sym_even(params, k, "H")),
            ]
        pairs.append(("asym", summary.mass(SymmetryClass.ASYMMETRIC, t), expected_p_asym(params, t)))
        for kind, enumerated, theory in pairs:
            rows.append({"t": t, "kind": kind, "enumerated": enumerated, "theory": theory, "match": enumerated == theory})
    return rows


def total_mass(summary: EnumerationSummary) -> Fraction:
    """全部类别、全部周期的平均质量之和，应为 1"""
    params = summary.params
    return sum(
        (summary.mass(symmetry, t) for symmetry in SymmetryClass for t in range(1, params.n + 1)),
        Fraction(0),
    )


def compare_repetitions(summary: EnumerationSummary) -> List[Dict[str, object]]:
    """穷举频率 vs mu_exact；另给出由 μ 重建的 ⟨P_t⟩ 与对称质量的对照"""
    params = summary.params
    rows = []
    for t in range(1, params.n + 1):
        for i in range(params.n // t + 1):
            enumerated = summary.frequency(t, i)
            theory = mu_exact(params, t, i)
            rows.append({"t": t, "i": i, "enumerated": enumerated, "theory": theory, "match": enumerated == theory})
    return rows


def compare_reconstruction(summary: EnumerationSummary) -> List[Dict[str, object]]:
    params = summary.params
    rows = []
    for t in range(1, params.n + 1):
        classes = [SymmetryClass.SYMMETRIC_ODD] if t % 2 else [SymmetryClass.SYMMETRIC_EVEN_G, SymmetryClass.SYMMETRIC_EVEN_H]
        enumerated = sum((summary.mass(c, t) for c in classes), Fraction(0))
        reconstructed = reconstruct_p_from_mu(params, t)
        rows.append({"t": t, "enumerated": enumerated, "reconstructed": reconstructed, "match": enumerated == reconstructed})
    return rows
