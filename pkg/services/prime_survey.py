"""
逐素数的映射报告与 Φ₅ 根数普查

每个素数的计算彼此独立，由 trial_runner 扇出（任务类型见 tasks.trial_tasks）。
"""

from collections import Counter
from typing import Any, Dict, List

import numpy as np

from app.config import settings
from core.errors import ParameterError
from core.ffield import PrimeField, primes_in_range
from core.model import compose, cycle_summary
from core.polyroots import count_roots, evaluate, is_squarefree, phi5
from core.stats import empirical_R, result_from_summary
from core.theory import TheoryParams, cebotarev_nu, mu_poisson
from services.map_analysis import (
    build_permutation,
    fixed_sets,
    symmetric_cycle_spectrum,
    verify_involutions,
)
from services.reversible_maps import ReversiblePair, henon_pair, map3d_pair
from utils.logging_config import get_logger

logger = get_logger(__name__)

PHI5_DEGREE = 6


def phi5_prime_report(p: int) -> Dict[str, Any]:
    """Φ₅ mod p 的不同根数，以及 Φ₅ mod p 是否无平方因子"""
    f = phi5(PrimeField(p))
    return {"p": p, "roots": count_roots(f), "squarefree": is_squarefree(f)}


def _full_report(pair: ReversiblePair) -> Dict[str, Any]:
    """完整分解：对称循环数，以及该映射在 R 网格上的 R̂ 与距离"""
    g_inv, h_inv = build_permutation(pair)
    summary = cycle_summary(compose(g_inv, h_inv), g_inv, h_inv)
    result = result_from_summary(summary)
    params = TheoryParams(n=pair.size, g=g_inv.fixed_count, h=h_inv.fixed_count)
    distribution = empirical_R([result], params)
    return {
        "method": "full",
        "symmetric_cycles": result.sym_cycle_count,
        "asymmetric_cycles": result.asym_cycle_count,
        "cycles": result.cycle_count,
        "sup_distance": distribution.sup_distance(),
        "distribution": [
            {"x": x, "empirical": value, "theory": theory} for x, value, theory in distribution.rows()
        ],
    }


def spurious_phi5_roots(pair: ReversiblePair) -> List[int]:
    """
    Φ₅ 中对角点 (x, x) 为 L 不动点的根（a=1 时即 x=1，仅在 p=5 出现）。

    5 是素数，其余根的对角点都在对称 5-循环上。
    """
    field = pair.field
    x = np.arange(field.p, dtype=np.int64)
    diagonal = np.stack([x, x])
    fixed = x[np.all(pair.apply_l(diagonal) == diagonal, axis=0)]
    f = phi5(field)
    return [int(v) for v in fixed if evaluate(f, int(v)) == 0]


def henon_prime_report(p: int, a: int = 1, t: int = 5, full: bool = False) -> Dict[str, Any]:
    """
    Hénon 映射在 𝔽_p 上的报告：#Fix、对称 t-循环数，t=5 时附 Φ₅ 根数对照。

    full=True 且 p² 不超过稠密上限时附完整分解；超过上限时只给轨道搜索结果并注明。
    """
    field = PrimeField(p)
    pair = henon_pair(field, a)
    fixed = fixed_sets(pair, method="closed")
    spectrum = symmetric_cycle_spectrum(pair, t, fixed)
    report: Dict[str, Any] = {
        "p": p,
        "a": pair.a,
        "g": fixed.g,
        "h": fixed.h,
        "t": t,
        "symmetric_t_cycles": spectrum[t],
        "method": "orbit-search",
    }
    if t == 5 and pair.a == 1:
        roots = count_roots(phi5(field))
        spurious = spurious_phi5_roots(pair)
        report["phi5_roots"] = roots
        report["spurious_roots"] = spurious
        report["agree"] = roots - len(spurious) == spectrum[t]
    if full:
        if pair.size <= settings.REVMAP_CAP_POINTS:
            report.update(_full_report(pair))
        else:
            report["note"] = f"p²={pair.size} 超过 REVMAP_CAP_POINTS，未做完整分解"
    return report


def map3d_prime_report(p: int, e: int = 1, k: int = 1) -> Dict[str, Any]:
    """三维映射在 𝔽_p（p ≡ 3 mod 4）上的报告"""
    field = PrimeField(p)
    pair = map3d_pair(field, e, k)
    involutive = verify_involutions(pair)
    closed = fixed_sets(pair, method="closed")
    report: Dict[str, Any] = {
        "p": p,
        "e": pair.e,
        "k": pair.k,
        "involutive_g": involutive["g"],
        "involutive_h": involutive["h"],
        "exhaustive": involutive["exhaustive"],
        "g": closed.g,
        "h": closed.h,
        "method": "orbit-search",
    }
    if pair.size <= settings.REVMAP_CAP_POINTS:
        scanned = fixed_sets(pair, method="scan")
        report["fixed_sets_agree"] = bool(
            (scanned.fix_g.tolist(), scanned.fix_h.tolist()) == (closed.fix_g.tolist(), closed.fix_h.tolist())
        )
        report.update(_full_report(pair))
    else:
        report["note"] = f"p³={pair.size} 超过 REVMAP_CAP_POINTS，未做完整分解"
    return report


def root_count_frequencies(reports: List[Dict[str, Any]]) -> Dict[int, float]:
    counts = Counter(r["roots"] for r in reports)
    total = sum(counts.values())
    return {i: counts.get(i, 0) / total for i in range(PHI5_DEGREE + 1)} if total else {}


def phi5_root_survey(p_min: int, p_max: int, runner=None) -> Dict[str, Any]:
    """
    [p_min, p_max] 内 Φ₅ mod p 根数的频率与 S₆ 不动点分布 ν(6, i) 的比较。

    Φ₅ mod p 有重根的素数（整除判别式）不计入频率。
    """
    if p_min > p_max:
        raise ParameterError(f"素数范围为空: [{p_min}, {p_max}]")
    if runner is None:
        from services.trial_runner import trial_runner as runner

    # 2、3 处 Φ₅ 的约化不在考察范围
    primes = primes_in_range(max(p_min, 5), p_max)
    if not primes:
        raise ParameterError(f"[{p_min}, {p_max}] 内没有可用的素数")
    logger.info(f"[prime_survey] 多项式根数普查: {len(primes)} 个素数")
    reports = runner.map_jobs("phi5_prime", [{"p": p} for p in primes])
    usable = [r for r in reports if r["squarefree"]]
    frequencies = root_count_frequencies(usable)
    nu = {i: cebotarev_nu(PHI5_DEGREE, i) for i in range(PHI5_DEGREE + 1)}
    tv = 0.5 * sum(abs(frequencies.get(i, 0.0) - float(nu[i])) for i in nu)
    return {
        "primes": len(usable),
        "skipped": [r["p"] for r in reports if not r["squarefree"]],
        "frequencies": frequencies,
        "nu": nu,
        "tv": tv,
        "reports": reports,
    }


def cebotarev_table(d: int = PHI5_DEGREE) -> List[Dict[str, Any]]:
    """ν(d, i) 的精确值、小数值以及 Poisson(1) 参照"""
    rows = []
    for i in range(d + 1):
        nu = cebotarev_nu(d, i)
        rows.append({"i": i, "nu": nu, "nu_decimal": float(nu), "poisson": mu_poisson(1.0, i)})
    return rows

