"""
随机对合模型的理论预测

有限 N 的量全部用精确整数 / 有理数（Fraction）计算，#E 比值是唯一的真值来源，
展开后的乘积形式只做交叉校验；渐近律（R(x)、Poisson）用浮点。
"""

import math
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy.stats import poisson

from core.errors import ParameterError
from core.sampler import check_admissible, outside_base_range, pair_space_size
from utils.logging_config import get_logger

logger = get_logger(__name__)

Line = Literal["G", "H"]


class TheoryParams(BaseModel):
    """(N, g, h) 及其派生量 z、κ、f"""

    n: int = Field(ge=1, description="相空间大小 N")
    g: int = Field(ge=0, description="#Fix G")
    h: int = Field(ge=0, description="#Fix H")

    @model_validator(mode="after")
    def _check_parity(self):
        check_admissible(self.n, self.g, self.h)
        return self

    @property
    def z(self) -> Fraction:
        """z = 2N/(g+h)：渐近平均循环长度"""
        if self.g + self.h == 0:
            raise ParameterError("g+h=0 时 z 无定义")
        return Fraction(2 * self.n, self.g + self.h)

    @property
    def kappa(self) -> Fraction:
        return Fraction(self.g + self.h, self.n)

    @property
    def f_odd(self) -> Fraction:
        return Fraction(self.g * self.h, self.n)

    @property
    def f_even(self) -> Fraction:
        return Fraction(self.g ** 2 + self.h ** 2, 2 * self.n)

    @property
    def pair_count(self) -> int:
        return pair_space_size(self.n, self.g, self.h)

    def f(self, t: int) -> Fraction:
        return self.f_odd if t % 2 else self.f_even

    def repetition(self, t: int) -> "RepetitionParams":
        return RepetitionParams.from_theory(self, t)

    def summary(self) -> Dict[str, object]:
        data: Dict[str, object] = {
            "n": self.n,
            "g": self.g,
            "h": self.h,
            "kappa": self.kappa,
            "f_odd": self.f_odd,
            "f_even": self.f_even,
            "outside_base_range": outside_base_range(self.g, self.h),
        }
        if self.g + self.h:
            data["z"] = self.z
        return data


class RepetitionParams(BaseModel):
    """重复周期统计的标度量：x = (t-1)(g+h)/(2N)，y = x - ln f，α = e^{-y}"""

    t: int = Field(ge=1)
    f: float = Field(ge=0.0)
    x: float = Field(ge=0.0)
    y: float
    alpha: float = Field(ge=0.0)

    @classmethod
    def from_theory(cls, params: TheoryParams, t: int) -> "RepetitionParams":
        if t < 1:
            raise ParameterError(f"周期 t 必须 ≥ 1: {t}")
        f = float(params.f(t))
        x = (t - 1) * (params.g + params.h) / (2 * params.n)
        if f > 0:
            y = x - math.log(f)
            alpha = math.exp(-y)
        else:
            y = math.inf
            alpha = 0.0
        return cls(t=t, f=f, x=x, y=y, alpha=alpha)


def falling_factorial(n: int, a: int) -> int:
    """n^{(a)} = n(n-1)…(n-a+1)，n^{(0)} = 1"""
    if a < 0:
        raise ParameterError(f"下降阶乘的阶必须非负: {a}")
    if n >= 0:
        return math.perm(n, a)
    result = 1
    for j in range(a):
        result *= n - j
    return result


def _ratio(numerator: int, denominator: int) -> Fraction:
    return Fraction(numerator, denominator) if numerator else Fraction(0)


def expected_p_sym_odd(params: TheoryParams, k: int) -> Fraction:
    """⟨P^{(s)}_{2k-1}⟩ = ((2k-1)/N)·N^{(2k-1)}·#E(g-1,h-1,N-2k+1)/#E(g,h,N)"""
    if k < 1:
        raise ParameterError(f"k 必须 ≥ 1: {k}")
    n, t = params.n, 2 * k - 1
    if t > n:
        return Fraction(0)
    return _ratio(
        t * falling_factorial(n, t) * pair_space_size(n - t, params.g - 1, params.h - 1),
        n * params.pair_count,
    )


def _line_sizes(params: TheoryParams, line: Line) -> Tuple[int, int]:
    if line == "G":
        return params.g, params.h
    if line == "H":
        return params.h, params.g
    raise ParameterError(f"line 只能是 'G' 或 'H': {line!r}")


def expected_p_sym_even(params: TheoryParams, k: int, line: Line = "G") -> Fraction:
    """⟨P^{(s)}_{2k,line}⟩ = (k/N)·N^{(2k)}·#E(g-2,h,N-2k)/#E(g,h,N)（line=H 时交换 g、h）"""
    if k < 1:
        raise ParameterError(f"k 必须 ≥ 1: {k}")
    a, b = _line_sizes(params, line)
    n, t = params.n, 2 * k
    if t > n:
        return Fraction(0)
    return _ratio(
        k * falling_factorial(n, t) * pair_space_size(n - t, a - 2, b),
        n * params.pair_count,
    )


def expected_p_asym(params: TheoryParams, t: int) -> Fraction:
    """⟨P^{(a)}_t⟩ = (N^{(2t)}/N)·#E(g,h,N-2t)/#E(g,h,N)，包含 G 交换的一对循环"""
    if t < 1:
        raise ParameterError(f"周期 t 必须 ≥ 1: {t}")
    n = params.n
    if 2 * t > n:
        return Fraction(0)
    return _ratio(
        falling_factorial(n, 2 * t) * pair_space_size(n - 2 * t, params.g, params.h),
        n * params.pair_count,
    )


def expected_p_symmetric(params: TheoryParams, t: int) -> Fraction:
    """对称 t-循环的 ⟨P^{(s)}_t⟩；偶周期为 G、H 两条对称线之和"""
    if t % 2:
        return expected_p_sym_odd(params, (t + 1) // 2)
    return expected_p_sym_even(params, t // 2, "G") + expected_p_sym_even(params, t // 2, "H")


def expected_p_total(params: TheoryParams, t: int) -> Fraction:
    return expected_p_symmetric(params, t) + expected_p_asym(params, t)


# ---------------------------------------------------------------------------
# 展开后的乘积形式（交叉校验）
# ---------------------------------------------------------------------------

def expected_p_sym_odd_product(params: TheoryParams, k: int) -> Fraction:
    """ℰ_{2k-1} = gh·∏_{j=0}^{k-2}(N-g-2j)(N-h-2j)/(N^{(2k-1)})²"""
    n, g, h = params.n, params.g, params.h
    t = 2 * k - 1
    if t > n:
        return Fraction(0)
    ff = falling_factorial(n, t)
    numerator = g * h
    for j in range(k - 1):
        numerator *= (n - g - 2 * j) * (n - h - 2 * j)
    return Fraction(t, n) * ff * Fraction(numerator, ff * ff)


def expected_p_sym_even_product(
    params: TheoryParams,
    k: int,
    line: Line = "G",
    literal: bool = False,
) -> Fraction:
    """
    ℰ_{2k} = g(g-1)·∏_{j=0}^{k-2}(N-g-2j)·∏_{j=0}^{k-1}(N-h-2j)/(N^{(2k)})²

    literal=True 时 k=1 使用印刷的分母 N(N-1)²，仅用于差异报告。
    """
    a, b = _line_sizes(params, line)
    n = params.n
    if 2 * k > n:
        return Fraction(0)
    ff = falling_factorial(n, 2 * k)
    if literal and k == 1:
        cal_e = Fraction(a * (a - 1) * (n - b), n * (n - 1) ** 2)
    else:
        numerator = a * (a - 1)
        for j in range(k - 1):
            numerator *= n - a - 2 * j
        for j in range(k):
            numerator *= n - b - 2 * j
        cal_e = Fraction(numerator, ff * ff)
    return Fraction(k, n) * ff * cal_e


def expected_p_asym_product(params: TheoryParams, t: int) -> Fraction:
    """(1/N)·∏_{j=0}^{t-1}(1-(g-1)/(N-2j-1))(1-h/(N-2j))"""
    n, g, h = params.n, params.g, params.h
    if 2 * t > n:
        return Fraction(0)
    value = Fraction(1, n)
    for j in range(t):
        value *= (1 - Fraction(g - 1, n - 2 * j - 1)) * (1 - Fraction(h, n - 2 * j))
    return value


def admissible_triples(n_max: int, n_min: int = 1) -> Iterable[Tuple[int, int, int]]:
    """所有满足奇偶约束的 (N, g, h)，N ∈ [n_min, n_max]"""
    for n in range(n_min, n_max + 1):
        for g in range(n % 2, n + 1, 2):
            for h in range(n % 2, n + 1, 2):
                yield n, g, h


def even_closed_form_discrepancies(n_max: int) -> List[Dict[str, object]]:
    """列出印刷的 k=1 偶周期闭式与 #E 比值不一致的 (N,g,h,k)"""
    rows = []
    for n, g, h in admissible_triples(n_max, n_min=2):
        params = TheoryParams(n=n, g=g, h=h)
        ratio = expected_p_sym_even(params, 1, "G")
        printed = expected_p_sym_even_product(params, 1, "G", literal=True)
        if ratio != printed:
            rows.append({"n": n, "g": g, "h": h, "k": 1, "ratio": ratio, "printed": printed})
    logger.debug(f"[theory] 偶周期 k=1 闭式差异: {len(rows)} 组 (N ≤ {n_max})")
    return rows


# ---------------------------------------------------------------------------
# 重复周期：容斥公式
# ---------------------------------------------------------------------------

def _cycle_weight(params: TheoryParams, t: int, m: int) -> Fraction:
    """
    选定 m 个互不相交的对称 t-循环后，其余空间上自由作用的对合对数 / #E。

    奇周期只有一种结构 E(g-m, h-m, N-mt)；偶周期对 m 个循环在 G 线与 H 线间的
    分配求平均：Σ_{a+b=m} C(m,a)/2^m · #E(g-2a, h-2b, N-mt)。m=1 时即 ½(G 线 + H 线)。
    """
    n, g, h = params.n, params.g, params.h
    rest = n - m * t
    if t % 2:
        return _ratio(pair_space_size(rest, g - m, h - m), params.pair_count)
    total = sum(comb(m, a) * pair_space_size(rest, g - 2 * a, h - 2 * (m - a)) for a in range(m + 1))
    return _ratio(total, 2 ** m * params.pair_count)


def mu_exact(params: TheoryParams, t: int, i: int) -> Fraction:
    """
    μ(t,i)：均匀随机的 (G,H) 恰有 i 个对称 t-循环的概率

    μ(t,i) = (N^{(it)}/i!) Σ_{n=0}^{M} (-1)^n ((N-it)^{(nt)}/n!)·W(i+n)，M = ⌊N/t⌋ - i
    """
    if t < 1 or i < 0:
        raise ParameterError(f"需要 t ≥ 1, i ≥ 0: t={t}, i={i}")
    n = params.n
    if i * t > n:
        return Fraction(0)
    upper = n // t - i
    rest = n - i * t
    series = Fraction(0)
    for m in range(upper + 1):
        weight = _cycle_weight(params, t, i + m)
        if not weight:
            continue
        term = Fraction(falling_factorial(rest, m * t), factorial(m)) * weight
        series += -term if m % 2 else term
    return Fraction(falling_factorial(n, i * t), factorial(i)) * series


def mu_distribution(params: TheoryParams, t: int) -> Dict[int, Fraction]:
    """i = 0..⌊N/t⌋ 上的完整 μ(t,·)"""
    return {i: mu_exact(params, t, i) for i in range(params.n // t + 1)}


def reconstruct_p_from_mu(params: TheoryParams, t: int) -> Fraction:
    """⟨P_t⟩ = (t/N) Σ_{i≥1} i·μ(t,i)"""
    if t < 1:
        raise ParameterError(f"周期 t 必须 ≥ 1: {t}")
    total = sum((i * mu_exact(params, t, i) for i in range(1, params.n // t + 1)), Fraction(0))
    return Fraction(t, params.n) * total


def mu_poisson(alpha: float, i: int) -> float:
    """e^{-α} α^i / i!；α = 0 时退化为 δ_i"""
    if alpha < 0:
        raise ParameterError(f"α 必须非负: {alpha}")
    if alpha == 0:
        return 1.0 if i == 0 else 0.0
    return float(poisson.pmf(i, alpha))


def cebotarev_nu(d: int, i: int) -> Fraction:
    """对称群 S_d 中恰有 i 个不动点的比例：(1/i!) Σ_{j=0}^{d-i} (-1)^j/j!"""
    if d < 1 or i < 0:
        raise ParameterError(f"需要 d ≥ 1, i ≥ 0: d={d}, i={i}")
    if i > d:
        return Fraction(0)
    series = sum((Fraction((-1) ** j, factorial(j)) for j in range(d - i + 1)), Fraction(0))
    return series / factorial(i)


# ---------------------------------------------------------------------------
# 渐近律
# ---------------------------------------------------------------------------

def r_limit(x: float) -> float:
    """R(x) = 1 - e^{-x}(1+x)"""
    if x < 0:
        raise ParameterError(f"x 必须非负: {x}")
    return -math.expm1(-x) - x * math.exp(-x)


def r_limit_array(xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if np.any(xs < 0):
        raise ParameterError("x 必须非负")
    return -np.expm1(-xs) - xs * np.exp(-xs)


def odd_weight(g: int, h: int) -> float:
    """奇对称循环的极限质量 2gh/(g+h)²"""
    return 2 * g * h / (g + h) ** 2


def even_weight(g: int, h: int) -> float:
    """偶对称循环的极限质量 (g²+h²)/(g+h)²"""
    return (g * g + h * h) / (g + h) ** 2


def asymmetric_limit(x: float, g: int, h: int) -> float:
    """
    非对称部分的极限分布函数 (1-e^{-2x})/(g+h)。

    长为 t 的非对称循环对占用 2t 个点，⟨P_t^(a)⟩ ~ e^{-2t/z}/N，
    按 t ≤ x·z 求和即得；x → ∞ 时总质量为 1/(g+h)。
    """
    if g + h == 0:
        raise ParameterError("g+h=0 时缩放参数无定义")
    return -math.expm1(-2 * x) / (g + h)


def poisson_period_mass(params: TheoryParams, t: int) -> float:
    """由 Poisson 律推出的 ⟨P_t⟩ ~ (t/N)·f·e^{-x}"""
    rep = params.repetition(t)
    return t / params.n * rep.f * math.exp(-rep.x)


def period_masses(params: TheoryParams) -> Dict[str, np.ndarray]:
    """
    用乘积递推在浮点下算出 t = 1..N 的 ⟨P_t⟩ 各分量（O(N)）。

    返回的数组下标为 t-1。
    """
    n, g, h = params.n, params.g, params.h
    odd = np.zeros(n)
    even_g = np.zeros(n)
    even_h = np.zeros(n)
    asym = np.zeros(n)

    # 奇对称：P(k) = (2k-1)·gh/N² · ∏_{j=0}^{k-2} (N-g-2j)(N-h-2j)/((N-2j-1)(N-2j-2))
    k_max = (n + 1) // 2
    j = np.arange(max(k_max - 1, 0), dtype=float)
    factors = (n - g - 2 * j) * (n - h - 2 * j) / ((n - 2 * j - 1) * (n - 2 * j - 2))
    running = np.concatenate(([1.0], np.cumprod(factors)))[:k_max]
    k = np.arange(1, k_max + 1)
    odd[2 * k - 2] = (2 * k - 1) * g * h / n ** 2 * running

    # 偶对称：e_1 = a(a-1)(N-b)/(N²(N-1))，e_k = e_{k-1}·(N-a-2k+4)(N-b-2k+2)/((N-2k+2)(N-2k+1))
    k_max = n // 2
    if k_max:
        k = np.arange(1, k_max + 1)
        for target, (a, b) in ((even_g, (g, h)), (even_h, (h, g))):
            first = a * (a - 1) * (n - b) / (n ** 2 * (n - 1)) if n > 1 else 0.0
            kk = k[1:]
            steps = (n - a - 2 * kk + 4) * (n - b - 2 * kk + 2) / ((n - 2 * kk + 2) * (n - 2 * kk + 1))
            e = first * np.concatenate(([1.0], np.cumprod(steps)))
            target[2 * k - 1] = k * e

    # 非对称：P(t) = (1/N)·∏_{j=0}^{t-1} (N-g-2j)(N-h-2j)/((N-2j)(N-2j-1))
    t_max = n // 2
    if t_max:
        j = np.arange(t_max, dtype=float)
        factors = (n - g - 2 * j) * (n - h - 2 * j) / ((n - 2 * j) * (n - 2 * j - 1))
        asym[:t_max] = np.cumprod(factors) / n

    return {"odd": odd, "even_g": even_g, "even_h": even_h, "asym": asym}


def finite_n_distribution(params: TheoryParams, xs: Sequence[float]) -> Dict[str, List[float]]:
    """有限 N 的 R_N(x) 及其奇对称、偶对称、非对称分量"""
    masses = period_masses(params)
    cumulative = {
        "odd": np.cumsum(masses["odd"]),
        "even": np.cumsum(masses["even_g"] + masses["even_h"]),
        "asym": np.cumsum(masses["asym"]),
    }
    result: Dict[str, List[float]] = {"total": [], "odd": [], "even": [], "asym": []}
    for x in xs:
        cutoff = min(period_cutoff(x, params.z), params.n)
        for key, series in cumulative.items():
            result[key].append(float(series[cutoff - 1]) if cutoff else 0.0)
        result["total"].append(result["odd"][-1] + result["even"][-1] + result["asym"][-1])
    return result


def period_cutoff(x: float, z: Fraction) -> int:
    """⌊x·z⌋，x 先转成有理数以免网格点上的舍入误差"""
    return math.floor(Fraction(x).limit_denominator(10 ** 6) * z)


# ---------------------------------------------------------------------------
# 增长情形
# ---------------------------------------------------------------------------

class GrowthRegime(BaseModel):
    """g = N^r、h = N^s 时 f(N) 的渐近行为"""

    r: float
    s: float
    parity: Literal["odd", "even"]
    exponent: float = Field(description="f(N) ~ c·N^exponent")
    regime: Literal["constant", "infinite", "zero"]
    limit: Optional[float] = Field(default=None, description="regime=constant 时的极限 c")
    limit_law_holds: bool


def growth_regime(r, s, parity: Literal["odd", "even"]) -> GrowthRegime:
    """
    f = N^{r+s-1}（奇周期）或 (N^{2r-1}+N^{2s-1})/2（偶周期）：
    要么 f=1，要么代数地趋于 ∞ 或 0。
    """
    r, s = Fraction(r), Fraction(s)
    if not (0 <= r < 1 and 0 <= s < 1):
        raise ParameterError(f"需要 0 ≤ r,s < 1: r={r}, s={s}")
    if parity == "odd":
        exponent = r + s - 1
        limit = Fraction(1)
    elif parity == "even":
        exponent = max(2 * r, 2 * s) - 1
        limit = Fraction((2 * r - 1 == exponent) + (2 * s - 1 == exponent), 2)
    else:
        raise ParameterError(f"parity 只能是 odd/even: {parity!r}")

    regime = "constant" if exponent == 0 else ("infinite" if exponent > 0 else "zero")
    return GrowthRegime(
        r=float(r),
        s=float(s),
        parity=parity,
        exponent=float(exponent),
        regime=regime,
        limit=float(limit) if regime == "constant" else None,
        limit_law_holds=max(r, s) > 0,
    )


def scaling_conditions(sequence: Sequence[Tuple[int, int, int]]) -> Dict[str, bool]:
    """沿序列 (N, g, h) 检查 g+h 递增且 (g+h)/N 递减"""
    sums = [g + h for _, g, h in sequence]
    ratios = [Fraction(g + h, n) for n, g, h in sequence]
    return {
        "g_plus_h_increasing": all(b > a for a, b in zip(sums, sums[1:])),
        "kappa_decreasing": all(b < a for a, b in zip(ratios, ratios[1:])),
    }
