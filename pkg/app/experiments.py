"""
实验驱动：每个子命令对应一个 cmd_* 函数

cmd_* 接收校验过的 RunConfig，返回 Report（结果、检查项、表格）。
检查项格式 {name, value, bound, pass}，--check 模式下任一不通过即退出码 4。
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, Field, model_validator

from app.config import settings
from core.errors import ParameterError
from core.ffield import is_prime, is_three_mod_four, primes_in_range
from core.sampler import check_admissible
from core.stats import (
    asymmetric_mass,
    empirical_R,
    even_odd_mass,
    mean_cycle_length,
    poisson_tv,
    repetition_histogram,
    symmetric_class_mass,
    total_variation,
)
from core.theory import (
    TheoryParams,
    asymmetric_limit,
    even_closed_form_discrepancies,
    even_weight,
    finite_n_distribution,
    mu_distribution,
    mu_poisson,
    odd_weight,
    poisson_period_mass,
)
from services.enumeration_oracle import (
    compare_masses,
    compare_reconstruction,
    compare_repetitions,
    enumerate_summary,
    total_mass,
)
from services.prime_survey import (
    cebotarev_table,
    henon_prime_report,
    phi5_prime_report,
    phi5_root_survey,
)
from services.trial_runner import TrialRunner
from utils.logging_config import get_logger, log_start, log_success

logger = get_logger(__name__)

Command = Literal["involutions", "repeats", "henon", "map3d", "cebotarev", "phi5"]

# S₆ 中恰有 i 个不动点的比例，i = 0..6
S6_FIXED_POINT_TABLE = (
    Fraction(53, 144),
    Fraction(11, 30),
    Fraction(3, 16),
    Fraction(1, 18),
    Fraction(1, 48),
    Fraction(0),
    Fraction(1, 720),
)

# 各子命令的默认试验次数
DEFAULT_TRIALS = {"involutions": 200, "repeats": 10_000}

# 验收容差
R_SUP_BOUND = 0.02
ASYM_RATIO_BOUNDS = (0.5, 2.0)
ODD_MASS_TOLERANCE = 0.05
CYCLE_LENGTH_TOLERANCE = 0.10
POISSON_TV_BOUND = 0.05
DELTA_REGIME_ALPHA = 0.02
DELTA_REGIME_BOUND = 0.98
CEBOTAREV_TV_BOUND = 0.03


class RunConfig(BaseModel):
    """一次运行的完整配置；所有数值参数在分发前校验"""

    command: Command
    n: Optional[int] = Field(default=None, ge=1, description="相空间大小 N")
    g: Optional[int] = Field(default=None, ge=0)
    h: Optional[int] = Field(default=None, ge=0)
    trials: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=42, ge=0, description="master seed")
    t: Optional[int] = Field(default=None, ge=1, description="周期")
    a: int = Field(default=1, description="Hénon 参数")
    e: int = Field(default=1, description="三维映射参数 e")
    k: int = Field(default=1, description="三维映射参数 k")
    p: Optional[int] = None
    p_min: Optional[int] = None
    p_max: Optional[int] = None
    degree: int = Field(default=6, ge=1)
    exact: bool = False
    full: bool = False
    all_cycles: bool = False
    cross_check: bool = False
    check: bool = False
    format: Literal["csv", "json"] = "csv"
    out: Optional[str] = None
    workers: Optional[int] = Field(default=None, ge=1)
    backend: Literal["local", "celery"] = "local"

    @model_validator(mode="after")
    def _validate(self):
        command = self.command
        if command in ("involutions", "repeats"):
            if self.n is None or self.g is None or self.h is None:
                raise ParameterError(f"{command} 需要 --n、--g、--h")
            check_admissible(self.n, self.g, self.h)
            if self.trials is None:
                self.trials = DEFAULT_TRIALS[command]
            if command == "involutions" and not self.exact and self.g + self.h == 0:
                raise ParameterError("g+h=0 时缩放参数 z 无定义，只能用 --exact")
            if command == "repeats":
                if self.t is None:
                    self.t = 3
                if self.t > self.n:
                    raise ParameterError(f"t={self.t} 超过 N={self.n}")
        if command in ("henon", "map3d", "phi5"):
            self._validate_primes()
        if command == "henon":
            if self.t is None:
                self.t = 5
            if self.t > settings.REVMAP_PERIOD_LIMIT:
                raise ParameterError(f"t={self.t} 超过周期上限 {settings.REVMAP_PERIOD_LIMIT}")
        if command == "map3d" and self.p is not None and not is_three_mod_four(self.p):
            raise ParameterError(f"p={self.p} ≢ 3 (mod 4)：F = 1+(1-y)² 会取零，三维映射无定义")
        return self

    def _validate_primes(self) -> None:
        if self.p is not None:
            if self.p % 2 == 0 or not is_prime(self.p):
                raise ParameterError(f"p={self.p} 不是奇素数")
            return
        if self.p_min is None or self.p_max is None:
            raise ParameterError(f"{self.command} 需要 --p 或 --p-min/--p-max")
        if self.p_min > self.p_max:
            raise ParameterError(f"素数范围为空: [{self.p_min}, {self.p_max}]")

    def primes(self) -> List[int]:
        if self.p is not None:
            return [self.p]
        return primes_in_range(self.p_min, self.p_max)

    def resolved(self) -> Dict[str, Any]:
        """嵌入输出文档的配置；执行相关字段不影响结果，不写入"""
        return self.model_dump(exclude={"workers", "backend", "out"})


@dataclass
class Report:
    command: str
    results: Dict[str, Any]
    header: Sequence[str]
    rows: List[Sequence[Any]]
    checks: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def failed(self) -> List[Dict[str, Any]]:
        return [c for c in self.checks if not c["pass"]]


def make_check(name: str, value: Any, bound: Any, passed: bool) -> Dict[str, Any]:
    return {"name": name, "value": value, "bound": bound, "pass": bool(passed)}


def _runner(config: RunConfig) -> TrialRunner:
    return TrialRunner(workers=config.workers, backend=config.backend)


# ---------------------------------------------------------------------------
# involutions
# ---------------------------------------------------------------------------

def _involutions_exact(config: RunConfig, params: TheoryParams) -> Report:
    summary = enumerate_summary(params)
    masses = compare_masses(summary)
    reconstruction = compare_reconstruction(summary)
    total = total_mass(summary)
    discrepancies = even_closed_form_discrepancies(params.n)
    results = {
        "params": params.summary(),
        "pairs": summary.pairs,
        "masses": masses,
        "reconstruction": reconstruction,
        "total_mass": total,
        "even_closed_form_discrepancies": discrepancies,
    }
    checks = [
        make_check("exact_masses_match", sum(not r["match"] for r in masses), 0, all(r["match"] for r in masses)),
        make_check("total_mass_is_one", total, 1, total == 1),
        make_check("pair_count_matches", summary.pairs, params.pair_count, summary.pairs == params.pair_count),
    ]
    rows = [(r["t"], r["kind"], r["enumerated"], r["theory"], r["match"]) for r in masses]
    return Report("involutions", results, ("t", "kind", "enumerated", "theory", "match"), rows, checks)


def cmd_involutions(config: RunConfig) -> Report:
    params = TheoryParams(n=config.n, g=config.g, h=config.h)
    if config.exact:
        return _involutions_exact(config, params)

    log_start(logger, f"[involutions] 采样 N={params.n}, g={params.g}, h={params.h}, trials={config.trials}")
    trials = _runner(config).run_trials(params, config.trials, config.seed)
    distribution = empirical_R(trials, params)
    finite = finite_n_distribution(params, distribution.grid)
    classes = symmetric_class_mass(trials)
    even_mass, odd_mass = even_odd_mass(trials)
    asym = asymmetric_mass(trials)
    mean_length = mean_cycle_length(trials)
    z = float(params.z)
    sym_expected = (params.g + params.h) // 2
    sym_violations = sum(1 for r in trials if r.sym_cycle_count != sym_expected)
    sup = distribution.sup_distance()

    results = {
        "params": params.summary(),
        "trials": config.trials,
        "seed": config.seed,
        "sup_distance": sup,
        "asymmetric_mass": asym,
        "asymmetric_reference": 1 / (params.g + params.h),
        "class_mass": classes,
        "even_mass": even_mass,
        "odd_mass": odd_mass,
        "odd_weight": odd_weight(params.g, params.h),
        "even_weight": even_weight(params.g, params.h),
        "mean_cycle_length": mean_length,
        "z": params.z,
        "distribution": [
            {
                "x": x,
                "empirical": v,
                "theory": r,
                "finite_n": f,
                "asymmetric_finite_n": a,
                "asymmetric_limit": asymmetric_limit(x, params.g, params.h),
            }
            for x, v, r, f, a in zip(distribution.grid, distribution.values, distribution.theory, finite["total"], finite["asym"])
        ],
    }
    low, high = ASYM_RATIO_BOUNDS
    ratio = asym * (params.g + params.h)
    odd_symmetric = classes["SymmetricOdd"]
    checks = [
        make_check("sup_distance", sup, R_SUP_BOUND, sup <= R_SUP_BOUND),
        make_check("asymmetric_mass_ratio", ratio, [low, high], low <= ratio <= high),
        make_check("symmetric_cycle_count_violations", sym_violations, 0, sym_violations == 0),
        make_check(
            "odd_symmetric_mass",
            odd_symmetric,
            [odd_weight(params.g, params.h) - ODD_MASS_TOLERANCE, odd_weight(params.g, params.h) + ODD_MASS_TOLERANCE],
            abs(odd_symmetric - odd_weight(params.g, params.h)) <= ODD_MASS_TOLERANCE,
        ),
        make_check(
            "mean_cycle_length",
            mean_length,
            [z * (1 - CYCLE_LENGTH_TOLERANCE), z * (1 + CYCLE_LENGTH_TOLERANCE)],
            abs(mean_length - z) <= CYCLE_LENGTH_TOLERANCE * z,
        ),
    ]
    log_success(logger, f"[involutions] 完成: sup|R̂-R| = {sup:.4f}")
    return Report("involutions", results, ("x", "empirical", "theory"), distribution.rows(), checks)


# ---------------------------------------------------------------------------
# repeats
# ---------------------------------------------------------------------------

def _repeats_exact(config: RunConfig, params: TheoryParams) -> Report:
    summary = enumerate_summary(params)
    rows_all = compare_repetitions(summary)
    rows = [r for r in rows_all if r["t"] == config.t]
    reconstruction = [r for r in compare_reconstruction(summary) if r["t"] == config.t]
    results = {"params": params.summary(), "t": config.t, "pairs": summary.pairs, "mu": rows, "reconstruction": reconstruction}
    checks = [
        make_check("mu_exact_match", sum(not r["match"] for r in rows_all), 0, all(r["match"] for r in rows_all)),
        make_check("reconstruction_match", sum(not r["match"] for r in reconstruction), 0, all(r["match"] for r in reconstruction)),
    ]
    table = [(r["i"], r["enumerated"], r["theory"], r["match"]) for r in rows]
    return Report("repeats", results, ("i", "enumerated", "mu_exact", "match"), table, checks)


def cmd_repeats(config: RunConfig) -> Report:
    params = TheoryParams(n=config.n, g=config.g, h=config.h)
    if config.exact:
        return _repeats_exact(config, params)

    t = config.t
    repetition = params.repetition(t)
    log_start(logger, f"[repeats] 采样 N={params.n}, g={params.g}, h={params.h}, t={t}, α={repetition.alpha:.4g}")
    trials = _runner(config).run_trials(params, config.trials, config.seed)
    histogram = repetition_histogram(trials, t, include_asymmetric=config.all_cycles)
    frequencies = histogram.frequencies()

    exact: Optional[Dict[int, Fraction]] = None
    if params.n <= settings.REVMAP_EXACT_MU_MAX_N and not config.all_cycles:
        exact = mu_distribution(params, t)
    top = max(max(frequencies, default=0), math.ceil(repetition.alpha + 6 * math.sqrt(repetition.alpha) + 3))
    if exact is not None:
        top = max([top] + [i for i, v in exact.items() if v])
    rows = [
        (i, frequencies.get(i, 0.0), exact.get(i, Fraction(0)) if exact is not None else "", mu_poisson(repetition.alpha, i))
        for i in range(top + 1)
    ]

    tv = poisson_tv(histogram, repetition.alpha)
    results: Dict[str, Any] = {
        "params": params.summary(),
        "trials": config.trials,
        "seed": config.seed,
        "t": t,
        "include_asymmetric": config.all_cycles,
        "repetition": repetition.model_dump(),
        "histogram": histogram.counts,
        "poisson_tv": tv,
        "period_mass": histogram.period_mass(params.n),
        "poisson_period_mass": poisson_period_mass(params, t),
    }
    checks = []
    if repetition.alpha < DELTA_REGIME_ALPHA:
        mass_at_zero = frequencies.get(0, 0.0)
        checks.append(make_check("delta_regime_mass_at_zero", mass_at_zero, DELTA_REGIME_BOUND, mass_at_zero >= DELTA_REGIME_BOUND))
    else:
        checks.append(make_check("poisson_tv", tv, POISSON_TV_BOUND, tv <= POISSON_TV_BOUND))
    if exact is not None:
        exact_tv = total_variation(frequencies, {i: float(v) for i, v in exact.items()})
        results["mu_exact"] = exact
        results["exact_tv"] = exact_tv
        checks.append(make_check("exact_tv", exact_tv, POISSON_TV_BOUND, exact_tv <= POISSON_TV_BOUND))
    log_success(logger, f"[repeats] 完成: TV(μ̂, Poisson) = {tv:.4f}")
    return Report("repeats", results, ("i", "empirical", "mu_exact", "mu_poisson"), rows, checks)


# ---------------------------------------------------------------------------
# henon / map3d
# ---------------------------------------------------------------------------

def cmd_henon(config: RunConfig) -> Report:
    primes = config.primes()
    log_start(logger, f"[henon] a={config.a}, t={config.t}, {len(primes)} 个素数")
    jobs = [{"p": p, "a": config.a, "t": config.t, "full": config.full} for p in primes]
    reports = _runner(config).map_jobs("henon_prime", jobs)

    checks = [
        make_check(
            "fixed_set_sizes",
            sum(1 for r in reports if not (r["g"] == r["p"] and r["h"] == r["p"])),
            0,
            all(r["g"] == r["p"] and r["h"] == r["p"] for r in reports),
        )
    ]
    if any("agree" in r for r in reports):
        disagree = [r["p"] for r in reports if r.get("agree") is False]
        checks.append(make_check("phi5_root_agreement", len(disagree), 0, not disagree))
    full = [r for r in reports if r["method"] == "full"]
    if full:
        wrong = [r["p"] for r in full if r["symmetric_cycles"] != r["p"]]
        checks.append(make_check("symmetric_cycles_equal_p", len(wrong), 0, not wrong))

    header = ("p", "g", "h", "t", "symmetric_t_cycles", "phi5_roots", "agree", "method", "symmetric_cycles")
    rows = [tuple(r.get(column, "") for column in header) for r in reports]
    return Report("henon", {"a": config.a, "t": config.t, "primes": reports}, header, rows, checks)


def cmd_map3d(config: RunConfig) -> Report:
    primes = [p for p in config.primes() if is_three_mod_four(p)]
    if not primes:
        raise ParameterError("范围内没有 p ≡ 3 (mod 4) 的素数")
    log_start(logger, f"[map3d] e={config.e}, k={config.k}, 素数 {primes[:5]}{'…' if len(primes) > 5 else ''}")
    jobs = [{"p": p, "e": config.e, "k": config.k} for p in primes]
    reports = _runner(config).map_jobs("map3d_prime", jobs)

    checks = [
        make_check(
            "involutive",
            sum(1 for r in reports if not (r["involutive_g"] and r["involutive_h"])),
            0,
            all(r["involutive_g"] and r["involutive_h"] for r in reports),
        ),
        make_check(
            "fixed_set_sizes",
            sum(1 for r in reports if not (r["g"] == r["p"] ** 2 and r["h"] == r["p"])),
            0,
            all(r["g"] == r["p"] ** 2 and r["h"] == r["p"] for r in reports),
        ),
    ]
    full = [r for r in reports if r["method"] == "full"]
    if full:
        wrong = [r["p"] for r in full if r["symmetric_cycles"] != (r["p"] ** 2 + r["p"]) // 2]
        checks.append(make_check("symmetric_cycles", len(wrong), 0, not wrong))
        mismatched = [r["p"] for r in full if not r["fixed_sets_agree"]]
        checks.append(make_check("fixed_sets_scan_vs_closed", len(mismatched), 0, not mismatched))

    header = ("p", "e", "k", "g", "h", "involutive_g", "involutive_h", "method", "symmetric_cycles")
    rows = [tuple(r.get(column, "") for column in header) for r in reports]
    return Report("map3d", {"e": config.e, "k": config.k, "primes": reports}, header, rows, checks)


# ---------------------------------------------------------------------------
# cebotarev / phi5
# ---------------------------------------------------------------------------

def cmd_cebotarev(config: RunConfig) -> Report:
    table = cebotarev_table(config.degree)
    checks = [make_check("total_is_one", sum(r["nu"] for r in table), 1, sum(r["nu"] for r in table) == 1)]
    if config.degree == len(S6_FIXED_POINT_TABLE) - 1:
        matches = all(r["nu"] == expected for r, expected in zip(table, S6_FIXED_POINT_TABLE))
        checks.append(make_check("s6_table", int(matches), 1, matches))
    rows = [(r["i"], r["nu"], r["nu_decimal"], r["poisson"]) for r in table]
    return Report("cebotarev", {"degree": config.degree, "table": table}, ("i", "nu", "nu_decimal", "poisson"), rows, checks)


def cmd_phi5(config: RunConfig) -> Report:
    runner = _runner(config)
    if config.p is not None:
        report = phi5_prime_report(config.p)
        checks = []
        if config.cross_check:
            orbit = henon_prime_report(config.p, a=1, t=5)
            report["symmetric_5_cycles"] = orbit["symmetric_t_cycles"]
            report["spurious_roots"] = orbit["spurious_roots"]
            genuine = report["roots"] - len(orbit["spurious_roots"])
            checks.append(make_check("orbit_vs_roots", genuine, orbit["symmetric_t_cycles"], orbit["agree"]))
        rows = [(report["p"], report["roots"], report["squarefree"], report.get("symmetric_5_cycles", ""))]
        return Report("phi5", report, ("p", "roots", "squarefree", "symmetric_5_cycles"), rows, checks)

    survey = phi5_root_survey(config.p_min, config.p_max, runner=runner)
    checks = [make_check("cebotarev_tv", survey["tv"], CEBOTAREV_TV_BOUND, survey["tv"] <= CEBOTAREV_TV_BOUND)]
    if config.cross_check:
        jobs = [{"p": r["p"], "a": 1, "t": 5, "full": False} for r in survey["reports"]]
        orbits = runner.map_jobs("henon_prime", jobs)
        disagree = [o["p"] for o in orbits if not o["agree"]]
        survey["cross_check_disagreements"] = disagree
        checks.append(make_check("orbit_vs_roots", len(disagree), 0, not disagree))
    rows = [(i, survey["frequencies"].get(i, 0.0), survey["nu"][i]) for i in sorted(survey["nu"])]
    results = {key: value for key, value in survey.items() if key != "reports"}
    return Report("phi5", results, ("i", "empirical", "nu"), rows, checks)


COMMANDS = {
    "involutions": cmd_involutions,
    "repeats": cmd_repeats,
    "henon": cmd_henon,
    "map3d": cmd_map3d,
    "cebotarev": cmd_cebotarev,
    "phi5": cmd_phi5,
}


def run(config: RunConfig) -> Report:
    return COMMANDS[config.command](config)
