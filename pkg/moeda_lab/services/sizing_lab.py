"""
实验方法：二分法求最小种群规模、可扩展性扫描、分面种群规模预测与受控增长实验

随机流分配：
- 二分的第 r 次重复使用 base.child(r)，探测规模 n 时使用其 child(n)，
  第 j 次验证运行使用再下一级 child(j)
- 扫描中第 i 个问题使用流编号 i
"""

import math
from collections.abc import Callable, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from moeda_lab.base.exceptions import InfeasibleAtBudgetError, InvalidArgumentError
from moeda_lab.base.i18n import CoreI18n, SizingI18n
from moeda_lab.services.core import RngStream
from moeda_lab.services.engine import AlgorithmConfig, run, run_many
from moeda_lab.services.problems import ProblemSpec, RepresentativeMode
from moeda_lab.utils.logger import get_logger

logger = get_logger(__name__)

# 注入式判定：(n, 随机流) -> 是否通过
type SizePredicate = Callable[[int, RngStream], bool]


class SizingParams(BaseModel):
    """分面模型常数"""

    model_config = ConfigDict(frozen=True)

    c1: float = Field(1.0, gt=0, description="EDA 规模常数")
    c2: float = Field(1.0, gt=0, description="小生境规模常数")
    gamma: float = Field(0.9, description="保持全部小生境的置信度 γ")
    t: int = Field(10, description="需要保持小生境的代数")
    n_opt: int = Field(2, description="Pareto 最优解个数")


class BisectionConfig(BaseModel):
    """二分法配置"""

    model_config = ConfigDict(frozen=True)

    n_start: int = Field(16, ge=2, description="起始种群规模")
    runs: int = Field(10, ge=1, description="每个规模的验证运行数（需全部成功）")
    repeats: int = Field(10, ge=1, description="独立二分重复次数")
    stop_ratio: float = Field(1.1, gt=1.0, description="hi/lo 不超过该值时停止")
    stop_gap: int = Field(2, ge=0, description="hi-lo 不超过该值时停止")
    n_max: int = Field(2**16, ge=2, description="种群规模上限")
    jobs: int = Field(1, ge=1, description="并行验证运行数")

    @model_validator(mode="after")
    def _check(self) -> "BisectionConfig":
        if self.n_start > self.n_max:
            raise ValueError("n_start must not exceed n_max")
        return self


class BisectionResult(BaseModel):
    """二分结果：各次重复的最小规模与按 g_star 口径的评估次数"""

    n_min_samples: list[int]
    evaluation_samples: list[float]
    n_min_mean: float
    n_min_std: float
    evals_mean: float
    evals_std: float


class SweepRecord(BaseModel):
    """扫描记录（对应 CSV 一行）"""

    kind: str
    m: int
    k: int
    d: float | None
    m_d: int
    ell: int
    algo: str
    replacement: str
    mode: str
    n_min_mean: float
    n_min_std: float
    evals_mean: float
    evals_std: float
    repeats: int
    master_seed: int


class SweepFailure(BaseModel):
    """预算内不可行的问题规模"""

    problem: str
    last_failing_n: int
    message: str


class SweepResult(BaseModel):
    records: list[SweepRecord] = Field(default_factory=list)
    failures: list[SweepFailure] = Field(default_factory=list)


class ScalingFit(BaseModel):
    """幂律与指数律的最小二乘拟合"""

    power_slope: float
    power_intercept: float
    power_residual: float
    exp_slope: float
    exp_intercept: float
    exp_residual: float

    @property
    def prefers_power(self) -> bool:
        return self.power_residual < self.exp_residual


class GrowthRow(BaseModel):
    """冲突子结构增长率曲线上的一点"""

    k: int
    m: int
    m_d: int
    m_d_exact: int | None


class _TrialOutcome(BaseModel):
    passed: bool
    evaluations: list[float] = Field(default_factory=list)


type Trial = Callable[[int, RngStream], _TrialOutcome]


def _mean_std(values: Sequence[float]) -> tuple[float, float]:
    """均值与样本标准差（单个样本时标准差为 0，空序列为 nan）"""
    if not values:
        return math.nan, math.nan
    array = np.asarray(values, dtype=np.float64)
    std = float(array.std(ddof=1)) if array.size > 1 else 0.0
    return float(array.mean()), std


def success_probability(
    problem: ProblemSpec,
    algo: AlgorithmConfig,
    n: int,
    runs: int,
    master_seed: int,
    mode: RepresentativeMode = RepresentativeMode.GENOTYPE,
    jobs: int = 1,
) -> float:
    """成功运行的比例；第 j 次运行使用流编号 j"""
    if runs < 1:
        raise InvalidArgumentError(CoreI18n.NOT_POSITIVE, name="runs", value=runs)
    streams = [RngStream.of(master_seed, j) for j in range(runs)]
    results = run_many(problem, algo, n, mode, streams, jobs)
    return sum(result.success for result in results) / runs


def _real_trial(
    problem: ProblemSpec,
    algo: AlgorithmConfig,
    mode: RepresentativeMode,
    cfg: BisectionConfig,
) -> Trial:
    """真实运行的判定：cfg.runs 次运行全部成功才算通过"""

    def trial(n: int, stream: RngStream) -> _TrialOutcome:
        streams = [stream.child(j) for j in range(cfg.runs)]
        evaluations: list[float] = []
        if cfg.jobs > 1:
            results = run_many(problem, algo, n, mode, streams, cfg.jobs)
        else:
            results = []
            for s in streams:
                results.append(run(problem, algo, n, mode, s))
                if not results[-1].success:
                    break
        for result in results:
            if not result.success:
                return _TrialOutcome(passed=False)
            if result.evaluations_to_coverage is not None:
                evaluations.append(float(result.evaluations_to_coverage))
        return _TrialOutcome(passed=True, evaluations=evaluations)

    return trial


def _injected_trial(predicate: SizePredicate) -> Trial:
    def trial(n: int, stream: RngStream) -> _TrialOutcome:
        return _TrialOutcome(passed=predicate(n, stream))

    return trial


def _bisect_once(
    trial: Trial,
    cfg: BisectionConfig,
    stream: RngStream,
) -> tuple[int, list[float]]:
    """一次二分：先倍增找到 (失败, 通过] 区间，再二分到停止条件"""
    outcomes: dict[int, _TrialOutcome] = {}

    def passes(n: int) -> bool:
        if n not in outcomes:
            outcomes[n] = trial(n, stream.child(n))
            logger.debug("n=%d -> %s", n, "通过" if outcomes[n].passed else "失败")
        return outcomes[n].passed

    lo: int | None = None
    hi = cfg.n_start
    if passes(hi):
        # 起点已通过：向下减半寻找失败的下界
        while hi > 2:
            candidate = max(2, hi // 2)
            if not passes(candidate):
                lo = candidate
                break
            hi = candidate
        if lo is None:
            return hi, outcomes[hi].evaluations
    else:
        lo = hi
        while True:
            # 最后一步截到 n_max，上限本身也要探测
            candidate = min(lo * 2, cfg.n_max)
            if candidate <= lo:
                raise InfeasibleAtBudgetError(
                    SizingI18n.INFEASIBLE_AT_BUDGET, data=lo, n_max=cfg.n_max, n=lo
                )
            if passes(candidate):
                hi = candidate
                break
            lo = candidate

    # 相邻整数时 mid == lo，必须停止
    while hi - lo > max(cfg.stop_gap, 1) and hi / lo > cfg.stop_ratio:
        mid = (lo + hi) // 2
        if passes(mid):
            hi = mid
        else:
            lo = mid
    return hi, outcomes[hi].evaluations


def bisection_min_popsize(
    problem: ProblemSpec,
    algo: AlgorithmConfig,
    mode: RepresentativeMode,
    cfg: BisectionConfig,
    master_seed: int,
    stream: int = 0,
    predicate: SizePredicate | None = None,
) -> BisectionResult:
    """二分法求最小种群规模，重复 cfg.repeats 次取均值与标准差

    :param predicate: 注入的判定函数，给出时替代真实运行（评估次数记为空）
    :raises InfeasibleAtBudgetError: 超过 n_max 仍未通过
    """
    trial = (
        _injected_trial(predicate)
        if predicate is not None
        else _real_trial(problem, algo, mode, cfg)
    )

    base = RngStream.of(master_seed, stream)
    samples: list[int] = []
    evaluations: list[float] = []
    for r in range(cfg.repeats):
        n_min, evals = _bisect_once(trial, cfg, base.child(r))
        logger.info(
            "%s %s 第 %d/%d 次二分: n_min=%d",
            problem.describe(),
            algo.describe(),
            r + 1,
            cfg.repeats,
            n_min,
        )
        samples.append(n_min)
        evaluations.extend(evals)

    n_mean, n_std = _mean_std([float(s) for s in samples])
    e_mean, e_std = _mean_std(evaluations)
    return BisectionResult(
        n_min_samples=samples,
        evaluation_samples=evaluations,
        n_min_mean=n_mean,
        n_min_std=n_std,
        evals_mean=e_mean,
        evals_std=e_std,
    )


def sweep_record(
    problem: ProblemSpec,
    algo: AlgorithmConfig,
    mode: RepresentativeMode,
    bisection: BisectionResult,
    master_seed: int,
) -> SweepRecord:
    """二分结果转为扫描记录"""
    return SweepRecord(
        kind=str(problem.kind),
        m=problem.m,
        k=problem.k,
        d=problem.d,
        m_d=problem.m_d,
        ell=problem.ell,
        algo=str(algo.variation.kind),
        replacement=str(algo.replacement),
        mode=str(mode),
        n_min_mean=bisection.n_min_mean,
        n_min_std=bisection.n_min_std,
        evals_mean=bisection.evals_mean,
        evals_std=bisection.evals_std,
        repeats=len(bisection.n_min_samples),
        master_seed=master_seed,
    )


def scalability_sweep(
    family: Sequence[ProblemSpec],
    algo: AlgorithmConfig,
    mode: RepresentativeMode,
    cfg: BisectionConfig,
    master_seed: int,
) -> SweepResult:
    """对问题族逐个做二分；不可行的规模记入 failures，不中断扫描"""
    if not family:
        raise InvalidArgumentError(SizingI18n.EMPTY_FAMILY)
    result = SweepResult()
    for index, problem in enumerate(family):
        try:
            bisection = bisection_min_popsize(
                problem, algo, mode, cfg, master_seed, stream=index
            )
        except InfeasibleAtBudgetError as e:
            logger.warning("%s 在预算内不可行: %s", problem.describe(), e)
            result.failures.append(
                SweepFailure(
                    problem=problem.describe(),
                    last_failing_n=int(e.data),
                    message=str(e),
                )
            )
            continue
        record = sweep_record(problem, algo, mode, bisection, master_seed)
        logger.info(
            "%s: n_min=%.1f±%.1f",
            problem.describe(),
            record.n_min_mean,
            record.n_min_std,
        )
        result.records.append(record)
    return result


def predict_eda_popsize(k: int, m: int, params: SizingParams) -> float:
    """EDA 规模：c1 · 2^k · m · log2(m)"""
    if m < 2:
        raise InvalidArgumentError(SizingI18n.M_TOO_SMALL, m=m)
    if k < 1:
        raise InvalidArgumentError(CoreI18n.NOT_POSITIVE, name="k", value=k)
    return params.c1 * 2**k * m * math.log2(m)


def predict_niching_popsize(params: SizingParams) -> tuple[float, float]:
    """小生境规模

    精确式 log[(1-γ^{1/t})/n_opt] / log[(n_opt-1)/n_opt]，近似式 c2·n_opt
    """
    n_opt = params.n_opt
    if n_opt < 2:
        raise InvalidArgumentError(SizingI18n.NOPT_TOO_SMALL, n_opt=n_opt)
    if not 0.0 < params.gamma < 1.0:
        raise InvalidArgumentError(
            CoreI18n.NOT_POSITIVE, name="gamma in (0,1)", value=params.gamma
        )
    if params.t < 1:
        raise InvalidArgumentError(CoreI18n.NOT_POSITIVE, name="t", value=params.t)
    numerator = math.log((1.0 - params.gamma ** (1.0 / params.t)) / n_opt)
    denominator = math.log((n_opt - 1) / n_opt)
    return numerator / denominator, params.c2 * n_opt


def max_competing_substructures(m: int, k: int) -> int:
    """保守估计的最大冲突子结构数 floor(k + log2 m)，截断到 [0, m]"""
    if m < 1:
        raise InvalidArgumentError(CoreI18n.NOT_POSITIVE, name="m", value=m)
    return max(0, min(m, math.floor(k + math.log2(m))))


def exact_competing_substructures(m: int, k: int, params: SizingParams) -> int:
    """满足 n_niching(2^{m_d}) <= n_eda 的最大 m_d（不忽略对数项）"""
    eda = predict_eda_popsize(k, m, params)
    best = 0
    for m_d in range(1, m + 1):
        trial = params.model_copy(update={"n_opt": 2**m_d})
        niching, _ = predict_niching_popsize(trial)
        if niching > eda:
            break
        best = m_d
    return best


def growth_rate_schedule(
    ks: Sequence[int], ms: Sequence[int], params: SizingParams | None = None
) -> list[GrowthRow]:
    """m_d 随 m 的增长曲线（每个 k 一条）"""
    params = params or SizingParams()
    rows = []
    for k in ks:
        for m in ms:
            exact = exact_competing_substructures(m, k, params) if m >= 2 else None
            rows.append(
                GrowthRow(
                    k=k, m=m, m_d=max_competing_substructures(m, k), m_d_exact=exact
                )
            )
    return rows


def controlled_growth_family(
    ms: Sequence[int], k: int, d: float | None = None
) -> list[ProblemSpec]:
    """受控冲突问题族：m_d = max_competing_substructures(m, k)"""
    return [
        ProblemSpec.overlap(m=m, k=k, m_d=max_competing_substructures(m, k), d=d)
        for m in ms
    ]


def fit_scaling_exponent(points: Sequence[tuple[float, float]]) -> ScalingFit:
    """log(value) 对 log(ℓ)（幂律）与对 ℓ（指数律）的最小二乘斜率及残差平方和"""
    if len(points) < 3:
        raise InvalidArgumentError(SizingI18n.FIT_NEEDS_POINTS, count=len(points))
    x = np.array([p[0] for p in points], dtype=np.float64)
    y = np.array([p[1] for p in points], dtype=np.float64)
    if (x <= 0).any() or (y <= 0).any():
        raise InvalidArgumentError(SizingI18n.FIT_NON_POSITIVE)
    log_y = np.log(y)

    def fit(xs: np.ndarray) -> tuple[float, float, float]:
        slope, intercept = np.polyfit(xs, log_y, 1)
        residual = float(((log_y - (slope * xs + intercept)) ** 2).sum())
        return float(slope), float(intercept), residual

    power = fit(np.log(x))
    exponential = fit(x)
    return ScalingFit(
        power_slope=power[0],
        power_intercept=power[1],
        power_residual=power[2],
        exp_slope=exponential[0],
        exp_intercept=exponential[1],
        exp_residual=exponential[2],
    )
