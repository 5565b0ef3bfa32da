"""
运行引擎：问题 + 选择 + 子代生成 + 替换，组成完整的代际循环并跟踪覆盖率

每代流程：评估 -> 非支配排序 + 拥挤距离 -> 二元锦标赛交配池
-> 子代生成 -> 评估子代 -> 替换。
"""

from typing import Any

import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field

from moeda_lab.base.exceptions import InvalidArgumentError
from moeda_lab.base.i18n import CoreI18n
from moeda_lab.services.core import (
    FloatArray,
    Population,
    RngStream,
    genome_key,
    random_population,
)
from moeda_lab.services.pareto_toolkit import (
    assign_rank_and_crowding,
    binary_tournament,
)
from moeda_lab.services.problems import (
    OBJECTIVE_TOLERANCE,
    ProblemSpec,
    RepresentativeMode,
    RepresentativeSet,
    distinct_front_points,
    evaluate_population,
    representative_set,
)
from moeda_lab.services.replacement import (
    ReplacementKind,
    RtsConfig,
    elitist_replacement,
    rts_generation,
)
from moeda_lab.services.variation_models import VariationConfig, VariationKind, vary
from moeda_lab.utils.logger import get_logger

logger = get_logger(__name__)

# 各算法默认的代数上限倍数（× ℓ）
DEFAULT_CAP_MULTIPLIER = {
    VariationKind.UMDA: 5,
    VariationKind.MECGA: 5,
    VariationKind.NSGA2_XOVER: 10,
}


class AlgorithmConfig(BaseModel):
    """算法配置

    generation_cap_multiplier 为 None 时按算法取默认值；max_generations
    给出时直接作为绝对代数上限（允许为 0）。
    """

    model_config = ConfigDict(frozen=True)

    variation: VariationConfig = Field(..., description="子代生成")
    replacement: ReplacementKind = Field(ReplacementKind.ELITIST, description="替换")
    rts: RtsConfig = Field(default_factory=RtsConfig, description="RTS 参数")
    generation_cap_multiplier: int | None = Field(
        None, ge=1, description="代数上限倍数（× ℓ）"
    )
    max_generations: int | None = Field(None, ge=0, description="绝对代数上限")
    early_abort: bool = Field(False, description="覆盖率达到 1 时提前结束")
    normalize_crowding: bool = Field(False, description="拥挤距离按目标范围归一化")

    def generation_cap(self, ell: int) -> int:
        if self.max_generations is not None:
            return self.max_generations
        multiplier = self.generation_cap_multiplier or DEFAULT_CAP_MULTIPLIER[
            self.variation.kind
        ]
        return multiplier * ell

    def describe(self) -> str:
        return f"{self.variation.kind}+{self.replacement}"


class TraceRow(BaseModel):
    """逐代轨迹"""

    generation: int
    coverage: float
    points_covered: int


class RunResult(BaseModel):
    """单次运行结果

    evaluations = n · (generations_run + 1)；success 当且仅当最后一代覆盖率为 1。
    g_star 为覆盖率从该代起持续为 1 直到结束的最早代数。
    """

    success: bool
    g_star: int | None
    generations_run: int
    evaluations: int
    coverage_trajectory: list[float]
    per_point_coverage: list[bool]
    points_trajectory: list[int] = Field(default_factory=list)
    seed: int
    stream: tuple[int, ...]
    n: int

    @property
    def evaluations_to_coverage(self) -> int | None:
        """按 g_star 口径的评估次数 n·(g_star + 1)"""
        return None if self.g_star is None else self.n * (self.g_star + 1)

    def trace(self) -> list[TraceRow]:
        return [
            TraceRow(generation=g, coverage=c, points_covered=p)
            for g, (c, p) in enumerate(
                zip(self.coverage_trajectory, self.points_trajectory, strict=True)
            )
        ]


def covered_points(pop: Population, points: FloatArray) -> np.ndarray:
    """每个目标点是否被某个成员在容差内命中"""
    objectives = pop.require_objectives()
    if points.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    close = np.abs(objectives[:, None, :] - points[None, :, :]) <= OBJECTIVE_TOLERANCE
    return np.asarray(close.all(axis=2).any(axis=0))


def coverage(pop: Population, reps: RepresentativeSet) -> float:
    """种群对代表解集合的覆盖比例"""
    if len(reps) == 0:
        return 1.0
    if reps.mode is RepresentativeMode.GENOTYPE:
        present = {genome_key(g) for g in pop.genomes}
        return len(reps.entries & present) / len(reps)
    return float(covered_points(pop, reps.points).mean())


def _evaluate(problem: ProblemSpec, pop: Population) -> Population:
    return Population(
        genomes=pop.genomes, objectives=evaluate_population(problem, pop.genomes)
    )


def _next_generation(
    problem: ProblemSpec,
    algo: AlgorithmConfig,
    pop: Population,
    rng: RngStream,
) -> Population:
    ranked = assign_rank_and_crowding(pop, normalize=algo.normalize_crowding)
    pool = binary_tournament(ranked, pop.size, rng)
    offspring = _evaluate(problem, vary(pool, algo.variation, rng))
    if algo.replacement is ReplacementKind.RTS:
        return rts_generation(pop, offspring, algo.rts.capped(pop.size), rng)
    return elitist_replacement(pop, offspring, normalize=algo.normalize_crowding)


def _stable_from(trajectory: list[float]) -> int | None:
    """覆盖率从哪一代起持续为 1"""
    g_star = None
    for g in range(len(trajectory) - 1, -1, -1):
        if trajectory[g] < 1.0:
            break
        g_star = g
    return g_star


def run(
    problem: ProblemSpec,
    algo: AlgorithmConfig,
    n: int,
    mode: RepresentativeMode,
    rng: RngStream,
) -> RunResult:
    """完整运行一次，直到代数上限（或开启 early_abort 时覆盖率达到 1）

    :param problem: 问题定义
    :param algo: 算法配置
    :param n: 种群规模（>= 2）
    :param mode: 覆盖率按基因型还是目标点计算
    :param rng: 随机流；只取其 (seed, key)，传入对象的状态不受影响
    """
    if n < 2:
        raise InvalidArgumentError(CoreI18n.NOT_POSITIVE, name="n - 1", value=n - 1)
    rng = rng.fresh()
    reps = representative_set(problem, mode)
    points = distinct_front_points(problem)
    cap = algo.generation_cap(problem.ell)

    pop = _evaluate(problem, random_population(n, problem.ell, rng))
    trajectory = [coverage(pop, reps)]
    points_trajectory = [int(covered_points(pop, points).sum())]
    generation = 0
    while generation < cap:
        if algo.early_abort and trajectory[-1] == 1.0:
            break
        generation += 1
        pop = _next_generation(problem, algo, pop, rng)
        trajectory.append(coverage(pop, reps))
        points_trajectory.append(int(covered_points(pop, points).sum()))
        logger.debug("第 %d 代 覆盖率 %.4f", generation, trajectory[-1])

    g_star = _stable_from(trajectory)
    return RunResult(
        success=trajectory[-1] == 1.0,
        g_star=g_star,
        generations_run=generation,
        evaluations=n * (generation + 1),
        coverage_trajectory=trajectory,
        per_point_coverage=[bool(v) for v in covered_points(pop, points)],
        points_trajectory=points_trajectory,
        seed=rng.seed,
        stream=rng.key,
        n=n,
    )


def run_many(
    problem: ProblemSpec,
    algo: AlgorithmConfig,
    n: int,
    mode: RepresentativeMode,
    streams: list[RngStream],
    jobs: int = 1,
) -> list[RunResult]:
    """批量独立运行；结果按 streams 顺序返回，与 jobs 无关"""
    if jobs <= 1 or len(streams) <= 1:
        return [run(problem, algo, n, mode, stream) for stream in streams]
    tasks: Any = (delayed(run)(problem, algo, n, mode, stream) for stream in streams)
    results: list[RunResult] = Parallel(n_jobs=jobs)(tasks)
    return results


class PointProbability(BaseModel):
    """单个目标点的保持概率"""

    index: int
    f1: float
    f2: float
    probability: float


def niche_maintenance_probability(
    problem: ProblemSpec,
    algo: AlgorithmConfig,
    n: int,
    runs: int,
    master_seed: int,
    jobs: int = 1,
) -> list[PointProbability]:
    """每个不同目标点在最终种群中被保持的运行比例

    第 r 次运行使用流编号 r。
    """
    if runs < 1:
        raise InvalidArgumentError(CoreI18n.NOT_POSITIVE, name="runs", value=runs)
    streams = [RngStream.of(master_seed, r) for r in range(runs)]
    results = run_many(problem, algo, n, RepresentativeMode.OBJECTIVE, streams, jobs)
    hits = np.array([result.per_point_coverage for result in results], dtype=np.float64)
    points = distinct_front_points(problem)
    return [
        PointProbability(
            index=i,
            f1=float(points[i, 0]),
            f2=float(points[i, 1]),
            probability=float(hits[:, i].mean()),
        )
        for i in range(points.shape[0])
    ]
