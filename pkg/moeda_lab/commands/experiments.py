"""实验类命令

包含：
- run：单次运行（可选逐代轨迹）
- bisect：二分法求最小种群规模
- sweep：可扩展性扫描
- niche-prob：各目标点的小生境保持概率

种子缺省时由 app.parse_config 生成并记录在输出中。
"""

from moeda_lab.base.exceptions import ResultWarningException, UsageError
from moeda_lab.base.i18n import CliI18n, CommandSummaryI18n, SizingI18n
from moeda_lab.base.response import CommandResult, CommandRouter
from moeda_lab.base.schemas import Command, ExperimentConfig, SuccessResult
from moeda_lab.services.core import RngStream
from moeda_lab.services.engine import niche_maintenance_probability, run
from moeda_lab.services.records import (
    RUN_HEADER,
    render_csv,
    render_niche_csv,
    render_trace_csv,
    write_output,
    write_sweep_csv,
)
from moeda_lab.services.sizing_lab import (
    BisectionResult,
    SweepResult,
    bisection_min_popsize,
    scalability_sweep,
    sweep_record,
)
from moeda_lab.utils.logger import get_logger

logger = get_logger(__name__)
router = CommandRouter()


def _seed(cfg: ExperimentConfig) -> int:
    assert cfg.seed is not None, "seed 应由 parse_config 补全"
    return cfg.seed


def _popsize(cfg: ExperimentConfig) -> int:
    if cfg.n is None:
        raise UsageError(
            CliI18n.MISSING_FIELD, data="n", command=cfg.command, field="n"
        )
    return cfg.n


@router.command(Command.RUN)
@CommandResult(i18n_summary=CommandSummaryI18n.RUN)
def run_once(cfg: ExperimentConfig) -> None:
    problem = cfg.problems()[0]
    seed = _seed(cfg)
    result = run(problem, cfg.algorithm(), _popsize(cfg), cfg.mode, RngStream.of(seed))
    row = [
        result.success,
        result.g_star,
        result.generations_run,
        result.evaluations,
        result.evaluations_to_coverage,
        result.coverage_trajectory[-1],
        result.n,
        seed,
    ]
    if cfg.trace:
        write_output(render_trace_csv(result.trace()), cfg.trace)
    write_output(render_csv(RUN_HEADER, [row]), cfg.out)


@router.command(Command.BISECT)
@CommandResult(i18n_summary=CommandSummaryI18n.BISECT)
def bisect(cfg: ExperimentConfig) -> SuccessResult[BisectionResult]:
    """对第一个问题规模做二分，输出一行扫描格式的记录"""
    problem = cfg.problems()[0]
    algo = cfg.algorithm()
    seed = _seed(cfg)
    result = bisection_min_popsize(problem, algo, cfg.mode, cfg.bisection(), seed)
    logger.debug("n_min 样本: %s", result.n_min_samples)
    write_sweep_csv([sweep_record(problem, algo, cfg.mode, result, seed)], cfg.out)
    return SuccessResult(
        data=result,
        i18n_msg=SizingI18n.BISECT_DONE,
        i18n_args={
            "problem": problem.describe(),
            "mean": result.n_min_mean,
            "std": result.n_min_std,
            "repeats": len(result.n_min_samples),
        },
    )


@router.command(Command.SWEEP)
@CommandResult(i18n_summary=CommandSummaryI18n.SWEEP)
def sweep(cfg: ExperimentConfig) -> SuccessResult[SweepResult]:
    """扫描问题族；部分规模不可行时仍写出其余记录并以警告结束"""
    result = scalability_sweep(
        cfg.problems(), cfg.algorithm(), cfg.mode, cfg.bisection(), _seed(cfg)
    )
    write_sweep_csv(result.records, cfg.out)
    if result.failures:
        raise ResultWarningException(
            SizingI18n.SWEEP_PARTIAL,
            data=[failure.model_dump() for failure in result.failures],
            failed=len(result.failures),
        )
    return SuccessResult(
        data=result,
        i18n_msg=SizingI18n.SWEEP_DONE,
        i18n_args={"records": len(result.records)},
    )


@router.command(Command.NICHE_PROB)
@CommandResult(i18n_summary=CommandSummaryI18n.NICHE_PROB)
def niche_prob(cfg: ExperimentConfig) -> None:
    problem = cfg.problems()[0]
    n = _popsize(cfg)
    seed = _seed(cfg)
    rows = niche_maintenance_probability(
        problem, cfg.algorithm(), n, cfg.runs, seed, jobs=cfg.jobs
    )
    write_output(render_niche_csv(rows, n=n, runs=cfg.runs, master_seed=seed), cfg.out)
