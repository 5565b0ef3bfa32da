"""检查类命令

包含：
- evaluate：评估给定基因型
- oracle：穷举 Pareto 前沿
- predict：分面种群规模预测
- growth：冲突子结构增长率曲线

这些命令都是确定性的，不需要种子。
"""

from moeda_lab.base.exceptions import InvalidArgumentError, UsageError
from moeda_lab.base.i18n import CliI18n, CommandSummaryI18n, CoreI18n
from moeda_lab.base.response import CommandResult, CommandRouter
from moeda_lab.base.schemas import Command, ExperimentConfig
from moeda_lab.services.core import as_genome, genome_to_str
from moeda_lab.services.problems import evaluate, pareto_oracle_bruteforce
from moeda_lab.services.records import (
    EVALUATE_HEADER,
    ORACLE_HEADER,
    PREDICT_HEADER,
    Cell,
    render_csv,
    render_growth_csv,
    write_output,
)
from moeda_lab.services.sizing_lab import (
    exact_competing_substructures,
    growth_rate_schedule,
    max_competing_substructures,
    predict_eda_popsize,
    predict_niching_popsize,
)
from moeda_lab.utils.logger import get_logger

logger = get_logger(__name__)
router = CommandRouter()


@router.command(Command.EVALUATE)
@CommandResult(i18n_summary=CommandSummaryI18n.EVALUATE)
def evaluate_genomes(cfg: ExperimentConfig) -> None:
    """评估 --genome 给出的基因型（逗号分隔可给多个）"""
    if not cfg.genome:
        raise UsageError(
            CliI18n.MISSING_FIELD, data="genome", command=cfg.command, field="genome"
        )
    problem = cfg.problems()[0]
    rows: list[list[Cell]] = []
    for text in cfg.genome.split(","):
        genome = as_genome(text)
        if genome.shape[0] != problem.ell:
            raise InvalidArgumentError(
                CoreI18n.LENGTH_MISMATCH, left=genome.shape[0], right=problem.ell
            )
        f1, f2 = evaluate(problem, genome)
        rows.append([genome_to_str(genome), f1, f2])
    write_output(render_csv(EVALUATE_HEADER, rows), cfg.out)


@router.command(Command.ORACLE)
@CommandResult(i18n_summary=CommandSummaryI18n.ORACLE)
def oracle(cfg: ExperimentConfig) -> None:
    """穷举前沿：先列出不同目标点，再列出全部 Pareto 最优基因型"""
    problem = cfg.problems()[0]
    front = pareto_oracle_bruteforce(problem)
    assert front.genomes is not None
    rows: list[list[Cell]] = [
        ["point", None, float(f1), float(f2)] for f1, f2 in front.points
    ]
    for genome in front.genomes:
        f1, f2 = evaluate(problem, genome)
        rows.append(["genotype", genome_to_str(genome), f1, f2])
    logger.info(
        "%s: %d 个 Pareto 最优基因型，%d 个不同目标点",
        problem.describe(),
        front.genomes.shape[0],
        front.points.shape[0],
    )
    write_output(render_csv(ORACLE_HEADER, rows), cfg.out)


@router.command(Command.PREDICT)
@CommandResult(i18n_summary=CommandSummaryI18n.PREDICT)
def predict(cfg: ExperimentConfig) -> None:
    """每个 (k, m) 组合输出 EDA 规模、m_d 与小生境规模（对数以 2 为底）"""
    params = cfg.sizing()
    rows: list[list[Cell]] = []
    for k in cfg.k or [3]:
        for m in cfg.block_counts(k):
            n_eda = predict_eda_popsize(k, m, params)
            m_d = cfg.md[0] if cfg.md else max_competing_substructures(m, k)
            n_opt = 2**m_d
            exact: float | None = None
            approx: float | None = None
            if n_opt >= 2:
                exact, approx = predict_niching_popsize(cfg.sizing(n_opt=n_opt))
            rows.append(
                [
                    k,
                    m,
                    n_eda,
                    m_d,
                    exact_competing_substructures(m, k, params),
                    n_opt,
                    exact,
                    approx,
                    2,
                ]
            )
    write_output(render_csv(PREDICT_HEADER, rows), cfg.out)


@router.command(Command.GROWTH)
@CommandResult(i18n_summary=CommandSummaryI18n.GROWTH)
def growth(cfg: ExperimentConfig) -> None:
    """m_d 随 m 的增长曲线（每个 k 一组）"""
    ks = cfg.k or [3]
    ms = sorted({m for k in ks for m in cfg.block_counts(k)})
    rows = growth_rate_schedule(ks, ms, cfg.sizing())
    logger.debug("growth: %d 行", len(rows))
    write_output(render_growth_csv(rows), cfg.out)
