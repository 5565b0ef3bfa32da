"""
子代生成：eCGA 的边缘积模型（MDL 贪心搜索 + 采样）、UMDA 的单变量模型、
NSGA-II 的两点交叉与按位变异

模式编码约定：分组内第一个基因为最高位，pattern 值 = Σ x_g · 2^{k-1-pos}。
"""

import logging
import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from moeda_lab.base.exceptions import InvalidArgumentError
from moeda_lab.base.i18n import CoreI18n, ModelI18n
from moeda_lab.services.core import (
    FloatArray,
    Genome,
    GenomeMatrix,
    Population,
    RngStream,
)
from moeda_lab.utils.logger import get_logger

logger = get_logger(__name__)

# 合并判定的数值容差
METRIC_EPSILON = 1e-12
# 频率表归一化容差
TABLE_TOLERANCE = 1e-12

type Group = tuple[int, ...]


class VariationKind(StrEnum):
    MECGA = "mecga"
    UMDA = "umda"
    NSGA2_XOVER = "nsga2-xover"


class VariationConfig(BaseModel):
    """变异/重组配置

    pm 为 None 时取 1/ℓ；k_max 限制 MPM 分组大小。
    """

    model_config = ConfigDict(frozen=True)

    kind: VariationKind = Field(..., description="子代生成方式")
    pc: float = Field(0.9, ge=0.0, le=1.0, description="交叉概率")
    pm: float | None = Field(None, ge=0.0, le=1.0, description="按位变异概率")
    k_max: int = Field(8, ge=1, le=16, description="MPM 分组大小上限")

    def mutation_rate(self, ell: int) -> float:
        return self.pm if self.pm is not None else 1.0 / ell


@dataclass(frozen=True)
class MarginalProductModel:
    """边缘积模型：互不相交的基因分组 + 每组 2^{k_i} 项的模式频率表"""

    groups: tuple[Group, ...]
    tables: tuple[FloatArray, ...]

    def __post_init__(self) -> None:
        if len(self.groups) != len(self.tables):
            raise InvalidArgumentError(
                ModelI18n.MODEL_INVALID, reason="groups and tables differ in count"
            )
        genes = sorted(g for group in self.groups for g in group)
        if genes != list(range(len(genes))):
            raise InvalidArgumentError(
                ModelI18n.MODEL_INVALID, reason="groups must partition 0..ell-1"
            )
        for group, table in zip(self.groups, self.tables, strict=True):
            if table.shape != (2 ** len(group),):
                raise InvalidArgumentError(
                    ModelI18n.MODEL_INVALID, reason=f"table size for group {group}"
                )
            if (table < 0).any() or abs(float(table.sum()) - 1.0) > TABLE_TOLERANCE:
                raise InvalidArgumentError(
                    ModelI18n.MODEL_INVALID, reason=f"frequencies of group {group}"
                )

    @property
    def length(self) -> int:
        return sum(len(group) for group in self.groups)

    @property
    def group_sizes(self) -> list[int]:
        return [len(group) for group in self.groups]

    @classmethod
    def from_population(
        cls, groups: list[Group] | tuple[Group, ...], genomes: GenomeMatrix
    ) -> "MarginalProductModel":
        """按给定分组统计经验模式频率"""
        ordered = tuple(sorted((tuple(sorted(g)) for g in groups), key=lambda g: g[0]))
        tables = tuple(_pattern_frequencies(genomes, group) for group in ordered)
        return cls(groups=ordered, tables=tables)


@dataclass(frozen=True)
class UnivariateModel:
    """单变量模型：每一位取 1 的边缘概率"""

    p: FloatArray

    def __post_init__(self) -> None:
        if ((self.p < 0) | (self.p > 1)).any():
            raise InvalidArgumentError(
                ModelI18n.PROBABILITY_RANGE, name="p", value=self.p.tolist()
            )


def _pattern_values(genomes: GenomeMatrix, group: Group) -> np.ndarray:
    weights = 1 << np.arange(len(group) - 1, -1, -1, dtype=np.int64)
    return genomes[:, list(group)].astype(np.int64) @ weights


def _pattern_frequencies(genomes: GenomeMatrix, group: Group) -> FloatArray:
    counts = np.bincount(_pattern_values(genomes, group), minlength=2 ** len(group))
    return counts.astype(np.float64) / genomes.shape[0]


def _entropy(frequencies: FloatArray) -> float:
    """香农熵（bit），0·log2(0) 记为 0"""
    nonzero = frequencies[frequencies > 0]
    return float(-(nonzero * np.log2(nonzero)).sum())


def model_complexity(model: MarginalProductModel, n: int) -> float:
    """模型复杂度 C_m = log2(n) · Σ(2^{k_i} - 1)"""
    if n < 2:
        raise InvalidArgumentError(ModelI18n.POPSIZE_TOO_SMALL, n=n)
    return math.log2(n) * sum(2 ** len(group) - 1 for group in model.groups)


def compressed_population_complexity(
    model: MarginalProductModel, pop: Population
) -> float:
    """压缩种群复杂度 C_p = n · Σ_i H(group_i)，频率取自 pop"""
    if model.length != pop.length:
        raise InvalidArgumentError(
            CoreI18n.LENGTH_MISMATCH, left=model.length, right=pop.length
        )
    return pop.size * sum(
        _entropy(_pattern_frequencies(pop.genomes, group)) for group in model.groups
    )


class _GroupCost:
    """分组代价缓存：cost(G) = log2(n)(2^|G| - 1) + n·H(G)"""

    def __init__(self, genomes: GenomeMatrix) -> None:
        self.genomes = genomes
        self.n = genomes.shape[0]
        self.log_n = math.log2(self.n)
        self._cache: dict[Group, float] = {}

    def __call__(self, group: Group) -> float:
        cost = self._cache.get(group)
        if cost is None:
            entropy = _entropy(_pattern_frequencies(self.genomes, group))
            cost = self.log_n * (2 ** len(group) - 1) + self.n * entropy
            self._cache[group] = cost
        return cost


def greedy_mpm_search(selected: Population, k_max: int = 8) -> MarginalProductModel:
    """eCGA 贪心模型搜索

    从单变量模型出发，每次合并使 C_m + C_p 严格下降最多的一对分组；
    下降量相同（1e-12 内）时取最小基因下标最小的组对，再比较第二组。

    :param selected: 被选中的种群（n >= 2）
    :param k_max: 合并后分组大小上限
    :return: 带经验频率表的模型
    """
    if selected.size < 2:
        raise InvalidArgumentError(ModelI18n.POPSIZE_TOO_SMALL, n=selected.size)
    cost = _GroupCost(selected.genomes)
    groups: list[Group] = [(i,) for i in range(selected.length)]

    while True:
        best_gain = 0.0
        best_pair: tuple[int, int] | None = None
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if len(groups[i]) + len(groups[j]) > k_max:
                    continue
                merged = tuple(sorted(groups[i] + groups[j]))
                gain = cost(groups[i]) + cost(groups[j]) - cost(merged)
                if gain <= METRIC_EPSILON:
                    continue
                # 并列时保留先遇到的组对
                if best_pair is None or gain > best_gain + METRIC_EPSILON:
                    best_gain, best_pair = gain, (i, j)
        if best_pair is None:
            break
        i, j = best_pair
        merged = tuple(sorted(groups[i] + groups[j]))
        logger.debug("合并分组 %s + %s，MDL 下降 %.4f", groups[i], groups[j], best_gain)
        groups = [g for idx, g in enumerate(groups) if idx not in (i, j)] + [merged]
        groups.sort(key=lambda g: g[0])

    return MarginalProductModel.from_population(groups, selected.genomes)


def _unpack_patterns(values: np.ndarray, size: int) -> GenomeMatrix:
    shifts = np.arange(size - 1, -1, -1, dtype=np.int64)
    return ((values[:, None] >> shifts) & 1).astype(np.uint8)


def sample_mpm(
    model: MarginalProductModel, n_out: int, rng: RngStream
) -> Population:
    """按分组独立采样模式，生成 n_out 个子代"""
    genomes = np.zeros((n_out, model.length), dtype=np.uint8)
    generator = rng.generator
    for group, table in zip(model.groups, model.tables, strict=True):
        values = generator.choice(table.shape[0], size=n_out, p=table)
        genomes[:, list(group)] = _unpack_patterns(values, len(group))
    return Population(genomes=genomes)


def format_model(model: MarginalProductModel, full: bool = False) -> str:
    """模型文本转储：每组一行，基因下标后接 pattern:frequency

    :param full: 为 True 时列出全部 2^k 个模式，否则省略频率为 0 的模式
    """
    lines = []
    for group, table in zip(model.groups, model.tables, strict=True):
        genes = ",".join(str(g) for g in group)
        pairs = " ".join(
            f"{value:0{len(group)}b}:{table[value]:.6g}"
            for value in range(table.shape[0])
            if full or table[value] > 0
        )
        lines.append(f"{genes} {pairs}")
    return "\n".join(lines)


def fit_univariate(selected: Population) -> UnivariateModel:
    """p_i = 第 i 列中 1 的比例"""
    if selected.size == 0:
        raise InvalidArgumentError(CoreI18n.NOT_POSITIVE, name="n", value=0)
    return UnivariateModel(p=selected.genomes.mean(axis=0, dtype=np.float64))


def sample_univariate(model: UnivariateModel, n_out: int, rng: RngStream) -> Population:
    """每一位独立以 p_i 的概率取 1"""
    draws = rng.generator.random((n_out, model.p.shape[0]))
    return Population(genomes=(draws < model.p[None, :]).astype(np.uint8))


def swap_segment(
    a: Genome, b: Genome, c1: int, c2: int
) -> tuple[Genome, Genome]:
    """交换区间 [c1, c2) 上的片段"""
    first, second = a.copy(), b.copy()
    first[c1:c2], second[c1:c2] = b[c1:c2], a[c1:c2]
    return first, second


def two_point_crossover(
    a: Genome, b: Genome, pc: float, rng: RngStream
) -> tuple[Genome, Genome]:
    """两点交叉：以 1-pc 的概率原样复制，否则均匀取 c1 <= c2 交换 [c1, c2)"""
    if a.shape != b.shape:
        raise InvalidArgumentError(
            CoreI18n.LENGTH_MISMATCH, left=a.shape[0], right=b.shape[0]
        )
    generator = rng.generator
    if generator.random() >= pc:
        return a.copy(), b.copy()
    c1, c2 = sorted(int(c) for c in generator.integers(0, a.shape[0] + 1, size=2))
    return swap_segment(a, b, c1, c2)


def bitflip_mutation(g: Genome, pm: float, rng: RngStream) -> Genome:
    """按位翻转，每位独立以 pm 的概率翻转"""
    mask = rng.generator.random(g.shape[0]) < pm
    return np.bitwise_xor(g, mask.astype(np.uint8))


def _crossover_offspring(
    pool: Population, n_out: int, cfg: VariationConfig, rng: RngStream
) -> Population:
    """交配池按 (0,1), (2,3)... 配对；奇数规模时最后一个与 0 号配对"""
    pm = cfg.mutation_rate(pool.length)
    children: list[Genome] = []
    i = 0
    while len(children) < n_out:
        a = pool.genomes[i % pool.size]
        b = pool.genomes[(i + 1) % pool.size]
        for child in two_point_crossover(a, b, cfg.pc, rng):
            children.append(bitflip_mutation(child, pm, rng))
        i += 2
    return Population(genomes=np.stack(children[:n_out]))


def vary(pool: Population, cfg: VariationConfig, rng: RngStream) -> Population:
    """由交配池生成与池同规模的子代（未评估）"""
    n_out = pool.size
    match cfg.kind:
        case VariationKind.MECGA:
            model = greedy_mpm_search(pool, k_max=cfg.k_max)
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug("MPM:\n%s", format_model(model))
            return sample_mpm(model, n_out, rng)
        case VariationKind.UMDA:
            return sample_univariate(fit_univariate(pool), n_out, rng)
        case VariationKind.NSGA2_XOVER:
            return _crossover_offspring(pool, n_out, cfg, rng)
