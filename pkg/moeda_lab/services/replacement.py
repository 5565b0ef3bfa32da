"""
小生境 / 替换策略：NSGA-II 精英替换与限制锦标赛替换（RTS）
"""

from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from moeda_lab.base.exceptions import InvalidArgumentError
from moeda_lab.base.i18n import ReplacementI18n
from moeda_lab.services.core import (
    Individual,
    Population,
    RngStream,
    hamming_to_rows,
)
from moeda_lab.services.pareto_toolkit import assign_rank_and_crowding, dominates


class TiePolicy(StrEnum):
    """互不支配时的处理方式"""

    COIN_FLIP = "coin-flip"
    KEEP_INCUMBENT = "keep-incumbent"
    ALWAYS_REPLACE = "always-replace"


class ReplacementKind(StrEnum):
    ELITIST = "elitist"
    RTS = "rts"


class RtsConfig(BaseModel):
    """RTS 配置；w 为 None 时取 min(n, ℓ)"""

    model_config = ConfigDict(frozen=True)

    w: int | None = Field(None, ge=1, description="窗口大小")
    tie_policy: TiePolicy = Field(TiePolicy.COIN_FLIP, description="互不支配时的策略")

    def window(self, n: int, ell: int) -> int:
        return self.w if self.w is not None else min(n, ell)

    def capped(self, n: int) -> "RtsConfig":
        """显式 w 超过种群规模 n 时截到 n"""
        if self.w is None or self.w <= n:
            return self
        return self.model_copy(update={"w": n})


def elitist_replacement(
    parents: Population, offspring: Population, normalize: bool = False
) -> Population:
    """NSGA-II 精英替换

    父代与子代合并后计算等级与拥挤距离，按等级逐层填入下一代；
    溢出的那一层按拥挤距离降序截断。输出规模恰为 n。
    """
    n = parents.size
    if offspring.size > n:
        raise InvalidArgumentError(
            ReplacementI18n.SIZE_MISMATCH, offspring=offspring.size, parents=n
        )
    combined = assign_rank_and_crowding(
        Population.concat(parents, offspring), normalize=normalize
    )
    assert combined.rank is not None and combined.crowding is not None
    # lexsort 稳定：先按等级升序，再按拥挤距离降序
    order = np.lexsort((-combined.crowding, combined.rank))
    return combined.take(order[:n])


def rts_replace(
    current: Population, offspring: Individual, cfg: RtsConfig, rng: RngStream
) -> Population:
    """限制锦标赛替换（就地修改 current 并返回）

    无放回抽取 w 个成员，找汉明距离最近者（并列取下标最小）；
    子代支配它则替换，被它支配则保留，互不支配按 tie_policy 处理。

    :raises InvalidArgumentError: w 超过种群规模
    """
    objectives = current.require_objectives()
    w = cfg.window(current.size, current.length)
    if w > current.size:
        raise InvalidArgumentError(
            ReplacementI18n.WINDOW_TOO_LARGE, w=w, n=current.size
        )
    assert offspring.objectives is not None

    drawn = np.sort(rng.generator.choice(current.size, size=w, replace=False))
    distances = hamming_to_rows(offspring.genome, current.genomes[drawn])
    nearest = int(drawn[int(np.argmin(distances))])
    incumbent = (float(objectives[nearest, 0]), float(objectives[nearest, 1]))

    if dominates(offspring.objectives, incumbent):
        replace = True
    elif dominates(incumbent, offspring.objectives):
        replace = False
    else:
        match cfg.tie_policy:
            case TiePolicy.COIN_FLIP:
                replace = rng.coin()
            case TiePolicy.KEEP_INCUMBENT:
                replace = False
            case TiePolicy.ALWAYS_REPLACE:
                replace = True

    if replace:
        current.genomes[nearest] = offspring.genome
        objectives[nearest] = offspring.objectives
        current.rank = None
        current.crowding = None
    return current


def rts_generation(
    current: Population, offspring: Population, cfg: RtsConfig, rng: RngStream
) -> Population:
    """按子代顺序逐个执行 RTS（代内稳态）"""
    population = Population(
        genomes=current.genomes.copy(),
        objectives=current.require_objectives().copy(),
    )
    for child in offspring:
        rts_replace(population, child, cfg, rng)
    return population
