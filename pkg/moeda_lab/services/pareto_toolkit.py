"""
NSGA-II 选择机制：支配关系、非支配排序、拥挤距离、拥挤比较算子与二元锦标赛

所有算法共用这一套选择机制。两个目标都取最大化。
"""

import numpy as np
import numpy.typing as npt

from moeda_lab.base.exceptions import InvalidStateError
from moeda_lab.base.i18n import ParetoI18n
from moeda_lab.services.core import (
    FloatArray,
    Individual,
    IntArray,
    Population,
    RngStream,
)

type BoolArray = npt.NDArray[np.bool_]
# 已设置 rank 与 crowding 的种群
type RankedPopulation = Population


def dominates(a: tuple[float, float], b: tuple[float, float]) -> bool:
    """a 是否 Pareto 支配 b：各目标不差且至少一个严格更好"""
    return a[0] >= b[0] and a[1] >= b[1] and (a[0] > b[0] or a[1] > b[1])


def dominance_matrix(points: FloatArray) -> BoolArray:
    """D[i, j] 为 True 当且仅当 points[i] 支配 points[j]"""
    left = points[:, None, :]
    right = points[None, :, :]
    no_worse = (left >= right).all(axis=2)
    better = (left > right).any(axis=2)
    return np.asarray(no_worse & better)


def nondominated_mask(points: FloatArray) -> BoolArray:
    """不被任何点支配的点"""
    if points.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return np.asarray(~dominance_matrix(points).any(axis=0))


def _peel_ranks(points: FloatArray) -> IntArray:
    """逐层剥离非支配集合，返回从 1 开始的等级"""
    dom = dominance_matrix(points)
    ranks = np.zeros(points.shape[0], dtype=np.int64)
    remaining = np.ones(points.shape[0], dtype=bool)
    current = 0
    while remaining.any():
        current += 1
        alive = np.flatnonzero(remaining)
        sub = dom[np.ix_(alive, alive)]
        front = alive[~sub.any(axis=0)]
        ranks[front] = current
        remaining[front] = False
    return ranks


def nondominated_sort(pop: Population) -> RankedPopulation:
    """非支配排序，返回设置了 rank 的种群（拥挤距离未设置）

    先对目标向量去重再剥离，相同目标向量必然得到相同等级。

    :raises InvalidStateError: 种群未评估
    """
    objectives = pop.require_objectives()
    if pop.size == 0:
        raise InvalidStateError(ParetoI18n.EMPTY_POPULATION)
    unique, inverse = np.unique(objectives, axis=0, return_inverse=True)
    ranks = _peel_ranks(unique)[inverse.reshape(-1)]
    return Population(
        genomes=pop.genomes, objectives=objectives, rank=ranks, crowding=None
    )


def crowding_distance(ranked: RankedPopulation, normalize: bool = False) -> FloatArray:
    """按等级类计算拥挤距离

    每个目标上排序（相同值按下标稳定排序），两端为 +inf，内部个体累加
    后一个与前一个的目标差。默认不按目标范围归一化。

    :param ranked: 已设置 rank 的种群
    :param normalize: 是否除以该等级类内的目标范围
    :return: 与种群对齐的拥挤距离
    """
    if ranked.rank is None:
        raise InvalidStateError(ParetoI18n.UNRANKED)
    objectives = ranked.require_objectives()
    distance = np.zeros(ranked.size, dtype=np.float64)
    for r in np.unique(ranked.rank):
        members = np.flatnonzero(ranked.rank == r)
        if members.size <= 2:
            distance[members] = np.inf
            continue
        for j in range(objectives.shape[1]):
            values = objectives[members, j]
            order = members[np.argsort(values, kind="stable")]
            distance[order[0]] = np.inf
            distance[order[-1]] = np.inf
            gaps = objectives[order[2:], j] - objectives[order[:-2], j]
            if normalize:
                spread = objectives[order[-1], j] - objectives[order[0], j]
                gaps = gaps / spread if spread > 0 else np.zeros_like(gaps)
            distance[order[1:-1]] += gaps
    return distance


def assign_rank_and_crowding(
    pop: Population, normalize: bool = False
) -> RankedPopulation:
    """一次性设置 rank 与 crowding"""
    ranked = nondominated_sort(pop)
    ranked.crowding = crowding_distance(ranked, normalize=normalize)
    return ranked


def crowded_compare(x: Individual, y: Individual, rng: RngStream) -> Individual:
    """拥挤比较算子：等级低者胜，等级相同则拥挤距离大者胜，完全相同则随机

    :raises InvalidStateError: 任一个体未设置 rank / crowding
    """
    for ind in (x, y):
        if ind.rank is None or ind.crowding is None:
            raise InvalidStateError(ParetoI18n.UNRANKED)
    assert x.rank is not None and y.rank is not None
    assert x.crowding is not None and y.crowding is not None
    if x.rank < y.rank:
        return x
    if x.rank > y.rank:
        return y
    if x.crowding > y.crowding:
        return x
    if x.crowding < y.crowding:
        return y
    return x if rng.coin() else y


def _tournament_winners(
    rank: IntArray, crowding: FloatArray, a: IntArray, b: IntArray, coins: BoolArray
) -> IntArray:
    """向量化的拥挤比较：coins 为 True 时平局选 a"""
    a_wins = (rank[a] < rank[b]) | (
        (rank[a] == rank[b])
        & ((crowding[a] > crowding[b]) | ((crowding[a] == crowding[b]) & coins))
    )
    return np.where(a_wins, a, b)


def binary_tournament(
    ranked: RankedPopulation, n_out: int, rng: RngStream
) -> Population:
    """二元拥挤锦标赛：n_out 次独立比赛，参赛者有放回均匀抽取

    :return: 交配池（携带获胜者的 rank 与 crowding）
    """
    if ranked.size == 0:
        raise InvalidStateError(ParetoI18n.EMPTY_POPULATION)
    if ranked.rank is None or ranked.crowding is None:
        raise InvalidStateError(ParetoI18n.UNRANKED)
    generator = rng.generator
    a = generator.integers(0, ranked.size, size=n_out)
    b = generator.integers(0, ranked.size, size=n_out)
    coins = generator.random(n_out) < 0.5
    winners = _tournament_winners(ranked.rank, ranked.crowding, a, b, coins)
    return ranked.take(winners)
