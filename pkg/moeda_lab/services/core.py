"""
基础类型：基因型、目标向量、个体、种群与可复现随机流

约定：
- 基因型为 uint8 的一维 numpy 数组，元素只能是 0/1
- 种群以 (n, ℓ) 矩阵存储，目标值 / 等级 / 拥挤距离为按行对齐的数组
- 不使用全局随机状态，所有随机操作都显式接收 RngStream
"""

from collections.abc import Iterator
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from moeda_lab.base.exceptions import InvalidArgumentError, InvalidStateError
from moeda_lab.base.i18n import CoreI18n, ParetoI18n

type Genome = npt.NDArray[np.uint8]
type GenomeMatrix = npt.NDArray[np.uint8]
type FloatArray = npt.NDArray[np.float64]
type IntArray = npt.NDArray[np.int64]


class ObjectiveVector(NamedTuple):
    """双目标向量，两个目标都取最大化"""

    f1: float
    f2: float


@dataclass(frozen=True)
class Individual:
    """单个个体的只读视图"""

    genome: Genome
    objectives: ObjectiveVector | None = None
    rank: int | None = None
    crowding: float | None = None


@dataclass
class Population:
    """种群

    - genomes: (n, ℓ) 的 0/1 矩阵
    - objectives: (n, 2) 目标矩阵，未评估时为 None
    - rank / crowding: 由排序 + 拥挤距离一次性设置，基因变化后失效
    """

    genomes: GenomeMatrix
    objectives: FloatArray | None = None
    rank: IntArray | None = None
    crowding: FloatArray | None = None

    def __post_init__(self) -> None:
        if self.genomes.ndim != 2:
            raise InvalidArgumentError(CoreI18n.SHAPE_INVALID, shape=self.genomes.shape)
        if self.objectives is not None and self.objectives.shape != (self.size, 2):
            raise InvalidArgumentError(
                CoreI18n.SHAPE_INVALID, shape=self.objectives.shape
            )

    @property
    def size(self) -> int:
        """种群规模 n"""
        return int(self.genomes.shape[0])

    @property
    def length(self) -> int:
        """基因型长度 ℓ"""
        return int(self.genomes.shape[1])

    @property
    def is_evaluated(self) -> bool:
        return self.objectives is not None

    @property
    def is_ranked(self) -> bool:
        return self.rank is not None and self.crowding is not None

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[Individual]:
        for i in range(self.size):
            yield self.individual(i)

    def individual(self, index: int) -> Individual:
        """取出第 index 个个体"""
        objectives = None
        if self.objectives is not None:
            f1, f2 = self.objectives[index]
            objectives = ObjectiveVector(float(f1), float(f2))
        return Individual(
            genome=self.genomes[index].copy(),
            objectives=objectives,
            rank=None if self.rank is None else int(self.rank[index]),
            crowding=None if self.crowding is None else float(self.crowding[index]),
        )

    def require_objectives(self) -> FloatArray:
        """返回目标矩阵，未评估则抛出 invalid-state"""
        if self.objectives is None:
            raise InvalidStateError(ParetoI18n.UNEVALUATED)
        return self.objectives

    def take(self, indices: IntArray | list[int]) -> "Population":
        """按下标取子种群（复制数据）"""
        idx = np.asarray(indices, dtype=np.int64)
        return Population(
            genomes=self.genomes[idx].copy(),
            objectives=None if self.objectives is None else self.objectives[idx].copy(),
            rank=None if self.rank is None else self.rank[idx].copy(),
            crowding=None if self.crowding is None else self.crowding[idx].copy(),
        )

    def without_ranking(self) -> "Population":
        """丢弃等级与拥挤距离"""
        return replace(self, rank=None, crowding=None)

    @classmethod
    def concat(cls, first: "Population", second: "Population") -> "Population":
        """合并两个已评估的种群（等级与拥挤距离不保留）"""
        if first.length != second.length:
            raise InvalidArgumentError(
                CoreI18n.LENGTH_MISMATCH, left=first.length, right=second.length
            )
        return cls(
            genomes=np.concatenate([first.genomes, second.genomes]),
            objectives=np.concatenate(
                [first.require_objectives(), second.require_objectives()]
            ),
        )

    @classmethod
    def from_individuals(cls, individuals: list[Individual]) -> "Population":
        """由个体列表构造种群（目标值需全部已知或全部未知）"""
        genomes = np.stack([ind.genome for ind in individuals]).astype(np.uint8)
        objectives = None
        if individuals and all(ind.objectives is not None for ind in individuals):
            objectives = np.array(
                [tuple(ind.objectives) for ind in individuals if ind.objectives],
                dtype=np.float64,
            )
        return cls(genomes=genomes, objectives=objectives)


@dataclass(frozen=True)
class RngStream:
    """可复现随机流

    (seed, key) 相同则序列相同；不同的 key 由 SeedSequence 派生出
    统计独立的子流。key 的第一项即流编号 stream index。

    generator 随使用推进。相等只比较 (seed, key)，需要从头复现的消费方
    先调用 fresh()。
    """

    seed: int
    key: tuple[int, ...] = (0,)
    _generator: np.random.Generator = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.key)
        generator = np.random.Generator(np.random.PCG64(sequence))
        object.__setattr__(self, "_generator", generator)

    @classmethod
    def of(cls, seed: int, stream: int = 0) -> "RngStream":
        """按 (master seed, stream index) 构造"""
        return cls(seed=seed, key=(stream,))

    @property
    def stream(self) -> int:
        return self.key[0]

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def fresh(self) -> "RngStream":
        """同 (seed, key) 的未消耗副本"""
        return RngStream(seed=self.seed, key=self.key)

    def child(self, index: int) -> "RngStream":
        """派生子流（与本流的已消耗状态无关）"""
        return RngStream(seed=self.seed, key=(*self.key, index))

    def coin(self) -> bool:
        """公平硬币"""
        return bool(self._generator.random() < 0.5)


def as_genome(bits: str | list[int] | tuple[int, ...] | npt.ArrayLike) -> Genome:
    """把 '0101' 字符串或 0/1 序列转换为基因型数组"""
    if isinstance(bits, str):
        text = bits.strip()
        if not set(text) <= {"0", "1"}:
            raise InvalidArgumentError(CoreI18n.NOT_BINARY)
        array = np.array([int(ch) for ch in text], dtype=np.uint8)
    else:
        array = np.asarray(bits)
        if array.size and not np.isin(array, (0, 1)).all():
            raise InvalidArgumentError(CoreI18n.NOT_BINARY)
        array = array.astype(np.uint8)
    if array.ndim != 1:
        raise InvalidArgumentError(CoreI18n.SHAPE_INVALID, shape=array.shape)
    return array


def genome_to_str(genome: Genome) -> str:
    """基因型转 '0101' 字符串"""
    return "".join("1" if bit else "0" for bit in genome)


def genome_key(genome: Genome) -> bytes:
    """基因型的规范化哈希键"""
    return np.ascontiguousarray(genome, dtype=np.uint8).tobytes()


def random_population(n: int, ell: int, rng: RngStream) -> Population:
    """随机初始化种群：每一位独立均匀取 0/1

    :param n: 种群规模
    :param ell: 基因型长度
    :param rng: 随机流
    :return: 未评估的种群
    """
    for name, value in (("n", n), ("ell", ell)):
        if value < 1:
            raise InvalidArgumentError(CoreI18n.NOT_POSITIVE, name=name, value=value)
    genomes = rng.generator.integers(0, 2, size=(n, ell), dtype=np.uint8)
    return Population(genomes=genomes)


def hamming_distance(a: Genome, b: Genome) -> int:
    """汉明距离"""
    if a.shape != b.shape:
        raise InvalidArgumentError(
            CoreI18n.LENGTH_MISMATCH, left=a.shape[-1], right=b.shape[-1]
        )
    return int(np.count_nonzero(a != b))


def hamming_to_rows(genome: Genome, rows: GenomeMatrix) -> IntArray:
    """genome 到矩阵每一行的汉明距离"""
    if rows.shape[1] != genome.shape[0]:
        raise InvalidArgumentError(
            CoreI18n.LENGTH_MISMATCH, left=genome.shape[0], right=rows.shape[1]
        )
    return np.count_nonzero(rows != genome, axis=1).astype(np.int64)
