"""
双目标可分解测试问题

- trap-invtrap：每个 k 位分块在两个目标上分别贡献 trap / invtrap
- onemax-zeromax：逐位计数，等价于 k=1 且全部位冲突
- overlap：前 m_d 个分块冲突，其余分块在两个目标上共享同一个 trap
  （k=1 时为受控冲突的 OneMax-ZeroMax）

分块 i 覆盖位置 [i·k, (i+1)·k)；permutation 可把分块位映射到任意基因位置，
用于松散连锁实验。
"""

import math
from collections.abc import Iterator
from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property, lru_cache
from typing import Any, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from moeda_lab.base.exceptions import CapacityError, InvalidArgumentError
from moeda_lab.base.i18n import CoreI18n, ProblemI18n
from moeda_lab.services.core import (
    FloatArray,
    Genome,
    GenomeMatrix,
    ObjectiveVector,
    genome_key,
)
from moeda_lab.services.pareto_toolkit import nondominated_mask

# 默认信号差（k -> d）
DEFAULT_SIGNAL = {3: 0.9, 4: 0.75, 5: 0.8}
# 代表解枚举上限
DEFAULT_GENOTYPE_CAP = 2**20
# 穷举 oracle 的长度上限与分块大小
ORACLE_MAX_LENGTH = 24
_ORACLE_CHUNK = 2**16
# 目标点比较容差
OBJECTIVE_TOLERANCE = 1e-9
_ROUND_DIGITS = 9


class ProblemKind(StrEnum):
    TRAP_INVTRAP = "trap-invtrap"
    ONEMAX_ZEROMAX = "onemax-zeromax"
    OVERLAP = "overlap"


class RepresentativeMode(StrEnum):
    """代表解的计数方式"""

    GENOTYPE = "genotype"
    OBJECTIVE = "objective"


class ProblemSpec(BaseModel):
    """双目标可分解问题定义

    onemax-zeromax 以 m = ℓ、k = 1 表示；trap-invtrap 的 m_d 恒等于 m。
    """

    model_config = ConfigDict(frozen=True)

    kind: ProblemKind = Field(..., description="问题类型")
    m: int = Field(..., ge=1, description="分块数")
    k: int = Field(1, ge=1, description="分块大小（位）")
    d: float | None = Field(None, description="信号差，k>=2 时有效")
    m_d: int = Field(0, ge=0, description="冲突分块数（overlap）")
    permutation: tuple[int, ...] | None = Field(
        None, description="分块位 j -> 基因位置 permutation[j]，默认恒等"
    )

    @model_validator(mode="before")
    @classmethod
    def _fill_defaults(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        kind = ProblemKind(data.get("kind"))
        if kind is ProblemKind.ONEMAX_ZEROMAX:
            data.setdefault("k", 1)
        k = int(data.get("k", 1))
        if kind is not ProblemKind.OVERLAP and data.get("m_d") is None:
            data["m_d"] = data.get("m")
        elif data.get("m_d") is None:
            data.pop("m_d", None)
        if data.get("d") is None and k >= 2 and k in DEFAULT_SIGNAL:
            data["d"] = DEFAULT_SIGNAL[k]
        return data

    @model_validator(mode="after")
    def _check(self) -> Self:
        if self.kind is ProblemKind.ONEMAX_ZEROMAX and self.k != 1:
            raise ValueError("onemax-zeromax uses k = 1")
        if self.kind is ProblemKind.TRAP_INVTRAP and self.k < 2:
            raise ValueError(ProblemI18n.K_TOO_SMALL.format("en_us", k=self.k))
        if self.kind is not ProblemKind.OVERLAP and self.m_d != self.m:
            raise ValueError(f"m_d must equal m for {self.kind}")
        if self.m_d > self.m:
            raise ValueError(
                ProblemI18n.MD_OUT_OF_RANGE.format("en_us", m_d=self.m_d, m=self.m)
            )
        if self.k >= 2:
            if self.d is None:
                raise ValueError(ProblemI18n.NO_DEFAULT_D.format("en_us", k=self.k))
            if not 0.0 < self.d < 1.0:
                raise ValueError(ProblemI18n.D_OUT_OF_RANGE.format("en_us", d=self.d))
        if self.permutation is not None and sorted(self.permutation) != list(
            range(self.ell)
        ):
            raise ValueError(
                ProblemI18n.BAD_PERMUTATION.format("en_us", last=self.ell - 1)
            )
        return self

    @classmethod
    def build(cls, **fields: Any) -> "ProblemSpec":
        """构造并把校验错误转换为 invalid-argument"""
        try:
            return cls(**fields)
        except ValidationError as e:
            error = e.errors()[0]
            field = ".".join(str(p) for p in error.get("loc", ())) or "problem"
            raise InvalidArgumentError(
                ProblemI18n.INVALID_SPEC, data=field, field=field, error=error["msg"]
            ) from e

    @classmethod
    def trap_invtrap(cls, m: int, k: int, d: float | None = None) -> "ProblemSpec":
        return cls.build(kind=ProblemKind.TRAP_INVTRAP, m=m, k=k, d=d)

    @classmethod
    def onemax_zeromax(cls, ell: int) -> "ProblemSpec":
        return cls.build(kind=ProblemKind.ONEMAX_ZEROMAX, m=ell, k=1)

    @classmethod
    def overlap(
        cls, m: int, k: int, m_d: int, d: float | None = None
    ) -> "ProblemSpec":
        return cls.build(kind=ProblemKind.OVERLAP, m=m, k=k, m_d=m_d, d=d)

    @property
    def ell(self) -> int:
        """基因型长度 ℓ = m·k"""
        return self.m * self.k

    @property
    def n_opt(self) -> int:
        """Pareto 最优基因型个数 2^{m_d}"""
        return 2**self.m_d

    def describe(self) -> str:
        if self.kind is ProblemKind.ONEMAX_ZEROMAX:
            return f"{self.kind}(ell={self.ell})"
        return f"{self.kind}(m={self.m}, k={self.k}, d={self.d}, m_d={self.m_d})"


def trap(u: int, k: int, d: float) -> float:
    """欺骗性 trap：全 1 时为 1，否则 (1-d)(1 - u/(k-1))"""
    _check_trap_args(u, k, d)
    if u == k:
        return 1.0
    return (1.0 - d) * (1.0 - u / (k - 1))


def invtrap(u: int, k: int, d: float) -> float:
    """逆 trap：全 0 时为 1，否则 (1-d)(u-1)/(k-1)"""
    _check_trap_args(u, k, d)
    if u == 0:
        return 1.0
    return (1.0 - d) * ((u - 1) / (k - 1))


def _check_trap_args(u: int, k: int, d: float) -> None:
    if k < 2:
        raise InvalidArgumentError(ProblemI18n.K_TOO_SMALL, k=k)
    if not 0 <= u <= k:
        raise InvalidArgumentError(ProblemI18n.U_OUT_OF_RANGE, u=u, k=k)
    if not 0.0 < d < 1.0:
        raise InvalidArgumentError(ProblemI18n.D_OUT_OF_RANGE, d=d)


@lru_cache(maxsize=64)
def _value_tables(p: ProblemSpec) -> tuple[FloatArray, FloatArray]:
    """每个分块按 1 的个数 u 查表：(m, k+1) 的 f1 表与 f2 表"""
    u = np.arange(p.k + 1)
    if p.k == 1:
        up = u.astype(np.float64)
        down = 1.0 - up
    else:
        d = float(p.d)  # type: ignore[arg-type]
        up = np.array([trap(int(v), p.k, d) for v in u])
        down = np.array([invtrap(int(v), p.k, d) for v in u])
    conflicting = np.arange(p.m) < p.m_d
    f1 = np.tile(up, (p.m, 1))
    f2 = np.where(conflicting[:, None], down[None, :], up[None, :])
    return f1, f2


def _partition_bits(p: ProblemSpec, genomes: GenomeMatrix) -> GenomeMatrix:
    """把基因位重排为分块顺序"""
    if p.permutation is None:
        return genomes
    return genomes[:, list(p.permutation)]


def evaluate_population(p: ProblemSpec, genomes: GenomeMatrix) -> FloatArray:
    """批量评估：返回 (n, 2) 目标矩阵"""
    if genomes.ndim != 2 or genomes.shape[1] != p.ell:
        raise InvalidArgumentError(
            CoreI18n.LENGTH_MISMATCH, left=genomes.shape[-1], right=p.ell
        )
    n = genomes.shape[0]
    ones = _partition_bits(p, genomes).reshape(n, p.m, p.k).sum(axis=2)
    f1_table, f2_table = _value_tables(p)
    rows = np.arange(p.m)[None, :]
    f1 = f1_table[rows, ones].sum(axis=1)
    f2 = f2_table[rows, ones].sum(axis=1)
    return np.stack([f1, f2], axis=1)


def evaluate(p: ProblemSpec, g: Genome) -> ObjectiveVector:
    """评估单个基因型"""
    if g.ndim != 1 or g.shape[0] != p.ell:
        raise InvalidArgumentError(
            CoreI18n.LENGTH_MISMATCH, left=g.shape[-1], right=p.ell
        )
    f1, f2 = evaluate_population(p, g[None, :])[0]
    return ObjectiveVector(float(f1), float(f2))


def objective_key(point: tuple[float, float] | FloatArray) -> tuple[float, float]:
    """目标点的规范化键（按容差取整）"""
    return (
        round(float(point[0]), _ROUND_DIGITS),
        round(float(point[1]), _ROUND_DIGITS),
    )


def sort_genomes(genomes: GenomeMatrix) -> GenomeMatrix:
    """按位串字典序排序"""
    if genomes.shape[0] == 0:
        return genomes
    order = np.lexsort(genomes.T[::-1])
    return genomes[order]


@dataclass(frozen=True)
class RepresentativeSet:
    """代表解集合

    points 恒为前沿上的不同目标点（按 f1 升序）；genotype 模式下
    genomes 为全部 Pareto 最优基因型（字典序）。
    """

    mode: RepresentativeMode
    points: FloatArray
    genomes: GenomeMatrix | None = None

    @cached_property
    def entries(self) -> frozenset[Any]:
        if self.mode is RepresentativeMode.GENOTYPE and self.genomes is not None:
            return frozenset(genome_key(g) for g in self.genomes)
        return frozenset(objective_key(pt) for pt in self.points)

    def __len__(self) -> int:
        if self.mode is RepresentativeMode.GENOTYPE and self.genomes is not None:
            return int(self.genomes.shape[0])
        return int(self.points.shape[0])


def _unique_points(points: FloatArray) -> FloatArray:
    """按容差去重并按 f1 升序、f2 降序排列"""
    if points.shape[0] == 0:
        return points.reshape(0, 2)
    keys = sorted({objective_key(pt) for pt in points}, key=lambda pt: (pt[0], -pt[1]))
    return np.array(keys, dtype=np.float64)


def _conflict_genomes(p: ProblemSpec, codes: np.ndarray) -> GenomeMatrix:
    """由冲突分块的 0/1 编码生成代表基因型（共享分块恒为全 1）"""
    count = codes.shape[0]
    blocks = np.ones((count, p.m), dtype=np.uint8)
    if p.m_d:
        shifts = np.arange(p.m_d - 1, -1, -1)
        blocks[:, : p.m_d] = (codes[:, None] >> shifts) & 1
    ordered = np.repeat(blocks, p.k, axis=1)
    if p.permutation is None:
        return ordered
    genomes = np.empty_like(ordered)
    genomes[:, list(p.permutation)] = ordered
    return genomes


def distinct_front_points(p: ProblemSpec) -> FloatArray:
    """前沿上的 m_d+1 个不同目标点（闭式构造，不需要枚举）"""
    blocks = np.ones((p.m_d + 1, p.m), dtype=np.uint8)
    for i in range(p.m_d + 1):
        blocks[i, i : p.m_d] = 0
    genomes = np.repeat(blocks, p.k, axis=1)
    if p.permutation is not None:
        permuted = np.empty_like(genomes)
        permuted[:, list(p.permutation)] = genomes
        genomes = permuted
    return _unique_points(evaluate_population(p, genomes))


def representative_set(
    p: ProblemSpec,
    mode: RepresentativeMode,
    cap: int = DEFAULT_GENOTYPE_CAP,
) -> RepresentativeSet:
    """精确的代表解集合

    冲突分块取全 0 或全 1，共享分块取全 1。

    :param p: 问题定义
    :param mode: genotype = 2^{m_d} 个基因型；objective = m_d+1 个目标点
    :param cap: genotype 模式的数量上限
    :raises CapacityError: 基因型数量超过上限
    """
    points = distinct_front_points(p)
    if mode is RepresentativeMode.OBJECTIVE:
        return RepresentativeSet(mode=mode, points=points)
    if p.n_opt > cap:
        raise CapacityError(ProblemI18n.GENOTYPE_CAP_EXCEEDED, count=p.n_opt, cap=cap)
    genomes = _conflict_genomes(p, np.arange(p.n_opt, dtype=np.int64))
    return RepresentativeSet(mode=mode, points=points, genomes=sort_genomes(genomes))


def _enumerate_chunks(ell: int) -> Iterator[GenomeMatrix]:
    shifts = np.arange(ell - 1, -1, -1, dtype=np.int64)
    total = 2**ell
    for start in range(0, total, _ORACLE_CHUNK):
        codes = np.arange(start, min(start + _ORACLE_CHUNK, total), dtype=np.int64)
        yield ((codes[:, None] >> shifts) & 1).astype(np.uint8)


def _match_points(objectives: FloatArray, points: FloatArray) -> np.ndarray:
    """每一行是否落在某个目标点的容差内"""
    close = np.abs(objectives[:, None, :] - points[None, :, :]) <= OBJECTIVE_TOLERANCE
    return close.all(axis=2).any(axis=1)


def pareto_oracle_bruteforce(
    p: ProblemSpec, cap: int = DEFAULT_GENOTYPE_CAP
) -> RepresentativeSet:
    """穷举全部 2^ℓ 个基因型，返回精确的非支配集合（genotype 模式）

    两遍扫描：第一遍收集不同目标点并求非支配点，第二遍收集落在这些点上的基因型。

    :raises CapacityError: ℓ > 24，或前沿基因型数超过 cap
    """
    if p.ell > ORACLE_MAX_LENGTH:
        raise CapacityError(
            ProblemI18n.ORACLE_TOO_LONG, limit=ORACLE_MAX_LENGTH, ell=p.ell
        )
    seen: set[tuple[float, float]] = set()
    for chunk in _enumerate_chunks(p.ell):
        seen.update(objective_key(pt) for pt in evaluate_population(p, chunk))
    candidates = np.array(sorted(seen), dtype=np.float64)
    front = _unique_points(candidates[nondominated_mask(candidates)])

    selected: list[GenomeMatrix] = []
    count = 0
    for chunk in _enumerate_chunks(p.ell):
        hit = chunk[_match_points(evaluate_population(p, chunk), front)]
        count += hit.shape[0]
        if count > cap:
            raise CapacityError(ProblemI18n.GENOTYPE_CAP_EXCEEDED, count=count, cap=cap)
        selected.append(hit)
    genomes = np.concatenate(selected) if selected else np.empty((0, p.ell), np.uint8)
    return RepresentativeSet(
        mode=RepresentativeMode.GENOTYPE, points=front, genomes=sort_genomes(genomes)
    )


def niche_counts(m: int) -> list[int]:
    """前沿上每个目标点对应的基因型个数：第 i 项为 C(m, i)"""
    if m < 1:
        raise InvalidArgumentError(CoreI18n.NOT_POSITIVE, name="m", value=m)
    return [math.comb(m, i) for i in range(m + 1)]
