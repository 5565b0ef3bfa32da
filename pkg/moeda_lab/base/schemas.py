"""命令层 Schema 定义

本模块用于：
- 定义实验配置 ExperimentConfig（命令行参数与配置文件合并后的结果）
- 定义命令返回的成功结果包装 SuccessResult

约定：
- 列表型参数（m / ell / k / md）用于扫描，其他命令只取第一个值
- 退出码：0=成功，1=失败，2=部分结果，3=内部错误
"""

from enum import StrEnum
from itertools import product
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from moeda_lab.base.exceptions import InvalidArgumentError, UsageError
from moeda_lab.base.i18n import CliI18n
from moeda_lab.services.engine import AlgorithmConfig
from moeda_lab.services.problems import ProblemKind, ProblemSpec, RepresentativeMode
from moeda_lab.services.replacement import ReplacementKind, RtsConfig, TiePolicy
from moeda_lab.services.sizing_lab import (
    BisectionConfig,
    SizingParams,
    max_competing_substructures,
)
from moeda_lab.services.variation_models import VariationConfig, VariationKind
from moeda_lab.utils.schemas import I18nMessage


class Command(StrEnum):
    EVALUATE = "evaluate"
    ORACLE = "oracle"
    RUN = "run"
    BISECT = "bisect"
    SWEEP = "sweep"
    PREDICT = "predict"
    NICHE_PROB = "niche-prob"
    GROWTH = "growth"


class SuccessResult[T](BaseModel):
    """成功结果包装器

    用于在 CommandResult 装饰器中返回自定义的成功消息。
    """

    data: T = Field(..., description="结果数据")
    i18n_msg: I18nMessage | None = Field(None, description="国际化消息")
    i18n_args: dict[str, Any] = Field(default_factory=dict)


class ExperimentConfig(BaseModel):
    """实验配置：一次命令调用的全部参数"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command = Field(..., description="命令")

    # 问题
    problem: ProblemKind = Field(ProblemKind.TRAP_INVTRAP, description="问题类型")
    m: list[int] | None = Field(None, description="分块数（可为列表）")
    ell: list[int] | None = Field(None, description="基因型长度（可为列表）")
    k: list[int] | None = Field(None, description="分块大小（可为列表）")
    d: float | None = Field(None, description="信号差")
    md: list[int] | None = Field(None, description="冲突分块数（可为列表）")
    md_auto: bool = Field(False, description="m_d 取受控增长值")
    genome: str | None = Field(None, description="evaluate 的基因型 0/1 串")

    # 算法
    algo: VariationKind = Field(VariationKind.MECGA, description="子代生成方式")
    replacement: ReplacementKind = Field(ReplacementKind.ELITIST, description="替换")
    pc: float = Field(0.9, ge=0.0, le=1.0, description="交叉概率")
    pm: float | None = Field(None, ge=0.0, le=1.0, description="变异概率")
    k_max: int = Field(8, ge=1, le=16, description="MPM 分组大小上限")
    w: int | None = Field(None, ge=1, description="RTS 窗口")
    tie_policy: TiePolicy = Field(TiePolicy.COIN_FLIP, description="RTS 平局策略")
    cap: int | None = Field(None, ge=1, description="代数上限倍数（× ℓ）")
    max_generations: int | None = Field(None, ge=0, description="绝对代数上限")
    early_abort: bool = Field(False, description="覆盖率为 1 时提前结束")
    normalize_crowding: bool = Field(False, description="拥挤距离归一化")
    mode: RepresentativeMode = Field(
        RepresentativeMode.GENOTYPE, description="覆盖率口径"
    )

    # 实验
    seed: int | None = Field(None, ge=0, description="主种子")
    runs: int = Field(10, ge=1, description="运行次数 / 每个规模的验证运行数")
    repeats: int = Field(10, ge=1, description="二分重复次数")
    n: int | None = Field(None, ge=2, description="种群规模")
    n_start: int = Field(16, ge=2, description="二分起始规模")
    n_max: int = Field(2**16, ge=2, description="二分规模上限")
    jobs: int = Field(1, ge=1, description="并行进程数")
    out: str = Field("-", description="输出路径，- 为标准输出")
    trace: str | None = Field(None, description="逐代轨迹 CSV 路径")

    # 预测
    c1: float = Field(1.0, gt=0, description="EDA 规模常数")
    c2: float = Field(1.0, gt=0, description="小生境规模常数")
    gamma: float = Field(0.9, gt=0, lt=1, description="置信度 γ")
    t: int = Field(10, ge=1, description="保持代数")

    lang: str = Field("en_us", description="消息语言")
    verbose: int = Field(0, ge=0, description="详细日志")

    def first(self, field: str) -> int:
        """列表参数的第一个值

        :raises UsageError: 参数缺失
        """
        values = getattr(self, field)
        if not values:
            raise UsageError(
                CliI18n.MISSING_FIELD, data=field, command=self.command, field=field
            )
        return int(values[0])

    def check_problem_fields(self) -> None:
        """问题参数之间的一致性检查

        :raises UsageError: m 与 ell 同时给出、m_d > m 等
        """
        if self.m and self.ell:
            raise UsageError(
                CliI18n.CONFLICTING_PROBLEM_FIELDS, data="m", kind=self.problem
            )
        if self.md and self.m:
            for m_d, m in product(self.md, self.m):
                if m_d > m:
                    raise UsageError(
                        CliI18n.INVALID_VALUE,
                        data="md",
                        field="md",
                        error=f"m_d={m_d} exceeds m={m}",
                    )

    def block_counts(self, k: int) -> list[int]:
        """分块数列表：直接取 m，或由 ell 按 k 换算"""
        if self.m:
            return list(self.m)
        if self.ell:
            for ell in self.ell:
                if ell % k:
                    raise UsageError(
                        CliI18n.INVALID_VALUE,
                        data="ell",
                        field="ell",
                        error=f"ell={ell} is not a multiple of k={k}",
                    )
            return [ell // k for ell in self.ell]
        raise UsageError(
            CliI18n.MISSING_FIELD, data="m", command=self.command, field="m"
        )

    def problems(self) -> list[ProblemSpec]:
        """展开为问题族（m × k × m_d 的笛卡尔积，按给出顺序）

        :raises UsageError: 参数组合无效，data 为字段名
        """
        self.check_problem_fields()
        specs: list[ProblemSpec] = []
        try:
            if self.problem is ProblemKind.ONEMAX_ZEROMAX:
                ells = self.block_counts(1)
                return [ProblemSpec.onemax_zeromax(ell) for ell in ells]
            for k in self.k or [3]:
                for m in self.block_counts(k):
                    if self.problem is ProblemKind.TRAP_INVTRAP:
                        specs.append(ProblemSpec.trap_invtrap(m=m, k=k, d=self.d))
                    elif self.md_auto or not self.md:
                        m_d = max_competing_substructures(m, k)
                        specs.append(ProblemSpec.overlap(m=m, k=k, m_d=m_d, d=self.d))
                    else:
                        specs.extend(
                            ProblemSpec.overlap(m=m, k=k, m_d=m_d, d=self.d)
                            for m_d in self.md
                        )
        except InvalidArgumentError as e:
            field = str(e.data or "problem")
            raise UsageError(
                CliI18n.INVALID_VALUE, data=field, field=field, error=str(e)
            ) from e
        return specs

    def algorithm(self) -> AlgorithmConfig:
        return AlgorithmConfig(
            variation=VariationConfig(
                kind=self.algo, pc=self.pc, pm=self.pm, k_max=self.k_max
            ),
            replacement=self.replacement,
            rts=RtsConfig(w=self.w, tie_policy=self.tie_policy),
            generation_cap_multiplier=self.cap,
            max_generations=self.max_generations,
            early_abort=self.early_abort,
            normalize_crowding=self.normalize_crowding,
        )

    def bisection(self) -> BisectionConfig:
        try:
            return BisectionConfig(
                n_start=self.n_start,
                runs=self.runs,
                repeats=self.repeats,
                n_max=self.n_max,
                jobs=self.jobs,
            )
        except ValueError as e:
            raise UsageError(
                CliI18n.INVALID_VALUE, data="n_start", field="n_start", error=str(e)
            ) from e

    def sizing(self, n_opt: int = 2) -> SizingParams:
        return SizingParams(
            c1=self.c1, c2=self.c2, gamma=self.gamma, t=self.t, n_opt=n_opt
        )
