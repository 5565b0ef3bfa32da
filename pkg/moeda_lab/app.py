"""
命令行应用

解析参数与配置文件，合并为 ExperimentConfig 后分发到各命令。
参数优先级：命令行 > 配置文件 > 默认值。
"""

import argparse
import os
from collections.abc import Sequence
from typing import Any, NoReturn

import numpy as np
from pydantic import ValidationError

from moeda_lab import __description__, __version__
from moeda_lab.base.config_file import normalize_key, read_config_file
from moeda_lab.base.context import ContextManager, get_current_lang
from moeda_lab.base.exceptions import UsageError
from moeda_lab.base.i18n import CliI18n, CommonI18n
from moeda_lab.base.response import EXIT_FAILURE
from moeda_lab.base.schemas import Command, ExperimentConfig
from moeda_lab.commands import router
from moeda_lab.services.problems import ProblemKind, RepresentativeMode
from moeda_lab.services.replacement import ReplacementKind, TiePolicy
from moeda_lab.services.variation_models import VariationKind
from moeda_lab.utils.logger import init_logging, logger
from moeda_lab.utils.schemas import ContextInfo

LANG_ENV = "MOEDA_LAB_LANG"

# 逗号分隔的列表参数
LIST_FIELDS = frozenset({"m", "ell", "k", "md"})
# 需要种子的命令
RANDOMIZED_COMMANDS = frozenset(
    {Command.RUN, Command.BISECT, Command.SWEEP, Command.NICHE_PROB}
)

# (参数, 可选值, 帮助)；取值统一交给 ExperimentConfig 校验
_OPTIONS: tuple[tuple[str, Sequence[str] | None, str], ...] = (
    ("--problem", [str(k) for k in ProblemKind], "问题类型"),
    ("--m", None, "分块数，可逗号分隔多个"),
    ("--ell", None, "基因型长度，可逗号分隔多个（与 --m 二选一）"),
    ("--k", None, "分块大小，可逗号分隔多个"),
    ("--d", None, "信号差（k=3/4/5 缺省为 0.9/0.75/0.8）"),
    ("--md", None, "冲突分块数，可逗号分隔多个；auto 表示受控增长值"),
    ("--genome", None, "evaluate 的基因型 0/1 串，逗号分隔多个"),
    ("--algo", [str(k) for k in VariationKind], "子代生成方式"),
    ("--replacement", [str(k) for k in ReplacementKind], "替换策略"),
    ("--pc", None, "交叉概率"),
    ("--pm", None, "变异概率（缺省 1/ell）"),
    ("--k-max", None, "MPM 分组大小上限"),
    ("--w", None, "RTS 窗口（缺省 min(n, ell)）"),
    ("--tie-policy", [str(k) for k in TiePolicy], "RTS 互不支配时的策略"),
    ("--cap", None, "代数上限倍数（× ell）"),
    ("--max-generations", None, "绝对代数上限"),
    ("--mode", [str(k) for k in RepresentativeMode], "覆盖率口径"),
    ("--seed", None, "主种子（缺省时生成并记录）"),
    ("--runs", None, "运行次数 / 每个规模的验证运行数"),
    ("--repeats", None, "二分重复次数"),
    ("--n", None, "种群规模"),
    ("--n-start", None, "二分起始规模"),
    ("--n-max", None, "二分规模上限"),
    ("--jobs", None, "并行进程数"),
    ("--out", None, "输出路径，- 为标准输出"),
    ("--trace", None, "run 的逐代轨迹 CSV 路径"),
    ("--c1", None, "EDA 规模常数"),
    ("--c2", None, "小生境规模常数"),
    ("--gamma", None, "保持全部小生境的置信度"),
    ("--t", None, "需要保持小生境的代数"),
    ("--lang", None, f"消息语言（缺省取 {LANG_ENV}，再缺省 en_us）"),
)


class _Parser(argparse.ArgumentParser):
    """用法错误抛出 UsageError，由 main 统一转换为退出码"""

    def error(self, message: str) -> NoReturn:
        raise UsageError(
            CliI18n.INVALID_VALUE, data="argv", field="argv", error=message
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="moeda-lab", description=__description__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("command", choices=[str(c) for c in Command], help="命令")
    for flag, choices, help_text in _OPTIONS:
        parser.add_argument(
            flag, choices=choices, default=argparse.SUPPRESS, help=help_text
        )
    parser.add_argument(
        "--early-abort",
        action="store_true",
        default=argparse.SUPPRESS,
        help="覆盖率为 1 时提前结束（默认运行到代数上限）",
    )
    parser.add_argument(
        "--normalize-crowding",
        action="store_true",
        default=argparse.SUPPRESS,
        help="拥挤距离按目标范围归一化",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=argparse.SUPPRESS,
        help="详细日志（也可设置 MOEDA_LAB_DEBUG=1）",
    )
    parser.add_argument("--config", default=None, help="key=value 配置文件")
    return parser


def _coerce(key: str, value: Any) -> tuple[str, Any]:
    """把原始字符串整理成 ExperimentConfig 的字段值"""
    if key == "md" and isinstance(value, str) and value.strip() == "auto":
        return "md_auto", True
    if key in LIST_FIELDS and isinstance(value, str):
        return key, [item.strip() for item in value.split(",") if item.strip()]
    return key, value


def _validation_to_usage(e: ValidationError) -> UsageError:
    error = e.errors()[0]
    field = ".".join(str(p) for p in error.get("loc", ())) or "config"
    if error["type"] == "extra_forbidden":
        return UsageError(CliI18n.UNKNOWN_KEY, data=field, key=field)
    return UsageError(
        CliI18n.INVALID_VALUE, data=field, field=field, error=error["msg"]
    )


def _generated_seed() -> int:
    return int(np.random.SeedSequence().entropy % 2**32)


def parse_config(argv: Sequence[str] | None = None) -> ExperimentConfig:
    """解析命令行与配置文件

    :param argv: 参数列表（不含程序名），None 表示 sys.argv[1:]
    :return: 校验后的实验配置；随机化命令一定带有种子
    :raises UsageError: 参数无效、未知配置项、问题参数冲突等，data 为字段名
    """
    namespace = vars(build_parser().parse_args(argv))
    config_path = namespace.pop("config", None)

    values: dict[str, Any] = {}
    if config_path:
        values.update(read_config_file(config_path))
    values.update({normalize_key(k): v for k, v in namespace.items()})
    values = dict(_coerce(k, v) for k, v in values.items())
    values.setdefault("lang", os.environ.get(LANG_ENV, "en_us"))

    if values.get("command") in RANDOMIZED_COMMANDS and values.get("seed") is None:
        values["seed"] = _generated_seed()
        logger.info("未给出 --seed，使用生成的种子 %d", values["seed"])

    try:
        cfg = ExperimentConfig(**values)
    except ValidationError as e:
        raise _validation_to_usage(e) from e
    cfg.check_problem_fields()
    return cfg


def dispatch(cfg: ExperimentConfig) -> int:
    """按命令分发，返回退出码"""
    info = ContextInfo(language=cfg.lang, command=cfg.command, master_seed=cfg.seed)
    with ContextManager(info):
        logger.debug("执行 %s: %s", cfg.command, cfg.model_dump(exclude_unset=True))
        return router.get(cfg.command)(cfg)


def main(argv: Sequence[str] | None = None) -> int:
    """解析并执行，返回退出码；用法错误的退出码为 1"""
    lang = os.environ.get(LANG_ENV, "en_us")
    with ContextManager(ContextInfo(language=lang)):
        try:
            cfg = parse_config(argv)
        except UsageError as e:
            logger.error(
                CommonI18n.FAILED.format(
                    get_current_lang(), summary="usage", error=e.translate(lang)
                )
            )
            return EXIT_FAILURE
    if cfg.verbose:
        init_logging(cfg.verbose)
    return dispatch(cfg)
