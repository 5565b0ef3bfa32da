"""
日志配置模块
- 只使用 Python 标准库 logging
- 零配置：内置默认配置，不创建配置文件
- 诊断信息输出到 stderr，标准输出留给数据（--out -）
- 各模块通过 get_logger(__name__) 取得 moeda_lab 下的子 logger
- 调试模式下每条记录带上当前命令与主种子
"""

import logging
import os
import sys

from moeda_lab.base.context import current_context

DEFAULT_LEVEL = logging.INFO
DEBUG_ENV = "MOEDA_LAB_DEBUG"
ROOT_LOGGER = "moeda_lab"


class ExperimentContextFilter(logging.Filter):
    """把当前命令与主种子写入 record.experiment"""

    def filter(self, record: logging.LogRecord) -> bool:
        info = current_context.get(None)
        if info is None or info.command is None:
            experiment = "-"
        elif info.master_seed is None:
            experiment = info.command
        else:
            experiment = f"{info.command} seed={info.master_seed}"
        setattr(record, "experiment", experiment)
        return True


def init_logging(verbosity: int | None = None) -> None:
    """
    初始化全局 logging 配置。应在程序入口尽早调用（例如 __main__）。

    Args:
        verbosity: None = 使用环境变量或默认；>0 表示启用调试模式
    """
    if verbosity is None:
        verbosity = 1 if os.environ.get(DEBUG_ENV) in ("1", "true", "True") else 0

    root = logging.getLogger()

    # 删除已有 handlers（防止重复配置）
    if root.handlers:
        for h in list(root.handlers):
            root.removeHandler(h)

    if verbosity:
        level = logging.DEBUG
        fmt = "%(asctime)s %(levelname)s [%(name)s] (%(experiment)s) %(message)s"
        datefmt = "%Y-%m-%d %H:%M:%S"
    else:
        level = DEFAULT_LEVEL
        fmt = "%(levelname)s: %(message)s"
        datefmt = None

    root.setLevel(level)
    handler = logging.StreamHandler(stream=sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(fmt, datefmt=datefmt))
    handler.addFilter(ExperimentContextFilter())
    root.addHandler(handler)


def get_logger(name: str) -> logging.Logger:
    """获取 moeda_lab 下的 logger；模块名已在该命名空间下时原样使用"""
    if name != ROOT_LOGGER and not name.startswith(f"{ROOT_LOGGER}."):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name)


# 入口与命令层共用的 logger
logger = get_logger(ROOT_LOGGER)
