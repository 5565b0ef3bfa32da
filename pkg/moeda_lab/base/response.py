"""统一命令结果装饰器

提供 @CommandResult 装饰器，自动处理异常捕获、消息翻译并转换为进程退出码。
"""

import functools
import sys
from collections.abc import Callable
from typing import Any

from moeda_lab.base.context import get_current_lang
from moeda_lab.base.exceptions import AppException, ResultWarningException
from moeda_lab.base.i18n import CommonI18n
from moeda_lab.base.schemas import SuccessResult
from moeda_lab.utils.logger import logger
from moeda_lab.utils.schemas import I18nMessage
from moeda_lab.utils.tiny_func import simplify_exception

EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_PARTIAL = 2
EXIT_UNEXPECTED = 3


class CommandResult:
    """
    命令结果装饰器，将处理函数的结果统一为退出码

    用法示例::

        @CommandResult(i18n_summary=CommandSummaryI18n.SWEEP)
        def sweep(cfg: ExperimentConfig) -> None:
            # 不需要写 try... except
            ...

    - 正常返回时退出码为 0；返回 SuccessResult 且带 i18n_msg 时输出该消息。
    - 发生 ResultWarningException 时输出警告，退出码 2。
    - 发生 AppException 时输出翻译后的错误消息，退出码 1。
    - 发生其他 Exception 时记录日志，退出码 3。
    """

    def __init__(self, i18n_summary: I18nMessage) -> None:
        """
        :param i18n_summary: 命令名称的国际化对象
        """
        assert isinstance(i18n_summary, I18nMessage), (
            "i18n_summary 参数必须是 I18nMessage 对象"
        )
        self.i18n_summary = i18n_summary

    @property
    def lang(self) -> str:
        return get_current_lang()

    @property
    def summary(self) -> str:
        return self.i18n_summary.get_template(self.lang)

    def translate_unexpected_error(self, e: Exception) -> str:
        return CommonI18n.UNEXPECTED_ERROR.format(
            self.lang, error=str(e), summary=self.summary
        )

    def report_success(self, result: SuccessResult[Any] | Any) -> None:
        if isinstance(result, SuccessResult) and result.i18n_msg:
            logger.info(result.i18n_msg.format(self.lang, **result.i18n_args))

    def __call__[**P](self, func: Callable[P, Any]) -> Callable[P, int]:
        @functools.wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> int:
            try:
                self.report_success(func(*args, **kwargs))
                return EXIT_SUCCESS
            except ResultWarningException as e:
                logger.warning(
                    CommonI18n.PARTIAL_RESULT.format(
                        self.lang, summary=self.summary, error=e.translate(self.lang)
                    )
                )
                return EXIT_PARTIAL
            except AppException as e:
                logger.error(
                    CommonI18n.FAILED.format(
                        self.lang, summary=self.summary, error=e.translate(self.lang)
                    )
                )
                return EXIT_FAILURE
            except Exception as e:
                logger.error(
                    f"{self.summary} 发生预期之外的错误：\n{simplify_exception(e)}"
                )
                print(self.translate_unexpected_error(e), file=sys.stderr)
                return EXIT_UNEXPECTED

        return wrapper


type CommandHandler = Callable[[Any], int]


class CommandRouter:
    """命令路由：命令名 -> 已包装为退出码的处理函数"""

    def __init__(self) -> None:
        self.handlers: dict[str, CommandHandler] = {}

    def command(self, name: str) -> Callable[[CommandHandler], CommandHandler]:
        def register(handler: CommandHandler) -> CommandHandler:
            assert name not in self.handlers, f"命令 {name} 重复注册"
            self.handlers[name] = handler
            return handler

        return register

    def include_router(self, other: "CommandRouter") -> None:
        for name, handler in other.handlers.items():
            self.command(name)(handler)

    def get(self, name: str) -> CommandHandler:
        return self.handlers[name]
