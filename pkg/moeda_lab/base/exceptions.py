"""统一异常类

提供应用级异常基类和具体异常类型，支持国际化消息。
"""

from typing import Any

from moeda_lab.utils.schemas import I18nMessage


class AppException(Exception):
    """应用异常基类

    所有业务异常都应继承此类，并提供国际化消息。

    示例::

        raise InvalidArgumentError(
            CoreI18n.LENGTH_MISMATCH,
            left=4,
            right=5,
        )
    """

    def __init__(
        self, i18n_msg: I18nMessage, data: Any = None, **format_args: Any
    ) -> None:
        """初始化异常

        :param i18n_msg: 国际化消息对象
        :param data: 附带的数据（可选）
        :param format_args: 消息格式化参数
        """
        self.i18n_msg = i18n_msg
        self.data = data
        self.format_args = format_args
        super().__init__(i18n_msg.format("en_us", **format_args))

    def translate(self, lang: str) -> str:
        """翻译消息为指定语言

        :param lang: 语言代码（如 'zh_cn', 'en_us'）
        :return: 翻译后的消息
        """
        return self.i18n_msg.format(lang, **self.format_args)


class ServiceException(AppException):
    """业务异常（退出码 1）"""

    pass


class InvalidArgumentError(ServiceException):
    """参数不满足前置条件"""

    pass


class InvalidStateError(ServiceException):
    """对象状态不满足操作要求（例如未评估、未排序）"""

    pass


class CapacityError(ServiceException):
    """枚举规模超过上限"""

    pass


class InfeasibleAtBudgetError(ServiceException):
    """种群规模达到上限仍未通过；data 为最后一次失败的 n"""

    pass


class UsageError(ServiceException):
    """命令行用法错误；data 为出错的字段名"""

    pass


class OutputError(ServiceException):
    """产物写入失败"""

    pass


class ResultWarningException(AppException):
    """结果警告（退出码 2）

    用于部分成功的结果，例如扫描中部分问题规模不可行。
    """

    pass
