import math
import os
import tempfile
import traceback
from pathlib import Path


def simplify_exception(err: Exception) -> str:
    """简化错误日志"""
    msg = "".join(traceback.format_exception(err)).replace(str(Path.cwd()), "")
    return f"{err.__class__.__name__}: {err}\nAt: \n{msg}"


def format_float(value: float, digits: int = 6) -> str:
    """按有效数字格式化浮点数（CSV 输出统一使用 6 位有效数字）

    :param value: 浮点数
    :param digits: 有效数字位数
    :return: 字符串；nan / inf 原样输出
    """
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def atomic_write_text(path: Path, text: str) -> None:
    """原子写入文本：先写同目录临时文件，再 rename 覆盖目标

    :param path: 目标路径
    :param text: 文本内容
    :raises OSError: 目录不可写等
    """
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp_name = tempfile.mkstemp(
        prefix=f".{path.name}.", suffix=".tmp", dir=directory
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.remove(tmp_name)
        except FileNotFoundError:
            pass
        raise
