"""配置文件读取

格式为扁平的 key=value 文本：
- `#` 开头的行与空行忽略
- key 与命令行长参数同名，`-` 与 `_` 等价（如 n-start=32）
- 列表值用逗号分隔（如 ell=8,12,16）
"""

from pathlib import Path

from moeda_lab.base.exceptions import UsageError
from moeda_lab.base.i18n import CliI18n


def normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_")


def read_config_file(path: str | Path) -> dict[str, str]:
    """读取配置文件为 {字段名: 原始字符串}

    :raises UsageError: 文件不存在或某行不是 key=value
    """
    path = Path(path)
    if not path.is_file():
        raise UsageError(CliI18n.CONFIG_FILE_NOT_FOUND, data="config", path=str(path))
    values: dict[str, str] = {}
    for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise UsageError(
                CliI18n.CONFIG_LINE_INVALID, data="config", path=str(path), line=number
            )
        values[normalize_key(key)] = value.strip()
    return values
