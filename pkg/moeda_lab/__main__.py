#!/usr/bin/env python3
"""
moeda-lab 命令行入口点

诊断信息写标准错误，数据写文件或标准输出（--out -）。
"""

import sys

from moeda_lab.utils.logger import init_logging, logger
from moeda_lab.utils.tiny_func import simplify_exception


def main() -> None:
    """主入口函数"""
    # 首先初始化日志系统
    init_logging()

    from moeda_lab.app import main as app_main

    try:
        code = app_main()
    except KeyboardInterrupt:
        logger.info("已中断")
        code = 130
    except Exception as e:
        logger.error("❌ 运行失败: %s", simplify_exception(e))
        code = 3
    sys.exit(code)


if __name__ == "__main__":
    main()
