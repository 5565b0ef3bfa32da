"""命令入口。

app.dispatch 按命令名从 router 中取处理函数。
此处只负责聚合各命令模块。
"""

from moeda_lab.base.response import CommandRouter

from .experiments import router as experiments_router
from .inspect import router as inspect_router

router = CommandRouter()
router.include_router(inspect_router)
router.include_router(experiments_router)
