"""
基础设施：异常、国际化、上下文、命令结果
"""
