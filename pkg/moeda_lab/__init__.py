"""
moeda-lab: 多目标分布估计算法（MOEDA）实验室

在可控冲突的双目标欺骗性问题上比较 UMDA、meCGA 与 NSGA-II，
测量保持整个 Pareto 前沿所需的种群规模与评估次数。
"""

__version__ = "0.1.0"
__author__ = "moeda-lab"
__description__ = "多目标分布估计算法的可扩展性实验室"
