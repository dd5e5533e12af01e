"""
Roy 安全第一准则分析器 - 核心包
广义准则 Ψ̂ 的估计、排序、反例演示与蒙特卡罗验证
"""

__version__ = "1.0.0"
__author__ = "Roy Criterion Team"
