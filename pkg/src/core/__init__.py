"""
核心功能模块
包含特殊函数、累积量、展开式、准则求解、反例构造和蒙特卡罗模拟
"""
