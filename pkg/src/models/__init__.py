"""
数据模型模块
定义累积量、准则值、样本、反例资产和报告等数据结构
"""
