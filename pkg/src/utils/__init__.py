"""
工具模块
包含日志、进度管理、文件操作等工具函数
"""
