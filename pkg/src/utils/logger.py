"""
日志系统模块
提供统一的日志管理功能
"""
import logging
import logging.handlers
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

# 所有日志器挂在该命名空间下，便于 logging.yaml 统一配置
ROOT_LOGGER_NAME = 'roy'


class Logger:
    """统一的日志管理系统"""

    def __init__(self, name: str, log_level: Optional[str] = None):
        """
        初始化日志器

        Args:
            name: 日志器名称 (模块名)
            log_level: 日志级别，None 表示沿用上级配置
        """
        self.name = name
        self.logger = logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")
        if log_level:
            self.logger.setLevel(getattr(logging, log_level.upper(), logging.INFO))

        _ensure_root_handler()

    def debug(self, message: str):
        """记录调试信息"""
        self.logger.debug(message)

    def info(self, message: str):
        """记录信息"""
        self.logger.info(message)

    def warning(self, message: str):
        """记录警告"""
        self.logger.warning(message)

    def error(self, message: str):
        """记录错误"""
        self.logger.error(message)

    def critical(self, message: str):
        """记录严重错误"""
        self.logger.critical(message)

    def is_debug(self) -> bool:
        return self.logger.isEnabledFor(logging.DEBUG)

    def log_function_call(self, func_name: str, args: dict = None):
        """记录函数调用"""
        if not self.is_debug():
            return
        if args:
            self.debug(f"调用函数: {func_name}, 参数: {args}")
        else:
            self.debug(f"调用函数: {func_name}")

    def log_performance(self, operation: str, duration: float):
        """记录性能信息"""
        self.info(f"性能统计: {operation} 耗时 {duration:.2f}秒")


def _ensure_root_handler():
    """
    未经 logging.yaml 配置时，给根日志器挂一个标准错误输出处理器

    标准输出保留给报告内容
    """
    root = logging.getLogger(ROOT_LOGGER_NAME)
    if root.handlers:
        return
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(logging.Formatter(
        '%(asctime)s [%(levelname)s] %(message)s',
        datefmt='%H:%M:%S'
    ))
    root.addHandler(console_handler)
    root.setLevel(logging.WARNING)
    root.propagate = False


def add_file_handler(log_dir: str = "logs", date: str = None, level: str = "DEBUG") -> Path:
    """
    为根日志器追加按日期命名的文件处理器

    Args:
        log_dir: 日志目录
        date: 日期字符串，用于日志文件命名
        level: 文件记录级别

    Returns:
        日志文件路径
    """
    date = date or datetime.now().strftime('%Y-%m-%d')
    directory = Path(log_dir)
    directory.mkdir(parents=True, exist_ok=True)
    log_file = directory / f"{date}.log"

    handler = logging.FileHandler(log_file, encoding='utf-8')
    handler.setFormatter(logging.Formatter('%(asctime)s [%(levelname)s] %(name)s: %(message)s'))
    handler.setLevel(getattr(logging, level.upper(), logging.DEBUG))
    root = logging.getLogger(ROOT_LOGGER_NAME)
    root.addHandler(handler)
    return log_file


def set_console_level(level: str):
    """调整根日志器级别 (--verbose / --silent 使用)"""
    _ensure_root_handler()
    logging.getLogger(ROOT_LOGGER_NAME).setLevel(getattr(logging, level.upper(), logging.WARNING))


# 便捷函数
def get_logger(name: str) -> Logger:
    """获取日志器"""
    return Logger(name)
