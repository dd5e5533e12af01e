"""
控制台输出美化模块
提供统一的控制台输出格式和样式；提示信息写标准错误，报告正文写标准输出
"""
import sys
from typing import Any, Dict, TextIO


class ConsoleOutput:
    """统一的控制台输出管理器"""

    stream: TextIO = None

    @classmethod
    def _out(cls) -> TextIO:
        return cls.stream or sys.stdout

    @staticmethod
    def _err() -> TextIO:
        return sys.stderr

    @classmethod
    def print_header(cls, title: str, step: int = None):
        """打印步骤标题"""
        out = cls._out()
        if step:
            print(f"\n{'='*60}", file=out)
            print(f"📋 步骤{step}：{title}", file=out)
            print(f"{'='*60}", file=out)
        else:
            print(f"\n🎯 {title}", file=out)

    @classmethod
    def print_line(cls, text: str = ""):
        """打印报告正文"""
        print(text, file=cls._out())

    @classmethod
    def print_error(cls, message: str):
        """打印错误信息"""
        print(f"❌ {message}", file=cls._err())

    @classmethod
    def print_warning(cls, message: str):
        """打印警告信息"""
        print(f"⚠️  {message}", file=cls._err())

    @classmethod
    def print_info(cls, message: str):
        """打印信息"""
        print(f"📡 {message}", file=cls._out())

    @classmethod
    def print_summary(cls, title: str, stats: Dict[str, Any]):
        """打印汇总信息"""
        out = cls._out()
        print(f"\n{'='*60}", file=out)
        print(f"📊 {title}", file=out)
        print(f"{'='*60}", file=out)
        for key, value in stats.items():
            print(f"📈 {key}: {value}", file=out)
