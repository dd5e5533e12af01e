"""
进度管理模块
分块模拟的进度条显示
"""
import sys
from typing import Optional

from tqdm import tqdm


class ProgressManager:
    """进度管理器，包装 tqdm，输出到标准错误"""

    def __init__(self, total: int, desc: str, silent: bool = False, unit: str = "块"):
        """
        初始化进度管理器

        Args:
            total: 总任务数
            desc: 任务描述
            silent: 静默模式不显示进度条
            unit: 进度单位
        """
        self.total = total
        self.desc = desc
        self.current = 0
        # 只有一个任务时进度条没有意义
        disable = silent or total <= 1
        self._bar: Optional[tqdm] = tqdm(
            total=total, desc=desc, unit=unit, file=sys.stderr, disable=disable, leave=False
        )

    def update(self, step: int = 1):
        """更新进度"""
        self.current += step
        self._bar.update(step)

    def close(self):
        """完成进度显示"""
        self._bar.close()

    def __enter__(self) -> 'ProgressManager':
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()
        return False
