"""
文件操作工具模块
报告的 JSON 序列化与写出
"""
import json
from pathlib import Path
from typing import Any, Union

from .logger import get_logger


def dumps_json(data: Any, indent: int = 2) -> str:
    """
    序列化为 JSON 文本

    键排序、浮点数按 repr 输出全精度，同样的输入得到逐字节相同的结果

    Args:
        data: 要序列化的数据
        indent: JSON缩进

    Returns:
        JSON 字符串 (以换行结尾)
    """
    return json.dumps(data, ensure_ascii=False, indent=indent, sort_keys=True, allow_nan=True) + "\n"


class FileManager:
    """报告文件写出，失败时记录日志并返回 False"""

    def __init__(self, logger_name: str = "file_manager"):
        self.logger = get_logger(logger_name)

    def save_json(self, data: Any, path: Union[str, Path], indent: int = 2) -> bool:
        """按 dumps_json 的格式写出报告"""
        return self.save_text(dumps_json(data, indent), path)

    def save_text(self, content: str, path: Union[str, Path]) -> bool:
        """
        写出文本，父目录不存在时创建

        换行固定为 LF，保证不同平台上的输出逐字节一致
        """
        file_path = Path(path)
        try:
            file_path.parent.mkdir(parents=True, exist_ok=True)
            with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(content)
        except OSError as e:
            self.logger.error(f"写入失败: {file_path}: {e}")
            return False
        self.logger.info(f"已写入 {file_path} ({len(content)} 字符)")
        return True
