"""
收益率表格模块
读取分隔符文本格式的多资产收益率数据
"""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd

from ..utils.logger import get_logger
from .errors import InputError

logger = get_logger('returns_table')

DELIMITERS = {'comma': ',', 'tab': '\t'}


@dataclass(frozen=True, eq=False)
class ReturnsTable:
    """
    收益率表格

    Attributes:
        names: 资产名称 (表头)
        values: 行为期间、列为资产的对数收益率矩阵
        period: 每行代表的期间标签
        source: 来源文件
    """
    names: List[str]
    values: np.ndarray
    period: str = 'day'
    source: Optional[str] = None

    @property
    def n_rows(self) -> int:
        return int(self.values.shape[0])

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.names.index(name)]


def _detect_delimiter(path: Path) -> str:
    """根据表头行在逗号和制表符之间选择分隔符"""
    with open(path, 'r', encoding='utf-8-sig') as f:
        for line in f:
            if line.strip():
                return '\t' if line.count('\t') > line.count(',') else ','
    raise InputError("文件为空", row=1)


def _content_line_numbers(path: Path, sep: str) -> List[int]:
    """
    非空行的文件行号 (从 1 开始)

    与 pandas 跳过空行的规则一致：不含分隔符且只有空白的行视为空行
    """
    with open(path, 'r', encoding='utf-8-sig') as f:
        return [k for k, line in enumerate(f, start=1) if sep in line or line.strip()]


def read_returns_table(path: Union[str, Path], delimiter: Optional[str] = None,
                       period: str = 'day', min_rows: int = 8) -> ReturnsTable:
    """
    读取收益率表格

    第一个非空行为资产名称，之后每行一个期间。空行跳过，错误中的行号为文件中的实际行号。

    Args:
        path: 文件路径
        delimiter: 分隔符，','、'\\t' 或 'comma'/'tab'；默认自动检测
        period: 期间标签
        min_rows: 最少数据行数

    Returns:
        ReturnsTable

    Raises:
        InputError: 文件不可读、表格不规整、单元格缺失或非数值、行数不足
    """
    file_path = Path(path)
    if not file_path.is_file():
        raise InputError(f"文件不存在或不可读: {file_path}")

    if delimiter is None:
        sep = _detect_delimiter(file_path)
    else:
        sep = DELIMITERS.get(delimiter, delimiter)
        if sep not in DELIMITERS.values():
            raise InputError(f"不支持的分隔符: {delimiter!r}")

    try:
        raw = pd.read_csv(file_path, sep=sep, header=None, dtype=str, keep_default_na=False,
                          engine='python', encoding='utf-8-sig', skip_blank_lines=True)
    except pd.errors.ParserError as e:
        raise InputError(f"表格不规整: {e}") from e
    except pd.errors.EmptyDataError as e:
        raise InputError("文件为空", row=1) from e
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"文件读取失败: {e}") from e

    lines = _content_line_numbers(file_path, sep)
    if len(lines) != len(raw):
        # 引号内换行等情况下无法逐行对应，退回按表格行计
        lines = list(range(1, len(raw) + 1))
    header_line = lines[0]

    names = [str(name).strip() for name in raw.iloc[0].tolist()]
    for j, name in enumerate(names):
        if not name:
            raise InputError(f"第 {j + 1} 列缺少资产名称", row=header_line)
    duplicated = sorted({name for name in names if names.count(name) > 1})
    if duplicated:
        raise InputError(f"资产名称重复: {duplicated}", row=header_line)

    body = raw.iloc[1:].reset_index(drop=True)
    if len(body) < min_rows:
        raise InputError(f"数据行数 {len(body)} 少于所需的 {min_rows} 行")

    columns = []
    for j, name in enumerate(names):
        cells = body.iloc[:, j]
        missing = cells.isna() | (cells.fillna('').str.strip() == '')
        if missing.any():
            i = int(np.argmax(missing.to_numpy()))
            raise InputError("单元格缺失", row=lines[i + 1], column=name)
        numeric = pd.to_numeric(cells.str.strip(), errors='coerce').to_numpy(dtype=float)
        bad = ~np.isfinite(numeric)
        if bad.any():
            i = int(np.argmax(bad))
            raise InputError(f"非数值单元格: {cells.iloc[i]!r}", row=lines[i + 1], column=name)
        columns.append(numeric)

    values = np.column_stack(columns)
    values.setflags(write=False)
    logger.info(f"读取收益率表格: {file_path}, {values.shape[0]} 行 × {values.shape[1]} 列")
    return ReturnsTable(names=names, values=values, period=period, source=str(file_path))
