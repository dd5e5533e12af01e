"""
样本数据模型
定义经验样本、生成器规格、亏损概率和随机占优判定
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from ..core.errors import SampleError, ValidationError


@dataclass(frozen=True, eq=False)
class EmpiricalSample:
    """
    经验样本，值按升序存储以便查询分布函数

    Attributes:
        values: 单期收益 (或 n 期均值) 的观测值
        seed: 生成该样本所用的种子，外部数据为 None
        generator: 随机数生成算法名称
    """
    values: np.ndarray
    seed: Optional[int] = None
    generator: Optional[str] = None

    def __post_init__(self):
        arr = np.sort(np.asarray(self.values, dtype=float).ravel())
        if arr.size < 1:
            raise SampleError("样本不能为空")
        if not np.all(np.isfinite(arr)):
            raise SampleError("样本包含非有限值")
        arr.setflags(write=False)
        object.__setattr__(self, 'values', arr)

    @property
    def size(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.size

    def cdf(self, t):
        """经验分布函数 F̂(t) = #{x <= t}/N，支持数组输入"""
        counts = np.searchsorted(self.values, t, side='right')
        return counts / self.size

    def quantile(self, q: float) -> float:
        return float(np.quantile(self.values, q))

    def mean(self) -> float:
        return float(np.mean(self.values))

    def std(self, ddof: int = 1) -> float:
        if self.size <= ddof:
            return 0.0
        return float(np.std(self.values, ddof=ddof))

    def save_text(self, path: Union[str, Path]) -> Path:
        """
        导出为单列文本文件，每行一个值 (%.17g，可无损读回)

        Args:
            path: 输出路径

        Returns:
            写入的路径
        """
        file_path = Path(path)
        file_path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(file_path, self.values, fmt='%.17g')
        return file_path

    @classmethod
    def load_text(cls, path: Union[str, Path], seed: Optional[int] = None,
                  generator: Optional[str] = None) -> 'EmpiricalSample':
        """从单列文本文件读取样本"""
        try:
            values = np.loadtxt(path, dtype=float, ndmin=1)
        except (OSError, ValueError) as e:
            raise SampleError(f"样本文件读取失败: {path}: {e}") from e
        return cls(values, seed=seed, generator=generator)


class GeneratorFamily(str, Enum):
    """模拟分布族"""
    NORMAL = 'normal'
    SHIFTED_GAMMA = 'shifted_gamma'
    BONUS_MIXTURE = 'bonus_mixture'
    RESAMPLE = 'resample'


_REQUIRED_PARAMS = {
    GeneratorFamily.NORMAL: ('mu', 'sigma'),
    GeneratorFamily.SHIFTED_GAMMA: ('shape', 'rate', 'shift'),
    GeneratorFamily.BONUS_MIXTURE: ('mu', 'sigma', 'p', 'bonus'),
    GeneratorFamily.RESAMPLE: (),
}


@dataclass(frozen=True, eq=False)
class GeneratorSpec:
    """
    模拟规格

    Attributes:
        family: 分布族
        params: 分布参数
        horizon: n > 1 时每个样本值为 n 个单期收益的均值
        source: resample 族的原始单期观测
    """
    family: GeneratorFamily
    params: Dict[str, float] = field(default_factory=dict)
    horizon: int = 1
    source: Optional[np.ndarray] = None

    def __post_init__(self):
        family = GeneratorFamily(self.family)
        object.__setattr__(self, 'family', family)

        if isinstance(self.horizon, bool) or int(self.horizon) != self.horizon or self.horizon < 1:
            raise ValidationError(f"模拟期数必须为正整数，实际为 {self.horizon!r}")
        object.__setattr__(self, 'horizon', int(self.horizon))

        for key in _REQUIRED_PARAMS[family]:
            if key not in self.params:
                raise ValidationError(f"{family.value} 缺少参数: {key}")
            if not math.isfinite(float(self.params[key])):
                raise ValidationError(f"参数 {key} 必须为有限数")

        p = self.params
        if family in (GeneratorFamily.NORMAL, GeneratorFamily.BONUS_MIXTURE) and not p['sigma'] > 0:
            raise ValidationError(f"sigma 必须为正数，实际为 {p['sigma']!r}")
        if family == GeneratorFamily.SHIFTED_GAMMA and not (p['shape'] > 0 and p['rate'] > 0):
            raise ValidationError("shape 与 rate 必须为正数")
        if family == GeneratorFamily.BONUS_MIXTURE:
            if not 0.0 <= p['p'] <= 1.0:
                raise ValidationError(f"p 必须在 [0,1] 内，实际为 {p['p']!r}")
            if not p['bonus'] > 0:
                raise ValidationError(f"bonus 必须为正数，实际为 {p['bonus']!r}")
        if family == GeneratorFamily.RESAMPLE:
            if self.source is None or np.asarray(self.source).size < 1:
                raise ValidationError("resample 需要非空的原始观测")
            src = np.asarray(self.source, dtype=float).ravel().copy()
            src.setflags(write=False)
            object.__setattr__(self, 'source', src)

    @classmethod
    def normal(cls, mu: float, sigma: float, horizon: int = 1) -> 'GeneratorSpec':
        return cls(GeneratorFamily.NORMAL, {'mu': mu, 'sigma': sigma}, horizon)

    @classmethod
    def shifted_gamma(cls, shape: float, rate: float = 1.0, shift: float = 0.0,
                      horizon: int = 1) -> 'GeneratorSpec':
        return cls(GeneratorFamily.SHIFTED_GAMMA, {'shape': shape, 'rate': rate, 'shift': shift}, horizon)

    @classmethod
    def bonus_mixture(cls, mu: float, sigma: float, p: float, bonus: float,
                      horizon: int = 1) -> 'GeneratorSpec':
        return cls(GeneratorFamily.BONUS_MIXTURE, {'mu': mu, 'sigma': sigma, 'p': p, 'bonus': bonus}, horizon)

    @classmethod
    def resample(cls, values, horizon: int = 1) -> 'GeneratorSpec':
        return cls(GeneratorFamily.RESAMPLE, {}, horizon, np.asarray(values, dtype=float))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'family': self.family.value,
            'params': dict(sorted(self.params.items())),
            'horizon': self.horizon,
        }
        if self.source is not None:
            data['source_size'] = int(self.source.size)
        return data


@dataclass(frozen=True)
class LossProbability:
    """经验亏损概率及其二项标准误"""
    probability: float
    standard_error: float
    size: int


class FosdVerdict(str, Enum):
    """一阶随机占优判定"""
    A_DOMINATES = 'a_dominates'
    B_DOMINATES = 'b_dominates'
    TIE = 'tie'
    INCOMPARABLE = 'incomparable'
