"""
累积量数据模型
定义收益分布的均值、波动率、标准化累积量以及投资期限
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

from ..core.errors import MissingCumulantError, ValidationError

# 最高支持到 ζ7
MAX_CUMULANT_ORDER = 7


@dataclass(frozen=True)
class Cumulants:
    """
    单期收益分布的累积量

    Attributes:
        mean: 单期均值 μ
        volatility: 单期波动率 σ (> 0)
        zeta: 标准化累积量 (ζ3, ζ4, ..., ζK)，K <= 7
    """
    mean: float
    volatility: float
    zeta: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        """初始化后校验"""
        object.__setattr__(self, 'zeta', tuple(float(z) for z in self.zeta))

        if not (self.volatility > 0.0) or not math.isfinite(self.volatility):
            raise ValidationError(f"波动率必须为正数，实际为 {self.volatility!r}")
        if not math.isfinite(self.mean):
            raise ValidationError(f"均值必须为有限数，实际为 {self.mean!r}")
        if len(self.zeta) > MAX_CUMULANT_ORDER - 2:
            raise ValidationError(f"最多支持到 ζ{MAX_CUMULANT_ORDER}，实际给出 {len(self.zeta)} 个")
        if any(not math.isfinite(z) for z in self.zeta):
            raise ValidationError(f"标准化累积量必须为有限数: {self.zeta}")

        # 偏度/超额峰度的可实现性约束
        if len(self.zeta) >= 2:
            skew, exkurt = self.zeta[0], self.zeta[1]
            if exkurt < skew * skew - 2.0:
                raise ValidationError(
                    f"累积量不可实现: ζ4={exkurt!r} < ζ3²-2={skew * skew - 2.0!r}"
                )

    @property
    def max_order(self) -> int:
        """已提供的最高累积量阶数 (仅有均值和方差时为 2)"""
        return 2 + len(self.zeta)

    def zeta_at(self, order: int) -> float:
        """
        获取 ζ_i

        Args:
            order: 累积量阶数 (>= 3)

        Returns:
            标准化累积量

        Raises:
            MissingCumulantError: 未提供该阶
        """
        if order < 3 or order > self.max_order:
            raise MissingCumulantError(order, self.max_order)
        return self.zeta[order - 3]

    def require(self, order: int) -> None:
        """确认至少提供到 ζ_order"""
        if order > self.max_order:
            raise MissingCumulantError(order, self.max_order)

    def snr(self, disaster_rate: float = 0.0) -> float:
        """(μ − r₀)/σ"""
        return (self.mean - disaster_rate) / self.volatility

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典格式"""
        data: Dict[str, Any] = {'mean': self.mean, 'volatility': self.volatility}
        for i, z in enumerate(self.zeta, start=3):
            data[f'zeta{i}'] = z
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Cumulants':
        """从字典创建实例，ζ 须连续给出"""
        for key in ('mean', 'volatility'):
            if key not in data:
                raise ValidationError(f"缺少必需字段: {key}")
        zeta = []
        for i in range(3, MAX_CUMULANT_ORDER + 1):
            if f'zeta{i}' not in data:
                break
            zeta.append(float(data[f'zeta{i}']))
        return cls(mean=float(data['mean']), volatility=float(data['volatility']), zeta=tuple(zeta))


@dataclass(frozen=True)
class Horizon:
    """
    投资期限与灾难收益率

    Attributes:
        n_periods: 独立观测期数 n (> 0，可为实数以表达年化约定)
        disaster_rate: 单期灾难收益率 r₀
    """
    n_periods: float = 1.0
    disaster_rate: float = 0.0

    def __post_init__(self):
        if not (self.n_periods > 0.0) or not math.isfinite(self.n_periods):
            raise ValidationError(f"期数必须为正数，实际为 {self.n_periods!r}")
        if not math.isfinite(self.disaster_rate):
            raise ValidationError(f"灾难收益率必须为有限数，实际为 {self.disaster_rate!r}")

    @property
    def sqrt_n(self) -> float:
        return math.sqrt(self.n_periods)

    def c_statistic(self, cumulants: Cumulants) -> float:
        """c = √n(μ − r₀)/σ"""
        return self.sqrt_n * cumulants.snr(self.disaster_rate)

    @classmethod
    def from_total_threshold(cls, n_periods: float, total_return: float) -> 'Horizon':
        """
        由整个期限上的总收益阈值换算单期灾难收益率 r₀ = R_total / n

        Args:
            n_periods: 期数
            total_return: 整个期限的对数收益阈值
        """
        if not (n_periods > 0.0):
            raise ValidationError(f"期数必须为正数，实际为 {n_periods!r}")
        return cls(n_periods=n_periods, disaster_rate=total_return / n_periods)

    def to_dict(self) -> Dict[str, Any]:
        return {'n_periods': self.n_periods, 'disaster_rate': self.disaster_rate}
