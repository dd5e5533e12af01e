"""
附加收益资产模型
基础资产以概率 p 获得常数附加收益 B
"""
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict

from ..core.errors import ValidationError


@dataclass(frozen=True)
class BonusAsset:
    """
    附加收益资产

    Attributes:
        mu: 基础资产均值 (> 0)
        sigma: 基础资产波动率 (> 0)
        p: 获得附加收益的概率 (0 <= p <= 1)
        bonus: 附加收益 B (> 0)
    """
    mu: float
    sigma: float
    p: float
    bonus: float

    def __post_init__(self):
        for name in ('mu', 'sigma', 'p', 'bonus'):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} 必须为有限数")
        if not self.mu > 0:
            raise ValidationError(f"mu 必须为正数，实际为 {self.mu!r}")
        if not self.sigma > 0:
            raise ValidationError(f"sigma 必须为正数，实际为 {self.sigma!r}")
        if not self.bonus > 0:
            raise ValidationError(f"bonus 必须为正数，实际为 {self.bonus!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"p 必须在 [0,1] 内，实际为 {self.p!r}")

    @property
    def base_sharpe(self) -> float:
        return self.mu / self.sigma

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
