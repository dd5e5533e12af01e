"""
评分数据模型
定义准则值、计算方法标签和诊断信息
"""
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional


class ScoreMethod(str, Enum):
    """准则值的计算方法"""
    SHARPE = 'sharpe'
    SR3 = 'sr3'
    EXACT = 'exact'
    EDGEWORTH_INVERT = 'edgeworth_invert'
    CF_NEWTON = 'cf_newton'
    CF_QUADRATIC = 'cf_quadratic'


@dataclass(frozen=True)
class ScoreDiagnostics:
    """
    求解诊断信息

    Attributes:
        iterations: 迭代次数 (非迭代方法为 0)
        residual: 所解方程的 |F(Ψ̂)|
        root_branch: 二次公式所用的根分支符号 (+1/-1)，0 表示退化分支
        converged: 是否收敛
        fallback: 是否启用了二分回退
        probability: 反演所用的亏损概率 (若有)
        standard_error: 经验方法的传播标准误 (若有)
        trajectory: Newton 迭代轨迹
    """
    iterations: int = 0
    residual: float = 0.0
    root_branch: int = 0
    converged: bool = True
    fallback: bool = False
    probability: Optional[float] = None
    standard_error: Optional[float] = None
    trajectory: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class RiskScore:
    """
    准则值

    Attributes:
        value: 准则值 (单位 period^-1/2)
        method: 计算方法
        order: 截断阶数 (edgeworth 的修正括号数、cf-newton 的项数；其余为 None)
        diagnostics: 诊断信息
    """
    value: float
    method: ScoreMethod
    order: Optional[int] = None
    diagnostics: ScoreDiagnostics = field(default_factory=ScoreDiagnostics)

    @property
    def label(self) -> str:
        """方法标签，如 cf_newton_2、edgeworth_invert_1"""
        if self.order is None:
            return self.method.value
        return f"{self.method.value}_{self.order}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': self.value,
            'method': self.label,
            'diagnostics': self.diagnostics.to_dict(),
        }


@dataclass(frozen=True)
class SkewPreference:
    """
    偏度偏好分析结果

    Attributes:
        sign: sign(c² − 1)；正值表示超越概率随 ζ3 增加
        c_statistic: √n(μ − r₀)/σ
        crossover: 偏好翻转的临界期数 n* = σ²/(μ − r₀)²；μ <= r₀ 时为 None
    """
    sign: int
    c_statistic: float
    crossover: Optional[float]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class EdgeworthResult:
    """Edgeworth 近似值及其是否落在 [0,1] 内"""
    value: float
    order: int
    in_unit_interval: bool
