"""
异常定义模块
统一的异常层次结构，CLI 根据异常类型映射退出码
"""
from typing import Any, Dict, List, Optional


class RoyCriterionError(Exception):
    """所有本项目异常的基类"""


# ---------------------------------------------------------------- 输入校验类

class ValidationError(RoyCriterionError, ValueError):
    """输入参数不合法"""


class UnsupportedOrderError(ValidationError):
    """Hermite 多项式阶数超出支持范围"""

    def __init__(self, order: int, max_order: int):
        self.order = order
        self.max_order = max_order
        super().__init__(f"不支持的阶数: {order} (允许范围 0..{max_order})")


class DomainError(ValidationError):
    """参数超出函数定义域"""


class MissingCumulantError(ValidationError):
    """缺少所需的标准化累积量"""

    def __init__(self, order: int, available: int):
        self.order = order
        self.available = available
        super().__init__(f"缺少 ζ{order}，当前只提供到 ζ{available}")


class SampleError(ValidationError):
    """样本退化或长度不足"""


class InputError(ValidationError):
    """收益率表格解析失败"""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"第 {row} 行")
        if column is not None:
            location.append(f"列 '{column}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")


# ---------------------------------------------------------------- 数值失败类

class NumericalError(RoyCriterionError):
    """数值计算失败"""


class ApproximationBreakdownError(NumericalError):
    """Edgeworth 概率落在 (0,1) 之外，展开式失效"""

    def __init__(self, value: float):
        self.value = value
        super().__init__(f"Edgeworth 近似概率 {value!r} 不在 (0,1) 内，展开式失效")


class NoRealRootError(NumericalError):
    """二次截断的判别式为负"""

    def __init__(self, discriminant: float):
        self.discriminant = discriminant
        super().__init__(f"判别式为负 ({discriminant!r})，Cornish-Fisher 二次截断无实根")


class SolverError(NumericalError):
    """Newton 迭代未收敛"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)

    @property
    def trajectory(self) -> List[float]:
        return self.diagnostics.get('trajectory', [])


class SingularStepError(SolverError):
    """Newton 步导数过小"""


class SaturatedProbabilityError(NumericalError):
    """亏损概率为 0 或 1，准则值饱和为 ±∞"""

    def __init__(self, probability: float):
        self.probability = probability
        # 概率为 0 时 Ψ̂ → +∞
        self.direction = 1 if probability <= 0.0 else -1
        sign = '+' if self.direction > 0 else '-'
        super().__init__(f"亏损概率 {probability!r} 已饱和，准则值为 {sign}∞")


# ---------------------------------------------------------------- 构造类

class InfeasibleParametersError(RoyCriterionError):
    """附加收益构造的可行性条件不满足"""

    def __init__(self, message: str, condition: str):
        self.condition = condition
        super().__init__(message)


class ConstructionError(RoyCriterionError):
    """构造出的资产在探测网格上违反一阶随机占优"""
