"""
Edgeworth 展开模块
标准化样本均值分布函数的 Edgeworth 近似、超越概率、Chebyshev 上界和偏度偏好分析
"""
import math

from ..models.cumulants import Cumulants, Horizon
from ..models.score import EdgeworthResult, SkewPreference
from ..utils.logger import get_logger
from .errors import DomainError, ValidationError
from .special_fn import hermite_sequence, norm_cdf, norm_pdf

logger = get_logger('edgeworth')

MAX_EDGEWORTH_ORDER = 3

# 修正括号系数，依次对应 ζ3·He2, ζ4·He3, ζ3²·He5, ζ5·He4, ζ3ζ4·He6, ζ3³·He8
EDGEWORTH_COEFFICIENTS = (1.0 / 6.0, 1.0 / 24.0, 1.0 / 72.0, 1.0 / 120.0, 1.0 / 144.0, 1.0 / 1296.0)

# 每一阶所需 Hermite 多项式的最高阶数
_HERMITE_NEEDED = {0: 0, 1: 2, 2: 5, 3: 8}


def _check_inputs(cumulants: Cumulants, n: float, order: int) -> None:
    if isinstance(order, bool) or order not in _HERMITE_NEEDED:
        raise ValidationError(f"Edgeworth 阶数必须在 0..{MAX_EDGEWORTH_ORDER}，实际为 {order!r}")
    if not (n > 0) or not math.isfinite(n):
        raise ValidationError(f"期数必须为正数，实际为 {n!r}")
    if order >= 1:
        cumulants.require(order + 2)


def edgeworth_cdf_detail(cumulants: Cumulants, n: float, t: float, order: int) -> EdgeworthResult:
    """
    Pr{√n(m̄−μ)/σ <= t} 的 Edgeworth 近似

    展开式在 t = −c 处书写：Hermite 自变量取 c = −t，密度权重 φ(c) = φ(−t)。
    结果不截断到 [0,1]，越界时 in_unit_interval 为 False。

    Args:
        cumulants: 单期累积量 (至少提供到 ζ_{order+2})
        n: 期数
        t: 分位点
        order: 保留的修正括号数 (0..3)

    Returns:
        EdgeworthResult
    """
    _check_inputs(cumulants, n, order)

    c = -t
    value = norm_cdf(t)
    if order >= 1:
        he = hermite_sequence(_HERMITE_NEEDED[order], c)
        phi = norm_pdf(c)
        a3, a4, a33, a5, a34, a333 = EDGEWORTH_COEFFICIENTS
        z3 = cumulants.zeta_at(3)
        sqrt_n = math.sqrt(n)

        value -= phi * (a3 * z3 / sqrt_n * he[2])
        if order >= 2:
            z4 = cumulants.zeta_at(4)
            value += phi * (a4 * z4 / n * he[3] + a33 * z3 * z3 / n * he[5])
        if order >= 3:
            z5 = cumulants.zeta_at(5)
            n32 = n * sqrt_n
            value -= phi * (a5 * z5 / n32 * he[4]
                            + a34 * z3 * z4 / n32 * he[6]
                            + a333 * z3 ** 3 / n32 * he[8])

    inside = 0.0 <= value <= 1.0
    if not inside:
        logger.warning(f"Edgeworth 近似越界: order={order}, n={n}, t={t}, value={value!r}")
    return EdgeworthResult(value=value, order=order, in_unit_interval=inside)


def edgeworth_cdf(cumulants: Cumulants, n: float, t: float, order: int) -> float:
    """Edgeworth 近似值 (不截断)，诊断见 edgeworth_cdf_detail"""
    return edgeworth_cdf_detail(cumulants, n, t, order).value


def exceed_probability(cumulants: Cumulants, horizon: Horizon) -> float:
    """
    Pr{m̄ >= r₀} 的一阶近似 Φ(c) + φ(c)/√n·ζ3/6·(c²−1)

    Args:
        cumulants: 单期累积量 (需要 ζ3)
        horizon: 期限与灾难收益率

    Returns:
        超越概率 (不截断)
    """
    z3 = cumulants.zeta_at(3)
    c = horizon.c_statistic(cumulants)
    return norm_cdf(c) + norm_pdf(c) / horizon.sqrt_n * (EDGEWORTH_COEFFICIENTS[0] * z3 * (c * c - 1.0))


def chebyshev_loss_bound(snr: float) -> float:
    """
    Chebyshev 不等式给出的亏损概率上界 min(1, 1/snr²)

    Args:
        snr: (μ − r₀)/σ，必须为正

    Raises:
        DomainError: snr <= 0 时上界无定义
    """
    if not (snr > 0):
        raise DomainError(f"Chebyshev 上界要求 r₀ < μ (snr > 0)，实际 snr={snr!r}")
    return min(1.0, 1.0 / (snr * snr))


def skew_preference(cumulants: Cumulants, horizon: Horizon) -> SkewPreference:
    """
    偏度偏好符号 sign(c² − 1) 与临界期数 n* = σ²/(μ − r₀)²

    正号表示超越概率随 ζ3 增加 (偏好正偏)，负号表示偏好负偏。

    Args:
        cumulants: 单期累积量
        horizon: 期限与灾难收益率

    Returns:
        SkewPreference；μ <= r₀ 时 crossover 为 None
    """
    c = horizon.c_statistic(cumulants)
    gap = c * c - 1.0
    sign = (gap > 0) - (gap < 0)

    excess = cumulants.mean - horizon.disaster_rate
    crossover = cumulants.volatility ** 2 / excess ** 2 if excess > 0 else None
    return SkewPreference(sign=sign, c_statistic=c, crossover=crossover)
