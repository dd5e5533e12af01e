"""
特殊函数模块
标准正态分布的密度、分布函数、分位数，以及概率论 Hermite 多项式
"""
import math
from typing import List

from .errors import DomainError, UnsupportedOrderError

# 展开式最多用到 He_8，保留少量余量
MAX_HERMITE_ORDER = 10

_SQRT_2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Acklam 有理逼近系数 (相对误差约 1.15e-9，再做一次 Halley 修正)
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425
_HALLEY_EXP_LIMIT = 709.0


def _check_order(k: int, lowest: int = 0) -> None:
    if k < lowest or k > MAX_HERMITE_ORDER:
        raise UnsupportedOrderError(k, MAX_HERMITE_ORDER)


def hermite(k: int, x: float) -> float:
    """
    概率论 Hermite 多项式 He_k(x)，三项递推求值

    Args:
        k: 阶数 (0..10)
        x: 自变量

    Returns:
        He_k(x)
    """
    _check_order(k)
    if k == 0:
        return 1.0
    prev, cur = 1.0, x
    for j in range(1, k):
        prev, cur = cur, x * cur - j * prev
    return cur


def hermite_sequence(k_max: int, x: float) -> List[float]:
    """
    一次递推得到 He_0(x)..He_kmax(x)

    Args:
        k_max: 最高阶数
        x: 自变量

    Returns:
        长度为 k_max+1 的列表
    """
    _check_order(k_max)
    values = [1.0]
    if k_max >= 1:
        values.append(x)
    for j in range(1, k_max):
        values.append(x * values[j] - j * values[j - 1])
    return values


def hermite_deriv(k: int, x: float) -> float:
    """He'_k(x) = k·He_{k-1}(x)，k 必须在 1..10"""
    _check_order(k, lowest=1)
    return k * hermite(k - 1, x)


def norm_pdf(x: float) -> float:
    """标准正态密度"""
    return math.exp(-0.5 * x * x) / _SQRT_2PI


def norm_cdf(x: float) -> float:
    """标准正态分布函数，经互补误差函数计算以保留尾部精度"""
    return 0.5 * math.erfc(-x / _SQRT_2)


def _acklam_lower(q: float) -> float:
    """q <= 0.5 时的初始近似"""
    if q < _P_LOW:
        r = math.sqrt(-2.0 * math.log(q))
        num = ((((_C[0] * r + _C[1]) * r + _C[2]) * r + _C[3]) * r + _C[4]) * r + _C[5]
        den = (((_D[0] * r + _D[1]) * r + _D[2]) * r + _D[3]) * r + 1.0
        return num / den
    r = q - 0.5
    s = r * r
    num = (((((_A[0] * s + _A[1]) * s + _A[2]) * s + _A[3]) * s + _A[4]) * s + _A[5]) * r
    den = ((((_B[0] * s + _B[1]) * s + _B[2]) * s + _B[3]) * s + _B[4]) * s + 1.0
    return num / den


def norm_quantile(q: float) -> float:
    """
    标准正态分位数 Φ⁻¹(q)

    Acklam 有理逼近后做一次 Halley 修正；上半区通过对称性在下尾求解，
    1−q 在 q >= 0.5 时精确可表示。

    Args:
        q: 概率，必须严格在 (0,1) 内

    Returns:
        分位数

    Raises:
        DomainError: q 不在 (0,1) 内
    """
    if not (0.0 < q < 1.0):
        raise DomainError(f"分位数要求 0 < q < 1，实际为 {q!r}")
    if q > 0.5:
        return -norm_quantile(1.0 - q)

    x = _acklam_lower(q)
    # exp(x²/2) 在 x²/2 > 709 时溢出，此时保留初始近似
    if 0.5 * x * x > _HALLEY_EXP_LIMIT:
        return x
    # Halley 修正
    e = norm_cdf(x) - q
    u = e * _SQRT_2PI * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)
