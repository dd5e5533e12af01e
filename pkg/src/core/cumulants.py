"""
累积量模块
标准化累积量的估计、期限缩放和解析构造
"""
import math
from typing import Sequence, Union

import numpy as np

from ..models.cumulants import MAX_CUMULANT_ORDER, Cumulants
from ..models.sample import EmpiricalSample
from ..utils.logger import get_logger
from .errors import SampleError, ValidationError

logger = get_logger('cumulants')


def _check_order(max_order: int) -> None:
    if isinstance(max_order, bool) or int(max_order) != max_order or not 3 <= max_order <= MAX_CUMULANT_ORDER:
        raise ValidationError(f"累积量阶数必须在 3..{MAX_CUMULANT_ORDER}，实际为 {max_order!r}")


def scale_to_horizon(cumulants: Cumulants, n: float) -> Cumulants:
    """
    标准化样本均值 Y = √n(m̄−μ)/σ 的累积量

    Args:
        cumulants: 单期累积量
        n: 期数 (> 0)

    Returns:
        均值 0、波动率 1、ζ_i ↦ n^{1−i/2}·ζ_i 的累积量
    """
    if not (n > 0) or not math.isfinite(n):
        raise ValidationError(f"期数必须为正数，实际为 {n!r}")
    zeta = tuple(n ** (1.0 - 0.5 * i) * z for i, z in enumerate(cumulants.zeta, start=3))
    return Cumulants(mean=0.0, volatility=1.0, zeta=zeta)


def _central_to_cumulants(m: Sequence[float], max_order: int) -> list:
    """中心矩 m[2..] 转换为累积量 κ3..κK"""
    m2, m3 = m[2], m[3]
    kappa = [m3]
    if max_order >= 4:
        kappa.append(m[4] - 3.0 * m2 * m2)
    if max_order >= 5:
        kappa.append(m[5] - 10.0 * m3 * m2)
    if max_order >= 6:
        kappa.append(m[6] - 15.0 * m[4] * m2 - 10.0 * m3 * m3 + 30.0 * m2 ** 3)
    if max_order >= 7:
        kappa.append(m[7] - 21.0 * m[5] * m2 - 35.0 * m[4] * m3 + 210.0 * m3 * m2 * m2)
    return kappa


def estimate_cumulants(sample: Union[EmpiricalSample, Sequence[float], np.ndarray],
                       max_order: int = 4) -> Cumulants:
    """
    由样本估计累积量

    均值和波动率取样本值 (方差按 1/(N−1) 归一)；ζ_i 由朴素中心矩插值换算为累积量
    再除以 σ^i。不做 k-统计量的无偏修正，偏差为 O(1/N)。

    Args:
        sample: 经验样本或数值序列
        max_order: 估计到 ζ_max_order (3..7)

    Returns:
        Cumulants

    Raises:
        SampleError: 样本过短或方差为零
    """
    _check_order(max_order)
    values = sample.values if isinstance(sample, EmpiricalSample) else np.asarray(sample, dtype=float).ravel()

    if values.size < max_order + 1:
        raise SampleError(f"样本长度 {values.size} 不足，估计到 ζ{max_order} 至少需要 {max_order + 1} 个观测")
    if not np.all(np.isfinite(values)):
        raise SampleError("样本包含非有限值")
    if np.ptp(values) == 0.0:
        raise SampleError("样本方差为零，无法标准化")

    mean = float(np.mean(values))
    dev = values - mean
    moments = [1.0, 0.0] + [float(np.mean(dev ** k)) for k in range(2, max_order + 1)]
    volatility = float(np.std(values, ddof=1))
    if not volatility > 0:
        raise SampleError("样本方差为零，无法标准化")

    kappa = _central_to_cumulants(moments, max_order)
    zeta = tuple(k / volatility ** i for i, k in enumerate(kappa, start=3))
    logger.debug(f"样本累积量估计: N={values.size}, mean={mean:.6g}, vol={volatility:.6g}, zeta={zeta}")
    return Cumulants(mean=mean, volatility=volatility, zeta=zeta)


def gamma_cumulants(shape: float, rate: float = 1.0, shift: float = 0.0,
                    max_order: int = MAX_CUMULANT_ORDER) -> Cumulants:
    """
    平移伽马分布的精确累积量 κ_i = shape·(i−1)!/rate^i

    Args:
        shape: 形状参数 (> 0)
        rate: 速率参数 (> 0)
        shift: 平移量
        max_order: 给出到 ζ_max_order

    Returns:
        Cumulants，ζ_i = (i−1)!·shape^{1−i/2}
    """
    if not (shape > 0 and rate > 0):
        raise ValidationError(f"shape 与 rate 必须为正数，实际为 shape={shape!r}, rate={rate!r}")
    _check_order(max_order)
    zeta = tuple(math.factorial(i - 1) * shape ** (1.0 - 0.5 * i) for i in range(3, max_order + 1))
    return Cumulants(mean=shape / rate + shift, volatility=math.sqrt(shape) / rate, zeta=zeta)


def normal_cumulants(mean: float, volatility: float, max_order: int = MAX_CUMULANT_ORDER) -> Cumulants:
    """正态分布：所有高阶累积量为零"""
    _check_order(max_order)
    return Cumulants(mean=mean, volatility=volatility, zeta=(0.0,) * (max_order - 2))
