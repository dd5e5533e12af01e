"""
反例构造模块
以概率 p 获得附加收益 B 的资产一阶随机占优基础资产，但 Sharpe 比率更低
"""
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import optimize

from ..models.asset import BonusAsset
from ..models.cumulants import Horizon
from ..models.report import CounterexampleReport, ProbeRow
from ..models.sample import GeneratorFamily, GeneratorSpec
from ..utils.logger import get_logger
from .errors import ConstructionError, DomainError, InfeasibleParametersError, ValidationError
from .roy import CdfOracle, roy_exact
from .special_fn import norm_quantile

logger = get_logger('counterexample')

# 探测网格上 F_y − F_x 允许的浮点误差
DOMINANCE_TOL = 1e-12


def bonus_mean(asset: BonusAsset) -> float:
    """附加收益资产的均值 μ + pB"""
    return asset.mu + asset.p * asset.bonus


def bonus_second_moment(asset: BonusAsset) -> float:
    """简化的非中心二阶矩 σ² + μ² + pB² (不含交叉项 2μpB)"""
    return asset.sigma ** 2 + asset.mu ** 2 + asset.p * asset.bonus ** 2


def bonus_variance(asset: BonusAsset, exact: bool = False) -> float:
    """
    附加收益资产的方差

    Args:
        asset: 反例资产
        exact: False 时取简化公式 σ² − 2μpB − p²B² + pB²；
            True 时取附加收益独立时的混合方差 σ² + p(1−p)B²

    Raises:
        DomainError: 方差非正
    """
    mu, sigma, p, bonus = asset.mu, asset.sigma, asset.p, asset.bonus
    if exact:
        variance = sigma ** 2 + p * (1.0 - p) * bonus ** 2
    else:
        variance = sigma ** 2 - 2.0 * mu * p * bonus - p * p * bonus ** 2 + p * bonus ** 2
    if not variance > 0:
        raise DomainError(f"附加收益资产方差非正 ({variance!r})")
    return variance


def bonus_sharpe(asset: BonusAsset, disaster_rate: float = 0.0, exact: bool = False) -> float:
    """附加收益资产的 Sharpe 比率 (μ + pB − r₀)/√variance"""
    return (bonus_mean(asset) - disaster_rate) / math.sqrt(bonus_variance(asset, exact))


def _simplified_sharpe(asset: BonusAsset) -> Optional[float]:
    """简化方差下的 Sharpe 比率，方差非正时为 None"""
    try:
        return bonus_sharpe(asset)
    except DomainError as e:
        logger.warning(f"{e}，简化 Sharpe 比率记为空")
        return None


def _check_base(mu: float, sigma: float) -> None:
    if not (mu > 0 and sigma > 0):
        raise ValidationError(f"mu 与 sigma 必须为正数，实际为 mu={mu!r}, sigma={sigma!r}")


def reversal_p_bound(mu: float, sigma: float, bonus: float) -> float:
    """
    Sharpe 排序翻转的充分条件 p <= μ²/(σ²+μ²) − 2μ/B

    Returns:
        上界值；<= 0 表示不存在可行的 p
    """
    _check_base(mu, sigma)
    if not bonus > 0:
        raise ValidationError(f"bonus 必须为正数，实际为 {bonus!r}")
    return mu * mu / (sigma * sigma + mu * mu) - 2.0 * mu / bonus


def min_reversal_bonus(mu: float, sigma: float) -> float:
    """使 p 上界为正所需的最小附加收益 B_min = 2(μ + σ²/μ)"""
    _check_base(mu, sigma)
    return 2.0 * (mu + sigma * sigma / mu)


def check_feasibility(asset: BonusAsset) -> None:
    """
    检查 Sharpe 翻转的可行性条件

    Raises:
        InfeasibleParametersError: B < B_min (condition='min_bonus')，
            或 p 超出上界 (condition='p_bound')，或 p = 0 (condition='degenerate')
    """
    b_min = min_reversal_bonus(asset.mu, asset.sigma)
    bound = reversal_p_bound(asset.mu, asset.sigma, asset.bonus)
    if asset.p == 0.0:
        raise InfeasibleParametersError("p = 0：两资产相同，不存在翻转", condition='degenerate')
    if asset.bonus < b_min:
        raise InfeasibleParametersError(
            f"B = {asset.bonus:g} 小于 B_min = {b_min:g}，不存在使 Sharpe 翻转的 p (上界 {bound:g} <= 0)",
            condition='min_bonus',
        )
    if asset.p > bound:
        raise InfeasibleParametersError(
            f"p = {asset.p:g} 超出充分条件上界 {bound:g}", condition='p_bound'
        )


def check_reversal(report: CounterexampleReport) -> None:
    """
    按验证结果判定 Sharpe 排序翻转是否成立

    翻转成立时不抛出异常，充分条件不满足只记录警告；p = 0 的退化情形不判定。

    Raises:
        InfeasibleParametersError: 简化方差非正 (condition='variance')，
            或 Sharpe 排序未翻转 (condition 取第一个不满足的可行性条件，全部满足时为 'not_reversed')
    """
    if report.degenerate:
        return
    if report.sharpe_reversed:
        if not report.feasible:
            logger.warning(f"Sharpe 排序已翻转，但 p = {report.asset.p:g} 不满足充分条件 p <= {report.p_bound:g}")
        return
    if report.bonus_sharpe is None:
        raise InfeasibleParametersError("简化方差非正，附加收益资产的 Sharpe 比率无定义", condition='variance')
    check_feasibility(report.asset)
    raise InfeasibleParametersError(
        f"Sharpe 排序未翻转 ({report.bonus_sharpe:.6g} >= {report.base_sharpe:.6g})", condition='not_reversed'
    )


def _oracle_quantile(oracle: CdfOracle, q: float) -> float:
    """对单调分布函数做区间扩张加 Brent 求根"""
    lo, hi = oracle.probe_range
    width = hi - lo
    for _ in range(60):
        if oracle(lo) < q:
            break
        lo -= width
        width *= 2.0
    width = hi - lo
    for _ in range(60):
        if oracle(hi) > q:
            break
        hi += width
        width *= 2.0
    return optimize.brentq(lambda t: oracle(t) - q, lo, hi, xtol=1e-15, rtol=1e-13)


def _base_quantiles(asset: BonusAsset, base: Optional[CdfOracle], levels: np.ndarray) -> np.ndarray:
    if base is None:
        return np.array([asset.mu + asset.sigma * norm_quantile(float(q)) for q in levels])
    return np.array([_oracle_quantile(base, float(q)) for q in levels])


def verify_dominance_and_reversal(asset: BonusAsset, base_cdf: Optional[CdfOracle] = None,
                                  grid_points: int = 501, grid_tail: float = 1e-5,
                                  probe_count: int = 11) -> CounterexampleReport:
    """
    验证附加收益资产一阶随机占优基础资产，同时比较 Sharpe 比率与精确准则值

    Args:
        asset: 反例资产
        base_cdf: 基础资产分布函数，默认 N(μ, σ²)
        grid_points: 占优探测网格点数，取基础分布 [q(tail), q(1−tail)] 上的等分位点
        grid_tail: 网格尾部概率
        probe_count: 探测 r₀ 个数，取基础分布 1%..99% 分位点

    Returns:
        CounterexampleReport

    Raises:
        ConstructionError: 网格上出现 F_y > F_x
    """
    if grid_points < 2 or probe_count < 1:
        raise ValidationError("网格点数至少为 2，探测个数至少为 1")
    if not 0.0 < grid_tail < 0.5:
        raise ValidationError(f"网格尾部概率必须在 (0, 0.5) 内，实际为 {grid_tail!r}")

    base = base_cdf or CdfOracle.normal(asset.mu, asset.sigma)
    mixture = CdfOracle.bonus_mixture(asset, base)

    grid = _base_quantiles(asset, base_cdf, np.linspace(grid_tail, 1.0 - grid_tail, grid_points))
    gaps = np.array([mixture(t) - base(t) for t in grid])
    max_gap = float(np.max(gaps))
    if max_gap > DOMINANCE_TOL:
        worst = float(grid[int(np.argmax(gaps))])
        raise ConstructionError(f"构造失败：t={worst!r} 处 F_y − F_x = {max_gap!r} > 0")

    probes: List[ProbeRow] = []
    for r0 in _base_quantiles(asset, base_cdf, np.linspace(0.01, 0.99, probe_count)):
        horizon = Horizon(1.0, float(r0))
        probes.append(ProbeRow(
            disaster_rate=float(r0),
            base_score=roy_exact(base, horizon).value,
            bonus_score=roy_exact(mixture, horizon).value,
        ))

    report = CounterexampleReport(
        asset=asset,
        base_sharpe=asset.base_sharpe,
        bonus_sharpe=_simplified_sharpe(asset),
        bonus_sharpe_exact=bonus_sharpe(asset, exact=True),
        min_bonus=min_reversal_bonus(asset.mu, asset.sigma),
        p_bound=reversal_p_bound(asset.mu, asset.sigma, asset.bonus),
        dominance=True,
        max_cdf_gap=max_gap,
        grid_points=grid_points,
        probes=probes,
        degenerate=asset.p == 0.0,
    )
    logger.info(f"反例验证完成: base_sharpe={report.base_sharpe:.6g}, bonus_sharpe={report.bonus_sharpe}, "
                f"sharpe_reversed={report.sharpe_reversed}, roy_reversed={report.roy_reversed}")
    return report


@dataclass(frozen=True)
class DominatingPair:
    """
    一阶随机占优资产对

    Attributes:
        kind: 'shift' 或 'bonus'
        dominant: 占优资产的模拟规格
        dominated: 被占优资产的模拟规格
    """
    kind: str
    dominant: GeneratorSpec
    dominated: GeneratorSpec

    def oracles(self) -> Tuple[CdfOracle, CdfOracle]:
        """(占优, 被占优) 的解析分布函数"""
        return spec_oracle(self.dominant), spec_oracle(self.dominated)

    def sharpes(self) -> Tuple[float, float]:
        """(占优, 被占优) 的单期 Sharpe 比率 (r₀ = 0)"""
        return spec_sharpe(self.dominant), spec_sharpe(self.dominated)


def spec_oracle(spec: GeneratorSpec) -> CdfOracle:
    """模拟规格对应的 n 期均值解析分布函数"""
    p = spec.params
    if spec.family == GeneratorFamily.NORMAL:
        return CdfOracle.normal(p['mu'], p['sigma'], spec.horizon)
    if spec.family == GeneratorFamily.SHIFTED_GAMMA:
        return CdfOracle.gamma(p['shape'], p['rate'], p['shift'], spec.horizon)
    if spec.family == GeneratorFamily.BONUS_MIXTURE and spec.horizon == 1:
        asset = BonusAsset(p['mu'], p['sigma'], p['p'], p['bonus'])
        return CdfOracle.bonus_mixture(asset)
    raise ValidationError(f"{spec.family.value} (期数 {spec.horizon}) 没有解析分布函数")


def spec_sharpe(spec: GeneratorSpec) -> float:
    """模拟规格的单期 Sharpe 比率 (r₀ = 0)"""
    p = spec.params
    if spec.family == GeneratorFamily.NORMAL:
        return p['mu'] / p['sigma']
    if spec.family == GeneratorFamily.SHIFTED_GAMMA:
        return (p['shape'] / p['rate'] + p['shift']) / (math.sqrt(p['shape']) / p['rate'])
    if spec.family == GeneratorFamily.BONUS_MIXTURE:
        return bonus_sharpe(BonusAsset(p['mu'], p['sigma'], p['p'], p['bonus']), exact=True)
    raise ValidationError(f"{spec.family.value} 没有解析 Sharpe 比率")


def dominating_pairs(rng: np.random.Generator, count: int = 20) -> List[DominatingPair]:
    """
    随机生成一阶随机占优资产对

    偶数位为平移构造 (正态或伽马加正平移)，奇数位为附加收益构造，
    其参数取 B ∈ [2, 4]·B_min、p ∈ [0.1, 0.5]·上界，因此必然出现 Sharpe 翻转。

    Args:
        rng: 随机数生成器
        count: 资产对个数
    """
    pairs: List[DominatingPair] = []
    for i in range(count):
        if i % 2 == 0:
            if i % 4 == 0:
                mu, sigma = rng.uniform(-0.5, 1.0), rng.uniform(0.5, 2.0)
                delta = rng.uniform(0.1, 1.0) * sigma
                pairs.append(DominatingPair('shift', GeneratorSpec.normal(mu + delta, sigma),
                                            GeneratorSpec.normal(mu, sigma)))
            else:
                shape, rate, shift = rng.uniform(1.0, 8.0), rng.uniform(0.5, 2.0), rng.uniform(-3.0, 0.0)
                delta = rng.uniform(0.1, 1.0) * math.sqrt(shape) / rate
                pairs.append(DominatingPair('shift', GeneratorSpec.shifted_gamma(shape, rate, shift + delta),
                                            GeneratorSpec.shifted_gamma(shape, rate, shift)))
        else:
            mu, sigma = rng.uniform(0.0005, 0.002), rng.uniform(0.005, 0.02)
            bonus = rng.uniform(2.0, 4.0) * min_reversal_bonus(mu, sigma)
            p = rng.uniform(0.1, 0.5) * reversal_p_bound(mu, sigma, bonus)
            pairs.append(DominatingPair('bonus', GeneratorSpec.bonus_mixture(mu, sigma, p, bonus),
                                        GeneratorSpec.normal(mu, sigma)))
    return pairs
