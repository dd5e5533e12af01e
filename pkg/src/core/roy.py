"""
Roy 安全第一准则模块
广义准则 Ψ̂ 的精确计算、Edgeworth 反演、Cornish-Fisher Newton 求解与二次闭式解，
以及经典 Sharpe 比率和偏度调整 SR3
"""
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import stats

from ..models.asset import BonusAsset
from ..models.cumulants import Cumulants, Horizon
from ..models.sample import EmpiricalSample
from ..models.score import RiskScore, ScoreDiagnostics, ScoreMethod
from ..utils.config import get_solver_defaults
from ..utils.logger import get_logger
from .edgeworth import edgeworth_cdf
from .errors import (ApproximationBreakdownError, DomainError, NoRealRootError,
                     SaturatedProbabilityError, SingularStepError, SolverError,
                     ValidationError)
from .special_fn import hermite, hermite_deriv, norm_pdf, norm_quantile

logger = get_logger('roy')

CF_TERMS = (2, 3, 4)
MONOTONE_PROBES = 20


class CdfOracle:
    """
    可求值的分布函数 t ↦ Pr{x <= t}

    构造时在 20 个升序探测点上检查取值在 [0,1] 内且单调不减。
    用于期限形式时，oracle 描述的是 n 期均值收益的分布。
    """

    def __init__(self, func: Callable[[float], float], probe_range: Tuple[float, float] = (-1.0, 1.0),
                 name: str = 'custom'):
        """
        初始化分布函数

        Args:
            func: 分布函数
            probe_range: 单调性检查的探测区间
            name: 名称 (用于日志和报告)

        Raises:
            ValidationError: 探测点上取值越界或不单调
        """
        lo, hi = probe_range
        if not (hi > lo):
            raise ValidationError(f"探测区间无效: {probe_range}")
        self._func = func
        self.name = name
        self.probe_range = (float(lo), float(hi))

        previous = -math.inf
        for t in np.linspace(lo, hi, MONOTONE_PROBES):
            value = float(func(float(t)))
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"分布函数 {name} 在 t={t!r} 处取值 {value!r} 不在 [0,1] 内")
            if value < previous:
                raise ValidationError(f"分布函数 {name} 在 t={t!r} 处不单调")
            previous = value

    def __call__(self, t: float) -> float:
        return float(self._func(t))

    def __repr__(self) -> str:
        return f"CdfOracle({self.name})"

    @classmethod
    def normal(cls, mu: float, sigma: float, n_periods: float = 1.0) -> 'CdfOracle':
        """N(μ, σ²/n) 的分布函数 (n 期均值)"""
        if not sigma > 0:
            raise ValidationError(f"sigma 必须为正数，实际为 {sigma!r}")
        sd = sigma / math.sqrt(n_periods)
        dist = stats.norm(loc=mu, scale=sd)
        return cls(dist.cdf, (mu - 5.0 * sd, mu + 5.0 * sd), f"normal({mu:g},{sigma:g})")

    @classmethod
    def gamma(cls, shape: float, rate: float = 1.0, shift: float = 0.0,
              n_periods: int = 1) -> 'CdfOracle':
        """平移伽马分布；n 期均值仍为伽马分布 Gamma(n·shape, n·rate)"""
        if not (shape > 0 and rate > 0):
            raise ValidationError("shape 与 rate 必须为正数")
        a, r = shape * n_periods, rate * n_periods
        dist = stats.gamma(a=a, scale=1.0 / r, loc=shift)
        mean, sd = a / r + shift, math.sqrt(a) / r
        return cls(dist.cdf, (mean - 5.0 * sd, mean + 5.0 * sd), f"gamma({shape:g},{rate:g},{shift:g})")

    @classmethod
    def empirical(cls, sample: EmpiricalSample) -> 'CdfOracle':
        """经验分布函数"""
        lo, hi = float(sample.values[0]), float(sample.values[-1])
        if hi <= lo:
            hi = lo + 1.0
        return cls(lambda t: float(sample.cdf(t)), (lo, hi), f"empirical(N={sample.size})")

    @classmethod
    def bonus_mixture(cls, asset: BonusAsset, base: Optional['CdfOracle'] = None) -> 'CdfOracle':
        """
        附加收益资产的分布函数 F_y(t) = F_x(t) − p·(F_x(t) − F_x(t−B))

        写成差分形式保证浮点下 F_y <= F_x 逐点成立
        """
        base = base or cls.normal(asset.mu, asset.sigma)
        p, bonus = asset.p, asset.bonus

        def mixture(t: float) -> float:
            fx = base(t)
            return fx - p * (fx - base(t - bonus))

        lo, hi = base.probe_range
        return cls(mixture, (lo, hi + bonus), f"bonus({base.name},p={p:g},B={bonus:g})")

    def shifted(self, delta: float) -> 'CdfOracle':
        """x + δ 的分布函数"""
        lo, hi = self.probe_range
        return CdfOracle(lambda t: self(t - delta), (lo + delta, hi + delta), f"{self.name}+{delta:g}")


# ---------------------------------------------------------------- 经典比率

def sharpe(cumulants: Cumulants, horizon: Horizon) -> RiskScore:
    """Sharpe 比率 (μ − r₀)/σ"""
    return RiskScore(value=cumulants.snr(horizon.disaster_rate), method=ScoreMethod.SHARPE)


def sr3_skew_adjusted(cumulants: Cumulants, horizon: Horizon, b3: float = 1.0) -> RiskScore:
    """
    偏度调整 Sharpe 比率 snr·√(1 + b3·ζ3·snr/3)

    Args:
        cumulants: 单期累积量 (需要 ζ3)
        horizon: 期限与灾难收益率
        b3: 投资者对三阶矩的相对偏好

    Raises:
        DomainError: 根号内为负
    """
    snr = cumulants.snr(horizon.disaster_rate)
    radicand = 1.0 + b3 * cumulants.zeta_at(3) * snr / 3.0
    if radicand < 0:
        raise DomainError(f"SR3 根号内为负 ({radicand!r})，偏度调整无定义")
    return RiskScore(value=snr * math.sqrt(radicand), method=ScoreMethod.SR3)


# ---------------------------------------------------------------- 精确准则

def _invert_probability(probability: float, horizon: Horizon) -> float:
    """Ψ̂ = −Φ⁻¹(p)/√n"""
    if probability <= 0.0 or probability >= 1.0:
        raise SaturatedProbabilityError(probability)
    return -norm_quantile(probability) / horizon.sqrt_n


def roy_exact(cdf: CdfOracle, horizon: Horizon) -> RiskScore:
    """
    由分布函数精确计算 Ψ̂ = −(1/√n)·Φ⁻¹(Pr{m̄ <= r₀})

    Args:
        cdf: n 期均值收益的分布函数 (n = 1 时即单期收益)
        horizon: 期限与灾难收益率

    Raises:
        SaturatedProbabilityError: 亏损概率为 0 或 1
    """
    probability = cdf(horizon.disaster_rate)
    value = _invert_probability(probability, horizon)
    return RiskScore(value=value, method=ScoreMethod.EXACT,
                     diagnostics=ScoreDiagnostics(probability=probability))


def roy_exact_empirical(sample: EmpiricalSample, horizon: Horizon, sample_horizon: int = 1) -> RiskScore:
    """
    由经验分布计算 Ψ̂，并给出传播标准误 se(p̂)/φ(Φ⁻¹(p̂))/√n

    Args:
        sample: 经验样本
        horizon: 期限与灾难收益率
        sample_horizon: 样本值是多少期的均值，必须与 horizon 一致

    Raises:
        ValidationError: 期限不匹配 (边际数据无法确定 n 期均值的分布)
        SaturatedProbabilityError: 经验亏损概率为 0 或 1
    """
    if not math.isclose(horizon.n_periods, sample_horizon, rel_tol=0.0, abs_tol=1e-12):
        raise ValidationError(
            f"经验方法只能在样本期限 ({sample_horizon}) 上计算，当前期限为 {horizon.n_periods}；"
            "请改用 cf/edgeworth 方法，或启用独立重抽样模拟"
        )
    size = sample.size
    probability = float(sample.cdf(horizon.disaster_rate))
    value = _invert_probability(probability, horizon)
    se_p = math.sqrt(probability * (1.0 - probability) / size)
    se_value = se_p / norm_pdf(norm_quantile(probability)) / horizon.sqrt_n
    return RiskScore(value=value, method=ScoreMethod.EXACT,
                     diagnostics=ScoreDiagnostics(probability=probability, standard_error=se_value))


# ---------------------------------------------------------------- Edgeworth 反演

def roy_edgeworth_invert(cumulants: Cumulants, horizon: Horizon, order: int = 1) -> RiskScore:
    """
    Ψ̂ = −(1/√n)·Φ⁻¹(edgeworth_cdf(−c))

    Raises:
        ApproximationBreakdownError: Edgeworth 概率不在 (0,1) 内
    """
    c = horizon.c_statistic(cumulants)
    probability = edgeworth_cdf(cumulants, horizon.n_periods, -c, order)
    if not 0.0 < probability < 1.0:
        raise ApproximationBreakdownError(probability)
    value = -norm_quantile(probability) / horizon.sqrt_n
    return RiskScore(value=value, method=ScoreMethod.EDGEWORTH_INVERT, order=order,
                     diagnostics=ScoreDiagnostics(probability=probability))


# ---------------------------------------------------------------- Cornish-Fisher

@dataclass(frozen=True)
class _CfEquation:
    """截断后的隐式方程 F(s) = s − RHS(s)"""
    snr: float
    n: float
    terms: int
    z3: float
    z4: float = 0.0
    z5: float = 0.0

    def __call__(self, s: float) -> Tuple[float, float]:
        """返回 (F(s), F'(s))"""
        n, z3, z4, z5 = self.n, self.z3, self.z4, self.z5
        sqrt_n = math.sqrt(n)
        x = sqrt_n * s

        rhs = self.snr + z3 / 6.0 * hermite(2, x) / n
        drhs = z3 / 6.0 * hermite_deriv(2, x) * sqrt_n / n

        if self.terms >= 3:
            n32 = n * sqrt_n
            group = z4 / 24.0 * hermite(3, x) - z3 * z3 / 36.0 * (2.0 * hermite(3, x) + hermite(1, x))
            dgroup = z4 / 24.0 * hermite_deriv(3, x) - z3 * z3 / 36.0 * (
                2.0 * hermite_deriv(3, x) + hermite_deriv(1, x))
            rhs -= group / n32
            drhs -= dgroup * sqrt_n / n32

        if self.terms >= 4:
            y = -x
            n2 = n * n
            he4, he2 = hermite(4, y), hermite(2, y)
            dhe4, dhe2 = hermite_deriv(4, y), hermite_deriv(2, y)
            group = (z5 / 120.0 * he4
                     - z3 * z4 / 24.0 * (he4 + he2)
                     + z3 ** 3 / 324.0 * (12.0 * he4 + 19.0 * he2))
            dgroup = (z5 / 120.0 * dhe4
                      - z3 * z4 / 24.0 * (dhe4 + dhe2)
                      + z3 ** 3 / 324.0 * (12.0 * dhe4 + 19.0 * dhe2))
            rhs += group / n2
            # d(−√n s)/ds = −√n
            drhs += dgroup * (-sqrt_n) / n2

        return s - rhs, 1.0 - drhs


def _cf_equation(cumulants: Cumulants, horizon: Horizon, terms: int) -> _CfEquation:
    if isinstance(terms, bool) or terms not in CF_TERMS:
        raise ValidationError(f"Cornish-Fisher 项数必须为 {CF_TERMS} 之一，实际为 {terms!r}")
    cumulants.require(terms + 1)
    return _CfEquation(
        snr=cumulants.snr(horizon.disaster_rate),
        n=horizon.n_periods,
        terms=terms,
        z3=cumulants.zeta_at(3),
        z4=cumulants.zeta_at(4) if terms >= 3 else 0.0,
        z5=cumulants.zeta_at(5) if terms >= 4 else 0.0,
    )


def _bisect(equation: _CfEquation, lo: float, hi: float, tol: float,
            max_iter: int = 200) -> Optional[Tuple[float, float, int]]:
    """二分回退，区间端点不变号时返回 None"""
    f_lo, _ = equation(lo)
    f_hi, _ = equation(hi)
    if f_lo == 0.0:
        return lo, 0.0, 0
    if f_hi == 0.0:
        return hi, 0.0, 0
    if (f_lo > 0) == (f_hi > 0):
        return None
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        f_mid, _ = equation(mid)
        if abs(f_mid) <= tol:
            return mid, abs(f_mid), it
        if mid == lo or mid == hi:
            break
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return None


def roy_cf_newton(cumulants: Cumulants, horizon: Horizon, terms: int = 2,
                  tol: Optional[float] = None, max_iter: Optional[int] = None) -> RiskScore:
    """
    Newton 法求解截断 Cornish-Fisher 隐式方程

    初值取 Sharpe 比率；导数由 Hermite 多项式导数解析给出。
    奇异步或不收敛时在 [snr − 3|ζ3|, snr + 3|ζ3|] 上做一次二分回退。

    Args:
        cumulants: 单期累积量 (terms=2/3/4 分别需要 ζ3/ζ4/ζ5)
        horizon: 期限与灾难收益率
        terms: 保留的括号组数
        tol: |F| 收敛容差，默认取配置 solver.tol
        max_iter: 最大迭代次数，默认取配置 solver.max_iter

    Returns:
        RiskScore，诊断中记录迭代次数、残差和迭代轨迹

    Raises:
        SingularStepError: 导数过小且二分回退失败
        SolverError: 不收敛且二分回退失败
    """
    defaults = get_solver_defaults()
    tol = defaults['tol'] if tol is None else tol
    max_iter = defaults['max_iter'] if max_iter is None else max_iter
    if not tol > 0:
        raise ValidationError(f"容差必须为正数，实际为 {tol!r}")
    if max_iter < 1:
        raise ValidationError(f"最大迭代次数至少为 1，实际为 {max_iter!r}")

    equation = _cf_equation(cumulants, horizon, terms)
    logger.log_function_call('roy_cf_newton', {'snr': equation.snr, 'n': equation.n, 'terms': terms})

    s = equation.snr
    trajectory: List[float] = [s]
    residual = math.inf
    singular = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        f, df = equation(s)
        residual = abs(f)
        if residual <= tol:
            logger.debug(f"Newton 收敛: iterations={iterations}, residual={residual:.3e}")
            return RiskScore(
                value=s, method=ScoreMethod.CF_NEWTON, order=terms,
                diagnostics=ScoreDiagnostics(iterations=iterations, residual=residual,
                                             converged=True, trajectory=trajectory),
            )
        if abs(df) < defaults['singular_threshold']:
            singular = True
            break
        s = s - f / df
        trajectory.append(s)
        if not math.isfinite(s):
            break

    # 最后一步之后的迭代点也要检查残差
    if not singular and math.isfinite(s):
        residual = abs(equation(s)[0])
        if residual <= tol:
            logger.debug(f"Newton 在最后一步收敛: iterations={iterations}, residual={residual:.3e}")
            return RiskScore(
                value=s, method=ScoreMethod.CF_NEWTON, order=terms,
                diagnostics=ScoreDiagnostics(iterations=iterations, residual=residual,
                                             converged=True, trajectory=trajectory),
            )

    diagnostics: Dict[str, object] = {
        'iterations': iterations, 'residual': residual, 'trajectory': trajectory,
        'reason': 'singular_step' if singular else 'max_iter',
    }
    logger.warning(f"Newton 未收敛 ({diagnostics['reason']})，尝试二分回退")

    width = defaults['bisection_width'] * abs(equation.z3)
    found = _bisect(equation, equation.snr - width, equation.snr + width, tol) if width > 0 else None
    if found is not None:
        root, root_residual, bisect_iter = found
        return RiskScore(
            value=root, method=ScoreMethod.CF_NEWTON, order=terms,
            diagnostics=ScoreDiagnostics(iterations=iterations + bisect_iter, residual=root_residual,
                                         converged=True, fallback=True, trajectory=trajectory),
        )

    if singular:
        raise SingularStepError(f"Newton 步导数过小 (s={s!r})，二分回退失败", diagnostics)
    raise SolverError(f"Newton 迭代 {iterations} 次未收敛 (|F|={residual!r})，二分回退失败", diagnostics)


def roy_cf_quadratic(cumulants: Cumulants, horizon: Horizon) -> RiskScore:
    """
    两项截断的闭式解 Ψ̂ ≈ 3/ζ3 − sign(ζ3)·√(9/ζ3² + 1/n − 6·snr/ζ3)

    取 ζ3 → 0 时趋于 snr 的分支；借助韦达定理 (两根之积除以大根) 计算，
    避免 3/ζ3 与 √disc 相减时的抵消误差。ζ3 = 0 时直接返回 snr。

    Raises:
        NoRealRootError: 判别式为负
    """
    snr = cumulants.snr(horizon.disaster_rate)
    z3 = cumulants.zeta_at(3)
    n = horizon.n_periods

    if z3 == 0.0:
        return RiskScore(value=snr, method=ScoreMethod.CF_QUADRATIC,
                         diagnostics=ScoreDiagnostics(root_branch=0))

    disc = 9.0 / (z3 * z3) + 1.0 / n - 6.0 * snr / z3
    if disc < 0:
        raise NoRealRootError(disc)

    sign = 1.0 if z3 > 0 else -1.0
    big_root = 3.0 / z3 + sign * math.sqrt(disc)
    product = 6.0 * snr / z3 - 1.0 / n
    value = product / big_root

    residual, _ = _CfEquation(snr=snr, n=n, terms=2, z3=z3)(value)
    return RiskScore(value=value, method=ScoreMethod.CF_QUADRATIC,
                     diagnostics=ScoreDiagnostics(residual=abs(residual), root_branch=int(-sign)))


# ---------------------------------------------------------------- 方法分派

METHOD_NAMES = ('sharpe', 'sr3', 'exact-empirical', 'edgeworth', 'cf-newton', 'cf-quadratic')


def parse_method(text: str) -> Tuple[str, Optional[int]]:
    """
    解析方法字符串，如 "cf-newton:3"、"edgeworth:1"

    Returns:
        (方法名, 阶数)

    Raises:
        ValidationError: 无法识别
    """
    name, _, order_text = text.strip().partition(':')
    if name not in METHOD_NAMES:
        raise ValidationError(f"未知方法: {text!r}，可选 {METHOD_NAMES}")
    if name in ('edgeworth', 'cf-newton'):
        if not order_text:
            order = 1 if name == 'edgeworth' else 2
        else:
            try:
                order = int(order_text)
            except ValueError:
                raise ValidationError(f"方法阶数必须为整数: {text!r}") from None
        allowed = range(0, 4) if name == 'edgeworth' else CF_TERMS
        if order not in allowed:
            raise ValidationError(f"{name} 阶数 {order} 不在允许范围 {list(allowed)}")
        return name, order
    if order_text:
        raise ValidationError(f"方法 {name} 不接受阶数: {text!r}")
    return name, None


def score_by_method(method: str, cumulants: Cumulants, horizon: Horizon, b3: float = 1.0,
                    sample: Optional[EmpiricalSample] = None, sample_horizon: int = 1,
                    tol: Optional[float] = None, max_iter: Optional[int] = None) -> RiskScore:
    """
    按方法字符串计算准则值 (命令行使用)

    Args:
        method: 方法字符串
        cumulants: 估计的累积量
        horizon: 期限与灾难收益率
        b3: sr3 的偏好参数
        sample: exact-empirical 所用样本
        sample_horizon: 样本值对应的期数
        tol, max_iter: Newton 求解参数
    """
    name, order = parse_method(method)
    if name == 'sharpe':
        return sharpe(cumulants, horizon)
    if name == 'sr3':
        return sr3_skew_adjusted(cumulants, horizon, b3)
    if name == 'exact-empirical':
        if sample is None:
            raise ValidationError("exact-empirical 需要经验样本")
        return roy_exact_empirical(sample, horizon, sample_horizon)
    if name == 'edgeworth':
        return roy_edgeworth_invert(cumulants, horizon, order)
    if name == 'cf-newton':
        return roy_cf_newton(cumulants, horizon, order, tol=tol, max_iter=max_iter)
    return roy_cf_quadratic(cumulants, horizon)
