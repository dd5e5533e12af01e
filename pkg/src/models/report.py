"""
报告数据模型
定义排序、反例演示和期限结构报告的数据结构
"""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from .asset import BonusAsset
from .cumulants import Cumulants, Horizon
from .score import RiskScore, SkewPreference


@dataclass(frozen=True)
class AssetRow:
    """
    单个资产的评分结果

    Attributes:
        name: 资产名称 (列名)
        cumulants: 估计的累积量
        scores: 方法字符串 → 准则值，按请求顺序
        skew: 偏度偏好与临界期数
        chebyshev_bound: 亏损概率的 Chebyshev 上界 (snr <= 0 时为 None)
    """
    name: str
    cumulants: Cumulants
    scores: Dict[str, RiskScore]
    skew: SkewPreference
    chebyshev_bound: Optional[float] = None

    def score(self, method: str) -> float:
        return self.scores[method].value

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'cumulants': self.cumulants.to_dict(),
            'scores': {method: score.to_dict() for method, score in self.scores.items()},
            'skew_preference': self.skew.to_dict(),
            'chebyshev_bound': self.chebyshev_bound,
        }


@dataclass(frozen=True)
class RankReport:
    """
    多资产排序报告，资产按首个方法的准则值降序、同分按名称升序

    Attributes:
        assets: 已排序的资产行
        horizon: 期限与灾难收益率
        methods: 请求的方法列表，首个为主方法
        version: 工具版本
        period: 每行数据代表的期间标签
        rows: 数据行数
        source: 输入文件
        seed: 重抽样模拟所用种子 (未模拟时为 None)
        generator: 随机数生成算法 (未模拟时为 None)
        paths: 重抽样路径数
    """
    assets: List[AssetRow]
    horizon: Horizon
    methods: List[str]
    version: str
    period: str = 'day'
    rows: int = 0
    source: Optional[str] = None
    seed: Optional[int] = None
    generator: Optional[str] = None
    paths: Optional[int] = None

    @property
    def primary_method(self) -> str:
        return self.methods[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'report': 'rank',
            'version': self.version,
            'source': self.source,
            'period': self.period,
            'rows': self.rows,
            'horizon': self.horizon.to_dict(),
            'methods': list(self.methods),
            'primary_method': self.primary_method,
            'seed': self.seed,
            'generator': self.generator,
            'paths': self.paths,
            'assets': [row.to_dict() for row in self.assets],
        }


@dataclass(frozen=True)
class ProbeRow:
    """某个探测灾难收益率下两资产的精确准则值"""
    disaster_rate: float
    base_score: float
    bonus_score: float

    @property
    def reversed(self) -> bool:
        return self.bonus_score < self.base_score - 1e-12

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['reversed'] = self.reversed
        return data


@dataclass(frozen=True)
class CounterexampleReport:
    """
    附加收益反例的验证报告

    Attributes:
        asset: 反例资产参数
        base_sharpe: 基础资产 Sharpe 比率 μ/σ
        bonus_sharpe: 附加收益资产 Sharpe 比率 (简化方差，方差非正时为 None)
        bonus_sharpe_exact: 按精确混合方差计算的 Sharpe 比率
        min_bonus: 可能翻转 Sharpe 排序的最小附加收益
        p_bound: 翻转的充分条件 p 上界
        dominance: 探测网格上 F_y <= F_x 是否处处成立
        max_cdf_gap: max(F_y − F_x)，占优时 <= 0
        grid_points: 探测网格点数
        probes: 各探测 r₀ 下的精确准则值
        degenerate: p = 0 时两资产相同
        fosd_verdict: 模拟样本的一阶随机占优判定 (未模拟时为 None)
        paths: 模拟路径数
        seed: 模拟种子
        generator: 随机数生成算法
    """
    asset: BonusAsset
    base_sharpe: float
    bonus_sharpe: Optional[float]
    bonus_sharpe_exact: float
    min_bonus: float
    p_bound: float
    dominance: bool
    max_cdf_gap: float
    grid_points: int
    probes: List[ProbeRow] = field(default_factory=list)
    degenerate: bool = False
    fosd_verdict: Optional[str] = None
    paths: Optional[int] = None
    seed: Optional[int] = None
    generator: Optional[str] = None

    @property
    def sharpe_reversed(self) -> bool:
        return self.bonus_sharpe is not None and self.bonus_sharpe < self.base_sharpe

    @property
    def roy_reversed(self) -> bool:
        return any(probe.reversed for probe in self.probes)

    @property
    def feasible(self) -> bool:
        return self.asset.bonus >= self.min_bonus and 0.0 < self.asset.p <= self.p_bound

    def to_dict(self) -> Dict[str, Any]:
        return {
            'report': 'counterexample',
            'asset': self.asset.to_dict(),
            'base_sharpe': self.base_sharpe,
            'bonus_sharpe': self.bonus_sharpe,
            'bonus_sharpe_exact': self.bonus_sharpe_exact,
            'sharpe_reversed': self.sharpe_reversed,
            'min_bonus': self.min_bonus,
            'p_bound': self.p_bound,
            'feasible': self.feasible,
            'dominance': self.dominance,
            'max_cdf_gap': self.max_cdf_gap,
            'grid_points': self.grid_points,
            'probes': [probe.to_dict() for probe in self.probes],
            'roy_reversed': self.roy_reversed,
            'degenerate': self.degenerate,
            'fosd_verdict': self.fosd_verdict,
            'paths': self.paths,
            'seed': self.seed,
            'generator': self.generator,
        }


@dataclass(frozen=True)
class TermRow:
    """期限结构表的一行"""
    n_periods: float
    value: float
    skew_sign: int
    c_statistic: float
    crossover: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class TermReport:
    """
    期限结构报告：二次闭式解随期数的变化及偏度偏好翻转点

    Attributes:
        snr: 单期 Sharpe 比率
        zeta3: 偏度
        rows: 按期数升序的表格行 (含临界期数行)
        crossover: 临界期数 n* = 1/snr² (snr <= 0 时为 None)
        version: 工具版本
    """
    snr: float
    zeta3: float
    rows: List[TermRow]
    crossover: Optional[float]
    version: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            'report': 'term',
            'version': self.version,
            'snr': self.snr,
            'zeta3': self.zeta3,
            'crossover': self.crossover,
            'rows': [row.to_dict() for row in self.rows],
        }
