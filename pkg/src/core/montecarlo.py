"""
蒙特卡罗模块
可复现的分块模拟、经验亏损概率和一阶随机占优检验
"""
import math
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Dict, List, Optional

import numpy as np

from ..models.sample import EmpiricalSample, FosdVerdict, GeneratorFamily, GeneratorSpec, LossProbability
from ..utils.config import get_montecarlo_defaults
from ..utils.logger import get_logger
from ..utils.progress import ProgressManager
from .errors import ValidationError

logger = get_logger('montecarlo')


def resolve_bit_generator(name: str) -> type:
    """
    按名称取 numpy 的位生成器类 (PCG64DXSM、PCG64、Philox、SFC64、MT19937)

    Raises:
        ValidationError: 名称不是 numpy.random 中的位生成器
    """
    candidate = getattr(np.random, str(name), None)
    if not (isinstance(candidate, type) and issubclass(candidate, np.random.BitGenerator)):
        raise ValidationError(f"未知的随机数生成器: {name!r}")
    return candidate


def _draw_chunk(spec: GeneratorSpec, size: int, seed_seq: np.random.SeedSequence,
                bit_generator: type = np.random.PCG64DXSM) -> np.ndarray:
    """
    抽取一个分块的 n 期均值

    各分布族的 n 期均值按分布精确抽取。正态与附加收益族都先抽正态分量，
    同一种子下两者的正态部分逐位相同。
    """
    gen = np.random.Generator(bit_generator(seed_seq))
    n = spec.horizon
    p = spec.params

    if spec.family == GeneratorFamily.NORMAL:
        return gen.normal(p['mu'], p['sigma'] / math.sqrt(n), size)
    if spec.family == GeneratorFamily.SHIFTED_GAMMA:
        return gen.gamma(n * p['shape'], 1.0 / (n * p['rate']), size) + p['shift']
    if spec.family == GeneratorFamily.BONUS_MIXTURE:
        base = gen.normal(p['mu'], p['sigma'] / math.sqrt(n), size)
        return base + p['bonus'] * gen.binomial(n, p['p'], size) / n

    # resample: n 次独立有放回抽样的均值
    source = spec.source
    total = np.zeros(size)
    for _ in range(n):
        total += source[gen.integers(0, source.size, size)]
    return total / n


def simulate(spec: GeneratorSpec, paths: int, seed: int, chunk_size: Optional[int] = None,
             workers: Optional[int] = None, silent: bool = True,
             generator: Optional[str] = None) -> EmpiricalSample:
    """
    按规格模拟样本

    种子序列按固定分块大小拆分为独立子流，每个分块一个子流，
    因此结果只由 (spec, paths, seed, chunk_size, generator) 决定，与线程数无关。

    Args:
        spec: 模拟规格
        paths: 样本量
        seed: 非负整数种子
        chunk_size: 每个分块的路径数，默认取配置值
        workers: 并发线程数，默认取配置值
        silent: 是否隐藏进度条
        generator: 位生成器名称，默认取配置值

    Returns:
        EmpiricalSample，记录种子和生成器名称
    """
    defaults = get_montecarlo_defaults()
    chunk_size = chunk_size or defaults['chunk_size']
    workers = workers or defaults['workers']
    generator = generator or defaults['generator']
    bit_generator = resolve_bit_generator(generator)

    if isinstance(paths, bool) or int(paths) != paths or paths < 1:
        raise ValidationError(f"路径数必须为正整数，实际为 {paths!r}")
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise ValidationError(f"种子必须为非负整数，实际为 {seed!r}")
    if chunk_size < 1 or workers < 1:
        raise ValidationError("分块大小与线程数必须为正整数")

    paths = int(paths)
    n_chunks = (paths + chunk_size - 1) // chunk_size
    children = np.random.SeedSequence(int(seed)).spawn(n_chunks)
    sizes = [min(chunk_size, paths - i * chunk_size) for i in range(n_chunks)]

    logger.info(f"开始模拟: {spec.family.value}, horizon={spec.horizon}, paths={paths}, "
                f"seed={seed}, chunks={n_chunks}, workers={workers}, generator={bit_generator.__name__}")
    start_time = time.time()

    chunks: Dict[int, np.ndarray] = {}
    with ProgressManager(n_chunks, f"模拟 {spec.family.value}", silent=silent) as progress:
        if workers == 1 or n_chunks == 1:
            for i, (size, child) in enumerate(zip(sizes, children)):
                chunks[i] = _draw_chunk(spec, size, child, bit_generator)
                progress.update()
        else:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                future_to_index = {
                    executor.submit(_draw_chunk, spec, size, child, bit_generator): i
                    for i, (size, child) in enumerate(zip(sizes, children))
                }
                for future in as_completed(future_to_index):
                    chunks[future_to_index[future]] = future.result()
                    progress.update()

    values = np.concatenate([chunks[i] for i in range(n_chunks)])
    logger.log_performance(f"模拟 {paths} 条路径", time.time() - start_time)
    return EmpiricalSample(values, seed=int(seed), generator=bit_generator.__name__)


def empirical_loss_probability(sample: EmpiricalSample, disaster_rate: float) -> LossProbability:
    """
    经验亏损概率 p̂ = #{x <= r₀}/N 及二项标准误 √(p̂(1−p̂)/N)
    """
    probability = float(sample.cdf(disaster_rate))
    se = math.sqrt(probability * (1.0 - probability) / sample.size)
    return LossProbability(probability=probability, standard_error=se, size=sample.size)


def default_slack(size_a: int, size_b: int) -> float:
    """默认容差 4·√(1/(4·min(N_a, N_b)))"""
    return 4.0 * math.sqrt(1.0 / (4.0 * min(size_a, size_b)))


def fosd_check(a: EmpiricalSample, b: EmpiricalSample, slack: Optional[float] = None) -> FosdVerdict:
    """
    经验分布函数的一阶随机占优检验

    在合并样本网格上比较 F̂_a 与 F̂_b。a 占优 b 要求处处 F̂_a <= F̂_b + slack。
    两个方向都在容差内成立时，比较双方的最大单侧偏离：相等记为 tie，
    否则偏离较小的一方 (分布函数更靠下) 占优。

    Args:
        a: 样本 a
        b: 样本 b
        slack: 容差，默认 4·√(1/(4·min(N_a, N_b)))

    Returns:
        FosdVerdict
    """
    if slack is None:
        slack = default_slack(a.size, b.size)
    if slack < 0:
        raise ValidationError(f"容差不能为负，实际为 {slack!r}")

    grid = np.union1d(a.values, b.values)
    diff = a.cdf(grid) - b.cdf(grid)
    # 一侧偏离: a 的分布函数高于 b 的幅度，及反向
    excess_a = float(np.max(diff))
    excess_b = float(np.max(-diff))
    a_dominates = excess_a <= slack + 1e-12
    b_dominates = excess_b <= slack + 1e-12

    if a_dominates and b_dominates:
        if abs(excess_a - excess_b) <= 1e-12:
            verdict = FosdVerdict.TIE
        elif excess_a < excess_b:
            verdict = FosdVerdict.A_DOMINATES
        else:
            verdict = FosdVerdict.B_DOMINATES
    elif a_dominates:
        verdict = FosdVerdict.A_DOMINATES
    elif b_dominates:
        verdict = FosdVerdict.B_DOMINATES
    else:
        verdict = FosdVerdict.INCOMPARABLE

    logger.debug(f"FOSD 检验: excess_a={excess_a:.3e}, excess_b={excess_b:.3e}, "
                 f"slack={slack:.3e}, verdict={verdict.value}")
    return verdict


def simulate_many(specs: List[GeneratorSpec], paths: int, seed: int, **kwargs) -> List[EmpiricalSample]:
    """以同一种子模拟多个规格，构成公共随机数比较"""
    return [simulate(spec, paths, seed, **kwargs) for spec in specs]
