#!/usr/bin/env python3
"""
Roy 安全第一准则分析器主程序入口
整合估计、排序、反例演示、期限结构和模拟功能，提供统一的命令行接口
"""
import argparse
import dataclasses
import math
import sys
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from . import __version__
from .core.counterexample import check_reversal, verify_dominance_and_reversal
from .core.cumulants import estimate_cumulants
from .core.edgeworth import chebyshev_loss_bound, skew_preference
from .core.errors import (ConstructionError, InfeasibleParametersError, NumericalError,
                          RoyCriterionError, ValidationError)
from .core.montecarlo import fosd_check, simulate
from .core.returns_table import read_returns_table
from .core.roy import parse_method, roy_cf_quadratic, score_by_method
from .models.asset import BonusAsset
from .models.cumulants import Cumulants, Horizon
from .models.report import AssetRow, CounterexampleReport, RankReport, TermReport, TermRow
from .models.sample import EmpiricalSample, FosdVerdict, GeneratorSpec
from .utils.config import ConfigManager, get_config
from .utils.console import ConsoleOutput
from .utils.file_utils import FileManager, dumps_json
from .utils.logger import add_file_handler, get_logger, set_console_level

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_INFEASIBLE = 4
EXIT_INTERRUPT = 130

# fosd_check(附加收益样本, 基础样本) 的判定名称
_VERDICT_NAMES = {
    FosdVerdict.A_DOMINATES: "bonus_dominates",
    FosdVerdict.B_DOMINATES: "base_dominates",
    FosdVerdict.TIE: "tie",
    FosdVerdict.INCOMPARABLE: "incomparable",
}


def _required_order(methods: Sequence[str]) -> int:
    """所选方法需要估计到的最高累积量阶数 (至少 ζ4)"""
    order = 4
    for method in methods:
        name, k = parse_method(method)
        if name == 'edgeworth' and k:
            order = max(order, k + 2)
        elif name == 'cf-newton':
            order = max(order, k + 1)
    return order


def _significant(value: Any, digits: int) -> Any:
    if isinstance(value, float) and math.isfinite(value):
        return float(f"{value:.{digits}g}")
    return value


class RoyCriterionApp:
    """
    Roy 准则分析应用程序主类

    各命令返回报告对象；异常向上抛出，由 main 统一记录并映射为退出码
    """

    def __init__(self, config: Optional[ConfigManager] = None):
        """初始化应用程序"""
        self.config = config or get_config()

        self.console = ConsoleOutput()
        self.logger = get_logger('main_app')
        self.file_manager = FileManager()

        self.cli_config = self.config.get_cli_config()
        self.mc_config = self.config.get_montecarlo_config()
        self.ce_config = self.config.get_counterexample_config()

        log_dir = self.config.get_app_config('log_dir')
        if log_dir:
            add_file_handler(log_dir)
        set_console_level(self.config.get_app_config('log_level') or 'WARNING')

        self.logger.info(f"Roy 准则分析器启动 v{__version__}")

    def _simulate(self, spec: GeneratorSpec, paths: int, seed: int, silent: bool,
                  workers: Optional[int] = None) -> EmpiricalSample:
        """按应用配置的分块大小、线程数和生成器模拟"""
        return simulate(spec, paths, seed, chunk_size=self.mc_config['chunk_size'],
                        workers=workers or self.mc_config['workers'], silent=silent,
                        generator=self.mc_config['generator'])

    # ------------------------------------------------------------ rank

    def run_rank(self, input_path: str, methods: Optional[List[str]] = None, rfr: Optional[float] = None,
                 horizon: Optional[float] = None, b3: Optional[float] = None, delimiter: Optional[str] = None,
                 period: Optional[str] = None, seed: Optional[int] = None, paths: Optional[int] = None,
                 silent: bool = False) -> RankReport:
        """
        估计各资产累积量并按准则值排序

        Args:
            input_path: 收益率表格文件
            methods: 方法列表，首个为排序依据
            rfr: 单期灾难收益率
            horizon: 期数
            b3: sr3 偏好参数
            delimiter: 分隔符 (默认自动检测)
            period: 期间标签
            seed: 重抽样种子
            paths: 重抽样路径数 (exact-empirical 在期数 > 1 时需要)
            silent: 隐藏进度条

        Returns:
            RankReport
        """
        methods = methods or [self.cli_config['method']]
        rfr = self.cli_config['rfr'] if rfr is None else rfr
        horizon_n = self.cli_config['horizon'] if horizon is None else horizon
        b3 = self.cli_config['b3'] if b3 is None else b3
        period = period or self.cli_config['period']

        for method in methods:
            parse_method(method)
        h = Horizon(horizon_n, rfr)

        empirical = any(parse_method(m)[0] == 'exact-empirical' for m in methods)
        resample = empirical and h.n_periods != 1
        if resample:
            if not paths:
                raise ValidationError("exact-empirical 在期数 > 1 时需要 --paths 启用独立重抽样；"
                                      "或改用 cf/edgeworth 方法")
            if h.n_periods != int(h.n_periods):
                raise ValidationError(f"重抽样要求整数期数，实际为 {h.n_periods!r}")
            seed = self.mc_config['seed'] if seed is None else seed

        table = read_returns_table(input_path, delimiter=delimiter, period=period,
                                   min_rows=self.cli_config['min_rows'])
        max_order = _required_order(methods)

        rows: List[AssetRow] = []
        for name in table.names:
            column = table.column(name)
            cumulants = estimate_cumulants(column, max_order=max_order)

            sample, sample_horizon = None, 1
            if empirical:
                if resample:
                    spec = GeneratorSpec.resample(column, int(h.n_periods))
                    sample = self._simulate(spec, paths, seed, silent)
                    sample_horizon = int(h.n_periods)
                else:
                    sample = EmpiricalSample(column)

            scores = {
                method: score_by_method(method, cumulants, h, b3=b3, sample=sample,
                                        sample_horizon=sample_horizon)
                for method in methods
            }
            snr = cumulants.snr(h.disaster_rate)
            rows.append(AssetRow(
                name=name,
                cumulants=cumulants,
                scores=scores,
                skew=skew_preference(cumulants, h),
                chebyshev_bound=chebyshev_loss_bound(snr) if snr > 0 else None,
            ))
            self.logger.debug(f"资产 {name} 评分完成")

        primary = methods[0]
        rows.sort(key=lambda row: (-row.score(primary), row.name))

        return RankReport(
            assets=rows, horizon=h, methods=list(methods), version=__version__, period=period,
            rows=table.n_rows, source=input_path,
            seed=seed if resample else None,
            generator=sample.generator if resample else None,
            paths=paths if resample else None,
        )

    # ------------------------------------------------------------ counterexample

    def run_counterexample(self, mu: Optional[float] = None, sigma: Optional[float] = None,
                           p: Optional[float] = None, bonus: Optional[float] = None,
                           paths: Optional[int] = None, seed: Optional[int] = None,
                           silent: bool = False) -> CounterexampleReport:
        """
        附加收益反例演示

        Args:
            mu, sigma: 基础资产均值与波动率
            p, bonus: 附加收益概率与金额
            paths: 模拟路径数，0 表示不做模拟检验
            seed: 模拟种子

        Returns:
            CounterexampleReport
        """
        cfg = self.ce_config
        asset = BonusAsset(
            mu=cfg['mu'] if mu is None else mu,
            sigma=cfg['sigma'] if sigma is None else sigma,
            p=cfg['p'] if p is None else p,
            bonus=cfg['bonus'] if bonus is None else bonus,
        )
        report = verify_dominance_and_reversal(asset, grid_points=cfg['grid_points'],
                                               grid_tail=cfg['grid_tail'], probe_count=cfg['probe_count'])

        paths = cfg['paths'] if paths is None else paths
        if paths:
            seed = self.mc_config['seed'] if seed is None else seed
            # 同一种子下两样本的正态分量相同
            base = self._simulate(GeneratorSpec.normal(asset.mu, asset.sigma), paths, seed, silent)
            mixed = self._simulate(GeneratorSpec.bonus_mixture(asset.mu, asset.sigma, asset.p, asset.bonus),
                                   paths, seed, silent)
            verdict = _VERDICT_NAMES[fosd_check(mixed, base)]
            report = dataclasses.replace(report, fosd_verdict=verdict, paths=paths, seed=seed,
                                         generator=mixed.generator)
        return report

    # ------------------------------------------------------------ term

    def run_term(self, snr: Optional[float], zeta3: float, grid: Optional[List[float]] = None,
                 mu: Optional[float] = None, sigma: Optional[float] = None,
                 rfr: float = 0.0) -> TermReport:
        """
        二次闭式解的期限结构

        Args:
            snr: 单期 Sharpe 比率；为 None 时由 (mu − rfr)/sigma 计算
            zeta3: 偏度
            grid: 期数网格
            mu, sigma, rfr: 未给 snr 时使用

        Returns:
            TermReport，含临界期数行
        """
        if snr is None:
            if mu is None or sigma is None:
                raise ValidationError("需要 --snr，或同时给出 --mu 与 --sigma")
            snr = Cumulants(mean=mu, volatility=sigma).snr(rfr)
        grid = list(grid or self.cli_config['term_grid'])
        if not grid or any(not (n > 0) or not math.isfinite(n) for n in grid):
            raise ValidationError(f"期数网格必须为正数: {grid}")

        cumulants = Cumulants(mean=snr, volatility=1.0, zeta=(zeta3,))
        crossover = 1.0 / (snr * snr) if snr > 0 else None

        points = [(float(n), False) for n in sorted(set(grid))]
        if crossover is not None:
            points.append((crossover, True))
            points.sort(key=lambda point: point[0])

        rows = []
        for n, is_crossover in points:
            h = Horizon(n, 0.0)
            preference = skew_preference(cumulants, h)
            rows.append(TermRow(
                n_periods=n,
                value=roy_cf_quadratic(cumulants, h).value,
                skew_sign=0 if is_crossover else preference.sign,
                c_statistic=preference.c_statistic,
                crossover=is_crossover,
            ))
        return TermReport(snr=snr, zeta3=zeta3, rows=rows, crossover=crossover, version=__version__)

    # ------------------------------------------------------------ simulate

    def run_simulate(self, spec: GeneratorSpec, paths: Optional[int], seed: Optional[int], out: str,
                     workers: Optional[int] = None, silent: bool = False) -> Dict[str, Any]:
        """
        模拟样本并导出为单列文本文件

        Returns:
            样本摘要
        """
        paths = paths or self.mc_config['default_paths']
        seed = self.mc_config['seed'] if seed is None else seed
        sample = self._simulate(spec, paths, seed, silent, workers)
        path = sample.save_text(out)
        self.logger.info(f"样本已导出: {path}")
        return {
            'report': 'simulate',
            'version': __version__,
            'spec': spec.to_dict(),
            'paths': sample.size,
            'seed': sample.seed,
            'generator': sample.generator,
            'mean': sample.mean(),
            'std': sample.std(),
            'out': str(path),
        }

    def get_system_status(self) -> Dict[str, Any]:
        """
        获取系统状态

        Returns:
            系统状态字典
        """
        status = {"版本": __version__, "配置状态": "正常"}
        status.update(self.config.get_config_summary())
        return status

    # ------------------------------------------------------------ 输出

    def emit(self, report: Dict[str, Any], output: str, out_path: Optional[str], table: Optional[str]):
        """输出报告：--out 总是写机器格式；标准输出写表格或机器格式"""
        if out_path:
            if not self.file_manager.save_json(report, out_path):
                raise RoyCriterionError(f"报告写入失败: {out_path}")
        if output == 'machine':
            if not out_path:
                sys.stdout.write(dumps_json(report))
        elif table is not None:
            self.console.print_line(table)

    def format_rank(self, report: RankReport) -> str:
        digits = self.cli_config['significant_digits']
        records = []
        for row in report.assets:
            c = row.cumulants
            record = {
                'asset': row.name,
                'mean': c.mean,
                'vol': c.volatility,
                'zeta3': c.zeta_at(3),
                'zeta4': c.zeta_at(4),
            }
            for method, score in row.scores.items():
                record[method] = score.value
            record['skew_sign'] = row.skew.sign
            record['n_star'] = row.skew.crossover if row.skew.crossover is not None else np.nan
            record['chebyshev'] = row.chebyshev_bound if row.chebyshev_bound is not None else np.nan
            records.append(record)
        frame = pd.DataFrame.from_records(records)
        header = (f"horizon n={report.horizon.n_periods:g} ({report.period}), "
                  f"r0={report.horizon.disaster_rate:g}, 排序方法: {report.primary_method}")
        body = frame.to_string(index=False, float_format=lambda v: f"{v:.{digits}g}")
        return f"{header}\n{body}"

    def format_counterexample(self, report: CounterexampleReport) -> str:
        digits = self.cli_config['significant_digits']
        lines = []
        if report.degenerate:
            lines.append("degenerate: assets identical (p = 0)")
        summary = {
            'base_sharpe': report.base_sharpe,
            'bonus_sharpe': report.bonus_sharpe,
            'bonus_sharpe_exact': report.bonus_sharpe_exact,
            'sharpe_reversed': report.sharpe_reversed,
            'B_min': report.min_bonus,
            'p_max': report.p_bound,
            'dominance': report.dominance,
            'roy_reversed': report.roy_reversed,
            'fosd_verdict': report.fosd_verdict,
        }
        for key, value in summary.items():
            lines.append(f"{key}: {_significant(value, digits)}")
        frame = pd.DataFrame.from_records([probe.to_dict() for probe in report.probes])
        lines.append(frame.to_string(index=False, float_format=lambda v: f"{v:.{digits}g}"))
        return "\n".join(lines)

    def format_term(self, report: TermReport) -> str:
        digits = self.cli_config['significant_digits']
        frame = pd.DataFrame.from_records([row.to_dict() for row in report.rows])
        crossover = "无" if report.crossover is None else f"{report.crossover:.{digits}g}"
        header = f"snr={report.snr:g}, zeta3={report.zeta3:g}, 临界期数 n*={crossover}"
        return f"{header}\n{frame.to_string(index=False, float_format=lambda v: f'{v:.{digits}g}')}"


def _add_output_flags(parser: argparse.ArgumentParser):
    parser.add_argument('--output', choices=['table', 'machine'], default=None,
                        help='输出格式：table (4 位有效数字) 或 machine (JSON，全精度)')
    parser.add_argument('--out', default=None, help='机器格式报告写入的文件路径')
    parser.add_argument('--silent', action='store_true', help='静默模式，不显示进度条')


def create_argument_parser() -> argparse.ArgumentParser:
    """
    创建命令行参数解析器

    Returns:
        ArgumentParser实例
    """
    parser = argparse.ArgumentParser(
        prog='roy',
        description=f"""
📊 Roy 安全第一准则分析器 v{__version__}

🎯 功能特性:
  • 由收益率数据估计标准化累积量 ζ3..ζ7
  • 按广义 Roy 准则 Ψ̂ 对资产排序 (Edgeworth / Cornish-Fisher / 经验分布)
  • 演示一阶随机占优但 Sharpe 比率更低的附加收益反例
  • 展示偏度偏好随投资期限翻转的期限结构
        """,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
📋 使用示例:
  python run.py rank data/fixtures/three_assets.csv --horizon 60 --method cf-quadratic
  python run.py rank returns.csv --method cf-newton:3 --method sharpe --output machine
  python run.py counterexample --paths 1000000 --seed 7
  python run.py term --snr 0.07 --zeta3 -1 --grid 60 252
  python run.py simulate --family shifted_gamma --shape 4 --paths 100000 --out sample.txt

退出码: 0 成功；2 输入错误；3 数值失败；4 参数不可行；130 用户中断
        """
    )

    subparsers = parser.add_subparsers(
        dest='command',
        help='可用命令 (使用 COMMAND --help 查看详细说明)',
        metavar='COMMAND',
    )

    rank_parser = subparsers.add_parser(
        'rank', help='📈 估计累积量并按准则值排序资产',
        description="读取分隔符文本格式的收益率表格 (首行为资产名称，每行一个期间)，按主方法降序排序",
    )
    rank_parser.add_argument('input', help='收益率表格文件 (逗号或制表符分隔)')
    rank_parser.add_argument('--rfr', type=float, default=None, help='单期灾难收益率 r₀，默认 0')
    rank_parser.add_argument('--horizon', type=float, default=None, help='期数 n，默认 1')
    rank_parser.add_argument('--method', action='append', default=None,
                             help='sharpe | sr3 | exact-empirical | edgeworth:K | cf-newton:K | cf-quadratic，可重复')
    rank_parser.add_argument('--b3', type=float, default=None, help='sr3 的三阶矩偏好参数，默认 1')
    rank_parser.add_argument('--delimiter', choices=['comma', 'tab'], default=None, help='分隔符，默认自动检测')
    rank_parser.add_argument('--period', default=None, help='每行代表的期间标签，默认 day')
    rank_parser.add_argument('--seed', type=int, default=None, help='重抽样种子')
    rank_parser.add_argument('--paths', type=int, default=None,
                             help='exact-empirical 在期数 > 1 时的独立重抽样路径数')
    _add_output_flags(rank_parser)

    ce_parser = subparsers.add_parser(
        'counterexample', help='🎲 附加收益反例演示',
        description="以概率 p 获得附加收益 B 的资产一阶随机占优基础资产，但 Sharpe 比率可能更低",
    )
    ce_parser.add_argument('--mu', type=float, default=None, help='基础资产均值，默认 0.001')
    ce_parser.add_argument('--sigma', type=float, default=None, help='基础资产波动率，默认 0.01')
    ce_parser.add_argument('--p', type=float, default=None, help='附加收益概率，默认 1e-4')
    ce_parser.add_argument('--bonus', type=float, default=None, help='附加收益 B，默认 0.25')
    ce_parser.add_argument('--paths', type=int, default=None, help='模拟检验路径数，0 表示跳过')
    ce_parser.add_argument('--seed', type=int, default=None, help='模拟种子')
    _add_output_flags(ce_parser)

    term_parser = subparsers.add_parser(
        'term', help='⏳ 准则值的期限结构与偏度偏好翻转',
        description="在期数网格上计算 Cornish-Fisher 二次闭式解，并给出临界期数 n* = 1/snr²",
    )
    term_parser.add_argument('--snr', type=float, default=None, help='单期 Sharpe 比率')
    term_parser.add_argument('--mu', type=float, default=None, help='未给 --snr 时的均值')
    term_parser.add_argument('--sigma', type=float, default=None, help='未给 --snr 时的波动率')
    term_parser.add_argument('--rfr', type=float, default=0.0, help='未给 --snr 时的灾难收益率')
    term_parser.add_argument('--zeta3', type=float, required=True, help='偏度 ζ3')
    term_parser.add_argument('--grid', type=float, nargs='+', default=None, help='期数网格')
    _add_output_flags(term_parser)

    sim_parser = subparsers.add_parser(
        'simulate', help='🎰 模拟样本并导出为单列文本文件',
        description="按分布族模拟 n 期均值样本，结果只由 (规格, 路径数, 种子) 决定",
    )
    sim_parser.add_argument('--family', choices=['normal', 'shifted_gamma', 'bonus_mixture', 'resample'],
                            required=True, help='分布族')
    sim_parser.add_argument('--mu', type=float, default=0.0)
    sim_parser.add_argument('--sigma', type=float, default=1.0)
    sim_parser.add_argument('--shape', type=float, default=4.0)
    sim_parser.add_argument('--rate', type=float, default=1.0)
    sim_parser.add_argument('--shift', type=float, default=0.0)
    sim_parser.add_argument('--p', type=float, default=1e-4)
    sim_parser.add_argument('--bonus', type=float, default=0.25)
    sim_parser.add_argument('--input', default=None, help='resample 的收益率表格')
    sim_parser.add_argument('--column', default=None, help='resample 使用的列，默认第一列')
    sim_parser.add_argument('--horizon', type=int, default=1, help='每个样本值为 n 期均值')
    sim_parser.add_argument('--paths', type=int, default=None, help='样本量')
    sim_parser.add_argument('--seed', type=int, default=None, help='种子')
    sim_parser.add_argument('--workers', type=int, default=None, help='并发线程数')
    sim_parser.add_argument('--out', required=True, help='单列文本输出文件')
    sim_parser.add_argument('--output', choices=['table', 'machine'], default=None)
    sim_parser.add_argument('--silent', action='store_true', help='静默模式，不显示进度条')

    subparsers.add_parser('status', help='📊 查看配置状态')

    return parser


def _build_spec(args: argparse.Namespace) -> GeneratorSpec:
    if args.family == 'normal':
        return GeneratorSpec.normal(args.mu, args.sigma, args.horizon)
    if args.family == 'shifted_gamma':
        return GeneratorSpec.shifted_gamma(args.shape, args.rate, args.shift, args.horizon)
    if args.family == 'bonus_mixture':
        return GeneratorSpec.bonus_mixture(args.mu, args.sigma, args.p, args.bonus, args.horizon)
    if not args.input:
        raise ValidationError("resample 需要 --input")
    table = read_returns_table(args.input, min_rows=1)
    column = args.column or table.names[0]
    if column not in table.names:
        raise ValidationError(f"列不存在: {column}")
    return GeneratorSpec.resample(table.column(column), args.horizon)


def _dispatch(app: RoyCriterionApp, args: argparse.Namespace) -> int:
    output = getattr(args, 'output', None) or app.cli_config['output']

    if args.command == 'rank':
        report = app.run_rank(args.input, args.method, args.rfr, args.horizon, args.b3, args.delimiter,
                              args.period, args.seed, args.paths, args.silent)
        app.emit(report.to_dict(), output, args.out, app.format_rank(report))
        return EXIT_OK

    if args.command == 'counterexample':
        report = app.run_counterexample(args.mu, args.sigma, args.p, args.bonus, args.paths, args.seed,
                                        args.silent)
        app.emit(report.to_dict(), output, args.out, app.format_counterexample(report))
        check_reversal(report)
        return EXIT_OK

    if args.command == 'term':
        report = app.run_term(args.snr, args.zeta3, args.grid, args.mu, args.sigma, args.rfr)
        app.emit(report.to_dict(), output, args.out, app.format_term(report))
        return EXIT_OK

    if args.command == 'simulate':
        summary = app.run_simulate(_build_spec(args), args.paths, args.seed, args.out, args.workers,
                                   args.silent)
        if output == 'machine':
            sys.stdout.write(dumps_json(summary))
        else:
            app.console.print_summary("模拟完成", {k: v for k, v in summary.items() if k != 'spec'})
        return EXIT_OK

    if args.command == 'status':
        app.console.print_header("系统状态")
        for key, value in app.get_system_status().items():
            app.console.print_info(f"{key}: {value}")
        return EXIT_OK

    return EXIT_INPUT


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    主函数

    Args:
        argv: 命令行参数，默认取 sys.argv

    Returns:
        退出码
    """
    parser = create_argument_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return EXIT_INPUT

    logger = get_logger('main_app')
    try:
        app = RoyCriterionApp()
        return _dispatch(app, args)
    except KeyboardInterrupt:
        ConsoleOutput.print_warning("用户中断操作")
        return EXIT_INTERRUPT
    except (InfeasibleParametersError, ConstructionError) as e:
        logger.error(f"参数不可行: {e}")
        ConsoleOutput.print_error(f"参数不可行: {e}")
        return EXIT_INFEASIBLE
    except NumericalError as e:
        logger.error(f"数值计算失败: {e}")
        ConsoleOutput.print_error(f"数值计算失败: {e}")
        return EXIT_NUMERIC
    except ValidationError as e:
        logger.error(f"输入错误: {e}")
        ConsoleOutput.print_error(f"输入错误: {e}")
        return EXIT_INPUT
    except RoyCriterionError as e:
        logger.error(f"程序异常: {e}")
        ConsoleOutput.print_error(f"程序异常: {e}")
        return 1


if __name__ == '__main__':
    sys.exit(main())
