"""命令行接口测试"""
import dataclasses
import json
import math

import numpy as np
import pytest

from src.core.counterexample import reversal_p_bound
from src.main import EXIT_INFEASIBLE, EXIT_INPUT, EXIT_NUMERIC, EXIT_OK, RoyCriterionApp, main


def _machine(capsys, argv):
    code = main(argv + ['--output', 'machine'])
    assert code == EXIT_OK
    return json.loads(capsys.readouterr().out)


class TestRank:

    def test_table_output(self, capsys, fixture_csv):
        code = main(['rank', str(fixture_csv), '--horizon', '60', '--method', 'cf-quadratic',
                     '--method', 'sharpe'])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert 'cf-quadratic' in out
        assert 'short_vol' in out

    def test_sorted_by_primary_method(self, capsys, fixture_csv):
        report = _machine(capsys, ['rank', str(fixture_csv), '--method', 'cf-newton:3', '--method', 'sharpe'])
        values = [row['scores']['cf-newton:3']['value'] for row in report['assets']]
        assert values == sorted(values, reverse=True)
        assert report['primary_method'] == 'cf-newton:3'
        assert report['rows'] == 250
        assert report['assets'][0]['scores']['cf-newton:3']['method'] == 'cf_newton_3'

    def test_name_breaks_ties(self, capsys, write_csv):
        rows = "\n".join(f"{x},{x}" for x in np.linspace(-0.01, 0.012, 20))
        report = _machine(capsys, ['rank', str(write_csv("zeta,alpha\n" + rows)), '--method', 'sharpe'])
        assert [row['name'] for row in report['assets']] == ['alpha', 'zeta']

    def test_normal_data_close_to_sharpe(self, capsys, write_csv):
        rng = np.random.default_rng(3)
        values = rng.normal(0.05, 1.0, size=5000)
        path = write_csv("x\n" + "\n".join(f"{v:.12g}" for v in values))
        report = _machine(capsys, ['rank', str(path), '--method', 'cf-quadratic', '--method', 'sharpe'])
        scores = report['assets'][0]['scores']
        tolerance = 4 * math.sqrt(6 / 5000) / 6
        assert abs(scores['cf-quadratic']['value'] - scores['sharpe']['value']) <= tolerance

    def test_out_file_is_reproducible(self, capsys, fixture_csv, tmp_path):
        paths = []
        for name in ('a.json', 'b.json'):
            out = tmp_path / name
            code = main(['rank', str(fixture_csv), '--method', 'exact-empirical', '--method', 'cf-quadratic',
                         '--horizon', '5', '--paths', '20000', '--seed', '7', '--silent', '--out', str(out)])
            assert code == EXIT_OK
            paths.append(out)
        assert paths[0].read_bytes() == paths[1].read_bytes()
        report = json.loads(paths[0].read_text(encoding='utf-8'))
        assert report['seed'] == 7
        assert report['generator'] == 'PCG64DXSM'
        assert report['paths'] == 20000

    def test_machine_output_with_out_file_keeps_stdout_clean(self, capsys, fixture_csv, tmp_path):
        out = tmp_path / 'report.json'
        code = main(['rank', str(fixture_csv), '--output', 'machine', '--out', str(out)])
        assert code == EXIT_OK
        assert capsys.readouterr().out == ''
        assert json.loads(out.read_text(encoding='utf-8'))['report'] == 'rank'

    def test_table_matches_out_file(self, capsys, fixture_csv, tmp_path):
        out = tmp_path / 'report.json'
        methods = ['cf-quadratic', 'sharpe']
        argv = ['rank', str(fixture_csv), '--horizon', '60', '--out', str(out)]
        for method in methods:
            argv += ['--method', method]
        assert main(argv) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        report = json.loads(out.read_text(encoding='utf-8'))

        columns = lines[1].split()
        assert columns[:5] == ['asset', 'mean', 'vol', 'zeta3', 'zeta4']
        rows = {line.split()[0]: line.split() for line in lines[2:] if line.strip()}
        assert [row['name'] for row in report['assets']] == list(rows)
        for asset in report['assets']:
            cells = dict(zip(columns, rows[asset['name']]))
            expected = {'mean': asset['cumulants']['mean'], 'vol': asset['cumulants']['volatility'],
                        'zeta3': asset['cumulants']['zeta3'], 'zeta4': asset['cumulants']['zeta4']}
            expected.update({method: asset['scores'][method]['value'] for method in methods})
            for key, value in expected.items():
                assert float(cells[key]) == pytest.approx(float(f"{value:.4g}"), rel=1e-12)

    def test_missing_file(self, tmp_path):
        assert main(['rank', str(tmp_path / 'missing.csv')]) == EXIT_INPUT

    def test_non_numeric_cell(self, write_csv):
        rows = ["a"] + [str(0.001 * i) for i in range(10)]
        rows[5] = "n/a"
        assert main(['rank', str(write_csv("\n".join(rows)))]) == EXIT_INPUT

    def test_empirical_needs_paths_beyond_one_period(self, fixture_csv):
        assert main(['rank', str(fixture_csv), '--method', 'exact-empirical', '--horizon', '5']) == EXIT_INPUT

    def test_unknown_method(self, fixture_csv):
        assert main(['rank', str(fixture_csv), '--method', 'sortino']) == EXIT_INPUT


class TestCounterexample:

    def test_default(self, capsys):
        report = _machine(capsys, ['counterexample', '--paths', '0'])
        assert report['sharpe_reversed']
        assert report['dominance']
        assert not report['roy_reversed']
        assert report['min_bonus'] == pytest.approx(0.202)
        assert report['fosd_verdict'] is None

    def test_simulated_verdict(self, capsys):
        report = _machine(capsys, ['counterexample', '--paths', '200000', '--seed', '7', '--silent'])
        assert report['fosd_verdict'] == 'bonus_dominates'
        assert report['seed'] == 7

    def test_infeasible_bonus(self, capsys):
        assert main(['counterexample', '--bonus', '0.1', '--paths', '0']) == EXIT_INFEASIBLE
        assert 'sharpe_reversed' in capsys.readouterr().out

    def test_degenerate(self, capsys):
        assert main(['counterexample', '--p', '0', '--paths', '0']) == EXIT_OK
        assert 'degenerate' in capsys.readouterr().out

    def test_nonpositive_simplified_variance(self, capsys):
        code = main(['counterexample', '--p', '0.999', '--paths', '0', '--output', 'machine'])
        assert code == EXIT_INFEASIBLE
        report = json.loads(capsys.readouterr().out)
        assert report['bonus_sharpe'] is None
        assert not report['sharpe_reversed']
        assert report['dominance']

    def test_exit_code_follows_verified_reversal(self, capsys, monkeypatch):
        original = RoyCriterionApp.run_counterexample

        def reversed_outside_bound(self, *args, **kwargs):
            report = original(self, *args, **kwargs)
            return dataclasses.replace(report, bonus_sharpe=0.99 * report.base_sharpe)

        monkeypatch.setattr(RoyCriterionApp, 'run_counterexample', reversed_outside_bound)
        assert main(['counterexample', '--p', '0.01', '--paths', '0']) == EXIT_OK
        assert reversal_p_bound(0.001, 0.01, 0.25) < 0.01
        assert 'sharpe_reversed: True' in capsys.readouterr().out


class TestTerm:

    def test_values(self, capsys):
        report = _machine(capsys, ['term', '--snr', '0.07', '--zeta3', '-1', '--grid', '60', '252'])
        values = {row['n_periods']: row['value'] for row in report['rows'] if not row['crossover']}
        assert values[60.0] == pytest.approx(0.0719, abs=1e-4)
        assert values[252.0] == pytest.approx(0.0698, abs=1e-4)
        assert report['crossover'] == pytest.approx(1 / 0.07 ** 2)
        signs = [row['skew_sign'] for row in report['rows']]
        assert signs == [-1, 0, 1]

    def test_from_mean_and_vol(self, capsys):
        report = _machine(capsys, ['term', '--mu', '0.02', '--sigma', '0.2', '--zeta3', '0.5', '--grid', '10'])
        assert report['snr'] == pytest.approx(0.1)

    def test_no_real_root(self):
        assert main(['term', '--snr', '1', '--zeta3', '2', '--grid', '10']) == EXIT_NUMERIC

    def test_needs_snr(self):
        assert main(['term', '--zeta3', '1']) == EXIT_INPUT


class TestSimulateAndStatus:

    def test_simulate(self, capsys, tmp_path):
        out = tmp_path / 'sample.txt'
        summary = _machine(capsys, ['simulate', '--family', 'shifted_gamma', '--shape', '4', '--paths', '1000',
                                    '--seed', '3', '--out', str(out), '--silent'])
        assert summary['paths'] == 1000
        assert len(out.read_text().split()) == 1000

    def test_resample_requires_input(self, tmp_path):
        code = main(['simulate', '--family', 'resample', '--out', str(tmp_path / 's.txt'), '--silent'])
        assert code == EXIT_INPUT

    def test_status(self, capsys):
        assert main(['status']) == EXIT_OK
        assert 'PCG64DXSM' in capsys.readouterr().out

    def test_no_command(self, capsys):
        assert main([]) == EXIT_INPUT

    def test_argparse_errors_exit_with_two(self):
        with pytest.raises(SystemExit) as exc:
            main(['term', '--snr', '0.1'])
        assert exc.value.code == 2
