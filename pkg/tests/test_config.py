"""配置与日志工具测试"""
import json
import logging

import numpy as np
import pytest

from src.core.montecarlo import simulate
from src.core.roy import roy_cf_newton
from src.models.cumulants import Cumulants, Horizon
from src.models.sample import GeneratorSpec
from src.utils.config import DEFAULT_SETTINGS, ConfigManager, get_montecarlo_defaults, get_solver_defaults
from src.utils.file_utils import FileManager, dumps_json
from src.utils.logger import ROOT_LOGGER_NAME, add_file_handler, get_logger


class TestConfigManager:

    def test_repository_settings(self):
        config = ConfigManager(apply_logging=False)
        assert config.get_solver_config()['tol'] == 1e-12
        assert config.get_montecarlo_config()['generator'] == 'PCG64DXSM'
        assert config.get_cli_config()['method'] == 'cf-quadratic'
        assert config.get_counterexample_config()['bonus'] == 0.25

    def test_missing_directory_uses_defaults(self, tmp_path):
        config = ConfigManager(config_dir=str(tmp_path), apply_logging=False)
        assert config.get_section('solver') == DEFAULT_SETTINGS['solver']
        assert config.get_section('unknown') == {}

    def test_partial_override(self, tmp_path, monkeypatch):
        (tmp_path / 'settings.yaml').write_text("solver:\n  max_iter: 7\n", encoding='utf-8')
        monkeypatch.setenv('ROY_CONFIG_DIR', str(tmp_path))
        config = ConfigManager(apply_logging=False)
        assert config.get_solver_config()['max_iter'] == 7
        assert config.get_solver_config()['tol'] == 1e-12

    def test_sections_are_copies(self):
        config = ConfigManager(apply_logging=False)
        config.get_cli_config()['method'] = 'sharpe'
        assert config.get_cli_config()['method'] == 'cf-quadratic'

    def test_summary(self):
        summary = ConfigManager(apply_logging=False).get_config_summary()
        assert summary['随机数生成器'] == 'PCG64DXSM'
        assert summary['Newton 容差'] == 1e-12

    def test_library_defaults_are_copies(self):
        solver = get_solver_defaults()
        solver['tol'] = 1.0
        assert get_solver_defaults()['tol'] == 1e-12

    def test_library_defaults_follow_settings_file(self, settings_dir):
        settings_dir("solver:\n  tol: 1.0e-4\n  max_iter: 1\n"
                     "montecarlo:\n  generator: Philox\n  chunk_size: 1000\n")
        assert get_solver_defaults()['tol'] == 1e-4
        assert get_solver_defaults()['max_iter'] == 1
        assert get_solver_defaults()['singular_threshold'] == DEFAULT_SETTINGS['solver']['singular_threshold']
        assert get_montecarlo_defaults()['generator'] == 'Philox'
        assert get_montecarlo_defaults()['chunk_size'] == 1000

    def test_solver_uses_settings_file(self, settings_dir):
        c = Cumulants(0.07, 1.0, (-1.0,))
        # 严格容差下需要多步 Newton
        assert len(roy_cf_newton(c, Horizon(60), tol=1e-12, max_iter=50).diagnostics.trajectory) > 2
        settings_dir("solver:\n  tol: 1.0e-4\n  max_iter: 1\n")
        score = roy_cf_newton(c, Horizon(60))
        assert score.diagnostics.converged
        assert not score.diagnostics.fallback
        assert score.diagnostics.iterations == 1
        assert len(score.diagnostics.trajectory) == 2
        assert score.diagnostics.residual <= 1e-4

    def test_simulation_uses_settings_file(self, settings_dir):
        spec = GeneratorSpec.normal(0.0, 1.0)
        expected = simulate(spec, 2500, seed=5, chunk_size=1000, generator='Philox')
        settings_dir("montecarlo:\n  generator: Philox\n  chunk_size: 1000\n")
        sample = simulate(spec, 2500, seed=5)
        assert sample.generator == 'Philox'
        assert np.array_equal(sample.values, expected.values)


class TestLogging:

    def test_namespace(self):
        assert get_logger('roy').logger.name == f"{ROOT_LOGGER_NAME}.roy"

    def test_file_handler(self, tmp_path):
        path = add_file_handler(str(tmp_path), date='2024-05-01')
        root = logging.getLogger(ROOT_LOGGER_NAME)
        try:
            get_logger('test_config').warning("写入日志文件")
            for handler in root.handlers:
                handler.flush()
            assert path.name == '2024-05-01.log'
            assert '写入日志文件' in path.read_text(encoding='utf-8')
        finally:
            for handler in list(root.handlers):
                if isinstance(handler, logging.FileHandler):
                    root.removeHandler(handler)
                    handler.close()


class TestFileUtils:

    def test_dumps_json_is_stable(self):
        first = dumps_json({'b': 0.1, 'a': [1, 2]})
        assert first == dumps_json({'a': [1, 2], 'b': 0.1})
        assert first.endswith("\n")
        assert json.loads(first)['b'] == 0.1

    def test_full_precision(self):
        value = 0.1 + 0.2
        assert json.loads(dumps_json({'x': value}))['x'] == value

    def test_file_manager_round_trip(self, tmp_path):
        manager = FileManager()
        path = tmp_path / 'nested' / 'report.json'
        assert manager.save_json({'report': 'rank'}, path)
        assert json.loads(path.read_text(encoding='utf-8')) == {'report': 'rank'}


class TestReloadAndProgress:

    def test_reload_picks_up_changes(self, tmp_path):
        config = ConfigManager(config_dir=str(tmp_path), apply_logging=False)
        assert config.get_solver_config()['max_iter'] == 50
        (tmp_path / 'settings.yaml').write_text("solver:\n  max_iter: 9\n", encoding='utf-8')
        config.reload_config()
        assert config.get_solver_config()['max_iter'] == 9

    def test_progress_counts(self):
        from src.utils.progress import ProgressManager
        with ProgressManager(3, "分块", silent=True) as progress:
            for _ in range(3):
                progress.update()
        assert progress.current == 3
