"""测试公共夹具"""
from pathlib import Path

import numpy as np
import pytest

REPO_ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture
def fixture_csv() -> Path:
    """三资产合成收益率表格"""
    return REPO_ROOT / 'data' / 'fixtures' / 'three_assets.csv'


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240501)


@pytest.fixture
def write_csv(tmp_path):
    """把文本写成临时 CSV 并返回路径"""
    def _write(content: str, name: str = 'returns.csv') -> Path:
        path = tmp_path / name
        path.write_text(content, encoding='utf-8')
        return path
    return _write


@pytest.fixture
def settings_dir(tmp_path, monkeypatch):
    """写入临时 settings.yaml 并替换全局配置管理器"""
    from src.utils import config as config_module

    def _install(content: str) -> Path:
        directory = tmp_path / 'config'
        directory.mkdir(exist_ok=True)
        (directory / 'settings.yaml').write_text(content, encoding='utf-8')
        manager = config_module.ConfigManager(config_dir=str(directory), apply_logging=False)
        monkeypatch.setattr(config_module, '_config_manager', manager)
        return directory
    return _install


@pytest.fixture(autouse=True)
def _drop_stale_log_streams():
    """测试隔离: 移除绑定在已关闭的 pytest 捕获流上的日志处理器"""
    import logging
    yield
    root = logging.getLogger('roy')
    for handler in list(root.handlers):
        stream = getattr(handler, 'stream', None)
        if type(handler) is logging.StreamHandler and getattr(stream, 'closed', False):
            root.removeHandler(handler)
