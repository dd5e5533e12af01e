"""
配置管理系统
加载数值求解、模拟和命令行的默认参数，以及日志配置
"""
import copy
import logging.config
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .logger import get_logger

# 配置文件缺失时使用的内置默认值，与 config/settings.yaml 保持一致
DEFAULT_SETTINGS: Dict[str, Any] = {
    'app_config': {
        'log_dir': None,
        'log_level': 'WARNING',
    },
    'solver': {
        'tol': 1e-12,
        'max_iter': 50,
        'singular_threshold': 1e-14,
        'bisection_width': 3.0,
    },
    'montecarlo': {
        'generator': 'PCG64DXSM',
        'chunk_size': 1048576,
        'workers': 1,
        'default_paths': 1000000,
        'acceptance_paths': 10000000,
        'seed': 20240501,
    },
    'cli': {
        'rfr': 0.0,
        'horizon': 1.0,
        'method': 'cf-quadratic',
        'b3': 1.0,
        'output': 'table',
        'significant_digits': 4,
        'min_rows': 8,
        'period': 'day',
        'term_grid': [20, 60, 120, 204, 252, 504, 1260],
    },
    'counterexample': {
        'mu': 0.001,
        'sigma': 0.01,
        'p': 0.0001,
        'bonus': 0.25,
        'grid_points': 501,
        'grid_tail': 1e-5,
        'probe_count': 11,
        'paths': 1000000,
    },
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """递归合并配置字典，override 优先"""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    """
    配置管理器

    负责加载和管理所有配置文件，提供统一的配置访问接口
    """

    def __init__(self, config_dir: Optional[str] = None, apply_logging: bool = True):
        """
        初始化配置管理器

        Args:
            config_dir: 配置文件目录，默认取环境变量 ROY_CONFIG_DIR，否则为仓库下的 config/
            apply_logging: 是否应用 logging.yaml
        """
        if config_dir is None:
            config_dir = os.environ.get('ROY_CONFIG_DIR') or str(Path(__file__).resolve().parents[2] / 'config')
        self.config_dir = Path(config_dir)
        self.logger = get_logger('config_manager')
        self.apply_logging = apply_logging

        # 配置缓存
        self._settings: Dict[str, Any] = {}
        self._logging_config = None

        self._load_configs()

    def _load_configs(self):
        """加载所有配置文件"""
        self._load_settings()
        if self.apply_logging:
            self._load_logging_config()
        self.logger.debug("配置文件加载完成")

    def _load_settings(self):
        """加载数值与命令行默认参数"""
        settings_file = self.config_dir / "settings.yaml"

        if not settings_file.exists():
            self.logger.warning(f"配置文件不存在，使用内置默认值: {settings_file}")
            self._settings = copy.deepcopy(DEFAULT_SETTINGS)
            return

        try:
            with open(settings_file, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}
            self._settings = _merge(DEFAULT_SETTINGS, loaded)
            self.logger.debug(f"参数配置加载成功: {settings_file}")
        except (OSError, yaml.YAMLError) as e:
            self.logger.error(f"参数配置加载失败: {e}")
            raise

    def _load_logging_config(self):
        """加载日志配置"""
        logging_file = self.config_dir / "logging.yaml"

        if not logging_file.exists():
            self.logger.warning(f"日志配置文件不存在: {logging_file}")
            return

        try:
            with open(logging_file, 'r', encoding='utf-8') as f:
                self._logging_config = yaml.safe_load(f)

            # 应用日志配置
            logging.config.dictConfig(self._logging_config)
            self.logger.debug(f"日志配置加载成功: {logging_file}")

        except (OSError, yaml.YAMLError, ValueError) as e:
            self.logger.error(f"日志配置加载失败: {e}")

    def get_section(self, name: str) -> Dict[str, Any]:
        """
        获取配置段

        Args:
            name: 配置段名称

        Returns:
            配置字典的副本，不存在返回空字典
        """
        return copy.deepcopy(self._settings.get(name, {}))

    def get_app_config(self, key: str = None) -> Any:
        """
        获取应用配置

        Args:
            key: 配置键名，如果为None则返回所有应用配置

        Returns:
            配置值或配置字典
        """
        app_config = self._settings.get('app_config', {})
        if key is None:
            return copy.deepcopy(app_config)
        return app_config.get(key)

    def get_solver_config(self) -> Dict[str, Any]:
        return self.get_section('solver')

    def get_montecarlo_config(self) -> Dict[str, Any]:
        return self.get_section('montecarlo')

    def get_cli_config(self) -> Dict[str, Any]:
        return self.get_section('cli')

    def get_counterexample_config(self) -> Dict[str, Any]:
        return self.get_section('counterexample')

    def reload_config(self):
        """重新加载配置文件"""
        self.logger.info("重新加载配置文件")
        self._settings = {}
        self._logging_config = None
        self._load_configs()

    def get_config_summary(self) -> Dict[str, Any]:
        """
        获取配置摘要信息

        Returns:
            配置摘要字典
        """
        solver = self.get_solver_config()
        mc = self.get_montecarlo_config()
        cli = self.get_cli_config()
        return {
            "配置目录": str(self.config_dir),
            "日志配置": "已加载" if self._logging_config else "未加载",
            "Newton 容差": solver['tol'],
            "Newton 最大迭代": solver['max_iter'],
            "随机数生成器": mc['generator'],
            "模拟分块大小": mc['chunk_size'],
            "默认种子": mc['seed'],
            "默认方法": cli['method'],
            "默认期数": cli['horizon'],
        }


# 全局配置管理器实例
_config_manager = None


def get_config() -> ConfigManager:
    """
    获取全局配置管理器实例

    Returns:
        ConfigManager实例
    """
    global _config_manager

    if _config_manager is None:
        _config_manager = ConfigManager()

    return _config_manager


def reload_config():
    """重新加载全局配置"""
    global _config_manager

    if _config_manager is not None:
        _config_manager.reload_config()
    else:
        _config_manager = ConfigManager()


# 便捷函数
def get_solver_defaults() -> Dict[str, Any]:
    """便捷函数：获取求解器参数 (来自全局配置的 solver 段)"""
    return get_config().get_solver_config()


def get_montecarlo_defaults() -> Dict[str, Any]:
    """便捷函数：获取模拟参数 (来自全局配置的 montecarlo 段)"""
    return get_config().get_montecarlo_config()
