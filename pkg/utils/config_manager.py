"""
配置管理模块，读写 config/KC_config.json。

使用方法:
    from utils.config_manager import ConfigManager, resolve_tol

    tol = resolve_tol(None, "dilation")        # 读取配置中的容差
    cfg = ConfigManager.instance().get_section("property_config")
"""
import copy
import json
import os
from typing import Any, Dict, Optional

from utils.logger import LogManager

logger = LogManager.get_logger("CFG")

# 仓库根目录，配置路径相对于它解析
ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "tolerance_config": {
        "relative": 1e-9,
        "dilation": 1e-8,
        "isometry": 1e-10,
        "exchange": 1e-9,
        "functor": 1e-10,
        "structural": 1e-9,
        "universality": 1e-8,
    },
    "property_config": {
        "instances": 100,
        "max_points": 5,
        "max_fiber_dim": 3,
        "morphism_pairs": 50,
        "max_workers": 4,
    },
    "cp_config": {
        "amplification_samples": 20,
        "max_amplification": 3,
        "random_kraus_maps": 50,
        "max_kraus": 3,
        "expectation_triples": 10,
    },
    "runner_config": {
        "log_level": "info",
        "seed": 0,
        "scenario_dir": "config/scenarios",
        "default_suites": {},
    },
}


class ConfigManager:
    """配置管理器：内置默认值，文件中的同名键覆盖默认值"""

    _instance: Optional["ConfigManager"] = None

    def __init__(self, config_file: str = "config/KC_config.json"):
        self.config_file = config_file
        self.config: Dict[str, Dict[str, Any]] = copy.deepcopy(DEFAULT_CONFIG)

    @classmethod
    def instance(cls) -> "ConfigManager":
        """获取共享实例，首次调用时加载配置文件"""
        if cls._instance is None:
            cls._instance = cls()
            cls._instance.load_config()
        return cls._instance

    @classmethod
    def reset(cls):
        """丢弃共享实例（测试用）"""
        cls._instance = None

    def _resolve(self, config_path: Optional[str]) -> str:
        path = config_path or self.config_file
        return path if os.path.isabs(path) else os.path.join(ROOT_DIR, path)

    def set_config(self, config: Dict[str, Any]):
        """按分区合并配置参数，未知分区会被忽略"""
        for section, values in config.items():
            if section not in self.config:
                logger.warning(f"忽略未知配置分区: {section}")
                continue
            if not isinstance(values, dict):
                logger.warning(f"配置分区 {section} 不是对象，已忽略")
                continue
            self.config[section].update(values)

    def load_config(self, config_path: Optional[str] = None) -> bool:
        """从文件加载配置"""
        path = self._resolve(config_path)
        if not os.path.exists(path):
            logger.warning(f"配置文件不存在: {path}，使用默认配置")
            return False
        try:
            with open(path, 'r', encoding='utf-8') as f:
                config_data = json.load(f)
            self.set_config(config_data)
            logger.debug(f"配置已加载: {path}")
            return True
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"加载配置失败: {e}")
            return False

    def save_config(self, config_path: Optional[str] = None) -> bool:
        """保存配置到文件"""
        path = self._resolve(config_path)
        try:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(self.config, f, ensure_ascii=False, indent=4)
            logger.success(f"配置已保存到: {path}")
            return True
        except OSError as e:
            logger.error(f"保存配置失败: {e}")
            return False

    def get_section(self, name: str) -> Dict[str, Any]:
        """获取配置分区（副本）"""
        if name not in self.config:
            raise ValueError(f"不支持的配置分区: {name}")
        return copy.deepcopy(self.config[name])

    def get_tolerance(self, name: str = "relative") -> float:
        """获取命名容差"""
        tolerances = self.config["tolerance_config"]
        if name not in tolerances:
            raise ValueError(f"不支持的容差名称: {name}. 可选值: {list(tolerances.keys())}")
        return float(tolerances[name])


def resolve_tol(tol: Optional[float], name: str = "relative") -> float:
    """调用方显式给出的容差优先，否则读取配置"""
    if tol is not None:
        return float(tol)
    return ConfigManager.instance().get_tolerance(name)
