"""
命名日志记录器。输出写入 stderr，stdout 留给 JSON 报告。

    from utils.logger import LogManager

    logger = LogManager.get_logger("KC")
    logger.info("构建 H^K").debug("Gram 矩阵秩: 4")

各模块使用固定的短标签：LA 线性代数、BD 丛、KC 核、GR Grassmann、CP 完全正映射、
UV 万有性、SR 场景运行器、CFG 配置。
"""
import datetime
import sys
import threading
from typing import Dict, Optional, TextIO

from style.log_style import format_console_log


def _level_value(level: str) -> int:
    value = Logger.LEVELS.get(level.lower())
    if value is None:
        raise ValueError(f"不支持的日志级别: {level}. 可选值: {list(Logger.LEVELS)}")
    return value


class Logger:
    """带级别过滤的控制台日志记录器，所有记录方法返回自身以便链式调用"""

    LEVELS = {
        "debug": 10,
        "info": 20,
        "success": 25,
        "warning": 30,
        "error": 40,
        "critical": 50
    }

    # 多个记录器共享同一把锁，线程池中的套件输出不会交错
    _write_lock = threading.Lock()

    def __init__(self, log_to_console: bool = True, level: str = "info", name: Optional[str] = None,
                 stream: Optional[TextIO] = None):
        """
        Args:
            log_to_console: False 时静默
            level: 最低输出级别，未知值按 info 处理
            name: 记录器标签，出现在每条消息前
            stream: 输出流；None 时在写入时取 sys.stderr（pytest 捕获依赖这一点）
        """
        self.enabled = log_to_console
        self._name = name or f"logger_{id(self)}"
        self._stream = stream
        self._threshold = self.LEVELS.get(level.lower(), self.LEVELS["info"])

    @property
    def name(self) -> str:
        return self._name

    def set_level(self, level: str) -> "Logger":
        self._threshold = _level_value(level)
        return self

    def get_level(self) -> str:
        by_value = {v: k for k, v in self.LEVELS.items()}
        return by_value.get(self._threshold, "info")

    def set_stream(self, stream: Optional[TextIO]) -> "Logger":
        self._stream = stream
        return self

    def is_enabled_for(self, level: str) -> bool:
        return self.LEVELS.get(level.lower(), self.LEVELS["info"]) >= self._threshold

    def log(self, message: str, level: str = "info") -> "Logger":
        level = level.lower()
        if self.enabled and self.is_enabled_for(level):
            stamp = datetime.datetime.now().strftime("%H:%M:%S")
            line = format_console_log(stamp, f"[{self._name}] {message}", level)
            with self._write_lock:
                print(line, file=self._stream or sys.stderr)
        return self

    def debug(self, message: str) -> "Logger":
        return self.log(message, "debug")

    def info(self, message: str) -> "Logger":
        return self.log(message, "info")

    def success(self, message: str) -> "Logger":
        return self.log(message, "success")

    def warning(self, message: str) -> "Logger":
        return self.log(message, "warning")

    def error(self, message: str) -> "Logger":
        return self.log(message, "error")

    def critical(self, message: str) -> "Logger":
        return self.log(message, "critical")


class LogManager:
    """按标签登记的记录器表；同一标签总是返回同一个 Logger"""

    _registry: Dict[str, Logger] = {}
    _default_level: Optional[str] = None

    @classmethod
    def get_logger(cls, name: Optional[str] = None, **kwargs) -> Logger:
        """
        Args:
            name: 标签；None 时返回不登记的独立记录器
            **kwargs: 首次创建时传给 Logger
        """
        if name is None:
            return Logger(**kwargs)
        logger = cls._registry.get(name)
        if logger is None:
            if cls._default_level is not None:
                kwargs.setdefault("level", cls._default_level)
            logger = cls._registry[name] = Logger(name=name, **kwargs)
        return logger

    @classmethod
    def set_global_level(cls, level: str) -> None:
        """已登记的和之后创建的记录器都使用该级别"""
        _level_value(level)
        cls._default_level = level.lower()
        for logger in cls._registry.values():
            logger.set_level(level)

    @classmethod
    def remove_logger(cls, name: str) -> bool:
        return cls._registry.pop(name, None) is not None
