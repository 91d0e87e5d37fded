"""
控制台样式：日志行与检查报告中的级别标签、判定标记。

    from style.log_style import format_console_log
    print(format_console_log("14:30:22", "[UV] 万有性验证通过", "success"), file=sys.stderr)

设置环境变量 NO_COLOR 可关闭彩色输出。
"""
import os
from typing import Dict, NamedTuple

import colorama
from colorama import Fore, Style


class LevelStyle(NamedTuple):
    label: str
    color: str


class ConsoleColors:
    """colorama 颜色开关；未启用时所有着色函数原样返回文本"""
    ENABLED = "NO_COLOR" not in os.environ
    DIM = Fore.LIGHTBLACK_EX
    BOLD = Style.BRIGHT
    RESET = Style.RESET_ALL

    _ready = False

    @classmethod
    def init(cls):
        if not cls._ready:
            # Windows 终端需要 colorama 转换 ANSI 序列
            colorama.just_fix_windows_console()
            cls._ready = True

    @classmethod
    def set_enabled(cls, enabled: bool):
        cls.ENABLED = enabled

    @classmethod
    def paint(cls, text: str, color: str, bold: bool = False) -> str:
        if not cls.ENABLED:
            return text
        return f"{cls.BOLD if bold else ''}{color}{text}{cls.RESET}"


ConsoleColors.init()

LEVEL_STYLES: Dict[str, LevelStyle] = {
    "debug": LevelStyle("DEBUG", Fore.LIGHTBLACK_EX),
    "info": LevelStyle("INFO", Fore.BLUE),
    "success": LevelStyle("SUCCESS", Fore.GREEN),
    "warning": LevelStyle("WARN", Fore.YELLOW),
    "error": LevelStyle("ERROR", Fore.RED),
    "critical": LevelStyle("CRIT", Fore.LIGHTRED_EX),
}

TAG_WIDTH = 9


def format_tag(level: str) -> str:
    """定宽居中的级别标签，如 "[ INFO  ]"；未知级别按 info 处理"""
    inner = TAG_WIDTH - 2
    label = LEVEL_STYLES.get(level, LEVEL_STYLES["info"]).label[:inner]
    # 奇数空位时多出的一格放在右侧
    left = (inner - len(label)) // 2
    return f"[{' ' * left}{label}".ljust(inner + 1) + "]"


def format_console_log(timestamp: str, message: str, level: str = "info") -> str:
    style = LEVEL_STYLES.get(level, LEVEL_STYLES["info"])
    stamp = ConsoleColors.paint(f"[{timestamp}]", ConsoleColors.DIM)
    tag = ConsoleColors.paint(format_tag(level), style.color, bold=True)
    return f"{stamp} {tag} {message}"


def format_verdict(passed: bool, colored: bool = True) -> str:
    """报告中的判定标记：通过为绿色，失败为红色"""
    text = "通过" if passed else "失败"
    if not colored:
        return text
    return ConsoleColors.paint(text, Fore.GREEN if passed else Fore.RED, bold=True)
