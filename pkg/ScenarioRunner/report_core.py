"""
检查报告：逐项记录、总判定与 human/json 两种输出。

退出码约定：0 全部通过，1 存在失败项，2 输入错误（由 main.py 负责）。
"""
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, TextIO

from style.log_style import format_verdict
from utils.logger import LogManager

logger = LogManager.get_logger("SR")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT_ERROR = 2

FORMATS = ("human", "json")


@dataclass
class CheckRecord:
    """单项检查结果"""
    suite: str
    name: str
    passed: bool
    residual: Optional[float] = None
    details: str = ""


@dataclass
class Report:
    scenario_id: str
    kind: str
    checks: List[CheckRecord] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def exit_code(self) -> int:
        return EXIT_PASS if self.passed else EXIT_FAIL

    def failures(self) -> List[CheckRecord]:
        return [c for c in self.checks if not c.passed]


def format_residual(value: Optional[float]) -> Optional[str]:
    """完整精度的十进制字符串；缺失或非有限值为 None"""
    if value is None or not math.isfinite(value):
        return None
    return format(float(value), '.17g')


def report_to_dict(report: Report, timing: bool = False) -> Dict:
    payload = {
        "scenario": report.scenario_id,
        "kind": report.kind,
        "verdict": report.verdict,
        "checks": [
            {
                "suite": c.suite,
                "name": c.name,
                "pass": c.passed,
                "residual": format_residual(c.residual),
                "details": c.details,
            }
            for c in report.checks
        ],
    }
    if timing:
        payload["timing"] = {suite: format_residual(sec) for suite, sec in report.timing.items()}
    return payload


def _human_lines(report: Report, timing: bool, colored: bool = False) -> List[str]:
    lines = ["=" * 50, f"场景 {report.scenario_id} ({report.kind}) 检查结果:"]
    suites: List[str] = []
    for c in report.checks:
        if c.suite not in suites:
            suites.append(c.suite)
    for i, suite in enumerate(suites, 1):
        header = f"{i}. {suite}"
        if timing and suite in report.timing:
            header += f" ({report.timing[suite]:.2f}s)"
        lines.append(header)
        for c in (c for c in report.checks if c.suite == suite):
            mark = format_verdict(c.passed, colored)
            res = "-" if format_residual(c.residual) is None else f"{c.residual:.3e}"
            line = f"  - [{mark}] {c.name}  残差 {res}"
            if c.details:
                line += f"  {c.details}"
            lines.append(line)
    failed = report.failures()
    if failed:
        lines.append(f"结论: {len(failed)} 项失败 / 共 {len(report.checks)} 项")
    else:
        lines.append(f"结论: 全部 {len(report.checks)} 项通过")
    lines.append("=" * 50)
    return lines


def emit_report(report: Report, fmt: str = "human", stream: Optional[TextIO] = None,
                timing: bool = False) -> int:
    """
    输出报告

    Args:
        report: 检查报告
        fmt: human 或 json
        stream: 输出流，默认 stdout
        timing: 是否输出各套件耗时

    Returns:
        退出码 0 / 1
    """
    if fmt not in FORMATS:
        raise ValueError(f"不支持的输出格式: {fmt}. 可选值: {list(FORMATS)}")
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(report_to_dict(report, timing), ensure_ascii=False, indent=4))
        stream.write("\n")
    else:
        colored = hasattr(stream, "isatty") and stream.isatty()
        stream.write("\n".join(_human_lines(report, timing, colored)) + "\n")
    stream.flush()

    if report.passed:
        logger.success(f"场景 {report.scenario_id}: 全部 {len(report.checks)} 项检查通过")
    else:
        names = ", ".join(c.name for c in report.failures()[:10])
        more = len(report.failures()) - 10
        if more > 0:
            names += f" ... 以及 {more} 个更多"
        logger.warning(f"场景 {report.scenario_id}: 失败项 {names}")
    return report.exit_code
