# main.py

"""
命令行入口

    python main.py check config/scenarios/szego.json
    python main.py universality my_kernel.json --format json --tolerance 1e-10
    python main.py demo all --timing

退出码: 0 全部通过, 1 存在失败项, 2 输入错误
"""
import argparse
import os
import sys
from typing import List, Optional, Sequence

from ScenarioRunner import (EXIT_INPUT_ERROR, Report, Scenario, ScenarioAdapter, applicable_suites, emit_report,
                            load_scenario, scenario_suites)
from ScenarioRunner.scenario_adapter import SUITES
from utils.config_manager import ROOT_DIR, ConfigManager
from utils.exceptions import ScenarioError
from utils.logger import LogManager, Logger

COMMANDS = ("check", "rkhs", "pullback", "universality", "stinespring", "gns")

logger = LogManager.get_logger("SR")


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"不是数值: {text}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"容差必须为正: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=_positive_float, default=None, help="相对容差 τ")
    common.add_argument("--seed", type=int, default=None, help="随机套件的种子")
    common.add_argument("--format", choices=("human", "json"), default="human", help="报告格式")
    common.add_argument("--suite", action="append", choices=SUITES, default=None,
                        help="要运行的套件（可重复）")
    common.add_argument("--log-level", choices=tuple(Logger.LEVELS.keys()), default=None, help="日志级别")
    common.add_argument("--timing", action="store_true", help="报告中包含各套件耗时")

    parser = argparse.ArgumentParser(prog="main.py", description="再生(−*)-核与完全正映射的数值检查工具")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=f"运行 {name} 检查")
        p.add_argument("scenario", help="场景文件路径 (JSON)")
    p = sub.add_parser("demo", parents=[common], help="运行内置示例场景")
    p.add_argument("name", help="示例名称，或 all 运行全部示例")
    return parser


def scenario_dir() -> str:
    path = ConfigManager.instance().get_section("runner_config").get("scenario_dir", "config/scenarios")
    return path if os.path.isabs(path) else os.path.join(ROOT_DIR, path)


def demo_names() -> List[str]:
    directory = scenario_dir()
    if not os.path.isdir(directory):
        return []
    return sorted(os.path.splitext(f)[0] for f in os.listdir(directory) if f.endswith(".json"))


def _suites_for(command: str, requested: Optional[Sequence[str]], scenario: Scenario) -> List[str]:
    """
    选择要运行的套件

    显式 --suite 优先；check 与 demo 取场景声明的套件，未声明时取场景可运行的全部套件；
    其余子命令取配置中的默认套件
    """
    if requested:
        return list(dict.fromkeys(requested))
    kind = scenario.kind
    if command in ("check", "demo") and scenario.suites:
        return list(scenario.suites)
    defaults = ConfigManager.instance().get_section("runner_config").get("default_suites", {})
    chosen = [s for s in defaults.get(command, []) if s in applicable_suites(kind, include_property=True)]
    if command in ("check", "demo") or not defaults.get(command):
        return chosen or scenario_suites(scenario)
    if not chosen:
        raise ScenarioError("suite", f"子命令 {command} 的套件不适用于 {kind} 场景")
    return chosen


def run_file(path: str, args: argparse.Namespace) -> Report:
    scenario = load_scenario(path)
    suites = _suites_for(args.command, args.suite, scenario)
    return ScenarioAdapter(scenario, args.tolerance, args.seed).run(suites)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = args.log_level or ConfigManager.instance().get_section("runner_config").get("log_level", "info")
    LogManager.set_global_level(level)

    if args.command == "demo":
        names = demo_names() if args.name == "all" else [args.name]
        if not names:
            logger.error(f"示例目录为空: {scenario_dir()}")
            return EXIT_INPUT_ERROR
        paths = [os.path.join(scenario_dir(), f"{name}.json") for name in names]
    else:
        paths = [args.scenario]

    exit_code = 0
    for path in paths:
        try:
            report = run_file(path, args)
        except ScenarioError as e:
            logger.error(f"输入错误: {e}")
            return EXIT_INPUT_ERROR
        exit_code = max(exit_code, emit_report(report, args.format, sys.stdout, args.timing))
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
