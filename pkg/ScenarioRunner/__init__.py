"""
ScenarioRunner - 场景驱动的检查运行器
场景文件解析、检查套件分派与 human/json 报告输出
"""

from .scenario_model import KINDS, Scenario, load_scenario, scenario_from_dict
from .report_core import (EXIT_FAIL, EXIT_INPUT_ERROR, EXIT_PASS, CheckRecord, Report, emit_report,
                          format_residual, report_to_dict)
from .scenario_adapter import SUITES, ScenarioAdapter, applicable_suites, run_scenario, run_suite, scenario_suites

__all__ = ['KINDS', 'Scenario', 'load_scenario', 'scenario_from_dict', 'EXIT_FAIL', 'EXIT_INPUT_ERROR',
           'EXIT_PASS', 'CheckRecord', 'Report', 'emit_report', 'format_residual', 'report_to_dict',
           'SUITES', 'ScenarioAdapter', 'applicable_suites', 'run_scenario', 'run_suite',
           'scenario_suites']
