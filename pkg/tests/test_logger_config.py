import io
import json

import pytest

from utils.config_manager import DEFAULT_CONFIG, ConfigManager, resolve_tol
from utils.logger import LogManager, Logger


def test_logger_writes_prefixed_messages():
    stream = io.StringIO()
    logger = Logger(name="KC", stream=stream)
    logger.info("构建 H^K").debug("不会输出")
    text = stream.getvalue()
    assert "[KC] 构建 H^K" in text
    assert "不会输出" not in text


def test_logger_levels():
    stream = io.StringIO()
    logger = Logger(name="KC", level="warning", stream=stream)
    assert logger.get_level() == "warning"
    assert not logger.is_enabled_for("success")
    assert logger.is_enabled_for("error")
    logger.success("略过").error("配对矩阵奇异")
    assert "略过" not in stream.getvalue()
    assert "配对矩阵奇异" in stream.getvalue()
    with pytest.raises(ValueError):
        logger.set_level("verbose")


def test_silent_logger():
    stream = io.StringIO()
    Logger(log_to_console=False, stream=stream).critical("x")
    assert stream.getvalue() == ""


def test_log_manager_shares_named_loggers():
    first = LogManager.get_logger("TEST_SHARED")
    assert LogManager.get_logger("TEST_SHARED") is first
    assert LogManager.remove_logger("TEST_SHARED")
    assert not LogManager.remove_logger("TEST_SHARED")


def test_global_level():
    logger = LogManager.get_logger("TEST_LEVEL")
    try:
        LogManager.set_global_level("error")
        assert logger.get_level() == "error"
        assert LogManager.get_logger("TEST_LEVEL_LATE").get_level() == "error"
        with pytest.raises(ValueError):
            LogManager.set_global_level("loud")
    finally:
        LogManager.set_global_level("info")
        LogManager.remove_logger("TEST_LEVEL")
        LogManager.remove_logger("TEST_LEVEL_LATE")


def test_tolerance_defaults():
    assert resolve_tol(None) == DEFAULT_CONFIG["tolerance_config"]["relative"]
    assert resolve_tol(None, "dilation") == 1e-8
    assert resolve_tol(None, "isometry") == 1e-10
    assert resolve_tol(1e-6, "dilation") == 1e-6
    with pytest.raises(ValueError):
        ConfigManager.instance().get_tolerance("loose")


def test_set_config_merges_sections():
    config = ConfigManager.instance()
    config.set_config({"tolerance_config": {"relative": 1e-7}, "ui_config": {"theme": "dark"}})
    assert resolve_tol(None) == 1e-7
    assert resolve_tol(None, "exchange") == 1e-9
    with pytest.raises(ValueError):
        config.get_section("ui_config")


def test_sections_are_copies():
    config = ConfigManager.instance()
    config.get_section("property_config")["instances"] = 1
    assert config.get_section("property_config")["instances"] == DEFAULT_CONFIG["property_config"]["instances"]


def test_save_and_load(tmp_path):
    path = str(tmp_path / "KC_config.json")
    config = ConfigManager(path)
    config.set_config({"cp_config": {"max_kraus": 2}})
    assert config.save_config()
    with open(path, encoding="utf-8") as f:
        assert json.load(f)["cp_config"]["max_kraus"] == 2

    fresh = ConfigManager(path)
    assert fresh.load_config()
    assert fresh.get_section("cp_config")["max_kraus"] == 2
    assert fresh.get_section("cp_config")["random_kraus_maps"] == 50


def test_missing_or_broken_config(tmp_path):
    config = ConfigManager(str(tmp_path / "absent.json"))
    assert not config.load_config()
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    assert not config.load_config(str(broken))
    assert config.get_tolerance() == DEFAULT_CONFIG["tolerance_config"]["relative"]


def test_console_tags():
    from style.log_style import ConsoleColors, format_console_log, format_tag, format_verdict

    assert format_tag("info") == "[ INFO  ]"
    assert format_tag("success") == "[SUCCESS]"
    assert format_tag("warning") == "[ WARN  ]"
    assert format_verdict(True, colored=False) == "通过"
    enabled = ConsoleColors.ENABLED
    try:
        ConsoleColors.set_enabled(False)
        assert format_console_log("12:00:00", "ok", "warning") == "[12:00:00] [ WARN  ] ok"
        assert format_verdict(False) == "失败"
    finally:
        ConsoleColors.set_enabled(enabled)
