"""Unit tests for run configuration files."""
from pathlib import Path

import pytest

from burgerslab.cli.config_file import load_config, parse_config
from burgerslab.core.exceptions import ConfigError
from burgerslab.core.models.config import Convention


def test_minimal_figure_config():
    """Test that a figure selector implies the figure command."""
    config = parse_config("figure = fig4\npreset = ci\n")

    assert config.command == "figure"
    assert config.figure == "fig4"
    assert config.preset == "ci"


def test_overrides_win_over_file():
    """Test that command-line values replace file values and None is ignored."""
    config = parse_config(
        "command = simulate\nJ = 512\nN = 4, 8\n", {"J": 256, "sigma": None, "workers": 2}
    )

    assert config.J == 256
    assert config.N == [4, 8]
    assert config.sigma is None
    assert config.workers == 2


def test_bad_value_names_its_key():
    """Test that a malformed value reports the offending key."""
    with pytest.raises(ConfigError) as exc_info:
        parse_config("command = simulate\nsigma = abc\n")
    assert exc_info.value.key == "sigma"


def test_bad_value_without_selector_names_its_key():
    """Test that a malformed value is reported before a missing selector."""
    with pytest.raises(ConfigError) as exc_info:
        parse_config("sigma=abc")
    assert exc_info.value.key == "sigma"


def test_calibration_path():
    """Test that a frozen calibration manifest is read as a path."""
    config = parse_config("check = theorem1\ncalibration = runs/calibration.txt\n")

    assert config.calibration == Path("runs/calibration.txt")
    assert config.calibrate is False


def test_unknown_key_is_rejected():
    """Test that unknown keys are rejected before validation."""
    with pytest.raises(ConfigError) as exc_info:
        parse_config("command = simulate\nspeed = 3\n")
    assert exc_info.value.key == "speed"


def test_missing_selector():
    """Test that a run needs a command, figure or check."""
    with pytest.raises(ConfigError) as exc_info:
        parse_config("", {"J": 64})
    assert exc_info.value.key == "command"


def test_conflicting_selectors():
    """Test that figure and check cannot be combined."""
    with pytest.raises(ConfigError):
        parse_config("figure = fig4\ncheck = pw\n")
    with pytest.raises(ConfigError):
        parse_config("command = simulate\nfigure = fig1\n")
    with pytest.raises(ConfigError):
        parse_config("command = check\n")


def test_check_config_with_convention():
    """Test a check selector and an enum value."""
    config = parse_config("check = theorem1\ncalibrate = true\nconvention = paper_fig1\n")

    assert config.command == "check"
    assert config.calibrate is True
    assert config.convention == Convention.PAPER_FIG1


def test_load_config_file(tmp_path):
    """Test reading a configuration file from disk."""
    path = tmp_path / "run.cfg"
    path.write_text("# fig6 at CI size\nfigure = fig6\noutput_dir = out\n")

    config = load_config(path)

    assert config.figure == "fig6"
    assert config.output_dir == Path("out")
    assert load_config(None, {"command": "cc"}).command == "cc"
