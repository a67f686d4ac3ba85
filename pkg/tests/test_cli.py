import sys
import os
import csv
import json
from unittest.mock import patch

import pytest

# 添加项目根目录到 Python 路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app.cli import commands, main
from app.cli.commands import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_PACKING_INFEASIBLE
from app.models.config import ExperimentConfig


@pytest.fixture
def write_config(tmp_path):
    """写入 JSON 配置文件并返回路径"""
    def _write(**fields):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(fields), encoding="utf-8")
        return str(path)
    return _write


def _rows(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.reader(f))


def test_init_config(tmp_path):
    """init-config 写出默认配置"""
    out = tmp_path / "default.json"
    assert main(["init-config", "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text(encoding="utf-8"))["N"] == 4


def test_optimize_prints_report(write_config, tmp_path, capsys):
    """optimize 输出天线位置与功率，并可写出 trials.csv"""
    config = write_config(trials=1, max_iterations=5)
    assert main(["optimize", "--config", config, "--out", str(tmp_path / "run")]) == EXIT_OK
    output = capsys.readouterr().out
    assert "MA 天线位置" in output
    assert "保密速率" in output
    assert len(_rows(tmp_path / "run" / "trials.csv")) == 2


def test_sweep_gamma_outputs(write_config, tmp_path):
    """sweep-gamma 写出 trials.csv 与 summary.csv"""
    config = write_config(gamma_db=[0.0, 10.0], trials=2, max_iterations=5)
    out = tmp_path / "sweep"
    assert main(["sweep-gamma", "--config", config, "--out", str(out)]) == EXIT_OK
    summary = _rows(out / "summary.csv")
    assert summary[0] == ["axis_value", "ma_mean", "ma_std", "fpa_mean", "fpa_std", "infeasible_frac"]
    assert [row[0] for row in summary[1:]] == ["0", "10"]
    assert len(_rows(out / "trials.csv")) == 1 + 4


def test_sweep_region_default_grid(write_config, tmp_path):
    """未给出扫描列表时使用默认区域网格"""
    config = write_config(trials=1, max_iterations=3)
    out = tmp_path / "region"
    assert main(["sweep-region", "--config", config, "--out", str(out)]) == EXIT_OK
    assert [row[0] for row in _rows(out / "summary.csv")[1:]] == ["1", "2", "3", "4", "6", "8"]


def test_sweep_is_byte_identical(write_config, tmp_path):
    """相同配置两次运行输出逐字节一致"""
    config = write_config(gamma_db=[5.0, 15.0], trials=2, max_iterations=5)
    assert main(["sweep-gamma", "--config", config, "--out", str(tmp_path / "a")]) == EXIT_OK
    assert main(["sweep-gamma", "--config", config, "--out", str(tmp_path / "b"), "--workers", "2"]) == EXIT_OK
    for name in ("trials.csv", "summary.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_convergence_writes_trace(write_config, tmp_path):
    """convergence 写出 trace.csv"""
    config = write_config(trials=2, max_iterations=5)
    assert main(["convergence", "--config", config, "--out", str(tmp_path)]) == EXIT_OK
    rows = _rows(tmp_path / "trace.csv")
    assert rows[0] == ["seed", "iteration", "objective"]
    assert {row[0] for row in rows[1:]} == {"2024", str(2024 ^ 1)}


def test_config_errors_exit_2(write_config, tmp_path):
    """配置错误返回退出码 2"""
    assert main(["optimize", "--config", str(tmp_path / "missing.json")]) == EXIT_CONFIG_ERROR
    assert main(["optimize", "--config", write_config(antennas=4)]) == EXIT_CONFIG_ERROR
    assert main(["convergence", "--config", write_config(optimizer="bsum1d", trials=1),
                 "--out", str(tmp_path)]) == EXIT_CONFIG_ERROR
    assert main(["sweep-gamma", "--config", write_config(trials=1), "--workers", "0",
                 "--out", str(tmp_path)]) == EXIT_CONFIG_ERROR


def test_packing_infeasible_exit_3(write_config):
    """天线无法放置时返回退出码 3"""
    config = write_config(N=100, A_over_lambda=1.0, trials=1)
    assert main(["optimize", "--config", config]) == EXIT_PACKING_INFEASIBLE
    config = write_config(N=4, A_over_lambda=1.0, optimizer="bsum1d", trials=1)
    assert main(["optimize", "--config", config]) == EXIT_PACKING_INFEASIBLE


def test_example_config_runs_single_scenario():
    """示例配置不含扫描列表，可直接用于 optimize"""
    example = os.path.join(os.path.dirname(__file__), '..', 'config.example.json')
    cfg = ExperimentConfig.from_file(example)
    assert not cfg.is_sweep("gamma_db")
    assert not cfg.is_sweep("A_over_lambda")
    assert main(["optimize", "--config", example]) == EXIT_OK


def test_main_configures_logging(tmp_path):
    """命令行入口按运行时设置配置根日志"""
    with patch.object(commands.logging, "basicConfig") as mock_basic_config:
        assert main(["init-config", "--out", str(tmp_path / "cfg.json")]) == EXIT_OK
    mock_basic_config.assert_called_once()
    assert mock_basic_config.call_args.kwargs["level"] == commands.get_runtime_settings().LOG_LEVEL


def test_convergence_writes_one_trace_per_setup(write_config, tmp_path):
    """多个组合时每个 (N, L_b) 各写一个 trace 文件"""
    config = write_config(trials=1, max_iterations=3, convergence_setups=[[1, 2], [4, 4]])
    assert main(["convergence", "--config", config, "--out", str(tmp_path)]) == EXIT_OK
    for name in ("trace_N1_Lb2.csv", "trace_N4_Lb4.csv"):
        rows = _rows(tmp_path / name)
        assert rows[0] == ["seed", "iteration", "objective"]
        assert {row[0] for row in rows[1:]} == {"2024"}
    assert not (tmp_path / "trace.csv").exists()
