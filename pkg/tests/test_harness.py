import sys
import os
import csv

import numpy as np
import pytest

# 添加项目根目录到 Python 路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app.harness.export import (
    SUMMARY_COLUMNS,
    TRACE_COLUMNS,
    TRIALS_COLUMNS,
    format_float,
    write_summary_csv,
    write_trace_csv,
    write_trials_csv,
)
from app.harness.runner import (
    aggregate,
    convergence_report,
    fpa_baseline_layout,
    run_trial,
    run_trials,
    sweep,
)
from app.models.config import ExperimentConfig
from app.utils.exceptions import ConfigError
from app.utils.units import derive_trial_seed, split_seed

WAVELENGTH = 0.1


@pytest.fixture
def small_cfg():
    """缩减试验次数的默认场景"""
    return ExperimentConfig(trials=6, max_iterations=10)


def _read_csv(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.reader(f))


def test_fpa_baseline_layout():
    """均匀线阵以原点为中心、间距 λ/2"""
    np.testing.assert_allclose(fpa_baseline_layout(2, WAVELENGTH).positions[:, 0], [-0.025, 0.025])
    layout = fpa_baseline_layout(4, WAVELENGTH)
    np.testing.assert_allclose(layout.positions[:, 0], [-0.075, -0.025, 0.025, 0.075])
    np.testing.assert_array_equal(layout.positions[:, 1], np.zeros(4))
    np.testing.assert_allclose(np.diff(fpa_baseline_layout(7, WAVELENGTH).positions[:, 0]), WAVELENGTH / 2)
    assert fpa_baseline_layout(1, WAVELENGTH).is_valid()


def test_seed_derivation():
    """试验种子为 base ⊕ index，子种子可复现且互不相同"""
    assert derive_trial_seed(2024, 0) == 2024
    assert derive_trial_seed(2024, 5) == 2024 ^ 5
    assert len({derive_trial_seed(2024, i) for i in range(1000)}) == 1000
    streams = split_seed(77, 3)
    assert streams == split_seed(77, 3)
    assert len(set(streams)) == 3
    with pytest.raises(ValueError):
        derive_trial_seed(-1, 0)


def test_run_trial_deterministic(small_cfg):
    """同一 (cfg, seed) 两次运行结果相同"""
    a = run_trial(small_cfg, 42)
    b = run_trial(small_cfg, 42)
    np.testing.assert_array_equal(a.layout, b.layout)
    assert a.ma_secrecy_rate == b.ma_secrecy_rate
    assert a.fpa_secrecy_rate == b.fpa_secrecy_rate
    assert a.trace == b.trace


def test_run_trial_record_invariants(small_cfg):
    """速率非负，可行时 P_T* ≤ P"""
    for record in run_trials(small_cfg):
        assert record.ma_secrecy_rate >= 0.0
        assert record.fpa_secrecy_rate >= 0.0
        if record.ma_feasible:
            assert record.ma_signal_power <= small_cfg.total_power * (1 + 1e-12)
        else:
            assert record.ma_secrecy_rate == 0.0
        assert 0.0 <= record.ma_correlation <= 1.0
        assert record.iterations_used <= small_cfg.max_iterations


def test_vanishing_target_snr():
    """γ → 0 时两种方案的速率都趋于 0"""
    cfg = ExperimentConfig(gamma_db=-100.0, trials=1, max_iterations=5)
    record = run_trial(cfg, 3)
    assert record.ma_secrecy_rate < 1e-9
    assert record.fpa_secrecy_rate < 1e-9


def test_run_trials_ordered_and_parallel_invariant(small_cfg, tmp_path):
    """并行与串行输出逐字节一致"""
    serial = run_trials(small_cfg, workers=1)
    parallel = run_trials(small_cfg, workers=2)
    assert [r.trial_index for r in serial] == list(range(small_cfg.trials))
    write_trials_csv(tmp_path / "serial.csv", serial)
    write_trials_csv(tmp_path / "parallel.csv", parallel)
    assert (tmp_path / "serial.csv").read_bytes() == (tmp_path / "parallel.csv").read_bytes()


def test_aggregate_matches_records(small_cfg):
    """汇总均值等于逐试验记录的算术平均"""
    records = run_trials(small_cfg)
    row = aggregate(records, 4.0)
    assert row.axis_value == 4.0
    assert row.trials == small_cfg.trials
    assert row.ma_mean == pytest.approx(np.mean([r.ma_secrecy_rate for r in records]))
    assert row.fpa_std == pytest.approx(np.std([r.fpa_secrecy_rate for r in records], ddof=1))
    assert row.infeasible_frac == pytest.approx(np.mean([not r.ma_feasible for r in records]))

    reversed_row = aggregate(list(reversed(records)), 4.0)
    assert reversed_row.ma_mean == pytest.approx(row.ma_mean, rel=1e-12)

    single = aggregate(records[:1])
    assert single.ma_std == 0.0
    with pytest.raises(ValueError):
        aggregate([])


def test_ma_beats_fpa_on_default_scenario():
    """默认场景下 MA 平均保密速率高于 FPA"""
    records = run_trials(ExperimentConfig(trials=40))
    row = aggregate(records)
    assert row.ma_mean > row.fpa_mean


@pytest.mark.slow
def test_ma_beats_fpa_full_scale():
    """200 次试验：MA 平均速率更高，且至少 70% 的试验严格胜出"""
    records = run_trials(ExperimentConfig(trials=200), workers=4)
    row = aggregate(records)
    assert row.ma_mean > row.fpa_mean
    wins = sum(r.ma_secrecy_rate > r.fpa_secrecy_rate for r in records)
    assert wins >= 0.7 * len(records)


@pytest.mark.slow
def test_gamma_sweep_full_grid():
    """0–20 dB 共 21 点：最大值位于内部，最高 γ 处存在不可行试验"""
    grid = [float(v) for v in range(21)]
    result = sweep(ExperimentConfig(gamma_db=grid, trials=200), "gamma", workers=4)
    means = [row.ma_mean for row in result.rows]
    peak = int(np.argmax(means))
    assert 0 < peak < len(grid) - 1
    assert result.rows[-1].infeasible_frac > 0.0


@pytest.mark.slow
def test_region_sweep_full_grid():
    """A/λ ∈ {1,2,3,4,6,8}：MA 速率在抽样误差内不减，4 到 8 变化小于 5%，FPA 不变"""
    cfg = ExperimentConfig(A_over_lambda=[1.0, 2.0, 3.0, 4.0, 6.0, 8.0], trials=200)
    rows = sweep(cfg, "region_size", workers=4).rows
    for before, after in zip(rows, rows[1:]):
        std_error = np.sqrt((before.ma_std ** 2 + after.ma_std ** 2) / cfg.trials)
        assert after.ma_mean - before.ma_mean >= -std_error
    at_4, at_8 = rows[3].ma_mean, rows[5].ma_mean
    assert abs(at_8 - at_4) < 0.05 * at_4
    assert len({row.fpa_mean for row in rows}) == 1


@pytest.mark.slow
def test_convergence_median_full_scale():
    """100 个种子下达到最终值 99% 的迭代次数中位数不超过 30"""
    traces = convergence_report(ExperimentConfig(trials=100), workers=4)
    assert np.median([t.iterations_to_within for t in traces]) <= 30


def test_gamma_sweep_has_interior_maximum():
    """γ 扫描中保密速率先升后降"""
    cfg = ExperimentConfig(gamma_db=[0.0, 10.0, 30.0], trials=20, max_iterations=15)
    result = sweep(cfg, "gamma")
    assert [row.axis_value for row in result.rows] == [0.0, 10.0, 30.0]
    means = [row.ma_mean for row in result.rows]
    assert means[1] > means[0]
    assert means[1] > means[2]
    assert len(result.records) == 60
    assert result.rows[2].infeasible_frac > 0.0
    assert result.rows[2].infeasible_frac >= result.rows[1].infeasible_frac


def test_region_sweep_common_random_numbers():
    """区域扫描中 FPA 结果不变，大区域的 MA 速率不低于小区域"""
    cfg = ExperimentConfig(A_over_lambda=[1.0, 4.0, 8.0], trials=20, max_iterations=15)
    result = sweep(cfg, "region_size")
    fpa = [row.fpa_mean for row in result.rows]
    assert fpa[0] == fpa[1] == fpa[2]
    assert result.rows[2].ma_mean >= result.rows[0].ma_mean
    assert all(r.axis_value in (1.0, 4.0, 8.0) for r in result.records)


def test_sweep_requires_list():
    """扫描轴必须是列表"""
    with pytest.raises(ConfigError):
        sweep(ExperimentConfig(trials=1), "gamma")
    with pytest.raises(ConfigError):
        sweep(ExperimentConfig(trials=1), "bandwidth")


def test_convergence_report(small_cfg):
    """收敛轨迹单调不减；单径轨迹首轮后保持不变"""
    traces = convergence_report(small_cfg.at(max_iterations=30))
    assert len(traces) == small_cfg.trials
    for trace in traces:
        assert all(b >= a * (1 - 1e-12) for a, b in zip(trace.objectives, trace.objectives[1:]))
        assert trace.iterations_to_within <= 30
    assert np.median([t.iterations_to_within for t in traces]) <= 30

    flat = convergence_report(small_cfg.at(L_b=1))
    for trace in flat:
        assert len(set(trace.objectives[1:])) <= 1
        assert trace.objectives[-1] == pytest.approx(trace.objectives[0], rel=1e-12)

    with pytest.raises(ConfigError):
        convergence_report(small_cfg.at(optimizer="bsum1d"))


def test_bsum_and_comparison_records():
    """线阵优化器的布局位于 x 轴上，对比运行填充 alt 字段"""
    cfg = ExperimentConfig(optimizer="bsum1d", compare_optimizers=True, trials=2, max_iterations=10)
    for record in run_trials(cfg):
        np.testing.assert_array_equal(record.layout[:, 1], np.zeros(cfg.N))
        assert record.alt_channel_power is not None
        assert record.alt_secrecy_rate >= 0.0


def test_export_files(small_cfg, tmp_path):
    """CSV 首行为列名，浮点数保留 12 位有效数字"""
    records = run_trials(small_cfg)
    trials_path = write_trials_csv(tmp_path / "out" / "trials.csv", records)
    rows = _read_csv(trials_path)
    assert rows[0] == TRIALS_COLUMNS
    assert len(rows) == small_cfg.trials + 1
    assert float(rows[1][TRIALS_COLUMNS.index("ma_secrecy_rate")]) == pytest.approx(
        records[0].ma_secrecy_rate, rel=1e-11)

    summary_path = write_summary_csv(tmp_path / "summary.csv", [aggregate(records, 10.0)])
    rows = _read_csv(summary_path)
    assert rows[0] == SUMMARY_COLUMNS
    assert rows[1][0] == "10"

    traces = convergence_report(small_cfg)
    trace_path = write_trace_csv(tmp_path / "trace.csv", traces)
    rows = _read_csv(trace_path)
    assert rows[0] == TRACE_COLUMNS
    assert len(rows) == 1 + sum(len(t.objectives) for t in traces)
    assert rows[1][1] == "0"


def test_format_float():
    """12 位有效数字格式"""
    assert format_float(1 / 3) == "0.333333333333"
    assert format_float(1.5e-12) == "1.5e-12"
    assert format_float(None) == ""


def test_convergence_report_multiple_setups():
    """多个 (N, L_b) 组合共用试验种子，轨迹按组合依次排列"""
    cfg = ExperimentConfig(trials=2, max_iterations=5, convergence_setups=[[2, 2], [4, 4]])
    traces = convergence_report(cfg)
    assert [(t.num_antennas, t.num_paths) for t in traces] == [(2, 2), (2, 2), (4, 4), (4, 4)]
    assert [t.seed for t in traces[:2]] == [t.seed for t in traces[2:]]
    for trace in traces:
        assert all(b >= a * (1 - 1e-12) for a, b in zip(trace.objectives, trace.objectives[1:]))
    with pytest.raises(ValueError):
        ExperimentConfig(convergence_setups=[[4, 0]])
    with pytest.raises(ValueError):
        ExperimentConfig(convergence_setups=[[4, 4], [4, 4]])
