# Copyright 2026 The MA Secure Transmission Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Monte-Carlo 实验运行模块
本模块负责单次试验、批量试验、参数扫描与收敛轨迹统计。
每个试验的随机性完全由其种子决定，并行执行不改变输出。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np

from app.core.channel import assemble_channel, channel_correlation, sample_path_set
from app.core.optimizer1d import initialize_linear_layout, optimize_linear
from app.core.optimizer2d import initialize_layout, iterations_to_within, optimize_positions
from app.core.security import build_secure_design, secrecy_rate_simulated
from app.models.config import ExperimentConfig
from app.models.types import (
    AntennaLayout,
    ConvergenceTrace,
    OptimizationTrace,
    PathSet,
    SummaryRow,
    TrialRecord,
)
from app.utils.exceptions import ConfigError, InfeasibleDesignError
from app.utils.units import derive_trial_seed, split_seed

logger = logging.getLogger(__name__)

SweepAxis = Literal["gamma", "region_size"]

AXIS_FIELDS = {
    "gamma": "gamma_db",
    "region_size": "A_over_lambda",
}


@dataclass(frozen=True)
class SchemeResult:
    """某一天线布局下的安全传输评估结果"""
    channel_power: float
    signal_power: float
    feasible: bool
    secrecy_rate: float
    correlation: float


@dataclass(frozen=True)
class SweepResult:
    """参数扫描结果，rows 按轴取值升序排列"""
    axis: str
    rows: Tuple[SummaryRow, ...]
    records: Tuple[TrialRecord, ...]


def fpa_baseline_layout(N: int, wavelength: float) -> AntennaLayout:
    """
    FPA 基准：以原点为中心、沿 x 轴、间距 λ/2 的均匀线阵

    基准布局不受区域边长 A 约束，region_size 取刚好容纳阵列的值。
    """
    spacing = wavelength / 2.0
    x = (np.arange(N) - (N - 1) / 2.0) * spacing
    positions = np.column_stack((x, np.zeros(N)))
    return AntennaLayout(positions, max(N - 1, 1) * spacing, spacing)


def evaluate_scheme(
        paths_b: PathSet,
        paths_e: PathSet,
        layout: AntennaLayout,
        cfg: ExperimentConfig
        ) -> SchemeResult:
    """在给定布局上完成 MRT + 人工噪声设计并计算保密速率，功率不足时记录为不可行"""
    realization = assemble_channel(paths_b, paths_e, layout, cfg.noise_power_b, cfg.noise_power_e)
    power = float(np.vdot(realization.h_b, realization.h_b).real)
    correlation = channel_correlation(realization.h_b, realization.h_e)

    try:
        design = build_secure_design(realization.h_b, cfg.gamma, cfg.total_power, cfg.noise_power_b)
    except InfeasibleDesignError as e:
        logger.debug("设计不可行: %s", e)
        return SchemeResult(
            channel_power=power,
            signal_power=e.required_power,
            feasible=False,
            secrecy_rate=0.0,
            correlation=correlation,
        )

    return SchemeResult(
        channel_power=power,
        signal_power=design.signal_power,
        feasible=True,
        secrecy_rate=secrecy_rate_simulated(realization, design),
        correlation=correlation,
    )


def optimize_layout(
        cfg: ExperimentConfig,
        optimizer: str,
        paths_b: PathSet,
        layout_seed: int
        ) -> Tuple[AntennaLayout, OptimizationTrace]:
    """按指定优化器生成初始布局并优化，返回二维布局与优化轨迹"""
    A, D = cfg.region_size, cfg.min_distance
    if optimizer == "bsum1d":
        initial = initialize_linear_layout(layout_seed, cfg.N, A, D)
        trace = optimize_linear(paths_b, initial, cfg.max_iterations, cfg.convergence_tol)
        return trace.layout.embed(), trace

    initial = initialize_layout(layout_seed, cfg.N, A, D)
    trace = optimize_positions(paths_b, initial, cfg.gradient_config())
    return trace.layout, trace


def run_trial(cfg: ExperimentConfig, seed: int, trial_index: int = 0) -> TrialRecord:
    """
    执行一次试验

    由试验种子派生 Bob 多径、Eve 多径与初始布局三路独立随机流；
    MA 与 FPA 在同一组多径上评估。功率不足不会抛出异常，而是记录在结果中。

    Raises:
        PackingInfeasibleError: 区域内无法放下 N 根天线
        ConfigError: 扫描字段未展开为标量
    """
    seed_b, seed_e, seed_layout = split_seed(seed, 3)
    paths_b = sample_path_set(seed_b, cfg.L_b, cfg.path_loss_db, cfg.wavelength)
    paths_e = sample_path_set(seed_e, cfg.L_e, cfg.path_loss_db, cfg.wavelength)

    ma_layout, trace = optimize_layout(cfg, cfg.optimizer, paths_b, seed_layout)
    ma = evaluate_scheme(paths_b, paths_e, ma_layout, cfg)
    fpa = evaluate_scheme(paths_b, paths_e, fpa_baseline_layout(cfg.N, cfg.wavelength), cfg)

    alt_power = alt_rate = None
    if cfg.compare_optimizers:
        other = "gradient2d" if cfg.optimizer == "bsum1d" else "bsum1d"
        alt_layout, _ = optimize_layout(cfg, other, paths_b, seed_layout)
        alt = evaluate_scheme(paths_b, paths_e, alt_layout, cfg)
        alt_power, alt_rate = alt.channel_power, alt.secrecy_rate

    return TrialRecord(
        seed=seed,
        layout=ma_layout.positions,
        ma_channel_power=ma.channel_power,
        fpa_channel_power=fpa.channel_power,
        ma_signal_power=ma.signal_power,
        fpa_signal_power=fpa.signal_power,
        ma_feasible=ma.feasible,
        fpa_feasible=fpa.feasible,
        ma_secrecy_rate=ma.secrecy_rate,
        fpa_secrecy_rate=fpa.secrecy_rate,
        ma_correlation=ma.correlation,
        fpa_correlation=fpa.correlation,
        iterations_used=trace.iterations_used,
        converged=trace.converged,
        trial_index=trial_index,
        alt_channel_power=alt_power,
        alt_secrecy_rate=alt_rate,
        trace=trace.objectives,
    )


def _run_indexed(cfg: ExperimentConfig, index: int) -> TrialRecord:
    return run_trial(cfg, derive_trial_seed(cfg.base_seed, index), index)


def run_trials(cfg: ExperimentConfig, workers: int = 1) -> List[TrialRecord]:
    """
    执行 cfg.trials 次试验，结果按试验序号排列

    workers > 1 时使用进程池；executor.map 保持输入顺序，因此输出与并行度无关。
    """
    indices = range(cfg.trials)
    if workers > 1 and cfg.trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(_run_indexed, [cfg] * cfg.trials, indices))
    else:
        records = [_run_indexed(cfg, index) for index in indices]

    infeasible = sum(not r.ma_feasible for r in records)
    if infeasible:
        logger.warning("%d/%d 次试验的 MA 方案功率不足，保密速率记为 0", infeasible, len(records))
    return records


def _mean_std(values: Sequence[float]) -> Tuple[float, float]:
    array = np.asarray(values, dtype=float)
    std = float(np.std(array, ddof=1)) if array.size >= 2 else 0.0
    return float(np.mean(array)), std


def aggregate(records: Sequence[TrialRecord], axis_value: Optional[float] = None) -> SummaryRow:
    """均值、样本标准差（ddof=1）与 MA 方案不可行比例"""
    if not records:
        raise ValueError("没有可汇总的试验结果")
    ma_mean, ma_std = _mean_std([r.ma_secrecy_rate for r in records])
    fpa_mean, fpa_std = _mean_std([r.fpa_secrecy_rate for r in records])
    return SummaryRow(
        axis_value=axis_value,
        ma_mean=ma_mean,
        ma_std=ma_std,
        fpa_mean=fpa_mean,
        fpa_std=fpa_std,
        infeasible_frac=sum(not r.ma_feasible for r in records) / len(records),
        trials=len(records),
    )


def sweep(cfg: ExperimentConfig, axis: SweepAxis, workers: int = 1) -> SweepResult:
    """
    沿 γ 或区域边长扫描

    每个轴取值都使用同一组试验种子，FPA 结果在区域扫描中保持不变。

    Raises:
        ConfigError: 轴未知或对应字段不是扫描列表
    """
    if axis not in AXIS_FIELDS:
        raise ConfigError(f"未知的扫描轴: {axis}")
    field_name = AXIS_FIELDS[axis]
    if not cfg.is_sweep(field_name):
        raise ConfigError(f"扫描 {axis} 需要 {field_name} 为列表")

    rows = []
    all_records = []
    for value in cfg.values_of(field_name):
        logger.info("扫描 %s = %g（%d 次试验）", field_name, value, cfg.trials)
        records = run_trials(cfg.at(**{field_name: value}), workers)
        for record in records:
            record.axis_value = value
        rows.append(aggregate(records, value))
        all_records.extend(records)

    return SweepResult(axis=axis, rows=tuple(rows), records=tuple(all_records))


def _convergence_trace(cfg: ExperimentConfig, index: int) -> ConvergenceTrace:
    seed = derive_trial_seed(cfg.base_seed, index)
    seed_b, _, seed_layout = split_seed(seed, 3)
    paths_b = sample_path_set(seed_b, cfg.L_b, cfg.path_loss_db, cfg.wavelength)
    _, trace = optimize_layout(cfg, "gradient2d", paths_b, seed_layout)
    return ConvergenceTrace(
        seed=seed,
        trial_index=index,
        num_antennas=cfg.N,
        num_paths=cfg.L_b,
        objectives=trace.objectives,
        iterations_to_within=iterations_to_within(trace),
        converged=trace.converged,
    )


def convergence_report(cfg: ExperimentConfig, workers: int = 1) -> List[ConvergenceTrace]:
    """
    梯度上升的逐轮 ‖h_b‖² 轨迹

    对 cfg.setups() 中的每个 (N, L_b) 组合、每个试验种子各一条，按组合再按试验序号排列；
    不同组合使用相同的试验种子。

    Raises:
        ConfigError: optimizer 不是 gradient2d
    """
    if cfg.optimizer != "gradient2d":
        raise ConfigError("收敛轨迹仅支持 gradient2d 优化器")

    traces: List[ConvergenceTrace] = []
    for num_antennas, num_paths in cfg.setups():
        setup_cfg = cfg.at(N=num_antennas, L_b=num_paths)
        indices = range(cfg.trials)
        if workers > 1 and cfg.trials > 1:
            with ProcessPoolExecutor(max_workers=workers) as executor:
                setup_traces = list(executor.map(_convergence_trace, [setup_cfg] * cfg.trials, indices))
        else:
            setup_traces = [_convergence_trace(setup_cfg, index) for index in indices]

        median = float(np.median([t.iterations_to_within for t in setup_traces]))
        logger.info("N = %d, L_b = %d: 收敛轨迹 %d 条，达到最终值 99%% 的迭代次数中位数 %.1f",
                    num_antennas, num_paths, len(setup_traces), median)
        traces.extend(setup_traces)
    return traces
