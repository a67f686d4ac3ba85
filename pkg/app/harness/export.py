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
实验结果导出模块
本模块将试验记录、汇总行与收敛轨迹写为 CSV 文件，首行为列名，浮点数保留 12 位有效数字。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

import csv
import logging
import pathlib
from typing import Iterable, Optional, Sequence, Union

from app.models.types import ConvergenceTrace, SummaryRow, TrialRecord

logger = logging.getLogger(__name__)

PathLike = Union[str, pathlib.Path]

TRIALS_COLUMNS = [
    "trial_index",
    "seed",
    "axis_value",
    "ma_channel_power",
    "fpa_channel_power",
    "ma_signal_power",
    "fpa_signal_power",
    "ma_feasible",
    "fpa_feasible",
    "ma_secrecy_rate",
    "fpa_secrecy_rate",
    "ma_correlation",
    "fpa_correlation",
    "iterations_used",
    "converged",
    "alt_channel_power",
    "alt_secrecy_rate",
    "layout",
]

SUMMARY_COLUMNS = ["axis_value", "ma_mean", "ma_std", "fpa_mean", "fpa_std", "infeasible_frac"]

TRACE_COLUMNS = ["seed", "iteration", "objective"]


def format_float(value: Optional[float]) -> str:
    """12 位有效数字，None 写为空字符串"""
    if value is None:
        return ""
    return f"{float(value):.12g}"


def format_layout(positions) -> str:
    """天线位置写为 "x y;x y;…" """
    return ";".join(f"{format_float(x)} {format_float(y)}" for x, y in positions)


def _write(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[str]]) -> pathlib.Path:
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    logger.info("已写入 %s", path)
    return path


def write_trials_csv(path: PathLike, records: Sequence[TrialRecord]) -> pathlib.Path:
    rows = (
        [
            str(r.trial_index),
            str(r.seed),
            format_float(r.axis_value),
            format_float(r.ma_channel_power),
            format_float(r.fpa_channel_power),
            format_float(r.ma_signal_power),
            format_float(r.fpa_signal_power),
            str(int(r.ma_feasible)),
            str(int(r.fpa_feasible)),
            format_float(r.ma_secrecy_rate),
            format_float(r.fpa_secrecy_rate),
            format_float(r.ma_correlation),
            format_float(r.fpa_correlation),
            str(r.iterations_used),
            str(int(r.converged)),
            format_float(r.alt_channel_power),
            format_float(r.alt_secrecy_rate),
            format_layout(r.layout),
        ]
        for r in records
    )
    return _write(path, TRIALS_COLUMNS, rows)


def write_summary_csv(path: PathLike, rows: Sequence[SummaryRow]) -> pathlib.Path:
    return _write(path, SUMMARY_COLUMNS, (
        [
            format_float(row.axis_value),
            format_float(row.ma_mean),
            format_float(row.ma_std),
            format_float(row.fpa_mean),
            format_float(row.fpa_std),
            format_float(row.infeasible_frac),
        ]
        for row in rows
    ))


def write_trace_csv(path: PathLike, traces: Sequence[ConvergenceTrace]) -> pathlib.Path:
    """每条轨迹逐轮展开，iteration 0 为初始布局"""
    return _write(path, TRACE_COLUMNS, (
        [str(trace.seed), str(iteration), format_float(objective)]
        for trace in traces
        for iteration, objective in enumerate(trace.objectives)
    ))
