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
MA Secure Transmission harness 模块
本模块用于执行 Monte-Carlo 试验、参数扫描与收敛统计，并导出 CSV 结果。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

from .runner import (
    aggregate,
    convergence_report,
    fpa_baseline_layout,
    run_trial,
    run_trials,
    sweep,
)
from .export import write_summary_csv, write_trace_csv, write_trials_csv

__all__ = [
    "aggregate",
    "convergence_report",
    "fpa_baseline_layout",
    "run_trial",
    "run_trials",
    "sweep",
    "write_summary_csv",
    "write_trace_csv",
    "write_trials_csv",
]
