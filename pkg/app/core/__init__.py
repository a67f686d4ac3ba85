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
MA Secure Transmission core 模块
本模块包含信道模型、二维梯度上升、线阵 BSUM 与安全传输设计。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

from .channel import assemble_channel, channel_correlation, evaluate_channel, sample_path_set
from .optimizer1d import optimize_linear
from .optimizer2d import initialize_layout, optimize_positions
from .security import build_secure_design, secrecy_rate_closed_form, secrecy_rate_simulated

__all__ = [
    "assemble_channel",
    "build_secure_design",
    "channel_correlation",
    "evaluate_channel",
    "initialize_layout",
    "optimize_linear",
    "optimize_positions",
    "sample_path_set",
    "secrecy_rate_closed_form",
    "secrecy_rate_simulated",
]
