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
MA Secure Transmission models 模块
本模块用于定义实验配置与领域数据类型。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

from .config import ExperimentConfig, GradientConfig, get_runtime_settings
from .types import AntennaLayout, LinearLayout, PathSet, TrialRecord

__all__ = [
    "AntennaLayout",
    "ExperimentConfig",
    "GradientConfig",
    "LinearLayout",
    "PathSet",
    "TrialRecord",
    "get_runtime_settings",
]
