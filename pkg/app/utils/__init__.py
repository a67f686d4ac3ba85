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
MA Secure Transmission utils 模块
本模块提供异常类型、单位换算与种子派生工具。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

from .exceptions import ConfigError, MASecureError
from .units import db_to_linear, derive_trial_seed, noise_power

__all__ = [
    "ConfigError",
    "MASecureError",
    "db_to_linear",
    "derive_trial_seed",
    "noise_power",
]
