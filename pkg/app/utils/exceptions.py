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
MA Secure Transmission exceptions 模块
本模块定义了应用程序中可能出现的异常类，包括参数错误、约束违反、退化输入、功率不可行和配置错误等。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

class MASecureError(Exception):
    """基础异常类"""

class InvalidArgumentError(MASecureError, ValueError):
    """参数非法"""

class ConstraintViolationError(MASecureError):
    """天线布局违反区域或最小间距约束"""

class PackingInfeasibleError(ConstraintViolationError):
    """区域内无法放下满足最小间距的 N 根天线"""

class DegenerateInputError(MASecureError, ValueError):
    """零信道等退化输入"""

class NoNullSpaceError(MASecureError):
    """N = 1 时不存在零空间，无法发送人工噪声"""

class InfeasibleDesignError(MASecureError):
    """所需信号功率超过总功率，传输失败"""

    def __init__(self, message: str, required_power: float = float("nan"), total_power: float = float("nan")):
        super().__init__(message)
        self.required_power = required_power
        self.total_power = total_power

class ConfigError(MASecureError, ValueError):
    """配置错误"""
