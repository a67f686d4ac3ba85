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
单位换算与随机种子工具
本模块负责 dB 与线性值之间的换算，以及试验种子的派生规则。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

from typing import List

import numpy as np

from app.utils.exceptions import InvalidArgumentError


def db_to_linear(value_db: float) -> float:
    """功率 dB 转线性"""
    return float(10.0 ** (value_db / 10.0))


def dbm_to_watt(value_dbm: float) -> float:
    """dBm 转瓦特"""
    return db_to_linear(value_dbm - 30.0)


def noise_power(n0_dbm_per_hz: float, bandwidth_hz: float) -> float:
    """σ² = N0·B（瓦特）"""
    if not bandwidth_hz > 0:
        raise InvalidArgumentError("带宽必须为正数")
    return dbm_to_watt(n0_dbm_per_hz) * bandwidth_hz


def derive_trial_seed(base_seed: int, index: int) -> int:
    """
    试验种子派生规则：base_seed XOR index

    对固定的 base_seed，不同 index 得到互不相同的种子，
    且与试验的执行顺序无关。
    """
    if base_seed < 0 or index < 0:
        raise ValueError("base_seed 与 index 必须为非负整数")
    return int(base_seed) ^ int(index)


def split_seed(seed: int, count: int) -> List[int]:
    """
    由一个种子派生 count 个相互独立的子种子

    使用 numpy SeedSequence.spawn，保证 Bob / Eve / 初始布局三路随机流互不相关。
    """
    children = np.random.SeedSequence(int(seed)).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint32)[0]) for child in children]
