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
多径场响应信道模块
本模块用于生成随机多径场景，并在任意天线位置上计算场响应信道
h(t) = Σ_ℓ √(μ/L)·σ_ℓ·exp(−j(2π/λ)·tᵀρ_ℓ)。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

import logging

import numpy as np

from app.models.types import AntennaLayout, ChannelRealization, PathSet, WaveVector
from app.utils.exceptions import DegenerateInputError, InvalidArgumentError
from app.utils.units import db_to_linear

logger = logging.getLogger(__name__)


def sample_path_set(rng_seed: int, L: int, path_loss_db: float, wavelength: float) -> PathSet:
    """
    随机生成一个多径场景

    俯仰角与方位角在 [0, π] 上独立均匀分布；
    小尺度衰落为单位方差的循环对称复高斯，实部虚部方差各 1/2。

    Args:
        rng_seed: 随机种子，相同种子得到完全相同的结果
        L: 路径数
        path_loss_db: 路损（dB），在此处一次性换算为线性值
        wavelength: 波长（米）

    Returns:
        PathSet
    """
    if int(L) < 1:
        raise InvalidArgumentError(f"路径数 L 必须 ≥ 1，当前为 {L}")
    if not wavelength > 0:
        raise InvalidArgumentError(f"波长必须为正数，当前为 {wavelength}")

    rng = np.random.default_rng(rng_seed)
    elevation = rng.uniform(0.0, np.pi, size=L)
    azimuth = rng.uniform(0.0, np.pi, size=L)
    gain = (rng.standard_normal(L) + 1j * rng.standard_normal(L)) / np.sqrt(2.0)

    return PathSet(
        elevation=elevation,
        azimuth=azimuth,
        gain=gain,
        path_loss=db_to_linear(path_loss_db),
        wavelength=float(wavelength),
    )


def wave_vector(theta: float, phi: float) -> WaveVector:
    """ρ = [sin θ cos φ, cos θ]ᵀ"""
    return WaveVector(np.array([np.sin(theta) * np.cos(phi), np.cos(theta)]))


def steering_matrix(paths: PathSet, positions) -> np.ndarray:
    """
    相位项矩阵，元素 (n, ℓ) 为 exp(−j(2π/λ)·t_nᵀρ_ℓ)

    positions 可以是单个位置 (2,) 或位置数组 (..., 2)。
    """
    positions = np.asarray(positions, dtype=float)
    phases = paths.wavenumber * (positions @ paths.wave_vectors().T)
    return np.exp(-1j * phases)


def evaluate_channel_vector(paths: PathSet, positions) -> np.ndarray:
    """在一组位置上同时计算 h(t)，返回形状为 positions.shape[:-1] 的复数组"""
    return paths.amplitude * (steering_matrix(paths, positions) @ paths.gain)


def evaluate_channel(paths: PathSet, position) -> complex:
    """计算单个位置上的信道系数 h(t)"""
    position = np.asarray(position, dtype=float).reshape(2)
    return complex(evaluate_channel_vector(paths, position))


def channel_gain_bound(paths: PathSet) -> float:
    """|h(t)| 的上界 √(μ/L)·Σ|σ_ℓ|"""
    return paths.amplitude * float(np.sum(np.abs(paths.gain)))


def assemble_channel(
        paths_b: PathSet,
        paths_e: PathSet,
        layout: AntennaLayout,
        noise_power_b: float,
        noise_power_e: float
        ) -> ChannelRealization:
    """
    在给定布局上组装 Bob 与 Eve 的信道向量

    Raises:
        ConstraintViolationError: 布局不满足区域或最小间距约束
    """
    layout.validate()
    return ChannelRealization(
        h_b=evaluate_channel_vector(paths_b, layout.positions),
        h_e=evaluate_channel_vector(paths_e, layout.positions),
        noise_power_b=noise_power_b,
        noise_power_e=noise_power_e,
    )


def channel_correlation(h_b, h_e) -> float:
    """
    信道相关系数 ρ = |h_bᴴh_e|² / (‖h_b‖²‖h_e‖²)

    Raises:
        DegenerateInputError: 任一向量为零
    """
    h_b = np.asarray(h_b, dtype=complex).reshape(-1)
    h_e = np.asarray(h_e, dtype=complex).reshape(-1)
    norm_b = float(np.vdot(h_b, h_b).real)
    norm_e = float(np.vdot(h_e, h_e).real)
    if norm_b == 0.0 or norm_e == 0.0:
        raise DegenerateInputError("信道向量为零，相关系数无定义")
    value = abs(np.vdot(h_b, h_e)) ** 2 / (norm_b * norm_e)
    # 舍入误差可能略超 1
    return float(min(value, 1.0))
