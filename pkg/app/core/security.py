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
安全传输设计模块
本模块构造 MRT 波束成形、最小信号功率与零空间人工噪声协方差，
并计算 SNR 与保密速率（仿真值与闭式解）。速率单位均为 bits/s/Hz。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

import logging

import numpy as np

from app.models.types import ChannelRealization, SecureDesign
from app.utils.exceptions import (
    DegenerateInputError,
    InfeasibleDesignError,
    InvalidArgumentError,
    NoNullSpaceError,
)

logger = logging.getLogger(__name__)

# 二次型 hᴴCh 允许的负向舍入误差（相对 tr(C)·‖h‖²）
PSD_TOLERANCE = 1e-9
# P_T* 与 P 比较时的相对容差
POWER_TOLERANCE = 1e-12


def _vector(h) -> np.ndarray:
    return np.asarray(h, dtype=complex).reshape(-1)


def _norm2(h: np.ndarray) -> float:
    return float(np.vdot(h, h).real)


def _nonzero_norm2(h: np.ndarray) -> float:
    norm2 = _norm2(h)
    if norm2 == 0.0:
        raise DegenerateInputError("Bob 信道为零向量")
    return norm2


def _within_budget(signal_power: float, total_power: float) -> float:
    """P_T* ≤ P 时返回截断到 P 的信号功率，否则报错"""
    if signal_power > total_power * (1.0 + POWER_TOLERANCE):
        raise InfeasibleDesignError(
            f"所需信号功率 {signal_power:.6e} W 超过总功率 {total_power:.6e} W",
            required_power=signal_power,
            total_power=total_power,
        )
    return min(signal_power, total_power)


def mrt_beamformer(h_b, signal_power: float) -> np.ndarray:
    """w = √P_T · h_b / ‖h_b‖"""
    h_b = _vector(h_b)
    norm2 = _nonzero_norm2(h_b)
    if signal_power < 0:
        raise InvalidArgumentError("信号功率不能为负")
    return np.sqrt(signal_power / norm2) * h_b


def min_signal_power(h_b, gamma: float, noise_power: float) -> float:
    """满足 Bob SNR 目标 γ 的最小信号功率 P_T* = γσ_b²/‖h_b‖²"""
    h_b = _vector(h_b)
    norm2 = _nonzero_norm2(h_b)
    if not gamma > 0:
        raise InvalidArgumentError("目标 SNR γ 必须为正数")
    return float(gamma * noise_power / norm2)


def an_covariance(h_b, residual_power: float) -> np.ndarray:
    """
    零空间各向同性人工噪声协方差

    C = (P − P_T)/(N − 1) · (I − h_b h_bᴴ/‖h_b‖²)，直接由投影矩阵构造，不显式求 U_b。

    Raises:
        NoNullSpaceError: N = 1
    """
    h_b = _vector(h_b)
    num_antennas = h_b.size
    if num_antennas < 2:
        raise NoNullSpaceError("单天线不存在零空间，无法发送人工噪声")
    norm2 = _nonzero_norm2(h_b)
    if residual_power < 0:
        raise InvalidArgumentError("剩余功率不能为负")

    projector = np.eye(num_antennas, dtype=complex) - np.outer(h_b, h_b.conj()) / norm2
    # 消除舍入造成的非厄米分量
    projector = 0.5 * (projector + projector.conj().T)
    return residual_power / (num_antennas - 1) * projector


def build_secure_design(h_b, gamma: float, total_power: float, noise_power_b: float) -> SecureDesign:
    """
    两步法联合设计：MRT 以最小功率满足 Bob 的 QoS，剩余功率全部用于零空间人工噪声

    N = 1 时无零空间，C = 0，剩余功率闲置并记录警告。

    Raises:
        InfeasibleDesignError: P_T* > P
    """
    h_b = _vector(h_b)
    signal_power = min_signal_power(h_b, gamma, noise_power_b)
    signal_power = _within_budget(signal_power, total_power)

    beamformer = mrt_beamformer(h_b, signal_power)
    try:
        covariance = an_covariance(h_b, total_power - signal_power)
        an_enabled = True
    except NoNullSpaceError:
        logger.warning("N = 1，人工噪声不可用，C 置零")
        covariance = np.zeros((h_b.size, h_b.size), dtype=complex)
        an_enabled = False

    return SecureDesign(
        beamformer=beamformer,
        signal_power=signal_power,
        an_covariance=covariance,
        total_power=total_power,
        target_snr=gamma,
        an_enabled=an_enabled,
    )


def snr(h, w, C, noise_power: float) -> float:
    """
    γ = |hᴴw|² / (σ² + hᴴCh)

    Raises:
        InvalidArgumentError: σ² ≤ 0 或 C 非半正定（二次型为负且超出容差）
    """
    h = _vector(h)
    w = _vector(w)
    C = np.asarray(C, dtype=complex)
    if not noise_power > 0:
        raise InvalidArgumentError("噪声功率必须为正数")

    signal = abs(np.vdot(h, w)) ** 2
    quadratic = float(np.vdot(h, C @ h).real)
    scale = abs(float(np.trace(C).real)) * _norm2(h)
    if quadratic < -PSD_TOLERANCE * scale:
        raise InvalidArgumentError(f"协方差矩阵非半正定: hᴴCh = {quadratic:.6e}")
    return float(signal / (noise_power + max(quadratic, 0.0)))


def information_rate(snr_value: float) -> float:
    """log₂(1 + γ)"""
    return float(np.log2(1.0 + snr_value))


def leakage_rate(h_e, design: SecureDesign, noise_power_e: float) -> float:
    """Eve 处的信息泄露速率 log₂(1 + γ_e)"""
    return information_rate(snr(h_e, design.beamformer, design.an_covariance, noise_power_e))


def secrecy_rate_simulated(realization: ChannelRealization, design: SecureDesign) -> float:
    """R_s = max{log₂(1 + γ_b) − log₂(1 + γ_e), 0}，两个 SNR 均按定义直接计算"""
    gamma_b = snr(realization.h_b, design.beamformer, design.an_covariance, realization.noise_power_b)
    gamma_e = snr(realization.h_e, design.beamformer, design.an_covariance, realization.noise_power_e)
    return max(information_rate(gamma_b) - information_rate(gamma_e), 0.0)


def secrecy_rate_closed_form(
        h_b,
        h_e,
        gamma: float,
        total_power: float,
        noise_power_b: float,
        noise_power_e: float
        ) -> float:
    """
    代入 MRT 与零空间人工噪声后的保密速率闭式解

    R_s = log₂(1 + P_T‖h_b‖²/σ_b²)
          − log₂(1 + (P_T/‖h_b‖²)|h_bᴴh_e|² / (σ_e² + (P − P_T)/(N − 1)·(‖h_e‖² − |h_bᴴh_e|²/‖h_b‖²)))

    N = 1 时人工噪声项为零。

    Raises:
        InfeasibleDesignError: P_T* > P，传输失败
    """
    h_b = _vector(h_b)
    h_e = _vector(h_e)
    norm_b = _nonzero_norm2(h_b)
    norm_e = _norm2(h_e)
    signal_power = min_signal_power(h_b, gamma, noise_power_b)
    signal_power = _within_budget(signal_power, total_power)

    cross = abs(np.vdot(h_b, h_e)) ** 2
    jamming = 0.0
    if h_b.size > 1:
        jamming = (total_power - signal_power) / (h_b.size - 1) * max(norm_e - cross / norm_b, 0.0)

    legitimate = information_rate(signal_power * norm_b / noise_power_b)
    leakage = information_rate(signal_power / norm_b * cross / (noise_power_e + jamming))
    return max(legitimate - leakage, 0.0)


def secrecy_rate_correlation_form(
        gamma: float,
        correlation: float,
        norm_b: float,
        norm_e: float,
        total_power: float,
        num_antennas: int,
        noise_power: float
        ) -> float:
    """
    σ_b² = σ_e² 时以相关系数 ρ 表示的保密速率

    R_s = log₂(1 + γ) − log₂(1 + γρ(‖h_e‖²/‖h_b‖²) / (1 + (P − P_T)‖h_e‖²(1 − ρ)/((N − 1)σ²)))
    """
    if not norm_b > 0:
        raise DegenerateInputError("Bob 信道为零向量")
    signal_power = gamma * noise_power / norm_b
    signal_power = _within_budget(signal_power, total_power)

    jamming = 0.0
    if num_antennas > 1:
        jamming = (total_power - signal_power) * norm_e * (1.0 - correlation) / ((num_antennas - 1) * noise_power)
    leakage = information_rate(gamma * correlation * norm_e / norm_b / (1.0 + jamming))
    return max(information_rate(gamma) - leakage, 0.0)
