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
MA Secure Transmission 领域类型
本文件定义多径描述、天线布局、信道实现、安全设计与优化轨迹等数据类型。
所有类型构造后不可变，numpy 数组均设置为只读。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from app.utils.exceptions import ConstraintViolationError, InvalidArgumentError

# 几何约束判定的绝对容差（米）
GEOMETRY_ATOL = 1e-12


def _frozen(array, dtype) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class PathSet:
    """
    单个节点的多径描述

    elevation / azimuth 为各径的俯仰角与方位角（弧度，[0, π]），
    gain 为小尺度衰落系数，path_loss 为线性路损，wavelength 为波长（米）。
    """
    elevation: np.ndarray
    azimuth: np.ndarray
    gain: np.ndarray
    path_loss: float
    wavelength: float

    def __post_init__(self):
        elevation = _frozen(self.elevation, float).reshape(-1)
        azimuth = _frozen(self.azimuth, float).reshape(-1)
        gain = _frozen(self.gain, complex).reshape(-1)
        object.__setattr__(self, "elevation", elevation)
        object.__setattr__(self, "azimuth", azimuth)
        object.__setattr__(self, "gain", gain)

        if elevation.size < 1:
            raise InvalidArgumentError("路径数 L 必须 ≥ 1")
        if not elevation.size == azimuth.size == gain.size:
            raise InvalidArgumentError("俯仰角、方位角与增益的长度必须一致")
        for name, angles in (("elevation", elevation), ("azimuth", azimuth)):
            if np.any(angles < 0.0) or np.any(angles > np.pi):
                raise InvalidArgumentError(f"{name} 必须位于 [0, π] 内")
        if not self.wavelength > 0:
            raise InvalidArgumentError("波长必须为正数")
        if not self.path_loss > 0:
            raise InvalidArgumentError("线性路损必须为正数")

    @property
    def num_paths(self) -> int:
        """路径数 L"""
        return int(self.elevation.size)

    @property
    def amplitude(self) -> float:
        """每条径的幅度因子 √(μ/L)"""
        return float(np.sqrt(self.path_loss / self.num_paths))

    @property
    def wavenumber(self) -> float:
        """2π/λ"""
        return 2.0 * np.pi / self.wavelength

    def wave_vectors(self) -> np.ndarray:
        """(L, 2) 数组，第 ℓ 行为 ρ_ℓ = [sin θ cos φ, cos θ]"""
        return np.column_stack((
            np.sin(self.elevation) * np.cos(self.azimuth),
            np.cos(self.elevation),
        ))


@dataclass(frozen=True)
class WaveVector:
    """单条径的方向向量 ρ"""
    rho: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rho", _frozen(self.rho, float).reshape(2))

    @property
    def x(self) -> float:
        return float(self.rho[0])

    @property
    def y(self) -> float:
        return float(self.rho[1])


@dataclass(frozen=True)
class AntennaLayout:
    """
    发射区域 [−A/2, A/2]² 内的 N 个天线位置

    允许构造不满足约束的布局（用于测试），需要合法布局的调用方应先调用 validate()。
    """
    positions: np.ndarray
    region_size: float
    min_distance: float

    def __post_init__(self):
        positions = _frozen(self.positions, float)
        if positions.ndim == 1:
            positions = _frozen(positions.reshape(-1, 2), float)
        if positions.ndim != 2 or positions.shape[1] != 2 or positions.shape[0] < 1:
            raise InvalidArgumentError("positions 必须是形如 (N, 2) 的数组")
        object.__setattr__(self, "positions", positions)
        if not self.region_size > 0:
            raise InvalidArgumentError("区域边长 A 必须为正数")
        if self.min_distance < 0:
            raise InvalidArgumentError("最小间距 D 不能为负")

    @property
    def num_antennas(self) -> int:
        return int(self.positions.shape[0])

    @property
    def half_size(self) -> float:
        return self.region_size / 2.0

    def with_position(self, index: int, position) -> "AntennaLayout":
        """返回替换第 index 根天线位置后的新布局"""
        positions = np.array(self.positions, copy=True)
        positions[index] = position
        return AntennaLayout(positions, self.region_size, self.min_distance)

    def violations(self) -> List[str]:
        """列出全部约束违反项，合法布局返回空列表"""
        problems = []
        half = self.half_size + GEOMETRY_ATOL
        for n, (x, y) in enumerate(self.positions):
            if not (np.isfinite(x) and np.isfinite(y)):
                problems.append(f"天线 {n} 位置非有限值")
            elif abs(x) > half or abs(y) > half:
                problems.append(f"天线 {n} 位于区域之外: ({x:.6g}, {y:.6g})")
        diffs = self.positions[:, None, :] - self.positions[None, :, :]
        distances = np.hypot(diffs[..., 0], diffs[..., 1])
        rows, cols = np.triu_indices(self.num_antennas, k=1)
        for n, m in zip(rows, cols):
            if distances[n, m] < self.min_distance - GEOMETRY_ATOL:
                problems.append(f"天线 {n} 与 {m} 间距 {distances[n, m]:.6g} 小于 D={self.min_distance:.6g}")
        return problems

    def is_valid(self) -> bool:
        return not self.violations()

    def validate(self) -> "AntennaLayout":
        """校验区域与最小间距约束，违反时抛出 ConstraintViolationError"""
        problems = self.violations()
        if problems:
            raise ConstraintViolationError("; ".join(problems))
        return self


@dataclass(frozen=True)
class LinearLayout:
    """沿 x 轴的线阵布局，x_n ∈ [−A/2, A/2]"""
    positions: np.ndarray
    region_size: float
    min_distance: float

    def __post_init__(self):
        positions = _frozen(self.positions, float).reshape(-1)
        if positions.size < 1:
            raise InvalidArgumentError("线阵至少需要一根天线")
        object.__setattr__(self, "positions", positions)
        if not self.region_size > 0:
            raise InvalidArgumentError("区域边长 A 必须为正数")
        if self.min_distance < 0:
            raise InvalidArgumentError("最小间距 D 不能为负")

    @property
    def num_antennas(self) -> int:
        return int(self.positions.size)

    @property
    def half_size(self) -> float:
        return self.region_size / 2.0

    def with_position(self, index: int, x: float) -> "LinearLayout":
        positions = np.array(self.positions, copy=True)
        positions[index] = x
        return LinearLayout(positions, self.region_size, self.min_distance)

    def embed(self) -> AntennaLayout:
        """嵌入二维平面，y = 0"""
        positions = np.column_stack((self.positions, np.zeros_like(self.positions)))
        return AntennaLayout(positions, self.region_size, self.min_distance)

    def violations(self) -> List[str]:
        return self.embed().violations()

    def is_valid(self) -> bool:
        return not self.violations()

    def validate(self) -> "LinearLayout":
        problems = self.violations()
        if problems:
            raise ConstraintViolationError("; ".join(problems))
        return self


@dataclass(frozen=True)
class ChannelRealization:
    """在某一布局上求得的 Bob / Eve 信道向量及噪声功率"""
    h_b: np.ndarray
    h_e: np.ndarray
    noise_power_b: float
    noise_power_e: float

    def __post_init__(self):
        h_b = _frozen(self.h_b, complex).reshape(-1)
        h_e = _frozen(self.h_e, complex).reshape(-1)
        if h_b.size != h_e.size:
            raise InvalidArgumentError("h_b 与 h_e 长度必须一致")
        if not (self.noise_power_b > 0 and self.noise_power_e > 0):
            raise InvalidArgumentError("噪声功率必须为正数")
        object.__setattr__(self, "h_b", h_b)
        object.__setattr__(self, "h_e", h_e)

    @property
    def num_antennas(self) -> int:
        return int(self.h_b.size)


@dataclass(frozen=True)
class SecureDesign:
    """MRT 波束成形 + 零空间人工噪声的联合设计"""
    beamformer: np.ndarray
    signal_power: float
    an_covariance: np.ndarray
    total_power: float
    target_snr: float
    an_enabled: bool = True

    def __post_init__(self):
        object.__setattr__(self, "beamformer", _frozen(self.beamformer, complex).reshape(-1))
        object.__setattr__(self, "an_covariance", _frozen(self.an_covariance, complex))

    @property
    def residual_power(self) -> float:
        """P − P_T"""
        return self.total_power - self.signal_power


@dataclass(frozen=True)
class QuadraticSurrogate:
    """
    二次代理函数 a(x − b)² + c

    由 build_surrogate 构造时为 sin(ρx + θ) 的下界（a = −ρ²/2），
    其相反数即 −sin 的凸二次上界。
    """
    a: float
    b: float
    c: float

    def __call__(self, x):
        return self.a * (np.asarray(x) - self.b) ** 2 + self.c

    def derivative(self, x):
        return 2.0 * self.a * (np.asarray(x) - self.b)

    def __neg__(self) -> "QuadraticSurrogate":
        return QuadraticSurrogate(-self.a, self.b, -self.c)


@dataclass(frozen=True)
class OptimizationTrace:
    """
    天线位置优化轨迹

    objectives[0] 为初始目标值，其后每个外层迭代追加一个值；
    layouts 与 objectives 一一对应。
    """
    objectives: Tuple[float, ...]
    layout: Union[AntennaLayout, LinearLayout]
    iterations_used: int
    converged: bool
    layouts: Tuple[Union[AntennaLayout, LinearLayout], ...] = ()

    @property
    def final_objective(self) -> float:
        return self.objectives[-1]

    def is_non_decreasing(self, rtol: float = 1e-12) -> bool:
        values = np.asarray(self.objectives)
        return bool(np.all(np.diff(values) >= -rtol * np.abs(values[:-1])))


@dataclass
class TrialRecord:      # pylint: disable=too-many-instance-attributes
    """单次 Monte-Carlo 试验结果"""
    seed: int
    layout: np.ndarray
    ma_channel_power: float
    fpa_channel_power: float
    ma_signal_power: float
    fpa_signal_power: float
    ma_feasible: bool
    fpa_feasible: bool
    ma_secrecy_rate: float
    fpa_secrecy_rate: float
    ma_correlation: float
    fpa_correlation: float
    iterations_used: int
    converged: bool
    trial_index: int = 0
    axis_value: Optional[float] = None
    alt_channel_power: Optional[float] = None
    alt_secrecy_rate: Optional[float] = None
    trace: Tuple[float, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class SummaryRow:
    """扫描轴上一个取值的汇总结果"""
    axis_value: Optional[float]
    ma_mean: float
    ma_std: float
    fpa_mean: float
    fpa_std: float
    infeasible_frac: float
    trials: int


@dataclass(frozen=True)
class ConvergenceTrace:
    """单个种子的收敛轨迹"""
    seed: int
    trial_index: int
    num_antennas: int
    num_paths: int
    objectives: Tuple[float, ...]
    iterations_to_within: int
    converged: bool
