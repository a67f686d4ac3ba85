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
二维天线位置优化模块
本模块在 A×A 方形区域内逐天线地进行带回溯线搜索的梯度上升，最大化 Bob 的信道功率 ‖h_b‖²。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

import logging
from typing import Optional

import numpy as np

from app.core.channel import evaluate_channel_vector
from app.models.config import GradientConfig
from app.models.types import GEOMETRY_ATOL, AntennaLayout, OptimizationTrace, PathSet
from app.utils.exceptions import InvalidArgumentError, PackingInfeasibleError

logger = logging.getLogger(__name__)

MAX_REJECTION_DRAWS = 100_000
# 连续拒绝次数超过该值时清空已放置的天线重新开始
RESTART_AFTER = 1_000
# 回溯线搜索的充分增加系数
ARMIJO_ALPHA = 0.01


def antenna_power(paths_b: PathSet, t) -> float:
    """f_n(t) = |h_b(t)|²"""
    return float(np.abs(evaluate_channel_vector(paths_b, np.asarray(t, dtype=float))) ** 2)


def channel_power(paths_b: PathSet, layout: AntennaLayout) -> float:
    """‖h_b‖² = Σ_n |h_b(t_n)|²"""
    return float(np.sum(np.abs(evaluate_channel_vector(paths_b, layout.positions)) ** 2))


def objective_gradient(paths_b: PathSet, t_n) -> np.ndarray:
    """
    f_n(t_n) = |h_b(t_n)|² 关于 t_n 的梯度

    按有序径对 (ℓ, ℓ′), ℓ ≠ ℓ′ 求和：
        ∇f_n = −(2πμ)/(λL) · Σ |σ_ℓσ_ℓ′| sin((2π/λ)t_nᵀρ^{ℓ,ℓ′} + θ^{ℓ,ℓ′}) ρ^{ℓ,ℓ′}
    其中 ρ^{ℓ,ℓ′} = ρ_ℓ − ρ_ℓ′，θ^{ℓ,ℓ′} = ∠σ_ℓ′ − ∠σ_ℓ。
    """
    t_n = np.asarray(t_n, dtype=float).reshape(2)
    rho = paths_b.wave_vectors()
    gain = paths_b.gain

    rho_pairs = rho[:, None, :] - rho[None, :, :]
    theta_pairs = np.angle(gain)[None, :] - np.angle(gain)[:, None]
    weights = np.abs(gain)[:, None] * np.abs(gain)[None, :]
    np.fill_diagonal(weights, 0.0)

    phase = paths_b.wavenumber * (rho_pairs @ t_n) + theta_pairs
    coeff = weights * np.sin(phase)
    scale = -paths_b.wavenumber * paths_b.path_loss / paths_b.num_paths
    return scale * np.einsum("ij,ijk->k", coeff, rho_pairs)


def feasible(t, layout: AntennaLayout, n: int) -> bool:
    """t 是否位于区域内且与除第 n 根外的所有天线间距 ≥ D（边界可行）"""
    t = np.asarray(t, dtype=float).reshape(2)
    if not np.all(np.isfinite(t)):
        return False
    if np.any(np.abs(t) > layout.half_size + GEOMETRY_ATOL):
        return False
    others = np.delete(layout.positions, n, axis=0)
    if others.size == 0:
        return True
    distances = np.hypot(*(others - t).T)
    return bool(np.all(distances >= layout.min_distance - GEOMETRY_ATOL))


def _packing_possible(N: int, A: float, D: float) -> bool:
    # 半径 D/2 的互不重叠圆盘都落在边长 A + D 的正方形内
    return N * np.pi * (D / 2.0) ** 2 <= (A + D) ** 2


def initialize_layout(rng_seed: int, N: int, A: float, D: float,
                      max_draws: int = MAX_REJECTION_DRAWS) -> AntennaLayout:
    """
    拒绝采样生成随机初始布局

    依次在方形区域内均匀抽取位置，仅接受与已放置天线间距 ≥ D 的点；
    连续拒绝超过 RESTART_AFTER 次时清空已放置的天线重新开始。

    Raises:
        PackingInfeasibleError: 面积上不可能放下，或抽样次数耗尽
    """
    if N < 1 or not A > 0 or D < 0:
        raise InvalidArgumentError("需要 N ≥ 1、A > 0、D ≥ 0")
    if not _packing_possible(N, A, D):
        raise PackingInfeasibleError(f"边长 {A:.6g} 的区域无法容纳 {N} 根间距 {D:.6g} 的天线")

    rng = np.random.default_rng(rng_seed)
    placed = []
    rejected = 0
    for _ in range(max_draws):
        candidate = rng.uniform(-A / 2.0, A / 2.0, size=2)
        if all(np.hypot(*(candidate - p)) >= D for p in placed):
            placed.append(candidate)
            rejected = 0
            if len(placed) == N:
                return AntennaLayout(np.array(placed), A, D).validate()
        else:
            rejected += 1
            if rejected > RESTART_AFTER:
                placed, rejected = [], 0

    raise PackingInfeasibleError(f"拒绝采样 {max_draws} 次后仍未能放置 {N} 根天线")


def _projected_direction(direction: np.ndarray, t: np.ndarray, half_size: float) -> np.ndarray:
    """去掉位于边界上且指向区域外的梯度分量"""
    at_bound = np.abs(t) >= half_size - GEOMETRY_ATOL
    outward = np.sign(t) * direction > 0
    return np.where(at_bound & outward, 0.0, direction)


def _relative_change(new: float, old: float) -> float:
    return abs(new - old) / max(abs(old), np.finfo(float).tiny)


def optimize_positions(
        paths_b: PathSet,
        initial: AntennaLayout,
        cfg: Optional[GradientConfig] = None
        ) -> OptimizationTrace:
    """
    逐天线梯度上升优化天线位置

    每个外层迭代依次更新 n = 1…N：沿投影梯度方向以 u_ini 为初始步长，候选点裁剪到方形区域内，
    步长减半直到候选点满足最小间距且满足充分增加条件
        f_n(t̂) − f_n(t) ≥ α·∇f_nᵀ(t̂ − t) > 0，
    若步长降到 u_min 以下仍未找到则该天线本轮不动。
    相邻两轮 ‖h_b‖² 的相对变化小于 convergence_tol 或达到 max_iterations 时停止。

    步长在波长归一化坐标上作用于去路损的目标函数，即 t̂ = t + u·(λ²/μ)·∇f_n。
    位于边界上的天线沿边界滑动。

    Raises:
        ConstraintViolationError: 初始布局不可行
    """
    cfg = cfg or GradientConfig()
    initial.validate()

    step_scale = paths_b.wavelength ** 2 / paths_b.path_loss
    half = initial.half_size
    layout = initial
    objectives = [channel_power(paths_b, layout)]
    layouts = [layout]
    converged = False
    iterations = 0

    for iteration in range(1, cfg.max_iterations + 1):
        iterations = iteration
        for n in range(layout.num_antennas):
            t_a = layout.positions[n]
            f_a = antenna_power(paths_b, t_a)
            gradient = objective_gradient(paths_b, t_a)
            direction = _projected_direction(step_scale * gradient, t_a, half)
            if not np.any(direction):
                continue

            u = cfg.initial_step
            while u >= cfg.min_step:
                candidate = np.clip(t_a + u * direction, -half, half)
                u /= 2.0
                predicted = float(gradient @ (candidate - t_a))
                if predicted <= 0.0 or not feasible(candidate, layout, n):
                    continue
                gain = antenna_power(paths_b, candidate) - f_a
                if gain > 0.0 and gain >= ARMIJO_ALPHA * predicted:
                    layout = layout.with_position(n, candidate)
                    break

        objectives.append(channel_power(paths_b, layout))
        layouts.append(layout)
        logger.debug("第 %d 轮迭代: ‖h_b‖² = %.6e", iteration, objectives[-1])

        if _relative_change(objectives[-1], objectives[-2]) < cfg.convergence_tol:
            converged = True
            break

    logger.debug("梯度上升结束: 迭代 %d 轮, 收敛=%s", iterations, converged)
    return OptimizationTrace(
        objectives=tuple(objectives),
        layout=layout,
        iterations_used=iterations,
        converged=converged,
        layouts=tuple(layouts),
    )


def iterations_to_within(trace: OptimizationTrace, fraction: float = 0.01) -> int:
    """首个目标值达到最终值 (1 − fraction) 倍的外层迭代序号"""
    final = trace.final_objective
    for iteration, value in enumerate(trace.objectives):
        if value >= (1.0 - fraction) * final:
            return iteration
    return len(trace.objectives) - 1


def grid_search_single(paths_b: PathSet, A: float, resolution: float):
    """
    单天线穷举网格搜索

    Returns:
        (最优位置, 最大 |h_b(t)|²)
    """
    axis = np.arange(-A / 2.0, A / 2.0 + resolution / 2.0, resolution)
    axis = axis[np.abs(axis) <= A / 2.0 + GEOMETRY_ATOL]
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    grid = np.stack((xx.ravel(), yy.ravel()), axis=-1)
    power = np.abs(evaluate_channel_vector(paths_b, grid)) ** 2
    best = int(np.argmax(power))
    return grid[best], float(power[best])
