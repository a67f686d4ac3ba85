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
线阵天线位置优化模块（BSUM）
本模块针对沿 x 轴的线阵，用正弦项的二次下界逐块最大化 Bob 的信道功率。
每块的子问题是带排斥区间的一维二次规划，通过枚举候选点精确求解。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np

from app.models.types import GEOMETRY_ATOL, LinearLayout, OptimizationTrace, PathSet, QuadraticSurrogate
from app.utils.exceptions import ConstraintViolationError, InvalidArgumentError, PackingInfeasibleError

logger = logging.getLogger(__name__)

MAX_REJECTION_DRAWS = 100_000
# 连续拒绝次数超过该值时清空已放置的天线重新开始
RESTART_AFTER = 1_000

WeightedSurrogates = Iterable[Tuple[float, QuadraticSurrogate]]


@dataclass(frozen=True)
class FeasibleSet:
    """[lower, upper] 去掉以 centers 为中心、半径 D 的开区间"""
    lower: float
    upper: float
    centers: Tuple[float, ...] = ()
    min_distance: float = 0.0

    def contains(self, x: float) -> bool:
        if x < self.lower - GEOMETRY_ATOL or x > self.upper + GEOMETRY_ATOL:
            return False
        return all(abs(x - c) >= self.min_distance - GEOMETRY_ATOL for c in self.centers)

    def candidate_points(self) -> List[float]:
        """区间端点及各排斥区间端点中可行的点"""
        points = [self.lower, self.upper]
        for c in self.centers:
            points.extend((c - self.min_distance, c + self.min_distance))
        return sorted(p for p in points if self.contains(p))


def linear_channel_power(paths_b: PathSet, layout: LinearLayout) -> float:
    """‖h_b‖² = (μ/L) Σ_n |Σ_ℓ σ_ℓ exp(−j(2π/λ) x_n sinθ_ℓ cosφ_ℓ)|²"""
    direction = np.sin(paths_b.elevation) * np.cos(paths_b.azimuth)
    phases = paths_b.wavenumber * np.outer(layout.positions, direction)
    fields = np.exp(-1j * phases) @ paths_b.gain
    return float(paths_b.path_loss / paths_b.num_paths * np.sum(np.abs(fields) ** 2))


def build_surrogate(rho: float, theta: float, x0: float) -> QuadraticSurrogate:
    """
    sin(ρx + θ) 在 x0 处的二次下界

    q(x) = sin(y0) + ρcos(y0)(x − x0) − (ρ²/2)(x − x0)²，y0 = ρx0 + θ，
    写成 a(x − b)² + c 形式：a = −ρ²/2，b = x0 + cos(y0)/ρ，c = sin(y0) + cos²(y0)/2。
    |sin″| ≤ 1 保证 q ≤ sin(ρx + θ) 处处成立，且在 x0 处值与斜率相切。
    """
    y0 = rho * x0 + theta
    if rho == 0.0:
        return QuadraticSurrogate(a=0.0, b=float(x0), c=float(np.sin(theta)))
    return QuadraticSurrogate(
        a=-0.5 * rho ** 2,
        b=float(x0 + np.cos(y0) / rho),
        c=float(np.sin(y0) + 0.5 * np.cos(y0) ** 2),
    )


def _combine(surrogate_sum: WeightedSurrogates) -> Tuple[float, float, float]:
    """Σ w(a(x − b)² + c) 展开为 αx² + βx + γ"""
    alpha = beta = gamma = 0.0
    for weight, q in surrogate_sum:
        alpha += weight * q.a
        beta += -2.0 * weight * q.a * q.b
        gamma += weight * (q.a * q.b ** 2 + q.c)
    return alpha, beta, gamma


def minimize_quadratic_1d(surrogate_sum: WeightedSurrogates, feasible_set: FeasibleSet) -> float:
    """
    在可行集上求加权二次和的全局最小点

    候选点为无约束顶点（若可行）、区间端点和排斥区间端点，取值最小者，并列时取最小的 x。

    Raises:
        ConstraintViolationError: 可行集为空
    """
    alpha, beta, gamma = _combine(surrogate_sum)
    candidates = feasible_set.candidate_points()
    if alpha > 0.0:
        vertex = -beta / (2.0 * alpha)
        if feasible_set.contains(vertex):
            candidates.append(vertex)
    if not candidates:
        raise ConstraintViolationError("一维可行集为空")

    points = np.array(sorted(set(candidates)))
    values = alpha * points ** 2 + beta * points + gamma
    # lexsort 以最后一个键为主键：先比值，再比 x
    best = np.lexsort((points, values))[0]
    return float(points[best])


def pair_terms(paths_b: PathSet):
    """
    线阵目标的成对正弦项

    Returns:
        (weights, slopes, phases)，分别为 |σ_ℓσ_ℓ′|、ρ^{ℓ,ℓ′} = (2π/λ)(s_ℓ − s_ℓ′)
        以及正弦相位 θ^{ℓ,ℓ′} + π/2（cos 写成 sin 时吸收的 π/2），均按有序径对 ℓ ≠ ℓ′ 展平。
    """
    direction = np.sin(paths_b.elevation) * np.cos(paths_b.azimuth)
    gain = paths_b.gain
    rows, cols = np.where(~np.eye(paths_b.num_paths, dtype=bool))
    weights = np.abs(gain[rows]) * np.abs(gain[cols])
    slopes = paths_b.wavenumber * (direction[rows] - direction[cols])
    phases = np.angle(gain[cols]) - np.angle(gain[rows]) + np.pi / 2.0
    return weights, slopes, phases


def _reduced_objective(weights, slopes, phases, x: float) -> float:
    # 去掉常数项与 μ/L 的单天线目标
    return float(np.sum(weights * np.sin(slopes * x + phases)))


def initialize_linear_layout(rng_seed: int, N: int, A: float, D: float,
                             max_draws: int = MAX_REJECTION_DRAWS) -> LinearLayout:
    """
    拒绝采样生成线阵初始布局

    Raises:
        PackingInfeasibleError: (N − 1)·D > A 或抽样次数耗尽
    """
    if N < 1 or not A > 0 or D < 0:
        raise InvalidArgumentError("需要 N ≥ 1、A > 0、D ≥ 0")
    if (N - 1) * D > A + GEOMETRY_ATOL:
        raise PackingInfeasibleError(f"长度 {A:.6g} 的线段无法容纳 {N} 根间距 {D:.6g} 的天线")

    rng = np.random.default_rng(rng_seed)
    placed: List[float] = []
    rejected = 0
    for _ in range(max_draws):
        candidate = float(rng.uniform(-A / 2.0, A / 2.0))
        if all(abs(candidate - p) >= D for p in placed):
            placed.append(candidate)
            rejected = 0
            if len(placed) == N:
                return LinearLayout(np.array(placed), A, D).validate()
        else:
            rejected += 1
            if rejected > RESTART_AFTER:
                placed, rejected = [], 0

    raise PackingInfeasibleError(f"拒绝采样 {max_draws} 次后仍未能放置 {N} 根天线")


def optimize_linear(
        paths_b: PathSet,
        initial: LinearLayout,
        max_outer: int = 30,
        tol: float = 1e-6
        ) -> OptimizationTrace:
    """
    BSUM 逐块优化线阵位置

    每块在当前 x_n 处为每个正弦项构造二次下界，最小化其相反数（−f 的凸上界）之和，
    仅当新点严格改进代理目标时才移动。轨迹记录完整信道功率，单调不减。

    Raises:
        ConstraintViolationError: 初始布局不可行
    """
    if max_outer < 1 or not tol > 0:
        raise InvalidArgumentError("需要 max_outer ≥ 1 且 tol > 0")
    initial.validate()

    weights, slopes, phases = pair_terms(paths_b)
    half = initial.half_size
    layout = initial
    objectives = [linear_channel_power(paths_b, layout)]
    layouts = [layout]
    converged = False
    iterations = 0

    for iteration in range(1, max_outer + 1):
        iterations = iteration
        for n in range(layout.num_antennas):
            x0 = float(layout.positions[n])
            majorizers = [(w, -build_surrogate(r, p, x0)) for w, r, p in zip(weights, slopes, phases)]
            others = tuple(float(x) for k, x in enumerate(layout.positions) if k != n)
            region = FeasibleSet(-half, half, others, layout.min_distance)

            x_new = minimize_quadratic_1d(majorizers, region)
            alpha, beta, gamma = _combine(majorizers)
            improves = alpha * x_new ** 2 + beta * x_new + gamma < alpha * x0 ** 2 + beta * x0 + gamma
            if improves and _reduced_objective(weights, slopes, phases, x_new) >= \
                    _reduced_objective(weights, slopes, phases, x0):
                layout = layout.with_position(n, x_new)

        objectives.append(linear_channel_power(paths_b, layout))
        layouts.append(layout)
        logger.debug("BSUM 第 %d 轮: ‖h_b‖² = %.6e", iteration, objectives[-1])

        if abs(objectives[-1] - objectives[-2]) < tol * max(abs(objectives[-2]), np.finfo(float).tiny):
            converged = True
            break

    logger.debug("BSUM 结束: 迭代 %d 轮, 收敛=%s", iterations, converged)
    return OptimizationTrace(
        objectives=tuple(objectives),
        layout=layout,
        iterations_used=iterations,
        converged=converged,
        layouts=tuple(layouts),
    )


def grid_search_linear(paths_b: PathSet, A: float, resolution: float):
    """
    单天线一维穷举搜索

    Returns:
        (最优 x, 最大 |h_b(x)|²)
    """
    xs = np.arange(-A / 2.0, A / 2.0 + resolution / 2.0, resolution)
    xs = xs[np.abs(xs) <= A / 2.0 + GEOMETRY_ATOL]
    direction = np.sin(paths_b.elevation) * np.cos(paths_b.azimuth)
    fields = np.exp(-1j * paths_b.wavenumber * np.outer(xs, direction)) @ paths_b.gain
    power = paths_b.path_loss / paths_b.num_paths * np.abs(fields) ** 2
    best = int(np.argmax(power))
    return float(xs[best]), float(power[best])
