import sys
import os

import numpy as np
import pytest

# 添加项目根目录到 Python 路径
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app.core.channel import channel_gain_bound, evaluate_channel, sample_path_set
from app.core.optimizer2d import (
    antenna_power,
    channel_power,
    feasible,
    grid_search_single,
    initialize_layout,
    iterations_to_within,
    objective_gradient,
    optimize_positions,
)
from app.harness.runner import fpa_baseline_layout
from app.models.config import GradientConfig
from app.models.types import AntennaLayout, OptimizationTrace, PathSet
from app.utils.exceptions import ConstraintViolationError, PackingInfeasibleError

WAVELENGTH = 0.1
A = 4 * WAVELENGTH
D = WAVELENGTH / 2


def _finite_difference(paths, t, step):
    grad = np.zeros(2)
    for k in range(2):
        e = np.zeros(2)
        e[k] = step
        grad[k] = (antenna_power(paths, t + e) - antenna_power(paths, t - e)) / (2 * step)
    return grad


def test_channel_power_single_path_is_flat():
    """单径时功率与位置无关"""
    paths = PathSet(np.array([0.9]), np.array([2.0]), np.array([0.6 + 0.8j]), 1e-11, WAVELENGTH)
    for position in ([0.0, 0.0], [0.11, -0.07], [-0.2, 0.2]):
        layout = AntennaLayout(np.array([position]), A, D)
        assert channel_power(paths, layout) == pytest.approx(1e-11, rel=1e-12)


def test_channel_power_additive_for_coincident_antennas():
    """两根天线重合时功率加倍（仅用于测试，违反间距约束）"""
    paths = sample_path_set(3, 4, -110.0, WAVELENGTH)
    t = np.array([0.05, -0.03])
    layout = AntennaLayout(np.array([t, t]), A, D)
    assert channel_power(paths, layout) == pytest.approx(2 * abs(evaluate_channel(paths, t)) ** 2, rel=1e-12)


def test_channel_power_matches_channel_oracle():
    """与逐天线 evaluate_channel 之和一致"""
    paths = sample_path_set(4, 4, -110.0, WAVELENGTH)
    layout = initialize_layout(9, 4, A, D)
    expected = sum(abs(evaluate_channel(paths, t)) ** 2 for t in layout.positions)
    assert channel_power(paths, layout) == pytest.approx(expected, rel=1e-12)


def test_gradient_zero_for_single_path():
    """单径无交叉项，梯度为零"""
    paths = PathSet(np.array([0.3]), np.array([1.3]), np.array([1.0 - 1.0j]), 1e-11, WAVELENGTH)
    np.testing.assert_array_equal(objective_gradient(paths, [0.1, 0.2]), np.zeros(2))


def test_gradient_zero_at_stationary_phase():
    """两径同相位、位于原点时交叉项 sin 为零"""
    paths = PathSet(np.array([0.5, 1.2]), np.array([0.7, 2.1]), np.array([1.0 + 0j, 0.5 + 0j]), 1e-11, WAVELENGTH)
    np.testing.assert_allclose(objective_gradient(paths, [0.0, 0.0]), np.zeros(2), atol=1e-25)


def test_gradient_matches_finite_differences():
    """L ∈ {2, 3, 4} 时解析梯度与中心差分一致"""
    rng = np.random.default_rng(2024)
    for seed in range(100):
        paths = sample_path_set(seed, 2 + seed % 3, -110.0, WAVELENGTH)
        t = rng.uniform(-A / 2, A / 2, size=2)
        analytic = objective_gradient(paths, t)
        numeric = _finite_difference(paths, t, 1e-6 * WAVELENGTH)
        scale = paths.wavenumber * paths.path_loss
        np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-6 * scale)


def test_feasible_region_and_spacing():
    """越界、重合为不可行，恰好相距 D 为可行"""
    layout = AntennaLayout(np.array([[0.0, 0.0], [0.1, 0.1]]), A, D)
    assert feasible([A, 0.0], layout, 0) is False
    assert feasible([0.1, 0.1], layout, 0) is False
    assert feasible([0.1 - D, 0.1], layout, 0) is True
    assert feasible([0.1, 0.1], layout, 1) is True
    assert feasible([np.nan, 0.0], layout, 0) is False


def test_initialize_layout():
    """初始布局合法且可复现；面积不足时报错"""
    single = initialize_layout(1, 1, A, D)
    assert single.is_valid()

    layout = initialize_layout(5, 4, A, D)
    assert layout.num_antennas == 4
    assert layout.is_valid()
    np.testing.assert_array_equal(layout.positions, initialize_layout(5, 4, A, D).positions)

    with pytest.raises(PackingInfeasibleError):
        initialize_layout(1, 100, WAVELENGTH, WAVELENGTH / 2)


def test_optimize_rejects_invalid_initial_layout():
    """初始布局不合法时报错"""
    paths = sample_path_set(1, 4, -110.0, WAVELENGTH)
    bad = AntennaLayout(np.array([[0.0, 0.0], [0.01, 0.0]]), A, D)
    with pytest.raises(ConstraintViolationError):
        optimize_positions(paths, bad)


def test_optimize_single_path_does_not_move():
    """单径时一轮即收敛且不移动"""
    paths = sample_path_set(2, 1, -110.0, WAVELENGTH)
    initial = initialize_layout(3, 4, A, D)
    trace = optimize_positions(paths, initial)
    assert trace.iterations_used == 1
    assert trace.converged
    np.testing.assert_array_equal(trace.layout.positions, initial.positions)


def test_optimize_trace_monotone_and_feasible():
    """目标值单调不减，所有中间布局合法，且不超过上界"""
    for seed in range(100):
        paths = sample_path_set(seed, 4, -110.0, WAVELENGTH)
        trace = optimize_positions(paths, initialize_layout(1000 + seed, 4, A, D), GradientConfig())
        assert trace.is_non_decreasing()
        assert all(layout.is_valid() for layout in trace.layouts)
        assert len(trace.layouts) == len(trace.objectives) == trace.iterations_used + 1
        bound = 4 * channel_gain_bound(paths) ** 2
        assert max(trace.objectives) <= bound * (1 + 1e-12)
        assert iterations_to_within(trace) <= 30


def test_optimize_single_antenna_near_grid_optimum():
    """单天线两径时接近穷举网格搜索的最大值"""
    hits = 0
    seeds = range(50)
    for seed in seeds:
        paths = sample_path_set(seed, 2, -110.0, WAVELENGTH)
        trace = optimize_positions(paths, initialize_layout(500 + seed, 1, A, D))
        _, best = grid_search_single(paths, A, WAVELENGTH / 200)
        hits += trace.final_objective >= 0.99 * best
    assert hits >= 0.9 * len(seeds)


def test_antenna_on_edge_slides_along_boundary():
    """梯度指向区域外时天线沿边界滑动到边界上的最大值"""
    half = A / 2
    # ρ₁ − ρ₂ 两个分量均为正，起点处梯度同时指向 +x 与区域外的 +y
    paths = PathSet(np.array([np.pi / 2, 2.0]), np.array([0.0, np.pi / 2]),
                    np.array([1.0 + 0j, 1.0 + 0j]), 1e-11, WAVELENGTH)
    initial = AntennaLayout(np.array([[0.0, half]]), A, D)
    gradient = objective_gradient(paths, initial.positions[0])
    assert gradient[0] > 0 and gradient[1] > 0

    trace = optimize_positions(paths, initial)
    assert trace.layout.is_valid()
    assert trace.layout.positions[0, 1] == pytest.approx(half)
    assert trace.final_objective >= 0.99 * 2 * paths.path_loss
    assert trace.final_objective > trace.objectives[0]


def test_optimized_layout_beats_fpa():
    """同一多径下优化后功率通常不低于 λ/2 均匀线阵"""
    wins = 0
    seeds = range(200)
    fpa = fpa_baseline_layout(4, WAVELENGTH)
    for seed in seeds:
        paths = sample_path_set(seed, 4, -110.0, WAVELENGTH)
        trace = optimize_positions(paths, initialize_layout(700 + seed, 4, A, D))
        wins += trace.final_objective >= channel_power(paths, fpa)
    assert wins >= 0.95 * len(seeds)


def test_iterations_to_within():
    """首个达到最终值 99% 的迭代序号"""
    layout = AntennaLayout(np.zeros((1, 2)), A, D)
    trace = OptimizationTrace(objectives=(1.0, 5.0, 9.95, 10.0), layout=layout, iterations_used=3, converged=True)
    assert iterations_to_within(trace) == 2
    assert iterations_to_within(trace, fraction=0.6) == 1


def test_gradient_config_validation():
    """u_min 必须小于 u_ini"""
    with pytest.raises(ValueError):
        GradientConfig(initial_step=1e-3, min_step=1e-3)
    with pytest.raises(ValueError):
        GradientConfig(max_iterations=0)
