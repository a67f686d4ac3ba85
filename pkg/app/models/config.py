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
MA Secure Transmission 配置类
本文件用于定义实验配置、梯度算法配置与运行时设置，以及相应的验证逻辑。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

import json
import pathlib
import logging
from typing import List, Literal, Optional, Tuple, Union
from functools import lru_cache

import yaml
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.utils.exceptions import ConfigError
from app.utils.units import db_to_linear, noise_power

logger = logging.getLogger(__name__)

DEFAULT_GAMMA_GRID_DB = [float(v) for v in range(0, 21)]
DEFAULT_REGION_GRID = [1.0, 2.0, 3.0, 4.0, 6.0, 8.0]

SweepValue = Union[float, List[float]]


class GradientConfig(BaseModel):
    """梯度上升（带回溯线搜索）配置"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    max_iterations: int = 30
    initial_step: float = 10.0
    min_step: float = 1e-3
    convergence_tol: float = 1e-6

    @model_validator(mode='after')
    def validate_steps(self) -> 'GradientConfig':
        """验证步长与迭代参数"""
        if self.max_iterations < 1:
            raise ValueError("max_iterations 必须 ≥ 1")
        if not 0 < self.min_step < self.initial_step:
            raise ValueError("必须满足 0 < min_step < initial_step")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol 必须为正数")
        return self


class ExperimentConfig(BaseModel):      # pylint: disable=too-many-instance-attributes
    """Monte-Carlo 实验配置，未知字段视为错误"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    N: int = 4
    L_b: int = 4
    L_e: int = 4
    A_over_lambda: SweepValue = 4.0
    D_over_lambda: float = 0.5
    gamma_db: SweepValue = 10.0
    P_over_sigma_db: float = 10.0
    power_ratio_scale: Literal["db", "linear"] = "db"
    power_ratio_includes_path_loss: bool = True
    path_loss_db: float = -110.0
    N0_dbm_per_hz: float = -174.0
    eve_N0_dbm_per_hz: Optional[float] = None
    bandwidth_hz: float = 1e6
    wavelength: float = 0.1
    trials: int = 200
    base_seed: int = 2024
    optimizer: Literal["gradient2d", "bsum1d"] = "gradient2d"
    compare_optimizers: bool = False
    max_iterations: int = 30
    initial_step: float = 10.0
    min_step: float = 1e-3
    convergence_tol: float = 1e-6
    convergence_setups: Optional[List[List[int]]] = None

    @model_validator(mode='after')
    def validate_physics(self) -> 'ExperimentConfig':
        """验证物理量与扫描列表"""
        if self.trials < 1:
            raise ValueError("trials 必须 ≥ 1")
        if self.N < 1 or self.L_b < 1 or self.L_e < 1:
            raise ValueError("N、L_b、L_e 必须为正整数")
        if self.base_seed < 0:
            raise ValueError("base_seed 不能为负")
        if not (self.D_over_lambda >= 0 and self.bandwidth_hz > 0 and self.wavelength > 0):
            raise ValueError("D_over_lambda、bandwidth_hz、wavelength 必须为正数")
        if self.power_ratio_scale == "linear" and not self.P_over_sigma_db > 0:
            raise ValueError("power_ratio_scale 为 linear 时 P_over_sigma_db 必须为正数")
        for name in ("A_over_lambda", "gamma_db"):
            value = getattr(self, name)
            if isinstance(value, list):
                if not value:
                    raise ValueError(f"{name} 扫描列表不能为空")
                if value != sorted(value):
                    raise ValueError(f"{name} 扫描列表必须升序排列")
        for area in self.values_of("A_over_lambda"):
            if not area > 0:
                raise ValueError("A_over_lambda 必须为正数")
        for setup in self.convergence_setups or []:
            if len(setup) != 2 or min(setup) < 1:
                raise ValueError("convergence_setups 的每一项必须为 [N, L_b] 正整数对")
        if self.convergence_setups and len({tuple(s) for s in self.convergence_setups}) != len(self.convergence_setups):
            raise ValueError("convergence_setups 不能包含重复的组合")
        # 复用 GradientConfig 的校验
        self.gradient_config()
        return self

    # ---- 扫描轴 ----

    def values_of(self, name: str) -> List[float]:
        """返回某个可扫描字段的全部取值"""
        value = getattr(self, name)
        return [float(v) for v in value] if isinstance(value, list) else [float(value)]

    def is_sweep(self, name: str) -> bool:
        return isinstance(getattr(self, name), list)

    def setups(self) -> List[Tuple[int, int]]:
        """收敛统计使用的 (N, L_b) 组合，未指定时为当前配置"""
        if self.convergence_setups:
            return [(int(n), int(l_b)) for n, l_b in self.convergence_setups]
        return [(self.N, self.L_b)]

    def scalar(self, name: str) -> float:
        """返回标量字段值，若为扫描列表则报错"""
        value = getattr(self, name)
        if isinstance(value, list):
            if len(value) == 1:
                return float(value[0])
            raise ConfigError(f"{name} 为扫描列表，单次试验需要标量值")
        return float(value)

    def at(self, **updates) -> 'ExperimentConfig':
        """返回更新部分字段后的新配置（重新校验）"""
        data = self.model_dump()
        data.update(updates)
        try:
            return ExperimentConfig.model_validate(data)
        except ValidationError as e:
            raise ConfigError(str(e)) from e

    # ---- 派生物理量（全部为线性值） ----

    def gradient_config(self) -> GradientConfig:
        return GradientConfig(
            max_iterations=self.max_iterations,
            initial_step=self.initial_step,
            min_step=self.min_step,
            convergence_tol=self.convergence_tol,
        )

    @property
    def region_size(self) -> float:
        return self.scalar("A_over_lambda") * self.wavelength

    @property
    def min_distance(self) -> float:
        return self.D_over_lambda * self.wavelength

    @property
    def gamma(self) -> float:
        return db_to_linear(self.scalar("gamma_db"))

    @property
    def path_loss(self) -> float:
        return db_to_linear(self.path_loss_db)

    @property
    def noise_power_b(self) -> float:
        """σ_b² = N0·B（瓦特）"""
        return noise_power(self.N0_dbm_per_hz, self.bandwidth_hz)

    @property
    def noise_power_e(self) -> float:
        if self.eve_N0_dbm_per_hz is None:
            return self.noise_power_b
        return noise_power(self.eve_N0_dbm_per_hz, self.bandwidth_hz)

    @property
    def power_ratio(self) -> float:
        if self.power_ratio_scale == "db":
            return db_to_linear(self.P_over_sigma_db)
        return float(self.P_over_sigma_db)

    @property
    def total_power(self) -> float:
        """
        总发射功率 P

        power_ratio_includes_path_loss 为真时比值按 P·μ/σ_b² 解释，否则按 P/σ_b² 解释。
        """
        power = self.power_ratio * self.noise_power_b
        if self.power_ratio_includes_path_loss:
            power /= self.path_loss
        return power

    # ---- 文件读写 ----

    @classmethod
    def from_file(cls, config_file: Union[str, pathlib.Path]) -> 'ExperimentConfig':
        """从 JSON/YAML 文件加载配置"""
        config_path = pathlib.Path(config_file)

        if not config_path.exists():
            logger.error("配置文件 %s 不存在", config_path)
            raise ConfigError(f"配置文件不存在: {config_path}")

        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                config_data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            logger.error("配置文件解析失败: %s", e)
            raise ConfigError(f"配置文件解析失败: {e}") from e

        if config_data is None:
            logger.warning("配置文件 %s 为空，使用默认配置", config_path)
            config_data = {}
        if not isinstance(config_data, dict):
            raise ConfigError("配置文件顶层必须是键值对象")

        try:
            return cls.model_validate(config_data)
        except ValidationError as e:
            logger.error("Pydantic配置验证失败: %s", config_path)
            for error in e.errors():
                logger.error("  %s: %s", error['loc'], error['msg'])
            raise ConfigError(str(e)) from e

    def write_default(self, config_file: Union[str, pathlib.Path]) -> pathlib.Path:
        """将当前配置写入文件，后缀为 .json 时写 JSON，否则写 YAML"""
        config_path = pathlib.Path(config_file)
        config_path.parent.mkdir(parents=True, exist_ok=True)
        data = self.model_dump()

        with open(config_path, 'w', encoding='utf-8') as file:
            if config_path.suffix == ".json":
                json.dump(data, file, indent=2, ensure_ascii=False)
                file.write("\n")
            else:
                yaml.dump(data,
                          file,
                          indent=2,
                          sort_keys=False,
                          default_flow_style=False,
                          allow_unicode=True
                          )

        logger.info("已写入配置文件 %s", config_path)
        return config_path


class RuntimeSettings(BaseSettings):
    """运行时设置，从 MASEC_ 前缀的环境变量读取"""
    model_config = SettingsConfigDict(env_prefix="MASEC_")

    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    WORKERS: int = 1
    TEMPLATE_DIR: str = "templates"

    @model_validator(mode='after')
    def validate_workers(self) -> 'RuntimeSettings':
        """验证并行进程数"""
        if self.WORKERS < 1:
            raise ValueError("WORKERS 必须 ≥ 1")
        return self


@lru_cache()
def get_runtime_settings() -> RuntimeSettings:
    """获取运行时设置（缓存结果）"""
    return RuntimeSettings()
