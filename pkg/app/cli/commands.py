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
命令行子命令
optimize / convergence / sweep-gamma / sweep-region / init-config。
退出码：0 成功，2 配置错误，3 天线无法放置。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

import argparse
import logging
import pathlib
from typing import List, Optional

import numpy as np
from pydantic import ValidationError

from app.harness.export import write_summary_csv, write_trace_csv, write_trials_csv
from app.harness.runner import convergence_report, run_trial, sweep
from app.models.config import (
    DEFAULT_GAMMA_GRID_DB,
    DEFAULT_REGION_GRID,
    ExperimentConfig,
    get_runtime_settings,
)
from app.utils.exceptions import ConfigError, PackingInfeasibleError
from app.utils.rendering import render_report
from app.utils.units import derive_trial_seed

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_PACKING_INFEASIBLE = 3

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def load_config(config_file: Optional[str]) -> ExperimentConfig:
    if config_file is None:
        logger.warning("未指定配置文件，使用默认配置")
        return ExperimentConfig()
    return ExperimentConfig.from_file(config_file)


def resolve_workers(requested: Optional[int]) -> int:
    if requested is None:
        return get_runtime_settings().WORKERS
    if requested < 1:
        raise ConfigError("--workers 必须 ≥ 1")
    return requested


def cmd_optimize(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    seed = derive_trial_seed(cfg.base_seed, 0) if args.seed is None else args.seed
    record = run_trial(cfg, seed)

    if args.out:
        out = pathlib.Path(args.out)
        write_trials_csv(out / "trials.csv", [record])

    print(render_report("optimize", optimizer=cfg.optimizer, cfg=cfg, record=record,
                        total_power=cfg.total_power), end="")
    return EXIT_OK


def trace_file_name(num_antennas: int, num_paths: int, single: bool) -> str:
    """单一组合写 trace.csv，多组合时每个 (N, L_b) 各写一个文件"""
    return "trace.csv" if single else f"trace_N{num_antennas}_Lb{num_paths}.csv"


def cmd_convergence(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    traces = convergence_report(cfg, resolve_workers(args.workers))

    setups = cfg.setups()
    out = pathlib.Path(args.out)
    groups = []
    for num_antennas, num_paths in setups:
        group = [t for t in traces if (t.num_antennas, t.num_paths) == (num_antennas, num_paths)]
        path = write_trace_csv(out / trace_file_name(num_antennas, num_paths, len(setups) == 1), group)
        groups.append({
            "num_antennas": num_antennas,
            "num_paths": num_paths,
            "traces": group,
            "median_iterations": float(np.median([t.iterations_to_within for t in group])),
            "output": path,
        })

    print(render_report("convergence", groups=groups), end="")
    return EXIT_OK


def _run_sweep(args: argparse.Namespace, axis: str, field_name: str, default_grid: List[float]) -> int:
    cfg = load_config(args.config)
    if not cfg.is_sweep(field_name):
        logger.warning("%s 不是扫描列表，使用默认网格 %s", field_name, default_grid)
        cfg = cfg.at(**{field_name: default_grid})

    result = sweep(cfg, axis, resolve_workers(args.workers))
    out = pathlib.Path(args.out)
    write_trials_csv(out / "trials.csv", result.records)
    write_summary_csv(out / "summary.csv", result.rows)

    print(render_report("sweep", axis=axis, axis_label=field_name, trials=cfg.trials,
                        rows=result.rows, output=out), end="")
    return EXIT_OK


def cmd_sweep_gamma(args: argparse.Namespace) -> int:
    return _run_sweep(args, "gamma", "gamma_db", DEFAULT_GAMMA_GRID_DB)


def cmd_sweep_region(args: argparse.Namespace) -> int:
    return _run_sweep(args, "region_size", "A_over_lambda", DEFAULT_REGION_GRID)


def cmd_init_config(args: argparse.Namespace) -> int:
    path = ExperimentConfig().write_default(args.out)
    print(f"已写入默认配置: {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ma-secure",
        description="无窃听者 CSI 的可移动天线安全传输仿真",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    o = sub.add_parser("optimize", help="单场景优化，输出天线位置与功率")
    o.add_argument("--config", type=str, default=None)
    o.add_argument("--out", type=str, default=None, help="可选，写入 trials.csv 的目录")
    o.add_argument("--seed", type=int, default=None, help="试验种子，默认 base_seed ⊕ 0")
    o.set_defaults(func=cmd_optimize)

    c = sub.add_parser("convergence", help="梯度上升收敛轨迹，写入 trace.csv")
    c.add_argument("--config", type=str, default=None)
    c.add_argument("--out", type=str, default=".")
    c.add_argument("--workers", type=int, default=None)
    c.set_defaults(func=cmd_convergence)

    for name, func, help_text in (
            ("sweep-gamma", cmd_sweep_gamma, "保密速率随目标 SNR 变化"),
            ("sweep-region", cmd_sweep_region, "保密速率随区域边长变化"),
            ):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("--config", type=str, default=None)
        s.add_argument("--out", type=str, default=".")
        s.add_argument("--workers", type=int, default=None)
        s.set_defaults(func=func)

    i = sub.add_parser("init-config", help="写出默认配置文件（.json 或 .yaml）")
    i.add_argument("--out", type=str, default="config.json")
    i.set_defaults(func=cmd_init_config)

    return parser


def configure_logging() -> None:
    """按 MASEC_LOG_LEVEL 配置根日志；已有处理器时不覆盖"""
    logging.basicConfig(
        level=get_runtime_settings().LOG_LEVEL,
        format=LOG_FORMAT,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging()
        return args.func(args)
    except ConfigError as e:
        logger.error("配置错误: %s", e)
        return EXIT_CONFIG_ERROR
    except ValidationError as e:
        logger.error("运行时设置无效: %s", e)
        return EXIT_CONFIG_ERROR
    except PackingInfeasibleError as e:
        logger.error("天线无法放置: %s", e)
        return EXIT_PACKING_INFEASIBLE
