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
控制台报告渲染
本模块使用 Jinja2 从 templates/<kind>/<name>.txt 渲染各子命令的控制台输出。
版本：0.1.0-alpha
日期：2026-10-18
本程序遵循 Apache License 2.0 许可证
"""

import logging
import pathlib
from functools import lru_cache
from typing import Any, Optional

from jinja2 import Environment, FileSystemLoader, StrictUndefined, TemplateNotFound

from app.models.config import get_runtime_settings

logger = logging.getLogger(__name__)

PROJECT_ROOT = pathlib.Path(__file__).resolve().parents[2]


def sig12(value: Optional[float]) -> str:
    """12 位有效数字"""
    if value is None:
        return "-"
    return f"{float(value):.12g}"


def resolve_template_dir(template_dir: Optional[str] = None) -> pathlib.Path:
    """
    查找模板目录

    依次尝试绝对路径、当前工作目录下的相对路径和项目根目录下的相对路径。
    """
    name = template_dir or get_runtime_settings().TEMPLATE_DIR
    candidate = pathlib.Path(name)
    if candidate.is_absolute():
        return candidate
    for base in (pathlib.Path.cwd(), PROJECT_ROOT):
        if (base / candidate).is_dir():
            return base / candidate
    logger.warning("未找到模板目录 %s，使用项目根目录下的默认模板", name)
    return PROJECT_ROOT / "templates"


@lru_cache()
def get_environment(template_dir: Optional[str] = None) -> Environment:
    env = Environment(
        loader=FileSystemLoader(str(resolve_template_dir(template_dir))),
        undefined=StrictUndefined,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["sig12"] = sig12
    return env


def render_report(kind: str, name: str = "default", **context: Any) -> str:
    """渲染 templates/<kind>/<name>.txt"""
    try:
        template = get_environment().get_template(f"{kind}/{name}.txt")
    except TemplateNotFound:
        logger.error("模板 %s/%s.txt 不存在", kind, name)
        raise
    return template.render(**context)
