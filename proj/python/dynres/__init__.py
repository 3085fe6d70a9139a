# Copyright 2026 The dynres Authors. All Rights Reserved.
#
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
# ==============================================================================
"""Dynamic-resolution tile planning, pixel shuffle, mixture sampling and
translation prompt utilities backed by the dynres C++ core."""

from ._dynres import (
    DynresError,
    PlannerConfig,
    RatioGrid,
    TilePlan,
    __version__,
    build_catalog,
    cache_key,
    closest_ratio,
    load_manifest,
    mixture_report,
    patch_grid,
    plan,
    process,
    prompt_template_version,
    render_prompt,
    resize,
    run_cli,
    sample,
    shuffle,
    token_bounds,
    unshuffle,
)

__all__ = [
    "DynresError",
    "PlannerConfig",
    "RatioGrid",
    "TilePlan",
    "__version__",
    "build_catalog",
    "cache_key",
    "closest_ratio",
    "load_manifest",
    "mixture_report",
    "patch_grid",
    "plan",
    "process",
    "prompt_template_version",
    "render_prompt",
    "resize",
    "run_cli",
    "sample",
    "shuffle",
    "token_bounds",
    "unshuffle",
]
