# Copyright 2026 The trisim Authors
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
"""Time-resolved photon interference simulator.

Thin wrapper around the compiled extension. Scenario runners accept a
ScenarioConfig and return plain dictionaries mirroring the CSV artifacts
they write to ``config.out_dir``.
"""

from trisim._core import (  # noqa: F401
    JitterModel,
    PumpSpec,
    ScenarioConfig,
    SourceSpec,
    __version__,
    combined_jitter_fwhm,
    config_hash,
    default_config,
    delayed_pair_events,
    fusion_fidelity,
    load_timetags,
    parse_config_file,
    permanent,
    projection_visibility,
    run_analyze,
    run_fusion,
    run_hom,
    run_projections,
    run_scattershot,
    save_timetags,
    serialize_config,
    synthesize_delayed_pair_stream,
)

__all__ = [
    "JitterModel",
    "PumpSpec",
    "ScenarioConfig",
    "SourceSpec",
    "__version__",
    "combined_jitter_fwhm",
    "config_hash",
    "default_config",
    "delayed_pair_events",
    "fusion_fidelity",
    "load_timetags",
    "parse_config_file",
    "permanent",
    "projection_visibility",
    "run_analyze",
    "run_fusion",
    "run_hom",
    "run_projections",
    "run_scattershot",
    "save_timetags",
    "serialize_config",
    "synthesize_delayed_pair_stream",
]
