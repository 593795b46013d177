# Copyright 2026 The nfba Authors
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Near-field beam alignment for extremely large arrays."""

from ._nfba import (
    ArrayConfig,
    CoarseResult,
    ConfigError,
    FineNet,
    NumericalAbort,
    SimConfig,
    beam_gain,
    channel,
    coarse_align,
    dbm_to_mw,
    default_gamma,
    dft_column,
    epsilon_subspace,
    flops,
    fresnel,
    half_width_at,
    input_length,
    load_config,
    measure,
    mw_to_dbm,
    nearest_grid_index,
    osculating_center,
    parse_config,
    rho_exact,
    rho_fresnel,
    rho_upper_bound,
    simulate,
    simulate_csv,
    spread_half_width,
    spread_params,
    steering_vector,
)

__all__ = [
    "ArrayConfig",
    "CoarseResult",
    "ConfigError",
    "FineNet",
    "NumericalAbort",
    "SimConfig",
    "beam_gain",
    "channel",
    "coarse_align",
    "dbm_to_mw",
    "default_gamma",
    "dft_column",
    "epsilon_subspace",
    "flops",
    "fresnel",
    "half_width_at",
    "input_length",
    "load_config",
    "measure",
    "mw_to_dbm",
    "nearest_grid_index",
    "osculating_center",
    "parse_config",
    "rho_exact",
    "rho_fresnel",
    "rho_upper_bound",
    "simulate",
    "simulate_csv",
    "spread_half_width",
    "spread_params",
    "steering_vector",
]
