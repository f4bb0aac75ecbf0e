# Copyright 2026 The spinlab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Trotterized Heisenberg chain circuits with statevector, MPS and mitigation backends."""

from ._spinlab import (
    Boundary,
    CapacityError,
    ChainSpec,
    Circuit,
    ConfigError,
    Error,
    IndexError,
    NumericalError,
    SpecError,
    TrotterOrder,
    TrotterPlan,
    UnsupportedError,
    build,
    cnot_count,
    depth,
    depth_per_step,
    exact_series,
    fold,
    lower,
    m3_mitigate,
    mps_series,
    neel_amplitudes,
    run_config,
    simulate,
    statevector_series,
    tables,
    twirl,
    twirl_set,
    zne_extrapolate,
)

__version__ = "0.1.0"
