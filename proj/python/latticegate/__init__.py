# Copyright 2026 The latticegate Authors
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

"""Collisional-gate entanglement in an optical lattice."""

from ._latticegate import (
    CapacityError,
    Calibration,
    ConfigError,
    EstimationError,
    FitError,
    NoiseModel,
    __version__,
    calibrate,
    cluster_size_stats,
    estimate_threshold,
    figures_recipe,
    final_state,
    fit_sinusoid,
    generate_cluster,
    interference_pattern,
    minima_separation,
    parse_config,
    percolation_trial,
    ramsey_scan,
    recoil_energy,
    reference_calibration,
    rng_name,
    run_config,
    stabilizer_check,
    trap_frequency,
    visibility_curve,
)


def noise_model(**fields):
    """NoiseModel with the given fields set, e.g. noise_model(fill_probability=0.9, ensemble_size=200)."""
    m = NoiseModel()
    for k, v in fields.items():
        if not hasattr(m, k):
            raise TypeError(f"NoiseModel has no field {k!r}")
        setattr(m, k, v)
    m.validate()
    return m


def visibility(fringe):
    """Fitted visibility of a ramsey_scan result."""
    return fit_sinusoid(fringe["alpha"], fringe["p_one"])["visibility"]
