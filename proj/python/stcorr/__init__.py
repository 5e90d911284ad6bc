# Copyright 2026 The stcorr Authors
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
"""Space-time correlations of a discrete Edwards-Wilkinson interface."""

from ._stcorr import (
    CorrelationKind,
    Dynamics,
    DomainError,
    FieldKind,
    FiniteSizeError,
    InitialCondition,
    InsufficientDataError,
    ParityError,
    __version__,
    asymptotic,
    displacement_correlation_asym,
    equilibrium_gradient_variance,
    exact,
    exact_table,
    g11_asym,
    g11_exact,
    g11_quadrature,
    g12_asym,
    g12_exact,
    g21_asym,
    g21_exact,
    g22_asym,
    g22_exact,
    measure,
    oracle_pair_correlation,
    poisson_kernel,
    prop2_gap,
    sample_equilibrium,
    simulate,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
