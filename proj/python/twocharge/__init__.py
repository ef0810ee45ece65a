# Copyright 2026 The twocharge Authors
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

"""Two-charge circular ensemble: partition function, count law, Pfaffian correlations and a sampler."""

from ._core import (
    DomainError,
    coe_entry,
    count_pgf,
    count_pmf,
    cse_entry,
    energy,
    intensity,
    kernel_entry,
    limiting_pgf,
    log_partition,
    mean_count,
    oracle_partition,
    pfaffian,
    sample,
    scaled_intensity,
    scaled_kernel_entry,
    var_count,
    verify,
)

__all__ = [
    "DomainError",
    "coe_entry",
    "count_pgf",
    "count_pmf",
    "cse_entry",
    "energy",
    "intensity",
    "kernel_entry",
    "limiting_pgf",
    "log_partition",
    "mean_count",
    "oracle_partition",
    "pfaffian",
    "sample",
    "scaled_intensity",
    "scaled_kernel_entry",
    "var_count",
    "verify",
]
