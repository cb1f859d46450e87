// Copyright 2026 The Obtuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference obtuse variables used by the CLI and the test suites.

#pragma once

#include "obtuse/obtuse_core.hpp"

namespace obtuse::catalog {

/// v1 = (i, 1), v2 = (1, -1+i), v3 = -(3+4i, 1+3i)/5; p = (1/3, 1/4, 5/12).
ObtuseSystem three_point_system();

/// Values +1, -1 in C^1.
ObtuseSystem real_bernoulli();

/// Values i, -i in C^1: real-valued tensor entries, yet not a real variable.
ObtuseSystem imaginary_bernoulli();

/// Step law whose rescaled walk converges to one compensated Poisson
/// direction (1, i)/sqrt(2) and one Brownian direction (i, 1)/sqrt(2):
///   v1 = (i, 1)/sqrt(2), v2 = (1 - i sqrt(h), i - sqrt(h))/sqrt(2h),
///   v3 = -(2 sqrt(h) + i, 1 + 2i sqrt(h))/sqrt(2).
ObtuseSystem poisson_brownian_system(double h);

/// diag(e^{i sqrt(h)}, 1) applied to three_point_system(): converges to the
/// same limit as the constant walk, with second moments off by O(sqrt(h)).
ObtuseSystem drifting_three_point_system(double h);

}  // namespace obtuse::catalog
