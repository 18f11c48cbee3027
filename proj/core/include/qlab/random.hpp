// Copyright 2026 The qlab Authors
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

#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace qlab {

using Rng = std::mt19937_64;

/// Independent generator for work unit `stream` under master `seed`.
///
/// Every stochastic routine derives its per-unit generators through this
/// function, so results depend only on (seed, unit index) and never on how
/// units are scheduled across threads.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2).
std::complex<double> complex_gaussian(Rng& rng);

}  // namespace qlab
