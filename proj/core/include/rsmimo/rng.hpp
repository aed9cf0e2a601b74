// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

#include "rsmimo/types.hpp"

namespace rsmimo {

using Rng = std::mt19937_64;

/// Stream identifiers for counter-derived substreams. Every random quantity
/// of a trial is drawn from its own stream so that methods and power points
/// consume identical draws.
enum class Stream : std::uint32_t {
  kGeometry = 1,
  kChannel = 2,
  kNoise = 3,
  kTest = 99,
};

/// Deterministic substream keyed by (seed, index, stream).
Rng make_stream(std::uint64_t seed, std::uint64_t index, Stream stream);

/// Circularly-symmetric standard complex normal sample, CN(0, 1).
cplx complex_normal(Rng& rng);

/// Vector of i.i.d. CN(0, 1) entries.
CVec complex_normal_vector(Rng& rng, Eigen::Index n);

/// Uniform sample on [lo, hi).
double uniform(Rng& rng, double lo, double hi);

}  // namespace rsmimo
