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

#include "rsmimo/rng.hpp"

#include <cmath>

namespace rsmimo {

Rng make_stream(std::uint64_t seed, std::uint64_t index, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index & 0xffffffffu),
                    static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

cplx complex_normal(Rng& rng) {
  std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
  const double re = dist(rng);
  const double im = dist(rng);
  return {re, im};
}

CVec complex_normal_vector(Rng& rng, Eigen::Index n) {
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = complex_normal(rng);
  return v;
}

double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

}  // namespace rsmimo
