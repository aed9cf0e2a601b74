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

#include <string>
#include <vector>

#include "rsmimo/types.hpp"

namespace rsmimo {

// Text matrix file, used for covariance sets and pilot matrices:
//
//   rsmimo-matrix <rows> <cols> <count>
//   <row 0 of matrix 0: re im re im ...>
//   ...
//
// Matrices follow one another, each as <rows> lines of 2 * <cols> numbers
// (row-major complex pairs). A covariance set has rows = cols = M and
// count = K. Values are written with 17 significant digits and read back
// bit-exactly.

void write_matrices(const std::string& path, const std::vector<CMat>& matrices);
std::vector<CMat> read_matrices(const std::string& path);

}  // namespace rsmimo
