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

#include "rsmimo/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rsmimo {

namespace {
constexpr const char* kMagic = "rsmimo-matrix";
}

void write_matrices(const std::string& path, const std::vector<CMat>& matrices) {
  if (matrices.empty()) throw ConfigError("write_matrices: nothing to write");
  const auto rows = matrices.front().rows();
  const auto cols = matrices.front().cols();
  for (const auto& m : matrices) {
    if (m.rows() != rows || m.cols() != cols) throw ConfigError("write_matrices: matrices differ in shape");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << kMagic << ' ' << rows << ' ' << cols << ' ' << matrices.size() << '\n';
  char buf[64];
  for (const auto& m : matrices) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g", m(r, c).real(), m(r, c).imag());
        out << (c ? " " : "") << buf;
      }
      out << '\n';
    }
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<CMat> read_matrices(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string magic;
  long rows = 0, cols = 0, count = 0;
  if (!(in >> magic >> rows >> cols >> count) || magic != kMagic || rows <= 0 || cols <= 0 || count <= 0) {
    throw IoError("'" + path + "' has a malformed matrix header");
  }
  std::vector<CMat> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long n = 0; n < count; ++n) {
    CMat m(rows, cols);
    for (long r = 0; r < rows; ++r) {
      for (long c = 0; c < cols; ++c) {
        double re = 0.0, im = 0.0;
        if (!(in >> re >> im)) throw IoError("'" + path + "' ends before all matrix entries were read");
        m(r, c) = {re, im};
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace rsmimo
