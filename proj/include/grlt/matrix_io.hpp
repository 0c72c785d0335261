// Copyright 2026 The grlt Authors
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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace grlt {

/// Row-major matrix text: the dimension, then dim*dim values per matrix.
/// Complex values are written as `a+bi`; plain reals are accepted on input.
struct MatrixFile {
  int dim = 0;
  bool complex = false;
  std::vector<Eigen::MatrixXcd> matrices;

  /// Real parts; valid when `complex` is false.
  std::vector<Eigen::MatrixXd> real_matrices() const;
};

void write_matrices(std::ostream& out, const std::vector<Eigen::MatrixXd>& matrices);
void write_matrices(std::ostream& out, const std::vector<Eigen::MatrixXcd>& matrices);

/// Throws FormatError with the byte offset of the first bad token.
MatrixFile parse_matrices(std::string_view text);
MatrixFile read_matrices_file(const std::string& path);

}  // namespace grlt
