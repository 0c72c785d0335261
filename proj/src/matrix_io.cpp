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

#include "grlt/matrix_io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "grlt/errors.hpp"

namespace grlt {

namespace {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(std::complex<double> v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
  return buf;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  const std::string tmp(s);
  char* end = nullptr;
  out = std::strtod(tmp.c_str(), &end);
  return end == tmp.c_str() + tmp.size();
}

// Accepts "x", "a+bi", "a-bi", "bi".
bool parse_value(std::string_view tok, std::complex<double>& out, bool& is_complex) {
  if (tok.back() != 'i') {
    double v = 0;
    if (!parse_double(tok, v)) return false;
    out = {v, 0.0};
    return true;
  }
  is_complex = true;
  const std::string_view body = tok.substr(0, tok.size() - 1);
  // Split at the last sign that is not part of an exponent or the leading sign.
  for (std::size_t k = body.size(); k-- > 1;) {
    const char c = body[k];
    if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      double re = 0, im = 0;
      if (!parse_double(body.substr(0, k), re) || !parse_double(body.substr(k), im)) return false;
      out = {re, im};
      return true;
    }
  }
  double im = 0;
  if (!parse_double(body, im)) return false;
  out = {0.0, im};
  return true;
}

}  // namespace

std::vector<Eigen::MatrixXd> MatrixFile::real_matrices() const {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(matrices.size());
  for (const auto& m : matrices) out.push_back(m.real());
  return out;
}

void write_matrices(std::ostream& out, const std::vector<Eigen::MatrixXd>& matrices) {
  if (matrices.empty()) throw ShapeError("nothing to write");
  const auto dim = matrices.front().rows();
  out << dim << '\n';
  for (const auto& m : matrices) {
    if (m.rows() != dim || m.cols() != dim) throw ShapeError("matrices must share a square shape");
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) out << (j ? " " : "") << format_real(m(i, j));
      out << '\n';
    }
  }
}

void write_matrices(std::ostream& out, const std::vector<Eigen::MatrixXcd>& matrices) {
  if (matrices.empty()) throw ShapeError("nothing to write");
  const auto dim = matrices.front().rows();
  out << dim << '\n';
  for (const auto& m : matrices) {
    if (m.rows() != dim || m.cols() != dim) throw ShapeError("matrices must share a square shape");
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) out << (j ? " " : "") << format_complex(m(i, j));
      out << '\n';
    }
  }
}

MatrixFile parse_matrices(std::string_view text) {
  std::size_t pos = 0;
  auto next_token = [&](std::size_t& start) -> std::string_view {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  };

  MatrixFile file;
  std::size_t start = 0;
  const std::string_view head = next_token(start);
  double dim_value = 0;
  if (head.empty() || !parse_double(head, dim_value) || dim_value < 1 ||
      dim_value != static_cast<int>(dim_value))
    throw FormatError("expected a positive integer dimension", start);
  file.dim = static_cast<int>(dim_value);

  std::vector<std::complex<double>> values;
  for (;;) {
    const std::string_view tok = next_token(start);
    if (tok.empty()) break;
    std::complex<double> v;
    if (!parse_value(tok, v, file.complex))
      throw FormatError("malformed matrix entry '" + std::string(tok) + "'", start);
    values.push_back(v);
  }
  const std::size_t per = static_cast<std::size_t>(file.dim) * file.dim;
  if (values.empty() || values.size() % per != 0)
    throw FormatError("value count " + std::to_string(values.size()) +
                          " is not a positive multiple of dim^2 = " + std::to_string(per),
                      text.size());
  for (std::size_t k = 0; k < values.size(); k += per) {
    Eigen::MatrixXcd m(file.dim, file.dim);
    for (int i = 0; i < file.dim; ++i)
      for (int j = 0; j < file.dim; ++j) m(i, j) = values[k + static_cast<std::size_t>(i) * file.dim + j];
    file.matrices.push_back(std::move(m));
  }
  return file;
}

MatrixFile read_matrices_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrices(ss.str());
}

}  // namespace grlt
