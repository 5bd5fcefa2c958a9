// Copyright 2026 The kgsyn Authors.
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

#include "kgsyn/tensor.h"

#include <algorithm>
#include <cmath>

#include "kgsyn/error.h"

namespace kgsyn {

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

double dot(std::span<const double> a, std::span<const double> b) {
  check_dims(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

double l2_norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

Vector affine(const Matrix &w, std::span<const double> x, std::span<const double> b) {
  check_dims(w.cols(), x.size(), "affine input");
  if (!b.empty()) check_dims(w.rows(), b.size(), "affine bias");
  Vector y(w.rows());
  for (std::size_t r = 0; r < w.rows(); ++r) {
    auto row = w.row(r);
    double s = b.empty() ? 0.0 : b[r];
    for (std::size_t c = 0; c < x.size(); ++c) s += row[c] * x[c];
    y[r] = s;
  }
  return y;
}

Vector transpose_times(const Matrix &w, std::span<const double> g) {
  check_dims(w.rows(), g.size(), "transpose_times");
  Vector y(w.cols(), 0.0);
  for (std::size_t r = 0; r < w.rows(); ++r) {
    if (g[r] == 0.0) continue;
    auto row = w.row(r);
    for (std::size_t c = 0; c < y.size(); ++c) y[c] += row[c] * g[r];
  }
  return y;
}

void add_outer(Matrix &g, std::span<const double> u, std::span<const double> v,
               double scale) {
  check_dims(g.rows(), u.size(), "add_outer rows");
  check_dims(g.cols(), v.size(), "add_outer cols");
  for (std::size_t r = 0; r < u.size(); ++r) {
    double s = scale * u[r];
    if (s == 0.0) continue;
    auto row = g.row(r);
    for (std::size_t c = 0; c < v.size(); ++c) row[c] += s * v[c];
  }
}

void axpy(double scale, std::span<const double> x, std::span<double> y) {
  check_dims(x.size(), y.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += scale * x[i];
}

void project_unit_ball(std::span<double> v) {
  double norm = l2_norm(v);
  if (norm > 1.0) {
    for (double &x : v) x /= norm;
  }
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace kgsyn
