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

#ifndef KGSYN_TENSOR_H_
#define KGSYN_TENSOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace kgsyn {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  void fill(double v);

  bool operator==(const Matrix &other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double l2_norm(std::span<const double> a);

// y = W x + b (b may be empty).
Vector affine(const Matrix &w, std::span<const double> x, std::span<const double> b);

// y = W^T g.
Vector transpose_times(const Matrix &w, std::span<const double> g);

// G += scale * u v^T.
void add_outer(Matrix &g, std::span<const double> u, std::span<const double> v,
               double scale = 1.0);

// y += scale * x.
void axpy(double scale, std::span<const double> x, std::span<double> y);

// Scales v onto the unit ball when its norm exceeds one.
void project_unit_ball(std::span<double> v);

bool all_finite(std::span<const double> v);

}  // namespace kgsyn

#endif  // KGSYN_TENSOR_H_
