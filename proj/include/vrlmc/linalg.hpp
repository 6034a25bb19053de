// Copyright 2026 The vrlmc Authors
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

// Small dense helpers. Parameter dimensions here are tens, not thousands.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vrlmc {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

bool all_finite(std::span<const double> a);

/// Row-major square matrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * n, fill) {}

  static SquareMatrix identity(std::size_t n);
  static SquareMatrix diagonal(std::span<const double> diag);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * n_ + c];
  }
  std::span<const double> data() const { return data_; }

  SquareMatrix operator*(const SquareMatrix& rhs) const;
  double trace() const;
  SquareMatrix transposed() const;
  /// Replaces the matrix by (A + A^T) / 2.
  void symmetrize();

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct SymmetricEigen {
  Vector values;          ///< Ascending.
  SquareMatrix vectors;   ///< Column k is the eigenvector for values[k].
  int sweeps = 0;
};

/// Cyclic Jacobi rotations; stops once the off-diagonal Frobenius norm drops
/// below `tolerance` times the matrix Frobenius norm. Symmetric input only.
SymmetricEigen jacobi_eigen(const SquareMatrix& a, double tolerance = 1e-12,
                            int max_sweeps = 100);

/// Principal square root of a symmetric PSD matrix. Eigenvalues in
/// [-negative_tolerance, 0) are clamped to zero; anything more negative
/// throws NumericalError.
SquareMatrix sqrt_psd(const SquareMatrix& a, double negative_tolerance = 1e-10);

}  // namespace vrlmc
