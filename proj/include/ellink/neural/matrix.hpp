#pragma once

#include <cstddef>
#include <vector>

namespace ellink::neural {

// Dense row-major matrix of doubles. The whole trainer runs in double
// precision, which keeps finite-difference gradient checks tight.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
  double operator()(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const {
    return data.data() + static_cast<std::size_t>(r) * cols;
  }
  std::size_t size() const { return data.size(); }
  void zero() { std::fill(data.begin(), data.end(), 0.0); }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

// out = a * b, shapes (m×k)·(k×n).
Matrix matmul(const Matrix& a, const Matrix& b);

// out += a * b.
void matmul_acc(Matrix& out, const Matrix& a, const Matrix& b);

// out += aᵀ * b, shapes (m×k)ᵀ·(m×n) -> (k×n). Weight-gradient kernel.
void matmul_at_b_acc(Matrix& out, const Matrix& a, const Matrix& b);

// out = a * bᵀ, shapes (m×k)·(n×k)ᵀ -> (m×n).
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);

// Adds row vector `bias` (1×n) to every row of `m`.
void add_row_bias(Matrix& m, const Matrix& bias);

}  // namespace ellink::neural
