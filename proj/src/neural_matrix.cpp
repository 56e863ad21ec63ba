#include "ellink/neural/matrix.hpp"

namespace ellink::neural {

// i-k-j loop order keeps the inner accumulation streaming over rows of b.

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows, b.cols);
  matmul_acc(out, a, b);
  return out;
}

void matmul_acc(Matrix& out, const Matrix& a, const Matrix& b) {
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = a.row(i);
    double* orow = out.row(i);
    for (int k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.row(k);
      for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
    }
  }
}

void matmul_at_b_acc(Matrix& out, const Matrix& a, const Matrix& b) {
  for (int m = 0; m < a.rows; ++m) {
    const double* arow = a.row(m);
    const double* brow = b.row(m);
    for (int k = 0; k < a.cols; ++k) {
      const double amk = arow[k];
      if (amk == 0.0) continue;
      double* orow = out.row(k);
      for (int j = 0; j < b.cols; ++j) orow[j] += amk * brow[j];
    }
  }
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows, b.rows);
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = a.row(i);
    double* orow = out.row(i);
    for (int j = 0; j < b.rows; ++j) {
      const double* brow = b.row(j);
      double acc = 0.0;
      for (int k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
      orow[j] = acc;
    }
  }
  return out;
}

void add_row_bias(Matrix& m, const Matrix& bias) {
  for (int i = 0; i < m.rows; ++i) {
    double* row = m.row(i);
    const double* b = bias.row(0);
    for (int j = 0; j < m.cols; ++j) row[j] += b[j];
  }
}

}  // namespace ellink::neural
