#include "twistlab/linalg.hpp"

#include <cmath>
#include <utility>

namespace twistlab {

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
  RealMatrix out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const double v = a(i, k);
      if (v == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) out(i, j) += v * b(k, j);
    }
  }
  return out;
}

namespace {

// Reduced row echelon form; returns pivot columns.
std::vector<int> rref(RealMatrix& m, double tol) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int best = -1;
    double best_val = tol;
    for (int r = row; r < m.rows; ++r) {
      const double v = std::fabs(m(r, col));
      if (v > best_val) {
        best_val = v;
        best = r;
      }
    }
    if (best < 0) continue;
    if (best != row) {
      for (int c = 0; c < m.cols; ++c) std::swap(m(best, c), m(row, c));
    }
    const double piv = m(row, col);
    for (int c = 0; c < m.cols; ++c) m(row, c) /= piv;
    for (int r = 0; r < m.rows; ++r) {
      if (r == row) continue;
      const double f = m(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < m.cols; ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int rank(RealMatrix m, double tol) {
  return static_cast<int>(rref(m, tol).size());
}

RealMatrix null_space(RealMatrix m, double tol) {
  const int cols = m.cols;
  const std::vector<int> pivots = rref(m, tol);
  std::vector<unsigned char> is_pivot(static_cast<std::size_t>(cols), 0);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = 1;

  std::vector<int> free_cols;
  for (int c = 0; c < cols; ++c) {
    if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);
  }

  RealMatrix basis(cols, static_cast<int>(free_cols.size()));
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    const int fc = free_cols[f];
    basis(fc, static_cast<int>(f)) = 1.0;
    for (std::size_t p = 0; p < pivots.size(); ++p) {
      basis(pivots[p], static_cast<int>(f)) = -m(static_cast<int>(p), fc);
    }
  }
  return basis;
}

RealMatrix hcat(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows != b.rows) throw std::invalid_argument("hcat: row mismatch");
  RealMatrix out(a.rows, a.cols + b.cols);
  for (int r = 0; r < a.rows; ++r) {
    for (int c = 0; c < a.cols; ++c) out(r, c) = a(r, c);
    for (int c = 0; c < b.cols; ++c) out(r, a.cols + c) = b(r, c);
  }
  return out;
}

ComplexMatrix cmatmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("cmatmul: shape mismatch");
  ComplexMatrix out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const Complex v = a(i, k);
      if (v == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < b.cols; ++j) out(i, j) += v * b(k, j);
    }
  }
  return out;
}

FiniteVector apply(const ComplexMatrix& m, const FiniteVector& x) {
  if (m.cols != x.dim()) throw std::invalid_argument("apply: shape mismatch");
  std::vector<Complex> out(static_cast<std::size_t>(m.rows));
  for (int i = 0; i < m.rows; ++i) {
    Complex s(0.0, 0.0);
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
    out[static_cast<std::size_t>(i)] = s;
  }
  return FiniteVector(std::move(out));
}

ComplexMatrix hermitian_solve(ComplexMatrix a, const ComplexMatrix& b) {
  if (a.rows != a.cols || a.rows != b.rows) {
    throw std::invalid_argument("hermitian_solve: shape mismatch");
  }
  const int n = a.rows;
  // In-place Cholesky A = L L^H.
  for (int j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(a(j, k));
    if (!(d > 0.0)) {
      throw NumericalError("hermitian_solve: matrix not positive definite");
    }
    const double ljj = std::sqrt(d);
    a(j, j) = Complex(ljj, 0.0);
    for (int i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (int k = 0; k < j; ++k) s -= a(i, k) * std::conj(a(j, k));
      a(i, j) = s / ljj;
    }
  }
  ComplexMatrix x = b;
  // Forward substitution L Y = B.
  for (int c = 0; c < x.cols; ++c) {
    for (int i = 0; i < n; ++i) {
      Complex s = x(i, c);
      for (int k = 0; k < i; ++k) s -= a(i, k) * x(k, c);
      x(i, c) = s / a(i, i).real();
    }
    // Back substitution L^H X = Y.
    for (int i = n - 1; i >= 0; --i) {
      Complex s = x(i, c);
      for (int k = i + 1; k < n; ++k) s -= std::conj(a(k, i)) * x(k, c);
      x(i, c) = s / a(i, i).real();
    }
  }
  return x;
}

ComplexMatrix complex_null_space(ComplexMatrix m, double tol) {
  const int cols = m.cols;
  double scale = 0.0;
  for (const Complex& v : m.a) scale = std::max(scale, std::abs(v));
  const double eps = tol * std::max(1.0, scale);

  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < cols && row < m.rows; ++col) {
    int best = -1;
    double best_val = eps;
    for (int r = row; r < m.rows; ++r) {
      const double v = std::abs(m(r, col));
      if (v > best_val) {
        best_val = v;
        best = r;
      }
    }
    if (best < 0) continue;
    if (best != row) {
      for (int c = 0; c < cols; ++c) std::swap(m(best, c), m(row, c));
    }
    const Complex piv = m(row, col);
    for (int c = 0; c < cols; ++c) m(row, c) /= piv;
    for (int r = 0; r < m.rows; ++r) {
      if (r == row) continue;
      const Complex f = m(r, col);
      if (f == Complex(0.0, 0.0)) continue;
      for (int c = 0; c < cols; ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }

  std::vector<unsigned char> is_pivot(static_cast<std::size_t>(cols), 0);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = 1;
  std::vector<int> free_cols;
  for (int c = 0; c < cols; ++c) {
    if (!is_pivot[static_cast<std::size_t>(c)]) free_cols.push_back(c);
  }

  ComplexMatrix basis(cols, static_cast<int>(free_cols.size()));
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    const int fc = free_cols[f];
    basis(fc, static_cast<int>(f)) = Complex(1.0, 0.0);
    for (std::size_t p = 0; p < pivots.size(); ++p) {
      basis(pivots[p], static_cast<int>(f)) = -m(static_cast<int>(p), fc);
    }
  }
  return basis;
}

}  // namespace twistlab
