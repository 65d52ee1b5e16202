#pragma once

#include <cstddef>
#include <vector>

#include "twistlab/seqcore.hpp"

namespace twistlab {

// Minimal dense helpers for the small sections this project works on
// (block maps on a few hundred coordinates, probe Gram matrices).

struct RealMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // row-major

  RealMatrix() = default;
  RealMatrix(int r, int c)
      : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  double& operator()(int r, int c) {
    return a[static_cast<std::size_t>(r) * cols + c];
  }
  double operator()(int r, int c) const {
    return a[static_cast<std::size_t>(r) * cols + c];
  }
};

struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Complex> a;  // row-major

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c)
      : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
  Complex& operator()(int r, int c) {
    return a[static_cast<std::size_t>(r) * cols + c];
  }
  const Complex& operator()(int r, int c) const {
    return a[static_cast<std::size_t>(r) * cols + c];
  }
};

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);

// Rank via Gaussian elimination with partial pivoting. On the 0/1 block
// matrices used for the exactness checks every elimination step is exact,
// so the returned rank is an exact integer.
int rank(RealMatrix m, double tol = 1e-9);

// Orthonormal-free null space basis from the reduced row echelon form;
// columns of the result span the kernel.
RealMatrix null_space(RealMatrix m, double tol = 1e-9);

// [a | b] column concatenation (same row count).
RealMatrix hcat(const RealMatrix& a, const RealMatrix& b);

ComplexMatrix cmatmul(const ComplexMatrix& a, const ComplexMatrix& b);
FiniteVector apply(const ComplexMatrix& m, const FiniteVector& x);

// Solves A X = B for Hermitian positive definite A via Cholesky.
// B and the result are (A.rows x nrhs) matrices.
ComplexMatrix hermitian_solve(ComplexMatrix a, const ComplexMatrix& b);

// Null space of a complex matrix (columns span the kernel).
ComplexMatrix complex_null_space(ComplexMatrix m, double tol = 1e-12);

}  // namespace twistlab
