#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistlab {

using Complex = std::complex<double>;

// Thrown when an iterative or quadrature computation fails its own
// convergence check. The CLI maps it to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense complex coordinate vector of dimension >= 1 with finite entries.
// Immutable once constructed.
class FiniteVector {
 public:
  explicit FiniteVector(std::vector<Complex> entries);

  static FiniteVector zeros(int dim);
  static FiniteVector ones(int dim);
  static FiniteVector unit(int dim, int index);  // 0-based coordinate

  int dim() const { return static_cast<int>(entries_.size()); }
  const Complex& operator[](int i) const {
    return entries_[static_cast<std::size_t>(i)];
  }
  const std::vector<Complex>& entries() const { return entries_; }

 private:
  std::vector<Complex> entries_;
};

bool is_zero(const FiniteVector& x);
double max_abs(const FiniteVector& x);

FiniteVector operator+(const FiniteVector& a, const FiniteVector& b);
FiniteVector operator-(const FiniteVector& a, const FiniteVector& b);
FiniteVector operator*(Complex scale, const FiniteVector& x);
FiniteVector operator*(double scale, const FiniteVector& x);
FiniteVector hadamard(const FiniteVector& a, const FiniteVector& b);

// Natural-log weights ln(|x_j| / ||x||_2) with an explicit support mask.
// Off-support entries are exactly zero, so the 0*log(0) = 0 convention is
// structural rather than arithmetic.
struct LogWeight {
  std::vector<double> entries;
  std::vector<unsigned char> support;
  int dim() const { return static_cast<int>(entries.size()); }
};

// (sum_j |x_j|^p)^(1/p) for finite p, max_j |x_j| for p = infinity.
// Rejects p < 1. Scaled by the largest modulus so huge entries do not
// overflow the intermediate sum.
double lp_norm(const FiniteVector& x, double p);
double l2_norm(const FiniteVector& x);

struct PolarParts {
  FiniteVector unimodular;  // x_j/|x_j|, or 1 where x_j = 0
  FiniteVector modulus;     // |x_j|
};

// u ∘ modulus == x, bit-exact for real entries and within an ulp for
// complex ones (components are divided by the real modulus).
PolarParts polar(const FiniteVector& x);

// Rejects the zero vector: the normalization is undefined there.
LogWeight log_ratio(const FiniteVector& x);

// (2^j / j!) x ∘ L^j with L = log_ratio(x). The zero vector maps to zero
// (homogeneous extension); order 0 returns x itself.
FiniteVector taylor_weight(const FiniteVector& x, int order);

namespace detail {

// Pairwise (blocked) summation: deterministic, and keeps the relative
// error near machine precision even for dimensions in the tens of
// thousands, which the growth scans need.
template <class Term>
double pairwise_accumulate(std::size_t lo, std::size_t hi, const Term& term) {
  if (hi - lo <= 32) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_accumulate(lo, mid, term) +
         pairwise_accumulate(mid, hi, term);
}

}  // namespace detail

}  // namespace twistlab
