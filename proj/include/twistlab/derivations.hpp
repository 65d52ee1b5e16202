#pragma once

#include <utility>
#include <vector>

#include "twistlab/analytic.hpp"
#include "twistlab/seqcore.hpp"

namespace twistlab {

// Ordered list of n blocks (x_{n-1}, ..., x_0) of one common dimension,
// Taylor order decreasing left to right. block(0) is the highest-order
// block; from_bottom(0) is x_0.
class DerivedElement {
 public:
  explicit DerivedElement(std::vector<FiniteVector> blocks_desc);

  static DerivedElement zeros(int arity, int dim);

  int arity() const { return static_cast<int>(blocks_.size()); }
  int dim() const { return blocks_.front().dim(); }
  const FiniteVector& block(int i) const {
    return blocks_.at(static_cast<std::size_t>(i));
  }
  const FiniteVector& from_bottom(int j) const {
    return blocks_.at(blocks_.size() - 1 - static_cast<std::size_t>(j));
  }
  const std::vector<FiniteVector>& blocks() const { return blocks_; }

 private:
  std::vector<FiniteVector> blocks_;
};

bool is_zero(const DerivedElement& e);
DerivedElement operator+(const DerivedElement& a, const DerivedElement& b);
DerivedElement operator-(const DerivedElement& a, const DerivedElement& b);
DerivedElement operator*(Complex scale, const DerivedElement& e);
DerivedElement operator*(double scale, const DerivedElement& e);

// Bounded multiplier (an l_infinity sequence) with its cached sup norm.
struct Multiplier {
  std::vector<Complex> entries;
  double sup_norm = 0.0;
};
Multiplier make_multiplier(std::vector<Complex> entries);
FiniteVector multiply(const Multiplier& a, const FiniteVector& x);

// Omega_{1,n}: the n blocks (taylor_weight(x, n), ..., taylor_weight(x, 1)),
// i.e. the Taylor coefficients of the extremal F_x at orders n down to 1.
// Closed form; 1-homogeneous; the zero vector maps to zero.
DerivedElement omega_1n(const FiniteVector& x, int n);

// Omega_{2,2} closed formula. With w = y - Omega_{1,1}(x):
//   ( taylor_weight(w, 2) + taylor_weight(x, 3),
//     taylor_weight(w, 1) + taylor_weight(x, 2) ).
// Each log term normalizes by its own vector's l2 norm; zero vectors
// contribute zero.
std::pair<FiniteVector, FiniteVector> omega_22(const FiniteVector& y,
                                               const FiniteVector& x);

// Generic Omega_{k,n} by quadrature: selects G through the block list and
// reads the Taylor coefficients (G[n+k-1], ..., G[k]). The selection is
// Leibniz-clean through order n+k-1, so for k <= 2, n <= 2 this reproduces
// the closed formulas.
DerivedElement omega_kn(const DerivedElement& block, int n);

// || Omega(a∘x) - a∘Omega(x) ||_2 with Omega = omega_1n(., 1).
double centralizer_defect(const FiniteVector& x, const Multiplier& a);

}  // namespace twistlab
