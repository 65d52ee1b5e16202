#pragma once

#include <functional>
#include <vector>

#include "twistlab/seqcore.hpp"

namespace twistlab {

// Quadrature defaults: circle of radius 1/4 about the base point, 256
// nodes, and a node-doubling self check at relative tolerance 1e-9.
inline constexpr double kQuadratureRadius = 0.25;
inline constexpr int kQuadratureNodes = 256;
inline constexpr double kQuadratureTol = 1e-9;

// The base point of every expansion in this project.
inline constexpr Complex kBasePoint{0.5, 0.0};

// A point of the open strip 0 < Re z < 1.
struct StripPoint {
  Complex value;
  explicit StripPoint(Complex v) : value(v) {
    if (!(v.real() > 0.0 && v.real() < 1.0)) {
      throw std::invalid_argument("StripPoint: real part must lie in (0, 1)");
    }
  }
};

// Conformal equivalence of the strip onto the unit disk vanishing at 1/2:
//   phi(z) = -i (e^{i pi z} - i) / (e^{i pi z} + i)  =  tan(pi (z - 1/2) / 2).
// The exponential takes the strip onto the upper half-plane and the Cayley
// factor takes that onto the disk; the -i normalization makes
// phi'(1/2) = pi/2 real and positive, which pins the map uniquely.
Complex strip_to_disk(const StripPoint& z);
Complex strip_to_disk_derivative(const StripPoint& z);

// Polynomial in phi: z -> sum_i coeffs[i] * phi(z)^i, together with the
// coefficient-sum bound sum_i |a_i| (a sup-norm bound on the strip since
// |phi| < 1).
struct PhiPolynomial {
  std::vector<Complex> coeffs;
  double bound_constant = 0.0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Complex eval_at_disk(Complex w) const;  // Horner in w
  Complex eval(Complex z) const;          // at w = phi(z)
};

PhiPolynomial make_phi_polynomial(std::vector<Complex> coeffs);

// Taylor coefficients of a vector-valued analytic function at the base
// point, highest index last (coeffs[i] is the order-i coefficient).
struct TaylorList {
  Complex base_point{0.5, 0.0};
  std::vector<FiniteVector> coeffs;
  int order() const { return static_cast<int>(coeffs.size()); }
};

// Taylor coefficients of phi at 1/2 for orders 0..max_order, via Cauchy
// quadrature with a node-doubling check, cross-checked against the exact
// low-order values (0, pi/2, 0).
std::vector<Complex> phi_taylor(int max_order);

// Trapezoid rule on the circle |z - 1/2| = radius: spectrally accurate for
// analytic integrands. Computes orders 0..max_order; fails with
// NumericalError if the nodes vs 2*nodes results disagree beyond tol.
std::vector<Complex> cauchy_taylor_scalar(
    const std::function<Complex(Complex)>& f, int max_order,
    double radius = kQuadratureRadius, int nodes = kQuadratureNodes,
    double tol = kQuadratureTol);

TaylorList cauchy_taylor(const std::function<FiniteVector(Complex)>& f,
                         int dim, int max_order,
                         double radius = kQuadratureRadius,
                         int nodes = kQuadratureNodes,
                         double tol = kQuadratureTol);

// Coefficients (a_0..a_degree) with taylor(sum_i a_i phi^i)[j] = delta_{j,
// target_order} for 0 <= j <= degree. Solved from the lower-triangular
// system whose columns are self-convolution powers of phi's expansion;
// a_i = 0 for i < target_order is enforced structurally.
PhiPolynomial phi_delta_poly(int target_order, int degree);

// Homogeneous extremal for x: F_x(z) = x ∘ (|x|/||x||_2)^(2z-1) on the
// support, 0 off it. Defined on the closed strip; F_x(1/2) = x exactly,
// and on the two boundary lines the pointwise modulus is flat:
// ||F_x(it)||_inf = ||F_x(1+it)||_1 = ||x||_2.
FiniteVector extremal_eval(const FiniteVector& x, Complex z);

// Finite sum of terms P(phi(z)) * F_v(z); the closed-form evaluator behind
// every derivation map here. The zero function is the empty sum.
class StripFunction {
 public:
  explicit StripFunction(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("StripFunction: dim must be >= 1");
  }

  int dim() const { return dim_; }
  bool empty() const { return terms_.empty(); }
  void add_term(PhiPolynomial poly, FiniteVector vec);
  FiniteVector eval(Complex z) const;

  std::function<FiniteVector(Complex)> evaluator() const {
    return [*this](Complex z) { return eval(z); };
  }

 private:
  struct Term {
    PhiPolynomial poly;
    FiniteVector vec;
  };
  int dim_;
  std::vector<Term> terms_;
};

// Builds G with taylor(G)[m] = blocks_desc[k-1-m] for 0 <= m < k, where
// blocks_desc lists Taylor coefficients in decreasing order. Corrections
// use phi_delta_poly(m, top_order) so that every Taylor order up to
// top_order stays Leibniz-clean; callers that will read orders beyond k-1
// (the derivation maps) must pass the highest order they extract.
// 1-homogeneous in the blocks; zero blocks are skipped.
StripFunction select_function(const std::vector<FiniteVector>& blocks_desc,
                              int top_order = -1);

}  // namespace twistlab
