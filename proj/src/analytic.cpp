#include "twistlab/analytic.hpp"

#include <cmath>

namespace twistlab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

Complex phi_raw(Complex z) {
  const Complex w = std::exp(Complex(0.0, kPi) * z);
  return Complex(0.0, -1.0) * (w - Complex(0.0, 1.0)) / (w + Complex(0.0, 1.0));
}

Complex phi_prime_raw(Complex z) {
  const Complex w = std::exp(Complex(0.0, kPi) * z);
  const Complex den = w + Complex(0.0, 1.0);
  return Complex(0.0, 2.0 * kPi) * w / (den * den);
}

}  // namespace

Complex strip_to_disk(const StripPoint& z) { return phi_raw(z.value); }

Complex strip_to_disk_derivative(const StripPoint& z) {
  return phi_prime_raw(z.value);
}

Complex PhiPolynomial::eval_at_disk(Complex w) const {
  Complex acc(0.0, 0.0);
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * w + coeffs[i];
  return acc;
}

Complex PhiPolynomial::eval(Complex z) const {
  return eval_at_disk(phi_raw(z));
}

PhiPolynomial make_phi_polynomial(std::vector<Complex> coeffs) {
  if (coeffs.empty()) {
    throw std::invalid_argument("PhiPolynomial: needs at least one coefficient");
  }
  PhiPolynomial p;
  p.coeffs = std::move(coeffs);
  for (const Complex& a : p.coeffs) p.bound_constant += std::abs(a);
  return p;
}

namespace {

// Core quadrature: evaluates f on 2*nodes equispaced points of the circle
// and forms both the nodes-point and 2*nodes-point trapezoid sums; their
// disagreement is the convergence check. Since the coarse grid is every
// other fine node, f is evaluated once per point.
std::vector<std::vector<Complex>> cauchy_core(
    const std::function<void(Complex, std::vector<Complex>&)>& eval, int dim,
    int max_order, double radius, int nodes, double tol, const char* who) {
  if (max_order < 0) throw std::invalid_argument("cauchy_taylor: order must be >= 0");
  if (!(radius > 0.0 && radius < 0.5)) {
    throw std::invalid_argument(
        "cauchy_taylor: radius must lie in (0, 1/2) so the circle stays in the strip");
  }
  if (nodes < 4 * std::max(1, max_order)) {
    throw std::invalid_argument("cauchy_taylor: need at least 4*order nodes");
  }

  const int fine = 2 * nodes;
  std::vector<std::vector<Complex>> values(
      static_cast<std::size_t>(fine),
      std::vector<Complex>(static_cast<std::size_t>(dim)));
  std::vector<Complex> omega(static_cast<std::size_t>(fine));
  for (int k = 0; k < fine; ++k) {
    const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(fine);
    omega[static_cast<std::size_t>(k)] = Complex(std::cos(t), std::sin(t));
    eval(kBasePoint + radius * omega[static_cast<std::size_t>(k)],
         values[static_cast<std::size_t>(k)]);
  }

  std::vector<std::vector<Complex>> coarse(
      static_cast<std::size_t>(max_order + 1),
      std::vector<Complex>(static_cast<std::size_t>(dim)));
  std::vector<std::vector<Complex>> result = coarse;

  double rinv = 1.0;  // radius^{-i}
  for (int i = 0; i <= max_order; ++i) {
    std::vector<Complex>& ci = coarse[static_cast<std::size_t>(i)];
    std::vector<Complex>& fi = result[static_cast<std::size_t>(i)];
    for (int k = 0; k < fine; ++k) {
      // omega_k^{-i}
      const double t = -2.0 * kPi * static_cast<double>(k) *
                       static_cast<double>(i) / static_cast<double>(fine);
      const Complex wk(std::cos(t), std::sin(t));
      const std::vector<Complex>& fv = values[static_cast<std::size_t>(k)];
      for (int j = 0; j < dim; ++j) {
        const Complex contrib = fv[static_cast<std::size_t>(j)] * wk;
        fi[static_cast<std::size_t>(j)] += contrib;
        if (k % 2 == 0) ci[static_cast<std::size_t>(j)] += contrib;
      }
    }
    for (int j = 0; j < dim; ++j) {
      ci[static_cast<std::size_t>(j)] *= rinv / static_cast<double>(nodes);
      fi[static_cast<std::size_t>(j)] *= rinv / static_cast<double>(fine);
    }
    rinv /= radius;
  }

  double scale = 0.0;
  for (const auto& row : result) {
    for (const Complex& c : row) scale = std::max(scale, std::abs(c));
  }
  double dev = 0.0;
  for (int i = 0; i <= max_order; ++i) {
    for (int j = 0; j < dim; ++j) {
      dev = std::max(dev, std::abs(result[static_cast<std::size_t>(i)]
                                         [static_cast<std::size_t>(j)] -
                                   coarse[static_cast<std::size_t>(i)]
                                         [static_cast<std::size_t>(j)]));
    }
  }
  if (dev > tol * std::max(1.0, scale)) {
    throw NumericalError(std::string(who) +
                         ": quadrature did not converge under node doubling");
  }
  return result;
}

}  // namespace

std::vector<Complex> cauchy_taylor_scalar(
    const std::function<Complex(Complex)>& f, int max_order, double radius,
    int nodes, double tol) {
  auto eval = [&f](Complex z, std::vector<Complex>& out) { out[0] = f(z); };
  const auto rows =
      cauchy_core(eval, 1, max_order, radius, nodes, tol, "cauchy_taylor_scalar");
  std::vector<Complex> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i][0];
  return out;
}

TaylorList cauchy_taylor(const std::function<FiniteVector(Complex)>& f, int dim,
                         int max_order, double radius, int nodes, double tol) {
  auto eval = [&f, dim](Complex z, std::vector<Complex>& out) {
    const FiniteVector v = f(z);
    if (v.dim() != dim) {
      throw std::invalid_argument("cauchy_taylor: handle dimension mismatch");
    }
    out = v.entries();
  };
  const auto rows =
      cauchy_core(eval, dim, max_order, radius, nodes, tol, "cauchy_taylor");
  TaylorList list;
  list.base_point = kBasePoint;
  list.coeffs.reserve(rows.size());
  for (const auto& row : rows) list.coeffs.emplace_back(row);
  return list;
}

std::vector<Complex> phi_taylor(int max_order) {
  if (max_order < 1) throw std::invalid_argument("phi_taylor: order must be >= 1");
  auto f = [](Complex z) { return phi_raw(z); };
  // 128-node base grid; cauchy_core doubles it internally for the check.
  const int nodes = std::max(128, 4 * max_order);
  std::vector<Complex> coeffs =
      cauchy_taylor_scalar(f, max_order, kQuadratureRadius, nodes, kQuadratureTol);

  // Exact low orders: phi(1/2) = 0, phi'(1/2) = pi/2, phi''(1/2) = 0.
  const Complex expected[3] = {Complex(0.0, 0.0), Complex(kPi / 2.0, 0.0),
                               Complex(0.0, 0.0)};
  for (int i = 0; i <= std::min(max_order, 2); ++i) {
    if (std::abs(coeffs[static_cast<std::size_t>(i)] - expected[i]) > 1e-9) {
      throw NumericalError("phi_taylor: low-order coefficients disagree with the closed form");
    }
  }
  return coeffs;
}

PhiPolynomial phi_delta_poly(int target_order, int degree) {
  if (target_order < 0 || degree < target_order) {
    throw std::invalid_argument("phi_delta_poly: need 0 <= target_order <= degree");
  }
  if (target_order == 0) {
    std::vector<Complex> c(static_cast<std::size_t>(degree) + 1);
    c[0] = Complex(1.0, 0.0);
    return make_phi_polynomial(std::move(c));
  }

  const std::vector<Complex> phi = phi_taylor(degree);

  // taylor[i][r]: order-r Taylor coefficient of phi^i, by discrete
  // self-convolution of the validated expansion (exact algebra on top of
  // already-checked coefficients).
  const std::size_t n = static_cast<std::size_t>(degree) + 1;
  std::vector<std::vector<Complex>> powers(n, std::vector<Complex>(n));
  powers[0][0] = Complex(1.0, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t r = 0; r < n; ++r) {
      Complex s(0.0, 0.0);
      for (std::size_t q = 0; q <= r; ++q) {
        s += powers[i - 1][q] * phi[r - q];
      }
      powers[i][r] = s;
    }
  }

  // Lower-triangular system: row r reads sum_i a_i * taylor(phi^i)[r] =
  // delta_{r, target_order}. phi has a simple zero, so taylor(phi^i)[i] =
  // (pi/2)^i != 0 on the diagonal; forward substitution never pivots.
  std::vector<Complex> a(n);
  for (std::size_t r = 0; r < n; ++r) {
    Complex rhs =
        (static_cast<int>(r) == target_order) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
    for (std::size_t i = 0; i < r; ++i) rhs -= a[i] * powers[i][r];
    const Complex diag = powers[r][r];
    if (std::abs(diag) < 1e-12) {
      throw NumericalError("phi_delta_poly: singular triangular system");
    }
    a[r] = rhs / diag;
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(target_order); ++i) {
    a[i] = Complex(0.0, 0.0);
  }
  return make_phi_polynomial(std::move(a));
}

FiniteVector extremal_eval(const FiniteVector& x, Complex z) {
  if (!(z.real() >= 0.0 && z.real() <= 1.0) || !std::isfinite(z.imag())) {
    throw std::invalid_argument("extremal_eval: point outside the closed strip");
  }
  if (is_zero(x)) {
    throw std::invalid_argument("extremal_eval: undefined for the zero vector");
  }
  const LogWeight w = log_ratio(x);
  const Complex s = 2.0 * z - Complex(1.0, 0.0);
  const int d = x.dim();
  std::vector<Complex> out(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    if (!w.support[static_cast<std::size_t>(j)]) continue;
    out[static_cast<std::size_t>(j)] =
        x[j] * std::exp(s * w.entries[static_cast<std::size_t>(j)]);
  }
  return FiniteVector(std::move(out));
}

void StripFunction::add_term(PhiPolynomial poly, FiniteVector vec) {
  if (vec.dim() != dim_) {
    throw std::invalid_argument("StripFunction: term dimension mismatch");
  }
  if (is_zero(vec)) return;
  terms_.push_back(Term{std::move(poly), std::move(vec)});
}

FiniteVector StripFunction::eval(Complex z) const {
  std::vector<Complex> out(static_cast<std::size_t>(dim_));
  for (const Term& t : terms_) {
    const Complex p = t.poly.eval(z);
    const FiniteVector fv = extremal_eval(t.vec, z);
    for (int j = 0; j < dim_; ++j) out[static_cast<std::size_t>(j)] += p * fv[j];
  }
  return FiniteVector(std::move(out));
}

StripFunction select_function(const std::vector<FiniteVector>& blocks_desc,
                              int top_order) {
  if (blocks_desc.empty()) {
    throw std::invalid_argument("select_function: empty block list");
  }
  const int k = static_cast<int>(blocks_desc.size());
  const int dim = blocks_desc.front().dim();
  for (const FiniteVector& b : blocks_desc) {
    if (b.dim() != dim) {
      throw std::invalid_argument("select_function: blocks must share a dimension");
    }
  }
  if (top_order < k - 1) top_order = k - 1;

  StripFunction g(dim);
  for (int m = 0; m < k; ++m) {
    const FiniteVector& target = blocks_desc[static_cast<std::size_t>(k - 1 - m)];
    FiniteVector residual = target;
    if (!g.empty()) {
      const TaylorList partial = cauchy_taylor(g.evaluator(), dim, m);
      residual = target - partial.coeffs[static_cast<std::size_t>(m)];
    }
    if (is_zero(residual)) continue;  // already matched at this order
    g.add_term(phi_delta_poly(m, top_order), std::move(residual));
  }
  return g;
}

}  // namespace twistlab
