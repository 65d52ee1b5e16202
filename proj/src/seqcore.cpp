#include "twistlab/seqcore.hpp"

#include <cmath>
#include <limits>

namespace twistlab {

namespace {

void check_entries(const std::vector<Complex>& entries) {
  if (entries.empty()) {
    throw std::invalid_argument("FiniteVector: dimension must be >= 1");
  }
  for (const Complex& c : entries) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("FiniteVector: entries must be finite");
    }
  }
}

void check_same_dim(const FiniteVector& a, const FiniteVector& b,
                    const char* who) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }
}

}  // namespace

FiniteVector::FiniteVector(std::vector<Complex> entries)
    : entries_(std::move(entries)) {
  check_entries(entries_);
}

FiniteVector FiniteVector::zeros(int dim) {
  if (dim < 1) throw std::invalid_argument("FiniteVector: dimension must be >= 1");
  return FiniteVector(std::vector<Complex>(static_cast<std::size_t>(dim)));
}

FiniteVector FiniteVector::ones(int dim) {
  if (dim < 1) throw std::invalid_argument("FiniteVector: dimension must be >= 1");
  return FiniteVector(
      std::vector<Complex>(static_cast<std::size_t>(dim), Complex(1.0, 0.0)));
}

FiniteVector FiniteVector::unit(int dim, int index) {
  if (dim < 1) throw std::invalid_argument("FiniteVector: dimension must be >= 1");
  if (index < 0 || index >= dim) {
    throw std::invalid_argument("FiniteVector::unit: index out of range");
  }
  std::vector<Complex> e(static_cast<std::size_t>(dim));
  e[static_cast<std::size_t>(index)] = Complex(1.0, 0.0);
  return FiniteVector(std::move(e));
}

bool is_zero(const FiniteVector& x) {
  for (const Complex& c : x.entries()) {
    if (c.real() != 0.0 || c.imag() != 0.0) return false;
  }
  return true;
}

double max_abs(const FiniteVector& x) {
  double m = 0.0;
  for (const Complex& c : x.entries()) m = std::max(m, std::abs(c));
  return m;
}

FiniteVector operator+(const FiniteVector& a, const FiniteVector& b) {
  check_same_dim(a, b, "operator+");
  std::vector<Complex> out(a.entries());
  for (int j = 0; j < b.dim(); ++j) out[static_cast<std::size_t>(j)] += b[j];
  return FiniteVector(std::move(out));
}

FiniteVector operator-(const FiniteVector& a, const FiniteVector& b) {
  check_same_dim(a, b, "operator-");
  std::vector<Complex> out(a.entries());
  for (int j = 0; j < b.dim(); ++j) out[static_cast<std::size_t>(j)] -= b[j];
  return FiniteVector(std::move(out));
}

FiniteVector operator*(Complex scale, const FiniteVector& x) {
  std::vector<Complex> out(x.entries());
  for (Complex& c : out) c *= scale;
  return FiniteVector(std::move(out));
}

FiniteVector operator*(double scale, const FiniteVector& x) {
  std::vector<Complex> out(x.entries());
  for (Complex& c : out) c *= scale;
  return FiniteVector(std::move(out));
}

FiniteVector hadamard(const FiniteVector& a, const FiniteVector& b) {
  check_same_dim(a, b, "hadamard");
  std::vector<Complex> out(a.entries());
  for (int j = 0; j < b.dim(); ++j) out[static_cast<std::size_t>(j)] *= b[j];
  return FiniteVector(std::move(out));
}

double lp_norm(const FiniteVector& x, double p) {
  if (std::isnan(p) || p < 1.0) {
    throw std::invalid_argument("lp_norm: p must lie in [1, infinity]");
  }
  const std::size_t d = x.entries().size();
  double m = 0.0;
  for (const Complex& c : x.entries()) m = std::max(m, std::abs(c));
  if (m == 0.0) return 0.0;
  if (std::isinf(p)) return m;
  const std::vector<Complex>& e = x.entries();
  if (p == 2.0) {
    const double s = detail::pairwise_accumulate(0, d, [&](std::size_t j) {
      const double r = std::abs(e[j]) / m;
      return r * r;
    });
    return m * std::sqrt(s);
  }
  const double s = detail::pairwise_accumulate(0, d, [&](std::size_t j) {
    return std::pow(std::abs(e[j]) / m, p);
  });
  return m * std::pow(s, 1.0 / p);
}

double l2_norm(const FiniteVector& x) { return lp_norm(x, 2.0); }

PolarParts polar(const FiniteVector& x) {
  const int d = x.dim();
  std::vector<Complex> u(static_cast<std::size_t>(d));
  std::vector<Complex> r(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const double mod = std::abs(x[j]);
    r[static_cast<std::size_t>(j)] = Complex(mod, 0.0);
    // Dividing the components by the real modulus keeps real inputs exact:
    // x_j/|x_j| is then +-1 with no complex-division rounding.
    u[static_cast<std::size_t>(j)] =
        (mod == 0.0) ? Complex(1.0, 0.0) : x[j] / mod;
  }
  return PolarParts{FiniteVector(std::move(u)), FiniteVector(std::move(r))};
}

LogWeight log_ratio(const FiniteVector& x) {
  if (is_zero(x)) {
    throw std::invalid_argument("log_ratio: undefined for the zero vector");
  }
  const double norm = l2_norm(x);
  const int d = x.dim();
  LogWeight w;
  w.entries.assign(static_cast<std::size_t>(d), 0.0);
  w.support.assign(static_cast<std::size_t>(d), 0);
  for (int j = 0; j < d; ++j) {
    const double mod = std::abs(x[j]);
    if (mod != 0.0) {
      w.entries[static_cast<std::size_t>(j)] = std::log(mod / norm);
      w.support[static_cast<std::size_t>(j)] = 1;
    }
  }
  return w;
}

FiniteVector taylor_weight(const FiniteVector& x, int order) {
  if (order < 0) throw std::invalid_argument("taylor_weight: order must be >= 0");
  if (order == 0) return x;
  if (is_zero(x)) return FiniteVector::zeros(x.dim());

  const LogWeight w = log_ratio(x);
  double factorial = 1.0;
  for (int i = 2; i <= order; ++i) factorial *= static_cast<double>(i);
  const double coeff = std::ldexp(1.0, order) / factorial;

  const int d = x.dim();
  std::vector<Complex> out(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    if (!w.support[static_cast<std::size_t>(j)]) continue;
    double lpow = 1.0;
    for (int i = 0; i < order; ++i) lpow *= w.entries[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(j)] = coeff * lpow * x[j];
  }
  return FiniteVector(std::move(out));
}

}  // namespace twistlab
