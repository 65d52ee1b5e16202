#include "twistlab/derivations.hpp"

#include <cmath>

namespace twistlab {

DerivedElement::DerivedElement(std::vector<FiniteVector> blocks_desc)
    : blocks_(std::move(blocks_desc)) {
  if (blocks_.empty()) {
    throw std::invalid_argument("DerivedElement: arity must be >= 1");
  }
  const int d = blocks_.front().dim();
  for (const FiniteVector& b : blocks_) {
    if (b.dim() != d) {
      throw std::invalid_argument("DerivedElement: blocks must share a dimension");
    }
  }
}

DerivedElement DerivedElement::zeros(int arity, int dim) {
  if (arity < 1) throw std::invalid_argument("DerivedElement: arity must be >= 1");
  return DerivedElement(
      std::vector<FiniteVector>(static_cast<std::size_t>(arity),
                                FiniteVector::zeros(dim)));
}

bool is_zero(const DerivedElement& e) {
  for (const FiniteVector& b : e.blocks()) {
    if (!is_zero(b)) return false;
  }
  return true;
}

namespace {

template <class Op>
DerivedElement zip(const DerivedElement& a, const DerivedElement& b, Op op) {
  if (a.arity() != b.arity() || a.dim() != b.dim()) {
    throw std::invalid_argument("DerivedElement: shape mismatch");
  }
  std::vector<FiniteVector> out;
  out.reserve(static_cast<std::size_t>(a.arity()));
  for (int i = 0; i < a.arity(); ++i) out.push_back(op(a.block(i), b.block(i)));
  return DerivedElement(std::move(out));
}

}  // namespace

DerivedElement operator+(const DerivedElement& a, const DerivedElement& b) {
  return zip(a, b, [](const FiniteVector& x, const FiniteVector& y) { return x + y; });
}

DerivedElement operator-(const DerivedElement& a, const DerivedElement& b) {
  return zip(a, b, [](const FiniteVector& x, const FiniteVector& y) { return x - y; });
}

DerivedElement operator*(Complex scale, const DerivedElement& e) {
  std::vector<FiniteVector> out;
  out.reserve(static_cast<std::size_t>(e.arity()));
  for (int i = 0; i < e.arity(); ++i) out.push_back(scale * e.block(i));
  return DerivedElement(std::move(out));
}

DerivedElement operator*(double scale, const DerivedElement& e) {
  return Complex(scale, 0.0) * e;
}

Multiplier make_multiplier(std::vector<Complex> entries) {
  if (entries.empty()) {
    throw std::invalid_argument("Multiplier: needs at least one entry");
  }
  Multiplier a;
  a.entries = std::move(entries);
  for (const Complex& c : a.entries) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("Multiplier: entries must be finite");
    }
    a.sup_norm = std::max(a.sup_norm, std::abs(c));
  }
  return a;
}

FiniteVector multiply(const Multiplier& a, const FiniteVector& x) {
  if (static_cast<int>(a.entries.size()) != x.dim()) {
    throw std::invalid_argument("multiply: dimension mismatch");
  }
  std::vector<Complex> out(x.entries());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= a.entries[j];
  return FiniteVector(std::move(out));
}

DerivedElement omega_1n(const FiniteVector& x, int n) {
  if (n < 1) throw std::invalid_argument("omega_1n: n must be >= 1");
  std::vector<FiniteVector> blocks;
  blocks.reserve(static_cast<std::size_t>(n));
  for (int j = n; j >= 1; --j) blocks.push_back(taylor_weight(x, j));
  return DerivedElement(std::move(blocks));
}

std::pair<FiniteVector, FiniteVector> omega_22(const FiniteVector& y,
                                               const FiniteVector& x) {
  if (y.dim() != x.dim()) throw std::invalid_argument("omega_22: dimension mismatch");
  const FiniteVector w = y - taylor_weight(x, 1);
  return {taylor_weight(w, 2) + taylor_weight(x, 3),
          taylor_weight(w, 1) + taylor_weight(x, 2)};
}

DerivedElement omega_kn(const DerivedElement& block, int n) {
  if (n < 1) throw std::invalid_argument("omega_kn: n must be >= 1");
  const int k = block.arity();
  if (is_zero(block)) return DerivedElement::zeros(n, block.dim());

  const int top = n + k - 1;
  const StripFunction g = select_function(block.blocks(), top);
  const TaylorList taylor = cauchy_taylor(g.evaluator(), block.dim(), top);

  std::vector<FiniteVector> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = top; i >= k; --i) {
    out.push_back(taylor.coeffs[static_cast<std::size_t>(i)]);
  }
  return DerivedElement(std::move(out));
}

double centralizer_defect(const FiniteVector& x, const Multiplier& a) {
  const FiniteVector ax = multiply(a, x);
  const FiniteVector lhs = taylor_weight(ax, 1);
  const FiniteVector rhs = multiply(a, taylor_weight(x, 1));
  return l2_norm(lhs - rhs);
}

}  // namespace twistlab
