#include "twistlab/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "twistlab/parallel.hpp"

namespace twistlab {

namespace {

double pairwise_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double s = detail::pairwise_accumulate(
      0, v.size(), [&](std::size_t i) { return v[i]; });
  return s / static_cast<double>(v.size());
}

}  // namespace

ConstantReport quasilinearity_constant(
    const std::vector<std::pair<FiniteVector, FiniteVector>>& pairs) {
  if (pairs.empty()) {
    throw std::invalid_argument("quasilinearity_constant: needs at least one pair");
  }
  ConstantReport rep;
  rep.sample_count = pairs.size();
  std::size_t best = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const FiniteVector& x = pairs[i].first;
    const FiniteVector& y = pairs[i].second;
    const double den = l2_norm(x) + l2_norm(y);
    if (den == 0.0) continue;
    const FiniteVector defect =
        taylor_weight(x + y, 1) - taylor_weight(x, 1) - taylor_weight(y, 1);
    const double ratio = l2_norm(defect) / den;
    if (ratio > rep.value) {
      rep.value = ratio;
      best = i;
    }
  }
  rep.witnesses = {pairs[best].first, pairs[best].second};
  return rep;
}

ConstantReport quasilinearity_scan(int pair_count, int dim, std::uint64_t seed) {
  if (pair_count < 1 || dim < 1) {
    throw std::invalid_argument("quasilinearity_scan: pair_count and dim must be >= 1");
  }
  const CounterRng rng_x(seed, 0x716c2d78ull);
  const CounterRng rng_y(seed, 0x716c2d79ull);
  std::vector<double> ratios(static_cast<std::size_t>(pair_count), 0.0);
  parallel_for(static_cast<std::size_t>(pair_count), [&](std::size_t i) {
    const FiniteVector x = gaussian_vector(dim, rng_x, i);
    const FiniteVector y = gaussian_vector(dim, rng_y, i);
    const double den = l2_norm(x) + l2_norm(y);
    if (den == 0.0) return;
    const FiniteVector defect =
        taylor_weight(x + y, 1) - taylor_weight(x, 1) - taylor_weight(y, 1);
    ratios[i] = l2_norm(defect) / den;
  });

  ConstantReport rep;
  rep.sample_count = static_cast<std::uint64_t>(pair_count);
  rep.seed = seed;
  std::size_t best = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (ratios[i] > rep.value) {
      rep.value = ratios[i];
      best = i;
    }
  }
  rep.witnesses = {gaussian_vector(dim, rng_x, best), gaussian_vector(dim, rng_y, best)};
  rep.diagnostics.emplace_back("mean_ratio", pairwise_mean(ratios));
  rep.diagnostics.emplace_back("witness_index", static_cast<double>(best));
  return rep;
}

ConstantReport centralizer_constant(const std::vector<Multiplier>& multipliers,
                                    const ProbeSet& probes) {
  if (multipliers.empty() || probes.vectors.empty()) {
    throw std::invalid_argument("centralizer_constant: empty inputs");
  }
  ConstantReport rep;
  rep.seed = probes.seed;
  std::size_t best_a = 0, best_x = 0;
  std::uint64_t evaluated = 0;
  for (std::size_t ai = 0; ai < multipliers.size(); ++ai) {
    const Multiplier& a = multipliers[ai];
    for (std::size_t xi = 0; xi < probes.vectors.size(); ++xi) {
      const FiniteVector& x = probes.vectors[xi];
      const double den = a.sup_norm * l2_norm(x);
      if (den == 0.0) continue;
      ++evaluated;
      const double ratio = centralizer_defect(x, a) / den;
      if (ratio > rep.value) {
        rep.value = ratio;
        best_a = ai;
        best_x = xi;
      }
    }
  }
  rep.sample_count = evaluated;
  rep.witnesses = {FiniteVector(multipliers[best_a].entries),
                   probes.vectors[best_x]};
  return rep;
}

ConstantReport centralizer_scan(int samples, int dim, std::uint64_t seed) {
  if (samples < 1 || dim < 1) {
    throw std::invalid_argument("centralizer_scan: samples and dim must be >= 1");
  }
  const CounterRng rng_x(seed, 0x63656e2d78ull);
  const CounterRng rng_a(seed, 0x63656e2d61ull);
  std::vector<double> ratios(static_cast<std::size_t>(samples), 0.0);
  std::vector<double> uni(static_cast<std::size_t>(samples), 0.0);

  auto make_mult = [&](std::size_t i) {
    switch (i % 3) {
      case 0:
        return sign_multiplier(dim, rng_a, i);
      case 1:
        return unimodular_multiplier(dim, rng_a, i);
      default:
        return indicator_multiplier(dim, rng_a, i);
    }
  };

  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
    FiniteVector x = gaussian_vector(dim, rng_x, i);
    const double norm = l2_norm(x);
    if (norm == 0.0) return;
    x = (1.0 / norm) * x;
    const Multiplier a = make_mult(i);
    const double defect = centralizer_defect(x, a) / a.sup_norm;
    ratios[i] = defect;
    if (i % 3 == 1) uni[i] = defect;
  });

  ConstantReport rep;
  rep.sample_count = static_cast<std::uint64_t>(samples);
  rep.seed = seed;
  std::size_t best = 0;
  double max_uni = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (ratios[i] > rep.value) {
      rep.value = ratios[i];
      best = i;
    }
    max_uni = std::max(max_uni, uni[i]);
  }
  const FiniteVector wx = gaussian_vector(dim, rng_x, best);
  rep.witnesses = {FiniteVector(make_mult(best).entries),
                   (1.0 / l2_norm(wx)) * wx};
  rep.diagnostics.emplace_back("max_unimodular_defect", max_uni);
  rep.diagnostics.emplace_back("witness_index", static_cast<double>(best));
  return rep;
}

namespace {

// Flattened sign-sum state for the cotype enumerations.
struct SignSum {
  int arity;
  int dim;
  std::vector<Complex> buffer;  // arity * dim, display order

  explicit SignSum(const std::vector<DerivedElement>& xs)
      : arity(xs.front().arity()), dim(xs.front().dim()),
        buffer(static_cast<std::size_t>(arity * dim)) {}

  void add(const DerivedElement& x, double sign) {
    std::size_t idx = 0;
    for (int b = 0; b < arity; ++b) {
      for (int j = 0; j < dim; ++j, ++idx) buffer[idx] += sign * x.block(b)[j];
    }
  }

  DerivedElement element() const {
    std::vector<FiniteVector> blocks;
    blocks.reserve(static_cast<std::size_t>(arity));
    for (int b = 0; b < arity; ++b) {
      blocks.emplace_back(std::vector<Complex>(
          buffer.begin() + static_cast<std::ptrdiff_t>(b) * dim,
          buffer.begin() + static_cast<std::ptrdiff_t>(b + 1) * dim));
    }
    return DerivedElement(std::move(blocks));
  }
};

}  // namespace

CotypeResult cotype2_constant(
    const std::function<double(const DerivedElement&)>& norm,
    const std::vector<DerivedElement>& vectors, const CotypeOptions& options) {
  if (vectors.empty()) {
    throw std::invalid_argument("cotype2_constant: needs at least one vector");
  }
  const int n = static_cast<int>(vectors.size());
  for (const DerivedElement& x : vectors) {
    if (x.arity() != vectors.front().arity() || x.dim() != vectors.front().dim()) {
      throw std::invalid_argument("cotype2_constant: vectors must share arity and dimension");
    }
  }

  double denom_sq = 0.0;
  for (const DerivedElement& x : vectors) {
    const double nx = norm(x);
    denom_sq += nx * nx;
  }
  if (denom_sq == 0.0) {
    throw std::invalid_argument("cotype2_constant: all vectors are zero");
  }

  std::vector<double> squares;
  CotypeResult result;

  if (options.exact) {
    if (n > 20) {
      throw std::invalid_argument("cotype2_constant: exact mode is capped at 20 vectors");
    }
    // Global sign flip is a symmetry, so the first sign stays +1 and the
    // remaining n-1 are enumerated in Gray-code order (one flip per step).
    const std::uint64_t patterns = 1ull << (n - 1);
    squares.reserve(patterns);
    SignSum sum(vectors);
    std::vector<double> signs(static_cast<std::size_t>(n), 1.0);
    for (const DerivedElement& x : vectors) sum.add(x, 1.0);
    double v = norm(sum.element());
    squares.push_back(v * v);
    for (std::uint64_t t = 1; t < patterns; ++t) {
      const int flip = 1 + std::countr_zero(t);
      signs[static_cast<std::size_t>(flip)] *= -1.0;
      sum.add(vectors[static_cast<std::size_t>(flip)],
              2.0 * signs[static_cast<std::size_t>(flip)]);
      v = norm(sum.element());
      squares.push_back(v * v);
    }
    result.patterns = patterns;
  } else {
    if (options.samples == 0) {
      throw std::invalid_argument("cotype2_constant: Monte Carlo needs samples > 0");
    }
    const CounterRng rng(options.seed, 0x636f74797065ull);
    const int words = (n + 63) / 64;
    squares.assign(options.samples, 0.0);
    parallel_for(options.samples, [&](std::size_t s) {
      SignSum sum(vectors);
      for (int i = 0; i < n; ++i) {
        const std::uint64_t word =
            rng.raw(static_cast<std::uint64_t>(s) * words + i / 64);
        const double sign = (word >> (i % 64)) & 1ull ? 1.0 : -1.0;
        sum.add(vectors[static_cast<std::size_t>(i)], sign);
      }
      const double v = norm(sum.element());
      squares[s] = v * v;
    });
    result.patterns = options.samples;
  }

  const double mean_sq = pairwise_mean(squares);
  result.ratio = std::sqrt(mean_sq) / std::sqrt(denom_sq);

  if (!options.exact && squares.size() > 1) {
    const double var = detail::pairwise_accumulate(
                           0, squares.size(),
                           [&](std::size_t i) {
                             const double d = squares[i] - mean_sq;
                             return d * d;
                           }) /
                       static_cast<double>(squares.size() - 1);
    const double se_mean = std::sqrt(var / static_cast<double>(squares.size()));
    if (mean_sq > 0.0) {
      result.std_error = se_mean / (2.0 * std::sqrt(mean_sq) * std::sqrt(denom_sq));
    }
  }
  return result;
}

std::vector<DerivedElement> standard_cotype_family(int arity, int count) {
  if (arity < 1 || count < 1) {
    throw std::invalid_argument("standard_cotype_family: arity and count must be >= 1");
  }
  std::vector<DerivedElement> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::vector<FiniteVector> blocks(static_cast<std::size_t>(arity - 1),
                                     FiniteVector::zeros(count));
    blocks.push_back(FiniteVector::unit(count, i));
    out.emplace_back(std::move(blocks));
  }
  return out;
}

namespace {

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

GrowthScan cotype_growth_scan(const std::vector<long long>& n_values) {
  if (n_values.empty()) {
    throw std::invalid_argument("cotype_growth_scan: empty n list");
  }
  GrowthScan scan;
  // Normal equations for the least squares fit on the basis (1, t, t^2),
  // t = ln n.
  double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  double rhs[3] = {0, 0, 0};

  for (long long n : n_values) {
    if (n < 1) throw std::invalid_argument("cotype_growth_scan: n must be >= 1");
    const int dim = static_cast<int>(n);
    std::vector<FiniteVector> blocks(2, FiniteVector::zeros(dim));
    blocks.push_back(FiniteVector::ones(dim));
    const double q = zn_quasinorm(DerivedElement(std::move(blocks))).value;

    GrowthRow row;
    row.n = n;
    row.c = q / std::sqrt(static_cast<double>(n));
    const double t = std::log(static_cast<double>(n));
    row.closed_form = 1.0 + t + 0.5 * t * t;
    row.remainder = row.c - 1.0 - t;
    scan.rows.push_back(row);

    const double basis[3] = {1.0, t, t * t};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] += basis[i] * basis[j];
      rhs[i] += basis[i] * row.c;
    }
  }

  // 3x3 Gaussian elimination with partial pivoting.
  {
    double a[3][4];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];
      a[i][3] = rhs[i];
    }
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int r = col + 1; r < 3; ++r) {
        if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
      }
      std::swap(a[piv], a[col]);
      for (int r = col + 1; r < 3; ++r) {
        const double f = a[r][col] / a[col][col];
        for (int j = col; j < 4; ++j) a[r][j] -= f * a[col][j];
      }
    }
    double sol[3];
    for (int i = 2; i >= 0; --i) {
      double s = a[i][3];
      for (int j = i + 1; j < 3; ++j) s -= a[i][j] * sol[j];
      sol[i] = s / a[i][i];
    }
    scan.fit_const = sol[0];
    scan.fit_log = sol[1];
    scan.fit_log2 = sol[2];
  }

  // Log-log growth exponents against ln(n). The raw fit of c - 1 mixes the
  // linear and quadratic log terms at these scales; the leading fit removes
  // the linear term first and isolates the top-order growth.
  std::vector<double> lx_raw, ly_raw, lx_lead, ly_lead;
  for (const GrowthRow& row : scan.rows) {
    const double t = std::log(static_cast<double>(row.n));
    if (t <= 0.0) continue;
    if (row.c - 1.0 > 0.0) {
      lx_raw.push_back(std::log(t));
      ly_raw.push_back(std::log(row.c - 1.0));
    }
    if (row.remainder > 0.0) {
      lx_lead.push_back(std::log(t));
      ly_lead.push_back(std::log(row.remainder));
    }
  }
  scan.exponent_raw = ols_slope(lx_raw, ly_raw);
  scan.exponent_leading = ols_slope(lx_lead, ly_lead);
  return scan;
}

namespace {

struct DefectProblem {
  int dim = 0;
  int count = 0;
  std::vector<FiniteVector> x;
  std::vector<FiniteVector> y;  // Omega(x_i)
  std::vector<double> s;        // ||x_i||_2
  ComplexMatrix gram;           // gram(i,j) = <x_i, x_j> (conjugate-linear first)
};

Complex inner(const FiniteVector& a, const FiniteVector& b) {
  Complex s(0.0, 0.0);
  for (int j = 0; j < a.dim(); ++j) s += std::conj(a[j]) * b[j];
  return s;
}

// max_i ||y_i - L x_i|| / s_i, refreshing residuals from scratch.
double exact_objective(const DefectProblem& p, const ComplexMatrix& L,
                       std::vector<FiniteVector>* residuals = nullptr) {
  double worst = 0.0;
  if (residuals) residuals->clear();
  for (int i = 0; i < p.count; ++i) {
    const FiniteVector r = p.y[static_cast<std::size_t>(i)] -
                           apply(L, p.x[static_cast<std::size_t>(i)]);
    worst = std::max(worst, l2_norm(r) / p.s[static_cast<std::size_t>(i)]);
    if (residuals) residuals->push_back(r);
  }
  return worst;
}

double best_dependence_bound(const DefectProblem& p) {
  ComplexMatrix X(p.dim, p.count);
  for (int i = 0; i < p.count; ++i) {
    for (int j = 0; j < p.dim; ++j) X(j, i) = p.x[static_cast<std::size_t>(i)][j];
  }
  const ComplexMatrix ns = complex_null_space(X);
  double lb = 0.0;
  for (int c = 0; c < ns.cols; ++c) {
    std::vector<Complex> acc(static_cast<std::size_t>(p.dim));
    double den = 0.0;
    for (int i = 0; i < p.count; ++i) {
      const Complex ci = ns(i, c);
      if (ci == Complex(0.0, 0.0)) continue;
      den += std::abs(ci) * p.s[static_cast<std::size_t>(i)];
      for (int j = 0; j < p.dim; ++j) {
        acc[static_cast<std::size_t>(j)] += ci * p.y[static_cast<std::size_t>(i)][j];
      }
    }
    if (den <= 0.0) continue;
    double num = std::sqrt(detail::pairwise_accumulate(
        0, acc.size(), [&](std::size_t j) { return std::norm(acc[j]); }));
    lb = std::max(lb, num / den);
  }
  return lb;
}

// Minimizer of sum_i weight_i ||y_i - L x_i||^2 / s_i^2 by normal
// equations; uniform weights give the warm start, Lawson reweighting the
// minimax refinement.
ComplexMatrix weighted_least_squares(const DefectProblem& p,
                                     const std::vector<double>& weights) {
  const int d = p.dim;
  ComplexMatrix a(d, d);
  ComplexMatrix bh(d, d);  // B^H where B = sum w y x^H
  double trace = 0.0;
  for (int i = 0; i < p.count; ++i) {
    const double w = weights[static_cast<std::size_t>(i)] /
                     (p.s[static_cast<std::size_t>(i)] *
                      p.s[static_cast<std::size_t>(i)]);
    if (w <= 0.0) continue;
    const FiniteVector& x = p.x[static_cast<std::size_t>(i)];
    const FiniteVector& y = p.y[static_cast<std::size_t>(i)];
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        a(r, c) += w * x[r] * std::conj(x[c]);
        bh(r, c) += w * x[r] * std::conj(y[c]);
      }
    }
  }
  for (int r = 0; r < d; ++r) trace += a(r, r).real();
  const double ridge = 1e-12 * std::max(trace / d, 1e-12);
  for (int r = 0; r < d; ++r) a(r, r) += ridge;

  const ComplexMatrix lh = hermitian_solve(a, bh);
  ComplexMatrix L(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) L(r, c) = std::conj(lh(c, r));
  }
  return L;
}

}  // namespace

DefectSolution splitting_defect(const ProbeSet& probes,
                                const DefectOptions& options) {
  if (probes.vectors.empty()) {
    throw std::invalid_argument("splitting_defect: empty probe set");
  }
  if (options.max_iterations < 1 || !(options.tolerance > 0.0)) {
    throw std::invalid_argument("splitting_defect: bad solver parameters");
  }
  DefectProblem p;
  p.dim = probes.vectors.front().dim();
  p.count = static_cast<int>(probes.vectors.size());
  for (const FiniteVector& v : probes.vectors) {
    if (v.dim() != p.dim) {
      throw std::invalid_argument("splitting_defect: probes must share a dimension");
    }
    if (is_zero(v)) {
      throw std::invalid_argument("splitting_defect: probes must be nonzero");
    }
    p.x.push_back(v);
    p.y.push_back(taylor_weight(v, 1));
    p.s.push_back(l2_norm(v));
  }
  p.gram = ComplexMatrix(p.count, p.count);
  for (int i = 0; i < p.count; ++i) {
    for (int j = 0; j < p.count; ++j) {
      p.gram(i, j) = inner(p.x[static_cast<std::size_t>(i)],
                           p.x[static_cast<std::size_t>(j)]);
    }
  }

  DefectSolution sol;
  sol.lower_bound = best_dependence_bound(p);

  ComplexMatrix L =
      weighted_least_squares(p, std::vector<double>(p.count, 1.0));
  std::vector<FiniteVector> residuals;
  double f = exact_objective(p, L, &residuals);

  ComplexMatrix L_best = L;
  double f_best = f;
  long iterations = 0;

  const double tol = options.tolerance;
  auto close_enough = [&](double value) {
    return value <= sol.lower_bound + tol * std::max(value, 1e-12) ||
           value <= 1e-13;
  };
  // Every objective evaluation (including line-search trials) charges the
  // shared iteration budget.
  auto spend = [&]() {
    if (iterations >= options.max_iterations) return false;
    ++iterations;
    return true;
  };

  // Phase 0: Lawson reweighting. Emphasizing probes in proportion to
  // their residual ratios drags the weighted least-squares solution
  // toward the minimax one and hands the later phases a strong incumbent.
  if (!close_enough(f_best)) {
    std::vector<double> weights(static_cast<std::size_t>(p.count),
                                1.0 / p.count);
    const int lawson_rounds =
        static_cast<int>(std::min<long>(options.max_iterations, 120));
    for (int it = 0; it < lawson_rounds; ++it) {
      if (!spend()) break;
      const ComplexMatrix cand = weighted_least_squares(p, weights);
      std::vector<FiniteVector> res;
      const double fc = exact_objective(p, cand, &res);
      if (fc < f_best) {
        f_best = fc;
        L_best = cand;
      }
      if (close_enough(f_best)) break;
      double total = 0.0;
      for (int i = 0; i < p.count; ++i) {
        weights[static_cast<std::size_t>(i)] *=
            std::max(l2_norm(res[static_cast<std::size_t>(i)]) /
                         p.s[static_cast<std::size_t>(i)],
                     1e-300);
        total += weights[static_cast<std::size_t>(i)];
      }
      if (!(total > 0.0)) break;
      for (double& w : weights) w /= total;
    }
  }

  // Phase 1: softmax smoothing descent with a sharpening schedule. The
  // smoothed objective phi_beta = log-sum-exp of the residual ratios sees
  // the whole near-active set at once, so it avoids the single-constraint
  // zigzag; the step is kept near 2*fmax/sharpness, the stability limit
  // of the smoothing curvature, with an Armijo fallback.
  if (!close_enough(f_best) && f_best > 0.0) {
    L = L_best;
    for (int sweep = 0; sweep < 3 && !close_enough(f_best); ++sweep) {
      const double sharpness = 30.0 * std::ldexp(1.0, 2 * sweep);
      const long sweep_budget =
          std::min<long>(700, std::max<long>(120, options.max_iterations / 5));
      for (long it = 0; it < sweep_budget; ++it) {
        if (!spend()) break;
        std::vector<FiniteVector> res;
        const double fmax = exact_objective(p, L, &res);
        if (fmax < f_best) {
          f_best = fmax;
          L_best = L;
        }
        if (close_enough(f_best)) break;

        const double beta = sharpness / std::max(fmax, 1e-12);
        ComplexMatrix g(p.dim, p.dim);
        double weight_sum = 0.0;
        std::vector<double> w(static_cast<std::size_t>(p.count));
        for (int i = 0; i < p.count; ++i) {
          const double ratio = l2_norm(res[static_cast<std::size_t>(i)]) /
                               p.s[static_cast<std::size_t>(i)];
          w[static_cast<std::size_t>(i)] = std::exp(beta * (ratio - fmax));
          weight_sum += w[static_cast<std::size_t>(i)];
        }
        const double phi = fmax + std::log(weight_sum) / beta;
        for (int i = 0; i < p.count; ++i) {
          const FiniteVector& ri = res[static_cast<std::size_t>(i)];
          const double rn = l2_norm(ri);
          if (rn <= 0.0) continue;
          const double c = w[static_cast<std::size_t>(i)] /
                           (weight_sum * rn * p.s[static_cast<std::size_t>(i)]);
          const FiniteVector& xi = p.x[static_cast<std::size_t>(i)];
          for (int r = 0; r < p.dim; ++r) {
            const Complex f1 = c * ri[r];
            for (int cc = 0; cc < p.dim; ++cc) g(r, cc) -= f1 * std::conj(xi[cc]);
          }
        }
        double gn2 = 0.0;
        for (const Complex& v : g.a) gn2 += std::norm(v);
        if (gn2 <= 1e-28) break;

        double alpha = 2.0 * fmax / sharpness;
        bool stepped = false;
        for (int trial = 0; trial < 25; ++trial) {
          ComplexMatrix cand = L;
          for (std::size_t idx = 0; idx < cand.a.size(); ++idx) {
            cand.a[idx] -= alpha * g.a[idx];
          }
          if (!spend()) break;
          std::vector<FiniteVector> cres;
          const double cmax = exact_objective(p, cand, &cres);
          double cw = 0.0;
          for (int i = 0; i < p.count; ++i) {
            cw += std::exp(beta * (l2_norm(cres[static_cast<std::size_t>(i)]) /
                                       p.s[static_cast<std::size_t>(i)] -
                                   cmax));
          }
          const double cphi = cmax + std::log(cw) / beta;
          if (cphi <= phi - 1e-4 * alpha * gn2) {
            L = cand;
            if (cmax < f_best) {
              f_best = cmax;
              L_best = L;
            }
            stepped = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!stepped) break;  // at the smoothing floor for this sharpness
      }
      L = L_best;
    }
  }

  // Phase 2: Polyak-stepped subgradient fine polish. The normalized
  // gradient has unit Frobenius norm, so the step equals the target gap;
  // with a tight dependence certificate this resolves the last digits.
  // Residuals are maintained by rank-one Gram updates and refreshed
  // periodically.
  if (!close_enough(f_best)) {
    L = L_best;
    f = exact_objective(p, L, &residuals);
    std::vector<double> norms(static_cast<std::size_t>(p.count));
    for (int i = 0; i < p.count; ++i) {
      norms[static_cast<std::size_t>(i)] = l2_norm(residuals[static_cast<std::size_t>(i)]);
    }
    double delta = std::max(0.02 * f_best, 16.0 * tol);
    long stall = 0;
    double stall_reference = f_best;
    const long budget = options.max_iterations;  // spend() enforces the cap

    for (long it = 0; it < budget; ++it) {
      if (!spend()) break;
      int worst = 0;
      double fw = 0.0;
      for (int i = 0; i < p.count; ++i) {
        const double ratio =
            norms[static_cast<std::size_t>(i)] / p.s[static_cast<std::size_t>(i)];
        if (ratio > fw) {
          fw = ratio;
          worst = i;
        }
      }
      if (fw < f_best) {
        f_best = fw;
        L_best = L;
      }
      if (close_enough(f_best)) break;

      if (f_best < stall_reference - 0.1 * delta) {
        stall_reference = f_best;
        stall = 0;
      } else if (++stall >= 80) {
        delta *= 0.5;
        stall = 0;
        if (delta < tol * std::max(f_best, 1e-12)) break;
      }

      const double target = std::max(sol.lower_bound, f_best - delta);
      if (fw <= target) continue;
      const double gamma = fw - target;
      const double rnorm = norms[static_cast<std::size_t>(worst)];
      if (rnorm <= 0.0) break;
      const double coeff = gamma / (p.s[static_cast<std::size_t>(worst)] * rnorm);

      // L += coeff * r_worst x_worst^H, applied to both L and the residuals.
      const FiniteVector& rw = residuals[static_cast<std::size_t>(worst)];
      const FiniteVector& xw = p.x[static_cast<std::size_t>(worst)];
      for (int r = 0; r < p.dim; ++r) {
        const Complex f1 = coeff * rw[r];
        for (int c = 0; c < p.dim; ++c) L(r, c) += f1 * std::conj(xw[c]);
      }
      for (int j = 0; j < p.count; ++j) {
        const Complex factor = coeff * p.gram(worst, j);
        std::vector<Complex> e = residuals[static_cast<std::size_t>(j)].entries();
        for (int r = 0; r < p.dim; ++r) e[static_cast<std::size_t>(r)] -= factor * rw[r];
        residuals[static_cast<std::size_t>(j)] = FiniteVector(std::move(e));
        norms[static_cast<std::size_t>(j)] =
            l2_norm(residuals[static_cast<std::size_t>(j)]);
      }
      if ((it + 1) % 512 == 0) {
        f = exact_objective(p, L, &residuals);
        for (int i = 0; i < p.count; ++i) {
          norms[static_cast<std::size_t>(i)] =
              l2_norm(residuals[static_cast<std::size_t>(i)]);
        }
      }
    }
  }

  sol.defect = exact_objective(p, L_best);
  sol.linear_map = L_best;
  sol.iterations = iterations;
  sol.certificate_gap = std::max(0.0, sol.defect - sol.lower_bound);
  sol.converged = sol.defect <= 1e-12 ||
                  sol.certificate_gap <= options.tolerance *
                                             std::max(sol.defect, 1e-12);
  return sol;
}

}  // namespace twistlab
