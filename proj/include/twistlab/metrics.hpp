#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "twistlab/derived_spaces.hpp"
#include "twistlab/probes.hpp"

namespace twistlab {

// An estimated constant with its witness inputs and provenance.
struct ConstantReport {
  double value = 0.0;
  std::vector<FiniteVector> witnesses;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> diagnostics;
};

// max over pairs of ||Omega(x+y) - Omega(x) - Omega(y)||_2 / (||x||_2 +
// ||y||_2), Omega = omega_1n(., 1). The witness pair is recorded.
ConstantReport quasilinearity_constant(
    const std::vector<std::pair<FiniteVector, FiniteVector>>& pairs);

// Seeded Gaussian sampling version (deterministic for a fixed seed,
// independent of worker count).
ConstantReport quasilinearity_scan(int pair_count, int dim, std::uint64_t seed);

// max over (a, x) of centralizer_defect(x, a) / (||a||_inf ||x||_2).
ConstantReport centralizer_constant(const std::vector<Multiplier>& multipliers,
                                    const ProbeSet& probes);

// Paired random (a, x) scan with ||a||_inf = ||x||_2 = 1; multipliers cycle
// sign / unimodular / indicator families. Diagnostics include the maximum
// defect over the unimodular subset (an exact identity makes it vanish).
ConstantReport centralizer_scan(int samples, int dim, std::uint64_t seed);

struct CotypeOptions {
  bool exact = true;
  std::uint64_t samples = 0;    // Monte Carlo sample count
  std::uint64_t seed = 0;
};

struct CotypeResult {
  double ratio = 0.0;       // (E ||sum r_i x_i||^2)^(1/2) / (sum ||x_i||^2)^(1/2)
  double std_error = 0.0;   // Monte Carlo standard error of the ratio
  std::uint64_t patterns = 0;
};

// Exact mode enumerates 2^(n-1) sign patterns (the global flip is a
// symmetry); capped at 20 vectors. Monte Carlo mode draws seeded random
// patterns and reports the delta-method standard error.
CotypeResult cotype2_constant(
    const std::function<double(const DerivedElement&)>& norm,
    const std::vector<DerivedElement>& vectors, const CotypeOptions& options);

// The standard probe family x_i = (0, ..., 0, e_i) of a given arity.
std::vector<DerivedElement> standard_cotype_family(int arity, int count);

struct GrowthRow {
  long long n = 0;
  double c = 0.0;            // ||(0,0,1_n)||_{Z^(3)} / sqrt(n)
  double closed_form = 0.0;  // 1 + ln n + ln^2(n)/2
  double remainder = 0.0;    // c - 1 - ln n
};

struct GrowthScan {
  std::vector<GrowthRow> rows;
  double fit_const = 0.0;          // least squares on (1, ln n, ln^2 n)
  double fit_log = 0.0;
  double fit_log2 = 0.0;
  double exponent_leading = 0.0;   // slope of ln(c - 1 - ln n) vs ln(ln n)
  double exponent_raw = 0.0;       // slope of ln(c - 1) vs ln(ln n)
};

GrowthScan cotype_growth_scan(const std::vector<long long>& n_values);

struct DefectOptions {
  long max_iterations = 10000;
  double tolerance = 1e-6;
};

struct DefectSolution {
  double defect = 0.0;
  ComplexMatrix linear_map;
  long iterations = 0;
  double lower_bound = 0.0;      // best linear-dependence certificate
  double certificate_gap = 0.0;  // defect - lower_bound, clamped at 0
  bool converged = false;
};

// Distance of Omega = omega_1n(., 1) to linear maps on the probe set:
//   min over dim x dim complex L of max_i ||Omega(x_i) - L x_i||_2 / ||x_i||_2.
// Convex minimax, solved by Polyak-stepped subgradient descent from a
// least-squares warm start, then a softmax smoothing polish. The lower
// bound comes from linear dependences among the probes: if sum c_i x_i = 0
// then every L satisfies max_i >= ||sum c_i Omega(x_i)|| / sum |c_i| ||x_i||.
DefectSolution splitting_defect(const ProbeSet& probes,
                                const DefectOptions& options = {});

}  // namespace twistlab
