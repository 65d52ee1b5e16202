// Acceptance suite: every release-gating check, one pass/fail line each,
// with the tolerances pinned in code. Exits nonzero if anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistlab/analytic.hpp"
#include "twistlab/derived_spaces.hpp"
#include "twistlab/io.hpp"
#include "twistlab/metrics.hpp"
#include "twistlab/probes.hpp"
#include "twistlab/rng.hpp"

using namespace twistlab;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(std::string name)
      : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

  void require(bool ok, const std::string& detail) {
    if (!ok && failure_.empty()) failure_ = detail;
    ok_ = ok_ && ok;
  }

  double elapsed_s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  void finish(double budget_s = 0.0, const std::string& note = "") {
    const double elapsed = elapsed_s();
    if (budget_s > 0.0 && elapsed > budget_s) {
      require(false, "runtime " + std::to_string(elapsed) + " s over budget " +
                         std::to_string(budget_s) + " s");
    }
    std::printf("[%s] %s (%.2f s)%s%s\n", ok_ ? "PASS" : "FAIL", name_.c_str(),
                elapsed, note.empty() ? "" : " ", note.c_str());
    if (!ok_) {
      std::printf("       -> %s\n", failure_.c_str());
      ++g_failures;
    }
  }

 private:
  std::string name_;
  bool ok_ = true;
  std::string failure_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void criterion_1_extremal_flatness() {
  Criterion c("1. extremal boundary flatness (100 vectors, dims <= 64, 1e-10)");
  const CounterRng rng(kDefaultSeed, 0xAC01ull);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int dim = 1 + static_cast<int>(rng.raw(1000 + i) % 64);
    const FiniteVector x = gaussian_vector(dim, rng, static_cast<std::uint64_t>(i));
    const double norm = l2_norm(x);
    for (int s = 0; s < 21; ++s) {
      const double t = -10.0 + s;
      worst = std::max(worst, std::fabs(lp_norm(extremal_eval(x, Complex(0.0, t)),
                                                kInf) -
                                        norm) /
                                  norm);
      worst = std::max(worst,
                       std::fabs(lp_norm(extremal_eval(x, Complex(1.0, t)), 1.0) -
                                 norm) /
                           norm);
    }
  }
  c.require(worst <= 1e-10, "max relative deviation " + fmt(worst));
  c.finish(2.0, "max_dev=" + fmt(worst));
}

void criterion_2_quadrature_vs_closed() {
  Criterion c("2. Cauchy quadrature vs closed Taylor coefficients (1e-8)");
  const CounterRng rng(kDefaultSeed, 0xAC02ull);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int dim = 1 + static_cast<int>(rng.raw(2000 + i) % 16);
    const FiniteVector x = gaussian_vector(dim, rng, static_cast<std::uint64_t>(i));
    const TaylorList list = cauchy_taylor(
        [&x](Complex z) { return extremal_eval(x, z); }, dim, 4, 0.25, 256);
    double scale = 0.0;
    std::vector<FiniteVector> expected;
    for (int k = 0; k <= 4; ++k) {
      expected.push_back(taylor_weight(x, k));
      scale = std::max(scale, max_abs(expected.back()));
    }
    for (int k = 0; k <= 4; ++k) {
      worst = std::max(worst, max_abs(list.coeffs[static_cast<std::size_t>(k)] -
                                      expected[static_cast<std::size_t>(k)]) /
                                  scale);
    }
  }
  c.require(worst <= 1e-8, "max relative error " + fmt(worst));
  c.finish(5.0, "max_err=" + fmt(worst));
}

void criterion_3_phi_delta_polynomials() {
  Criterion c("3. phi-polynomial Taylor deltas for all 0 <= k <= m <= 5 (1e-9)");
  double worst = 0.0;
  bool structural = true;
  for (int m = 0; m <= 5; ++m) {
    for (int k = 0; k <= m; ++k) {
      const PhiPolynomial p = phi_delta_poly(k, m);
      for (int i = 0; i < k; ++i) {
        if (p.coeffs[static_cast<std::size_t>(i)] != Complex(0.0, 0.0)) {
          structural = false;
        }
      }
      const std::vector<Complex> taylor = cauchy_taylor_scalar(
          [&p](Complex z) { return p.eval(z); }, m, 0.25, 256);
      for (int i = 0; i <= m; ++i) {
        const Complex want = i == k ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
        worst = std::max(worst, std::abs(taylor[static_cast<std::size_t>(i)] - want));
      }
    }
  }
  c.require(worst <= 1e-9, "max delta deviation " + fmt(worst));
  c.require(structural, "coefficients below the target order are not exactly zero");
  c.finish(0.0, "max_dev=" + fmt(worst));
}

void criterion_4_cotype_growth() {
  Criterion c("4. cotype growth: closed form to 1e-12, log^2 exponent in [1.9, 2.1]");
  std::vector<long long> ns;
  for (long long n = 4; n <= 65536; n *= 4) ns.push_back(n);
  const GrowthScan scan = cotype_growth_scan(ns);
  double worst = 0.0;
  for (const GrowthRow& row : scan.rows) {
    worst = std::max(worst, std::fabs(row.c - row.closed_form) / row.closed_form);
  }
  c.require(worst <= 1e-12, "closed-form relative error " + fmt(worst));
  c.require(scan.exponent_leading >= 1.9 && scan.exponent_leading <= 2.1,
            "leading log-log exponent " + fmt(scan.exponent_leading) +
                " outside [1.9, 2.1]");
  c.require(std::fabs(scan.fit_log2 - 0.5) <= 1e-6,
            "ln^2 coefficient " + fmt(scan.fit_log2) + " not 1/2");
  c.finish(10.0, "exponent=" + fmt(scan.exponent_leading) +
                     " raw=" + fmt(scan.exponent_raw) +
                     " ln2_coeff=" + fmt(scan.fit_log2));
}

void criterion_5_omega22_cross_validation() {
  Criterion c("5. Omega_{2,2} closed formula vs quadrature (100 pairs, 1e-6)");
  const CounterRng rng(kDefaultSeed, 0xAC05ull);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const FiniteVector y = gaussian_vector(8, rng, 2ull * i);
    const FiniteVector x = gaussian_vector(8, rng, 2ull * i + 1);
    const auto [top, bottom] = omega_22(y, x);
    const DerivedElement got =
        omega_kn(DerivedElement(std::vector<FiniteVector>{y, x}), 2);
    const double scale = std::max({1.0, max_abs(top), max_abs(bottom)});
    worst = std::max(worst, max_abs(got.block(0) - top) / scale);
    worst = std::max(worst, max_abs(got.block(1) - bottom) / scale);
  }
  c.require(worst <= 1e-6, "max relative disagreement " + fmt(worst));
  c.finish(30.0, "max_err=" + fmt(worst));
}

void criterion_6_exactness() {
  Criterion c("6. exactness rank identities (n+k <= 6, dim 8) and push-out (dim 4)");
  for (int n = 1; n <= 5; ++n) {
    for (int k = 1; n + k <= 6; ++k) {
      const ExactnessReport rep =
          exactness_report(n, k, random_elements(n, 8, 4, 5000 + 10 * n + k));
      std::ostringstream tag;
      tag << "n=" << n << " k=" << k;
      c.require(rep.dim == 8, tag.str() + ": wrong section dimension");
      c.require(rep.composition_zero, tag.str() + ": composition not zero");
      c.require(rep.kernel_image_match,
                tag.str() + ": kernel/image rank identity failed");
    }
  }
  // Spot check on elements: pi after iota annihilates exactly.
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; n + k <= 6; ++k) {
      const DerivedElement e = random_elements(n, 8, 1, 42 + 10 * n + k)[0];
      c.require(is_zero(pi(iota(e, n + k), k)), "pi(iota(e)) != 0 on a sample");
    }
  }
  const PushoutReport rep = pushout_check(4);
  c.require(rep.composition_zero, "push-out composition not zero");
  c.require(rep.middle_exact, "push-out middle exactness rank identity failed");
  const std::vector<DerivedElement> samples = random_elements(2, 4, 16, 777);
  for (const DerivedElement& a : samples) {
    const PushoutImage img = pushout_forward(a);
    c.require(is_zero(pushout_comap(img.padded, img.bottom)),
              "push-out sample composition not exactly zero");
  }
  c.finish();
}

void criterion_7_quasilinearity() {
  Criterion c("7. quasilinearity witness (1e-12) and dimension stability (<= 1.25)");
  const ConstantReport canonical = quasilinearity_constant(
      {{FiniteVector::unit(2, 0), FiniteVector::unit(2, 1)}});
  const double expected = std::sqrt(2.0) * std::log(2.0) / 2.0;
  c.require(std::fabs(canonical.value - expected) <= 1e-12,
            "witness value " + fmt(canonical.value) + " vs " + fmt(expected));

  // Dimension stability of the sampled constant: the high-dimensional
  // maxima must not exceed the dim-8 maximum by more than the factor 1.25.
  // (At a fixed sample count the max statistic concentrates downward as
  // the dimension grows; growth is what would signal instability.)
  double base = 0.0;
  std::string per_dim;
  bool stable = true;
  for (int dim : {8, 64, 512}) {
    const ConstantReport rep = quasilinearity_scan(100000, dim, kDefaultSeed);
    if (dim == 8) base = rep.value;
    if (rep.value > 1.25 * base) stable = false;
    per_dim += " d" + std::to_string(dim) + "=" + fmt(rep.value);
  }
  c.require(base > 0.0, "dim-8 scan returned zero");
  c.require(stable, "a higher-dimensional maximum exceeds 1.25x the dim-8 maximum:" + per_dim);
  c.finish(0.0, "witness=" + fmt(canonical.value) + per_dim);
}

void criterion_8_centralizer() {
  Criterion c("8. centralizer witness (1e-12) and unimodular identity (1e-12)");
  const double inv = 1.0 / std::sqrt(2.0);
  const FiniteVector witness(
      std::vector<Complex>{Complex(inv, 0.0), Complex(inv, 0.0)});
  const Multiplier indicator =
      make_multiplier({Complex(1.0, 0.0), Complex(0.0, 0.0)});
  const double got = centralizer_defect(witness, indicator);
  const double expected = std::log(2.0) / std::sqrt(2.0);
  c.require(std::fabs(got - expected) <= 1e-12,
            "witness defect " + fmt(got) + " vs " + fmt(expected));

  double worst_uni = 0.0;
  for (int dim : {8, 64}) {
    const CounterRng rng(kDefaultSeed, 0xAC08ull + dim);
    for (int i = 0; i < 500; ++i) {
      FiniteVector x = gaussian_vector(dim, rng, static_cast<std::uint64_t>(i));
      const double norm = l2_norm(x);
      if (norm == 0.0) continue;
      x = (1.0 / norm) * x;
      const Multiplier a =
          unimodular_multiplier(dim, rng, static_cast<std::uint64_t>(i));
      worst_uni = std::max(worst_uni, centralizer_defect(x, a));
    }
  }
  c.require(worst_uni <= 1e-12, "unimodular defect " + fmt(worst_uni));
  c.finish(0.0, "witness=" + fmt(got) + " uni_max=" + fmt(worst_uni));
}

void criterion_9_splitting_defect() {
  Criterion c("9. splitting defect: triple to 1e-4 with gap <= 1e-4, strict dyadic growth");
  ProbeSet triple;
  triple.label = "triple";
  triple.vectors = {FiniteVector::unit(2, 0), FiniteVector::unit(2, 1),
                    FiniteVector::ones(2)};
  const DefectSolution sol = splitting_defect(triple);
  const double expected = (std::sqrt(2.0) - 1.0) * std::log(2.0);
  c.require(std::fabs(sol.defect - expected) <= 1e-4,
            "triple defect " + fmt(sol.defect) + " vs " + fmt(expected));
  c.require(sol.certificate_gap <= 1e-4,
            "certificate gap " + fmt(sol.certificate_gap));

  const DefectSolution d4 = splitting_defect(dyadic_indicator_family(4));
  const DefectSolution d64 = splitting_defect(dyadic_indicator_family(64));
  c.require(d64.defect > d4.defect,
            "no strict increase: " + fmt(d4.defect) + " -> " + fmt(d64.defect));
  // The dim-64 certificate alone should already exceed the dim-4 defect,
  // which makes the strict increase rigorous rather than solver-dependent.
  c.require(d4.defect < d64.lower_bound,
            "dim-4 defect " + fmt(d4.defect) + " not below dim-64 bound " +
                fmt(d64.lower_bound));
  c.finish(60.0, "triple=" + fmt(sol.defect) + " gap=" + fmt(sol.certificate_gap) +
                     " d4=" + fmt(d4.defect) + " d64=" + fmt(d64.defect) +
                     " lb64=" + fmt(d64.lower_bound));
}

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run_binary(const std::string& cli, const std::string& args) {
  CliRun result;
  const std::string cmd = cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) result.out.append(buf, got);
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

void criterion_10_determinism(const std::string& cli) {
  Criterion c("10. CLI determinism: identical argv+seed reproduce bytes");
  if (cli.empty()) {
    c.require(false, "no --cli path provided");
    c.finish();
    return;
  }
  const std::vector<std::string> invocations = {
      "omega --k 1 --n 2 --input ones:4",
      "omega --k 2 --n 2 --input 'gauss:4:3;gauss:4:4'",
      "quasinorm --arity 3 --input 'zeros:4;zeros:4;ones:4'",
      "extremal-check --dim 16 --samples 10",
      "taylor-check --order 3 --samples 5",
      "exactness --n 2 --k 1 --probes 20 --dim 4",
      "cotype-scan --n-list 4,16,64,256",
      "cotype-scan --n-list 4,16,64,256 --format csv",
      "cotype --mode mc --samples 2000 --vectors 6 --seed 5",
      "cotype --mode exact --vectors 6",
      "quasilinearity --pairs 2000 --dim 16",
      "centralizer --probes 2000 --dim 16",
      "defect --family triple",
      "defect --family dyadic --sizes 4,8 --max-iter 3000",
      "pushout-check --dim 4",
  };
  for (const std::string& args : invocations) {
    const CliRun a = run_binary(cli, args);
    const CliRun b = run_binary(cli, args);
    c.require(a.code == 0, "'" + args + "' exited " + std::to_string(a.code));
    c.require(a.out == b.out && !a.out.empty(),
              "'" + args + "' output differs between runs");
  }
  c.finish();
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::string schema;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") cli = argv[i + 1];
    if (flag == "--schema") schema = argv[i + 1];
  }

  criterion_1_extremal_flatness();
  criterion_2_quadrature_vs_closed();
  criterion_3_phi_delta_polynomials();
  criterion_4_cotype_growth();
  criterion_5_omega22_cross_validation();
  criterion_6_exactness();
  criterion_7_quasilinearity();
  criterion_8_centralizer();
  criterion_9_splitting_defect();
  criterion_10_determinism(cli);

  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
