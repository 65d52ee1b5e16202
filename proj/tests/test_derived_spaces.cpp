#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "twistlab/derived_spaces.hpp"
#include "twistlab/probes.hpp"
#include "twistlab/rng.hpp"

using namespace twistlab;

namespace {

FiniteVector cvec(std::vector<Complex> e) { return FiniteVector(std::move(e)); }

DerivedElement triple_zeros_ones(int n) {
  std::vector<FiniteVector> blocks(2, FiniteVector::zeros(n));
  blocks.push_back(FiniteVector::ones(n));
  return DerivedElement(std::move(blocks));
}

double closed_c(double n) {
  const double t = std::log(n);
  return std::sqrt(n) * (1.0 + t + 0.5 * t * t);
}

}  // namespace

TEST_CASE("zn_quasinorm closed cases") {
  // (0, e_1): the bottom is flat so the correction vanishes.
  const DerivedElement pair(std::vector<FiniteVector>{FiniteVector::zeros(4),
                                                      FiniteVector::unit(4, 0)});
  CHECK(zn_quasinorm(pair).value == doctest::Approx(1.0).epsilon(1e-15));

  for (int n : {1, 4, 9, 64}) {
    CHECK(zn_quasinorm(triple_zeros_ones(n)).value ==
          doctest::Approx(closed_c(n)).epsilon(1e-13));
  }

  // A matched top block cancels exactly.
  const FiniteVector x = cvec({{1, 0}, {2, -1}, {0, 0.5}});
  const DerivedElement matched(
      std::vector<FiniteVector>{taylor_weight(x, 1), x});
  CHECK(zn_quasinorm(matched).value == doctest::Approx(l2_norm(x)).epsilon(1e-13));
}

TEST_CASE("quasinorm decomposition sums to the value") {
  const CounterRng rng(61, 1);
  for (int trial = 0; trial < 30; ++trial) {
    const int arity = 1 + static_cast<int>(rng.raw(trial) % 4);
    const int dim = 1 + static_cast<int>(rng.raw(100 + trial) % 8);
    const DerivedElement e = random_elements(arity, dim, 1, 700 + trial)[0];
    const QuasinormValue q = zn_quasinorm(e);
    CHECK(static_cast<int>(q.decomposition.size()) == arity);
    double sum = 0.0;
    for (double v : q.decomposition) sum += v;
    CHECK(sum == q.value);  // same fold order as the recursion
  }
}

TEST_CASE("quasinorm homogeneity and definiteness") {
  const CounterRng rng(62, 2);
  const std::vector<Complex> scales = {{2.0, 0.0}, {-0.5, 0.25}, {0.0, 3.0}};
  for (int trial = 0; trial < 20; ++trial) {
    const int arity = 1 + static_cast<int>(rng.raw(trial) % 4);
    const DerivedElement e = random_elements(arity, 6, 1, 900 + trial)[0];
    const double base = zn_quasinorm(e).value;
    CHECK((base == 0.0) == is_zero(e));
    for (const Complex& lambda : scales) {
      CHECK(std::fabs(zn_quasinorm(lambda * e).value - std::abs(lambda) * base) <=
            1e-12 * std::max(1.0, std::abs(lambda) * base));
    }
  }
  CHECK(zn_quasinorm(DerivedElement::zeros(3, 5)).value == 0.0);
}

TEST_CASE("quasi-triangle constant is finite and stable under doubling") {
  const int pairs = 10000;
  auto delta_over = [&](int count) {
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
      const int arity = 2 + i % 3;  // arities 2..4
      const DerivedElement a = random_elements(arity, 8, 1, 40000 + i)[0];
      const DerivedElement b = random_elements(arity, 8, 1, 80000 + i)[0];
      const double lhs = zn_quasinorm(a + b).value;
      const double rhs = zn_quasinorm(a).value + zn_quasinorm(b).value;
      if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
    }
    return worst;
  };
  const double d1 = delta_over(pairs);
  const double d2 = delta_over(2 * pairs);  // superset of the first sample
  CHECK(d1 >= 0.5);
  CHECK(d2 >= d1);
  CHECK((d2 - d1) <= 0.05 * d1);
}

TEST_CASE("twisted_quasinorm with the zero derivation is the direct sum") {
  const DerivedElement top = random_elements(2, 5, 1, 11)[0];
  const DerivedElement bottom = random_elements(3, 5, 1, 12)[0];
  const DerivationMap zero = [](const DerivedElement& b) {
    return DerivedElement::zeros(2, b.dim());
  };
  const QuasinormValue q = twisted_quasinorm(top, bottom, zero);
  CHECK(q.value == doctest::Approx(zn_quasinorm(top).value +
                                   zn_quasinorm(bottom).value)
                       .epsilon(1e-14));
}

TEST_CASE("twisted_quasinorm with omega_11 matches Z^(2) definitionally") {
  const CounterRng rng(63, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const FiniteVector y = gaussian_vector(6, rng, 2ull * trial);
    const FiniteVector x = gaussian_vector(6, rng, 2ull * trial + 1);
    const DerivationMap omega = [](const DerivedElement& b) {
      return omega_1n(b.block(0), 1);
    };
    const double lhs =
        twisted_quasinorm(DerivedElement(std::vector<FiniteVector>{y}),
                          DerivedElement(std::vector<FiniteVector>{x}), omega)
            .value;
    const double rhs =
        zn_quasinorm(DerivedElement(std::vector<FiniteVector>{y, x})).value;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("twisted_quasinorm arity mismatch is rejected") {
  const DerivedElement top = DerivedElement::zeros(2, 4);
  const DerivedElement bottom = DerivedElement::zeros(2, 4);
  const DerivationMap bad = [](const DerivedElement& b) {
    return DerivedElement::zeros(3, b.dim());
  };
  CHECK_THROWS_AS(twisted_quasinorm(top, bottom, bad), std::invalid_argument);
}

TEST_CASE("Z^(4) against the Omega_{2,2} twisted route stays in a stable band") {
  auto ratio_band = [&](int count, double* lo, double* hi) {
    *lo = 1e300;
    *hi = 0.0;
    const DerivationMap omega = [](const DerivedElement& b) {
      const auto [t, u] = omega_22(b.block(0), b.block(1));
      return DerivedElement(std::vector<FiniteVector>{t, u});
    };
    for (int i = 0; i < count; ++i) {
      const int dim = 1 + i % 16;
      const DerivedElement e = random_elements(4, dim, 1, 5000 + i)[0];
      const double z4 = zn_quasinorm(e).value;
      if (z4 == 0.0) continue;
      const DerivedElement top(std::vector<FiniteVector>{e.block(0), e.block(1)});
      const DerivedElement bottom(std::vector<FiniteVector>{e.block(2), e.block(3)});
      const double tw = twisted_quasinorm(top, bottom, omega).value;
      const double r = tw / z4;
      *lo = std::min(*lo, r);
      *hi = std::max(*hi, r);
    }
  };
  double lo1, hi1, lo2, hi2;
  ratio_band(500, &lo1, &hi1);
  ratio_band(1000, &lo2, &hi2);
  CHECK(lo1 > 0.0);
  CHECK(hi1 < 1e3);
  CHECK(hi2 <= hi1 * 1.05);
  CHECK(lo1 <= lo2 * 1.05);
}

TEST_CASE("iota pads on the right and is an exact isometry here") {
  const FiniteVector x = FiniteVector::ones(4);
  const DerivedElement single(std::vector<FiniteVector>{x});
  const DerivedElement padded = iota(single, 2);
  CHECK(padded.arity() == 2);
  CHECK(max_abs(padded.block(0) - x) == 0.0);
  CHECK(is_zero(padded.block(1)));
  CHECK(zn_quasinorm(padded).value == doctest::Approx(2.0).epsilon(1e-15));

  for (int trial = 0; trial < 200; ++trial) {
    const int arity = 1 + trial % 3;
    const DerivedElement e = random_elements(arity, 1 + trial % 32, 1, trial)[0];
    const double base = zn_quasinorm(e).value;
    const double up = zn_quasinorm(iota(e, arity + 1 + trial % 2)).value;
    CHECK(std::fabs(up - base) <= 1e-12 * std::max(1.0, base));
  }
  CHECK_THROWS_AS(iota(single, 1), std::invalid_argument);
}

TEST_CASE("pi truncates to the bottom blocks and contracts") {
  const DerivedElement e = random_elements(3, 4, 1, 77)[0];
  const DerivedElement tail = pi(e, 2);
  CHECK(max_abs(tail.block(0) - e.block(1)) == 0.0);
  CHECK(max_abs(tail.block(1) - e.block(2)) == 0.0);
  CHECK_THROWS_AS(pi(e, 3), std::invalid_argument);
  CHECK_THROWS_AS(pi(e, 0), std::invalid_argument);

  // pi after iota annihilates when the projection stays inside the padding.
  for (int n = 1; n <= 3; ++n) {
    for (int m = n + 1; m <= 5; ++m) {
      for (int k = 1; k <= m - n; ++k) {
        const DerivedElement a = random_elements(n, 3, 1, 100 * n + m)[0];
        CHECK(is_zero(pi(iota(a, m), k)));
      }
    }
  }

  for (int trial = 0; trial < 1000; ++trial) {
    const int arity = 2 + trial % 3;
    const DerivedElement probe = random_elements(arity, 1 + trial % 12, 1, trial)[0];
    const int k = 1 + trial % (arity - 1);
    CHECK(zn_quasinorm(pi(probe, k)).value <=
          zn_quasinorm(probe).value * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("exactness identities hold for all n + k <= 6") {
  for (int dim : {2, 8}) {
    for (int n = 1; n <= 5; ++n) {
      for (int k = 1; n + k <= 6; ++k) {
        const std::vector<DerivedElement> probes =
            random_elements(n, dim, 10, 1234 + 10 * n + k);
        const ExactnessReport rep = exactness_report(n, k, probes);
        CHECK(rep.composition_zero);
        CHECK(rep.rank_embedding == n * dim);
        CHECK(rep.kernel_dim == n * dim);
        CHECK(rep.rank_union == n * dim);
        CHECK(rep.kernel_image_match);
        // The embedding is isometric under the recursion quasinorm.
        CHECK(rep.ratio_min >= 1.0 - 1e-12);
        CHECK(rep.ratio_max <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("embedding ratios are stable under probe doubling") {
  const ExactnessReport a = exactness_report(2, 1, random_elements(2, 16, 200, 5));
  const ExactnessReport b = exactness_report(2, 1, random_elements(2, 16, 400, 5));
  CHECK(std::fabs(a.ratio_max - b.ratio_max) <= 0.05 * a.ratio_max);
  CHECK(std::fabs(a.ratio_min - b.ratio_min) <= 0.05 * a.ratio_min);
}

TEST_CASE("compatibility diagram commutes as block operations") {
  // For m = n + k = i + j with k < i: projecting the padded element to i
  // blocks equals padding the projection to n - j blocks.
  for (int m = 2; m <= 5; ++m) {
    for (int n = 1; n < m; ++n) {
      const int k = m - n;
      for (int i = k + 1; i < m; ++i) {
        const int j = m - i;
        if (n - j < 1) continue;
        const DerivedElement e = random_elements(n, 4, 1, 31 * m + 7 * n + i)[0];
        const DerivedElement lhs = pi(iota(e, m), i);
        const DerivedElement rhs = iota(pi(e, n - j), i);
        CHECK(lhs.arity() == rhs.arity());
        for (int b = 0; b < lhs.arity(); ++b) {
          CHECK(max_abs(lhs.block(b) - rhs.block(b)) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("pushout maps compose to zero and are exact in the middle") {
  const DerivedElement a(std::vector<FiniteVector>{FiniteVector::unit(4, 0),
                                                   FiniteVector::unit(4, 1)});
  const PushoutImage img = pushout_forward(a);
  CHECK(img.padded.arity() == 3);
  CHECK(max_abs(img.padded.block(0) - FiniteVector::unit(4, 0)) == 0.0);
  CHECK(max_abs(img.padded.block(1) - FiniteVector::unit(4, 1)) == 0.0);
  CHECK(is_zero(img.padded.block(2)));
  CHECK(max_abs(img.bottom - FiniteVector::unit(4, 1)) == 0.0);

  for (int trial = 0; trial < 50; ++trial) {
    const DerivedElement sample = random_elements(2, 4, 1, 600 + trial)[0];
    const PushoutImage fwd = pushout_forward(sample);
    const DerivedElement z = pushout_comap(fwd.padded, fwd.bottom);
    CHECK(is_zero(z));
  }

  const PushoutReport rep = pushout_check(4);
  CHECK(rep.composition_zero);
  CHECK(rep.forward_rank == 8);
  CHECK(rep.comap_kernel_dim == 8);
  CHECK(rep.rank_union == 8);
  CHECK(rep.middle_exact);

  CHECK_THROWS_AS(pushout_comap(DerivedElement::zeros(3, 4), FiniteVector::zeros(5)),
                  std::invalid_argument);
}
