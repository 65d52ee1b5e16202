#include "twistlab/probes.hpp"

namespace twistlab {

FiniteVector gaussian_vector(int dim, const CounterRng& rng, std::uint64_t item) {
  std::vector<Complex> e(static_cast<std::size_t>(dim));
  const std::uint64_t base = item * 2ull * static_cast<std::uint64_t>(dim);
  for (int j = 0; j < dim; ++j) {
    const std::uint64_t c = base + 2ull * static_cast<std::uint64_t>(j);
    e[static_cast<std::size_t>(j)] = Complex(rng.gaussian(c), rng.gaussian(c + 1));
  }
  return FiniteVector(std::move(e));
}

FiniteVector sign_vector(int dim, const CounterRng& rng, std::uint64_t item) {
  std::vector<Complex> e(static_cast<std::size_t>(dim));
  const std::uint64_t base = item * static_cast<std::uint64_t>(dim);
  for (int j = 0; j < dim; ++j) {
    e[static_cast<std::size_t>(j)] =
        Complex(rng.sign(base + static_cast<std::uint64_t>(j)), 0.0);
  }
  return FiniteVector(std::move(e));
}

FiniteVector dyadic_decay_vector(int dim) {
  std::vector<Complex> e(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    e[static_cast<std::size_t>(j)] = Complex(std::ldexp(1.0, -j), 0.0);
  }
  return FiniteVector(std::move(e));
}

Multiplier unimodular_multiplier(int dim, const CounterRng& rng, std::uint64_t item) {
  std::vector<Complex> e(static_cast<std::size_t>(dim));
  const std::uint64_t base = item * static_cast<std::uint64_t>(dim);
  for (int j = 0; j < dim; ++j) {
    e[static_cast<std::size_t>(j)] = rng.unimodular(base + static_cast<std::uint64_t>(j));
  }
  return make_multiplier(std::move(e));
}

Multiplier sign_multiplier(int dim, const CounterRng& rng, std::uint64_t item) {
  std::vector<Complex> e(static_cast<std::size_t>(dim));
  const std::uint64_t base = item * static_cast<std::uint64_t>(dim);
  for (int j = 0; j < dim; ++j) {
    e[static_cast<std::size_t>(j)] =
        Complex(rng.sign(base + static_cast<std::uint64_t>(j)), 0.0);
  }
  return make_multiplier(std::move(e));
}

Multiplier indicator_multiplier(int dim, const CounterRng& rng, std::uint64_t item) {
  std::vector<Complex> e(static_cast<std::size_t>(dim));
  const std::uint64_t base = item * static_cast<std::uint64_t>(dim);
  bool any = false;
  for (int j = 0; j < dim; ++j) {
    if (rng.raw(base + static_cast<std::uint64_t>(j)) & 1ull) {
      e[static_cast<std::size_t>(j)] = Complex(1.0, 0.0);
      any = true;
    }
  }
  if (!any) e[0] = Complex(1.0, 0.0);
  return make_multiplier(std::move(e));
}

ProbeSet mixed_probe_set(int dim, int count, std::uint64_t seed) {
  if (dim < 1 || count < 1) {
    throw std::invalid_argument("mixed_probe_set: dim and count must be >= 1");
  }
  const CounterRng rng(seed, 0x70726f6265ull);  // "probe"
  ProbeSet set;
  set.label = "mixed";
  set.seed = seed;
  set.vectors.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    switch (i % 4) {
      case 0:
        set.vectors.push_back(FiniteVector::unit(dim, i % dim));
        break;
      case 1:
        set.vectors.push_back(sign_vector(dim, rng, static_cast<std::uint64_t>(i)));
        break;
      case 2:
        set.vectors.push_back(dyadic_decay_vector(dim));
        break;
      default:
        set.vectors.push_back(gaussian_vector(dim, rng, static_cast<std::uint64_t>(i)));
        break;
    }
  }
  return set;
}

std::vector<DerivedElement> random_elements(int arity, int dim, int count,
                                            std::uint64_t seed) {
  const CounterRng rng(seed, 0x656c656dull);  // "elem"
  std::vector<DerivedElement> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::vector<FiniteVector> blocks;
    blocks.reserve(static_cast<std::size_t>(arity));
    for (int b = 0; b < arity; ++b) {
      blocks.push_back(gaussian_vector(
          dim, rng, static_cast<std::uint64_t>(i) * 64ull + static_cast<std::uint64_t>(b)));
    }
    out.emplace_back(std::move(blocks));
  }
  return out;
}

ProbeSet dyadic_indicator_family(int dim) {
  if (dim < 1 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("dyadic_indicator_family: dim must be a power of two");
  }
  ProbeSet set;
  set.label = "dyadic-" + std::to_string(dim);
  for (int scale = 1; scale <= dim; scale *= 2) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(scale));
    for (int block = 0; block < dim / scale; ++block) {
      std::vector<Complex> e(static_cast<std::size_t>(dim));
      for (int j = block * scale; j < (block + 1) * scale; ++j) {
        e[static_cast<std::size_t>(j)] = Complex(inv, 0.0);
      }
      set.vectors.emplace_back(std::move(e));
    }
  }
  return set;
}

}  // namespace twistlab
