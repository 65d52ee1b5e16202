#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twistlab/derivations.hpp"
#include "twistlab/rng.hpp"
#include "twistlab/seqcore.hpp"

namespace twistlab {

// A batch of probe vectors with its provenance.
struct ProbeSet {
  std::vector<FiniteVector> vectors;
  std::string label;
  std::uint64_t seed = 0;
};

// Complex Gaussian entries (independent N(0,1) real and imaginary parts).
FiniteVector gaussian_vector(int dim, const CounterRng& rng, std::uint64_t item);
// Real +-1 entries.
FiniteVector sign_vector(int dim, const CounterRng& rng, std::uint64_t item);
// Deterministic decay 2^{-j}: the degenerate flat-log regime's opposite.
FiniteVector dyadic_decay_vector(int dim);

Multiplier unimodular_multiplier(int dim, const CounterRng& rng, std::uint64_t item);
Multiplier sign_multiplier(int dim, const CounterRng& rng, std::uint64_t item);
// Random 0/1 mask, never empty.
Multiplier indicator_multiplier(int dim, const CounterRng& rng, std::uint64_t item);

// Mixed family cycling unit vectors, sign vectors, dyadic-decay vectors
// and Gaussian vectors: covers the degenerate (flat log weight) and
// generic regimes the derivation formulas distinguish.
ProbeSet mixed_probe_set(int dim, int count, std::uint64_t seed);

// Random derived elements with Gaussian blocks.
std::vector<DerivedElement> random_elements(int arity, int dim, int count,
                                            std::uint64_t seed);

// Normalized indicators of prefix-aligned dyadic blocks at every scale
// 1, 2, 4, ..., dim (dim a power of two): 2*dim - 1 vectors. Families at
// different dims nest after zero padding, which is what makes the
// splitting-defect monotonicity scan meaningful.
ProbeSet dyadic_indicator_family(int dim);

}  // namespace twistlab
