#pragma once

#include <functional>
#include <vector>

#include "twistlab/derivations.hpp"
#include "twistlab/linalg.hpp"

namespace twistlab {

// A quasinorm value together with its per-level summands (the value is
// their sum, in recursion order: deepest residual first, ||x_0||_2 last).
struct QuasinormValue {
  double value = 0.0;
  std::vector<double> decomposition;
};

// Z^(n) quasinorm by the recursion Z^(n) = Z^(n-1) +_{Omega_{1,n-1}} l_2:
//   n = 1: ||x_0||_2
//   n > 1: ||(x_{n-1},...,x_1) - omega_1n(x_0, n-1)||_{Z^(n-1)} + ||x_0||_2.
QuasinormValue zn_quasinorm(const DerivedElement& e);

// Derivation handle: maps an arity-k element to an arity-n top.
using DerivationMap = std::function<DerivedElement(const DerivedElement&)>;

// ||top - omega(bottom)||_{Z^(n)} + ||bottom||_{Z^(k)}. Throws if omega
// does not return the top's arity.
QuasinormValue twisted_quasinorm(const DerivedElement& top,
                                 const DerivedElement& bottom,
                                 const DerivationMap& omega);

// Left inclusion: pads m - arity zero blocks on the right (low orders).
DerivedElement iota(const DerivedElement& e, int m);

// Right projection: keeps the k bottom blocks.
DerivedElement pi(const DerivedElement& e, int k);

struct ExactnessReport {
  int n = 0, k = 0, dim = 0;
  bool composition_zero = false;   // pi_{n+k,k} ∘ iota_{n,n+k} == 0 exactly
  int rank_embedding = 0;          // rank of iota on the section
  int kernel_dim = 0;              // nullity of pi on the section
  int rank_union = 0;              // rank [image iota | kernel pi]
  bool kernel_image_match = false; // the two subspaces coincide
  double ratio_min = 0.0;          // min/max of ||iota(e)|| / ||e|| over probes
  double ratio_max = 0.0;
  int probe_count = 0;
};

// Algebraic exactness of 0 -> Z^(n) -> Z^(n+k) -> Z^(k) -> 0 on a dim-d
// section (rank identities on the coordinate maps), plus sampled
// quasinorm ratios of the embedding over the probes (arity n).
ExactnessReport exactness_report(int n, int k,
                                 const std::vector<DerivedElement>& probes);

// Diagonal push-out data built from iota_{2,3} x pi_{2,1} against
// pi_{3,2} - iota_{1,2}.
struct PushoutImage {
  DerivedElement padded;  // iota_{2,3}(a), arity 3
  FiniteVector bottom;    // pi_{2,1}(a)
};
PushoutImage pushout_forward(const DerivedElement& a);
DerivedElement pushout_comap(const DerivedElement& b, const FiniteVector& c);

struct PushoutReport {
  int dim = 0;
  bool composition_zero = false;
  int forward_rank = 0;
  int comap_kernel_dim = 0;
  int rank_union = 0;
  bool middle_exact = false;
};
PushoutReport pushout_check(int dim);

// Coordinate matrices of the block maps on a dim-d section (complex
// coordinates counted once; the maps never mix real and imaginary parts).
RealMatrix iota_matrix(int n, int m, int dim);
RealMatrix pi_matrix(int m, int k, int dim);

}  // namespace twistlab
