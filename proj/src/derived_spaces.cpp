#include "twistlab/derived_spaces.hpp"

#include <cmath>
#include <limits>

namespace twistlab {

QuasinormValue zn_quasinorm(const DerivedElement& e) {
  const int n = e.arity();
  if (n == 1) {
    QuasinormValue q;
    q.value = l2_norm(e.block(0));
    q.decomposition = {q.value};
    return q;
  }
  const FiniteVector& bottom = e.from_bottom(0);
  const DerivedElement correction = omega_1n(bottom, n - 1);
  std::vector<FiniteVector> top;
  top.reserve(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n - 1; ++i) top.push_back(e.block(i) - correction.block(i));

  QuasinormValue q = zn_quasinorm(DerivedElement(std::move(top)));
  const double bottom_norm = l2_norm(bottom);
  q.value += bottom_norm;
  q.decomposition.push_back(bottom_norm);
  return q;
}

QuasinormValue twisted_quasinorm(const DerivedElement& top,
                                 const DerivedElement& bottom,
                                 const DerivationMap& omega) {
  const DerivedElement image = omega(bottom);
  if (image.arity() != top.arity() || image.dim() != top.dim()) {
    throw std::invalid_argument(
        "twisted_quasinorm: derivation arity does not match the top part");
  }
  QuasinormValue q = zn_quasinorm(top - image);
  const QuasinormValue qb = zn_quasinorm(bottom);
  q.value += qb.value;
  q.decomposition.insert(q.decomposition.end(), qb.decomposition.begin(),
                         qb.decomposition.end());
  return q;
}

DerivedElement iota(const DerivedElement& e, int m) {
  if (m <= e.arity()) throw std::invalid_argument("iota: need m > arity");
  std::vector<FiniteVector> blocks = e.blocks();
  for (int i = e.arity(); i < m; ++i) blocks.push_back(FiniteVector::zeros(e.dim()));
  return DerivedElement(std::move(blocks));
}

DerivedElement pi(const DerivedElement& e, int k) {
  if (k >= e.arity() || k < 1) throw std::invalid_argument("pi: need 1 <= k < arity");
  std::vector<FiniteVector> blocks(e.blocks().end() - k, e.blocks().end());
  return DerivedElement(std::move(blocks));
}

RealMatrix iota_matrix(int n, int m, int dim) {
  RealMatrix out(m * dim, n * dim);
  for (int i = 0; i < n * dim; ++i) out(i, i) = 1.0;
  return out;
}

RealMatrix pi_matrix(int m, int k, int dim) {
  RealMatrix out(k * dim, m * dim);
  const int offset = (m - k) * dim;
  for (int i = 0; i < k * dim; ++i) out(i, offset + i) = 1.0;
  return out;
}

ExactnessReport exactness_report(int n, int k,
                                 const std::vector<DerivedElement>& probes) {
  if (n < 1 || k < 1) throw std::invalid_argument("exactness_report: need n, k >= 1");
  int dim = 1;
  if (!probes.empty()) dim = probes.front().dim();

  ExactnessReport rep;
  rep.n = n;
  rep.k = k;
  rep.dim = dim;
  rep.probe_count = static_cast<int>(probes.size());

  const int m = n + k;
  const RealMatrix mi = iota_matrix(n, m, dim);
  const RealMatrix mp = pi_matrix(m, k, dim);

  const RealMatrix comp = matmul(mp, mi);
  rep.composition_zero = true;
  for (double v : comp.a) {
    if (v != 0.0) rep.composition_zero = false;
  }

  rep.rank_embedding = rank(mi);
  const RealMatrix kernel = null_space(mp);
  rep.kernel_dim = kernel.cols;
  rep.rank_union = rank(hcat(mi, kernel));
  rep.kernel_image_match = rep.composition_zero &&
                           rep.rank_embedding == rep.kernel_dim &&
                           rep.rank_union == rep.rank_embedding;

  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = 0.0;
  for (const DerivedElement& e : probes) {
    if (e.arity() != n) {
      throw std::invalid_argument("exactness_report: probes must have arity n");
    }
    const double base = zn_quasinorm(e).value;
    if (base == 0.0) continue;
    const double padded = zn_quasinorm(iota(e, m)).value;
    const double ratio = padded / base;
    rep.ratio_min = std::min(rep.ratio_min, ratio);
    rep.ratio_max = std::max(rep.ratio_max, ratio);
  }
  if (!(rep.ratio_min <= rep.ratio_max)) {
    rep.ratio_min = rep.ratio_max = 0.0;  // no nonzero probes
  }
  return rep;
}

PushoutImage pushout_forward(const DerivedElement& a) {
  if (a.arity() != 2) throw std::invalid_argument("pushout_forward: arity must be 2");
  return PushoutImage{iota(a, 3), a.from_bottom(0)};
}

DerivedElement pushout_comap(const DerivedElement& b, const FiniteVector& c) {
  if (b.arity() != 3) throw std::invalid_argument("pushout_comap: arity must be 3");
  if (b.dim() != c.dim()) throw std::invalid_argument("pushout_comap: dimension mismatch");
  const DerivedElement embedded =
      iota(DerivedElement(std::vector<FiniteVector>{c}), 2);
  return pi(b, 2) - embedded;
}

PushoutReport pushout_check(int dim) {
  if (dim < 1) throw std::invalid_argument("pushout_check: dim must be >= 1");
  PushoutReport rep;
  rep.dim = dim;

  // Forward map W^2 -> W^3 x W^1 and co-map W^3 x W^1 -> W^2 as coordinate
  // matrices on the section.
  RealMatrix fwd(4 * dim, 2 * dim);
  for (int i = 0; i < 2 * dim; ++i) fwd(i, i) = 1.0;          // iota_{2,3}
  for (int i = 0; i < dim; ++i) fwd(3 * dim + i, dim + i) = 1.0;  // pi_{2,1}

  RealMatrix co(2 * dim, 4 * dim);
  for (int i = 0; i < 2 * dim; ++i) co(i, dim + i) = 1.0;     // pi_{3,2}
  for (int i = 0; i < dim; ++i) co(i, 3 * dim + i) -= 1.0;    // minus iota_{1,2}

  const RealMatrix comp = matmul(co, fwd);
  rep.composition_zero = true;
  for (double v : comp.a) {
    if (v != 0.0) rep.composition_zero = false;
  }

  rep.forward_rank = rank(fwd);
  const RealMatrix kernel = null_space(co);
  rep.comap_kernel_dim = kernel.cols;
  rep.rank_union = rank(hcat(fwd, kernel));
  rep.middle_exact = rep.composition_zero &&
                     rep.forward_rank == rep.comap_kernel_dim &&
                     rep.rank_union == rep.forward_rank;
  return rep;
}

}  // namespace twistlab
