#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mvx/distributions.hpp"

namespace mvx {

/// Per-modality posteriors to be fused.
struct ExpertSet {
  std::vector<GaussianParams> experts;
  /// gPoE exponents, [K×d] with K = experts (+1 when the prior expert is included, last row).
  Tensor weights;
  bool include_prior_expert = false;
};

struct SubsetIndex {
  std::vector<std::size_t> members;

  bool contains(std::size_t m) const;
  friend bool operator==(const SubsetIndex&, const SubsetIndex&) = default;
};

/// Inverse-variance weighted product of experts.
GaussianParams poe(const ExpertSet& e);
/// Product of experts with per-dimension exponents; all-ones weights reproduce poe bitwise.
GaussianParams gpoe(const ExpertSet& e);
/// Component `which` of the uniform mixture.
GaussianParams moe_select(const ExpertSet& e, std::size_t which);
/// log[(1/M) Σ_m N(z; μ_m, σ_m²)] -> [batch].
Tensor moe_log_prob(const ExpertSet& e, const Tensor& z);
/// Mean of means and mean of variances.
GaussianParams mean_pool(const ExpertSet& e);

/// Non-empty subsets of {0..M-1}, ordered by size then lexicographically. M ≤ 10.
std::vector<SubsetIndex> enumerate_subsets(std::size_t M);

/// Σ_m π_m KL(q_m || pooled) -> [batch]. π must sum to 1 within 1e-6.
Tensor js_divergence(std::span<const GaussianParams> components, std::span<const double> pi,
                     const GaussianParams& pooled);

}  // namespace mvx
