#include "mvx/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mvx/error.hpp"
#include "mvx/ops.hpp"

namespace mvx {
namespace {

void check_experts(const ExpertSet& e, const char* where) {
  if (e.experts.empty()) throw ContractError(std::string(where) + ": no experts");
  const Shape& s = e.experts.front().mean.shape();
  for (const auto& g : e.experts) {
    check_gaussian(g, where);
    if (g.mean.shape() != s) throw DimensionError(std::string(where) + ": experts differ in shape");
  }
}

// Experts with the standard-normal prior appended when requested.
std::vector<GaussianParams> with_prior(const ExpertSet& e) {
  std::vector<GaussianParams> out = e.experts;
  if (e.include_prior_expert) out.push_back(standard_normal(e.experts[0].batch(), e.experts[0].dim()));
  return out;
}

// Shared path for poe/gpoe: precision-weighted means with optional per-expert row weights.
GaussianParams fuse(const std::vector<GaussianParams>& experts, const std::vector<Tensor>* weights) {
  std::vector<Tensor> precisions, numerators;
  precisions.reserve(experts.size());
  numerators.reserve(experts.size());
  for (std::size_t m = 0; m < experts.size(); ++m) {
    Tensor prec = exp(-clamp(experts[m].log_var, kLogVarMin, kLogVarMax));
    if (weights) prec = (*weights)[m] * prec;
    numerators.push_back(prec * experts[m].mean);
    precisions.push_back(prec);
  }
  const Tensor total = add_n(precisions);
  return {add_n(numerators) / total, -log(total)};
}

}  // namespace

bool SubsetIndex::contains(std::size_t m) const {
  return std::find(members.begin(), members.end(), m) != members.end();
}

GaussianParams poe(const ExpertSet& e) {
  check_experts(e, "poe");
  return fuse(with_prior(e), nullptr);
}

GaussianParams gpoe(const ExpertSet& e) {
  check_experts(e, "gpoe");
  const auto experts = with_prior(e);
  if (!e.weights.defined()) throw ContractError("gpoe: weights missing");
  const std::size_t d = experts[0].dim();
  if (e.weights.rank() != 2 || e.weights.rows() != experts.size() || e.weights.cols() != d) {
    throw DimensionError("gpoe: weights " + shape_string(e.weights.shape()) + ", expected [" +
                         std::to_string(experts.size()) + "x" + std::to_string(d) + "]");
  }
  for (double a : e.weights.values()) {
    if (!(a > 0.0)) throw DomainError("gpoe: weights must be positive");
  }
  std::vector<Tensor> rows;
  rows.reserve(experts.size());
  for (std::size_t m = 0; m < experts.size(); ++m) rows.push_back(row(e.weights, m));
  return fuse(experts, &rows);
}

GaussianParams moe_select(const ExpertSet& e, std::size_t which) {
  check_experts(e, "moe_select");
  if (which >= e.experts.size()) {
    throw DimensionError("moe_select: index " + std::to_string(which) + " out of range for " +
                         std::to_string(e.experts.size()) + " experts");
  }
  return e.experts[which];
}

Tensor moe_log_prob(const ExpertSet& e, const Tensor& z) {
  check_experts(e, "moe_log_prob");
  std::vector<Tensor> cols;
  cols.reserve(e.experts.size());
  for (const auto& g : e.experts) cols.push_back(gaussian_log_prob(g, z));
  return logsumexp(stack_cols(cols), 1) - std::log(static_cast<double>(e.experts.size()));
}

GaussianParams mean_pool(const ExpertSet& e) {
  check_experts(e, "mean_pool");
  std::vector<Tensor> means, vars;
  for (const auto& g : e.experts) {
    means.push_back(g.mean);
    vars.push_back(g.variance());
  }
  const double inv = 1.0 / static_cast<double>(e.experts.size());
  return {add_n(means) * inv, log(add_n(vars) * inv)};
}

std::vector<SubsetIndex> enumerate_subsets(std::size_t M) {
  if (M == 0) throw DomainError("enumerate_subsets: need at least one modality");
  if (M > 10) throw CapacityError("enumerate_subsets: M=" + std::to_string(M) + " exceeds the limit of 10");
  std::vector<SubsetIndex> out;
  for (std::size_t k = 1; k <= M; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      out.push_back({idx});
      // Advance to the next k-combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == M - k + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

Tensor js_divergence(std::span<const GaussianParams> components, std::span<const double> pi,
                     const GaussianParams& pooled) {
  if (components.empty()) throw ContractError("js_divergence: no components");
  if (components.size() != pi.size()) throw DimensionError("js_divergence: one weight per component required");
  double total = 0.0;
  for (double w : pi) {
    if (w < 0.0) throw ContractError("js_divergence: weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-6) throw ContractError("js_divergence: weights sum to " + std::to_string(total));
  std::vector<Tensor> parts;
  for (std::size_t m = 0; m < components.size(); ++m) parts.push_back(pi[m] * kl_normal(components[m], pooled));
  return add_n(parts);
}

}  // namespace mvx
