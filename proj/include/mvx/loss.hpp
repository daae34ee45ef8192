#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mvx/tensor.hpp"

namespace mvx {

/// One named component of an objective. `value` is stored as a positive
/// quantity (negative log-likelihood, KL, correlation, ...) and enters the
/// total as weight·value.
struct LossTerm {
  std::string name;
  double weight = 1.0;
  Tensor value;
};

/// Minimization target plus its audit trail.
struct LossBreakdown {
  std::vector<LossTerm> terms;
  Tensor total;

  const LossTerm* find(std::string_view name) const;
  /// Σ weight·value recomputed in double.
  double recombine() const;
  /// Terms whose name starts with `prefix`.
  std::size_t count(std::string_view prefix) const;
};

/// Accumulates terms. Zero-weight terms are skipped so structural reductions
/// (α=0, λ=0, ...) drop out of the breakdown; non-finite terms raise
/// NumericError naming the term.
class LossBuilder {
 public:
  explicit LossBuilder(std::string model) : model_(std::move(model)) {}
  void add(std::string name, double weight, const Tensor& value);
  LossBreakdown finish();

 private:
  std::string model_;
  std::vector<LossTerm> terms_;
};

}  // namespace mvx
