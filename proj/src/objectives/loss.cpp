#include "mvx/loss.hpp"

#include <cmath>

#include "mvx/error.hpp"
#include "mvx/ops.hpp"

namespace mvx {

const LossTerm* LossBreakdown::find(std::string_view name) const {
  for (const auto& t : terms) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

double LossBreakdown::recombine() const {
  double acc = 0.0;
  for (const auto& t : terms) acc += t.weight * t.value.item();
  return acc;
}

std::size_t LossBreakdown::count(std::string_view prefix) const {
  std::size_t n = 0;
  for (const auto& t : terms) {
    if (std::string_view(t.name).substr(0, prefix.size()) == prefix) ++n;
  }
  return n;
}

void LossBuilder::add(std::string name, double weight, const Tensor& value) {
  if (weight == 0.0) return;
  if (value.numel() != 1) throw ContractError(model_ + ": term '" + name + "' is not a scalar");
  if (!std::isfinite(value.item())) throw NumericError(model_ + ": non-finite loss term '" + name + "'");
  terms_.push_back({std::move(name), weight, value});
}

LossBreakdown LossBuilder::finish() {
  if (terms_.empty()) throw ContractError(model_ + ": objective has no terms");
  std::vector<Tensor> parts;
  parts.reserve(terms_.size());
  for (const auto& t : terms_) parts.push_back(t.weight == 1.0 ? t.value : t.weight * t.value);
  Tensor total = add_n(parts);
  if (!std::isfinite(total.item())) throw NumericError(model_ + ": non-finite total loss");
  return {std::move(terms_), total};
}

}  // namespace mvx
