#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mvx/tensor.hpp"

namespace mvx {

/// Aligned per-view data matrices [n×D_m] plus optional labels.
struct MultiViewBatch {
  std::vector<Tensor> views;
  std::vector<std::uint32_t> labels;  // empty when unlabeled

  std::size_t n_views() const { return views.size(); }
  std::size_t size() const { return views.empty() ? 0 : views.front().rows(); }
  bool has_labels() const { return !labels.empty(); }
  std::vector<std::size_t> dims() const;

  /// Throws DimensionError when views disagree on sample count or labels mismatch.
  void validate() const;
  /// Rows `idx` of every view (and label), in that order.
  MultiViewBatch select(std::span<const std::size_t> idx) const;
};

}  // namespace mvx
