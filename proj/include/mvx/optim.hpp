#pragma once

#include <cstddef>
#include <vector>

#include "mvx/tensor.hpp"

namespace mvx {

/// Adam over a fixed parameter list. Parameters without a gradient are
/// treated as having a zero gradient.
class Adam {
 public:
  Adam() = default;
  Adam(std::vector<Tensor> params, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void zero_grad();
  void step();
  /// Projects every parameter onto [−c, c] (WGAN weight clipping).
  void clip(double c);

  const std::vector<Tensor>& params() const { return params_; }
  std::size_t steps() const { return t_; }
  double learning_rate() const { return lr_; }

  /// Moment buffers, parameter-aligned; exposed for checkpoints.
  std::vector<std::vector<double>>& first_moments() { return m_; }
  std::vector<std::vector<double>>& second_moments() { return v_; }
  const std::vector<std::vector<double>>& first_moments() const { return m_; }
  const std::vector<std::vector<double>>& second_moments() const { return v_; }
  void set_steps(std::size_t t) { t_ = t; }

 private:
  std::vector<Tensor> params_;
  std::vector<std::vector<double>> m_, v_;
  double lr_ = 1e-3, b1_ = 0.9, b2_ = 0.999, eps_ = 1e-8;
  std::size_t t_ = 0;
};

}  // namespace mvx
