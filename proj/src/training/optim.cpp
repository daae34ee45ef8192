#include "mvx/optim.hpp"

#include <algorithm>
#include <cmath>

#include "mvx/error.hpp"

namespace mvx {

Adam::Adam(std::vector<Tensor> params, double lr, double beta1, double beta2, double eps)
    : params_(std::move(params)), lr_(lr), b1_(beta1), b2_(beta2), eps_(eps) {
  if (!(lr > 0)) throw DomainError("adam: learning rate must be > 0");
  for (const auto& p : params_) {
    m_.emplace_back(p.numel(), 0.0);
    v_.emplace_back(p.numel(), 0.0);
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

void Adam::step() {
  ++t_;
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto x = params_[i].mutable_values();
    const auto g = params_[i].grad();
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double gj = g.empty() ? 0.0 : g[j];
      m[j] = b1_ * m[j] + (1.0 - b1_) * gj;
      v[j] = b2_ * v[j] + (1.0 - b2_) * gj * gj;
      x[j] -= lr_ * (m[j] / c1) / (std::sqrt(v[j] / c2) + eps_);
    }
  }
}

void Adam::clip(double c) {
  for (auto& p : params_) {
    for (double& x : p.mutable_values()) x = std::clamp(x, -c, c);
  }
}

}  // namespace mvx
