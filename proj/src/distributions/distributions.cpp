#include "mvx/distributions.hpp"

#include <cmath>
#include <numbers>

#include "mvx/error.hpp"
#include "mvx/ops.hpp"

namespace mvx {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5·ln(2π)

// Sparse KL approximation constants.
constexpr double kK1 = 0.63576;
constexpr double kK2 = 1.87320;
constexpr double kK3 = 1.48695;

Tensor clamped(const Tensor& log_var) { return clamp(log_var, kLogVarMin, kLogVarMax); }

void require_same(const Tensor& a, const Tensor& b, std::string_view where) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(where) + ": shape " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
}

Tensor row_sum(const Tensor& a) { return a.rank() == 2 ? sum(a, 1) : a; }

}  // namespace

Tensor GaussianParams::variance() const { return exp(clamped(log_var)); }

GaussianParams standard_normal(std::size_t batch, std::size_t dim) {
  return {Tensor(Shape{batch, dim}, 0.0), Tensor(Shape{batch, dim}, 0.0)};
}

void check_gaussian(const GaussianParams& p, std::string_view where) {
  if (!p.mean.defined() || !p.log_var.defined()) throw ContractError(std::string(where) + ": undefined Gaussian");
  require_same(p.mean, p.log_var, where);
}

Tensor rsample(const GaussianParams& p, const Tensor& eps) {
  check_gaussian(p, "rsample");
  require_same(p.mean, eps, "rsample");
  return p.mean + exp(0.5 * clamped(p.log_var)) * eps;
}

Tensor gaussian_log_prob(const GaussianParams& p, const Tensor& z) {
  check_gaussian(p, "gaussian_log_prob");
  require_same(p.mean, z, "gaussian_log_prob");
  const Tensor lv = clamped(p.log_var);
  const Tensor per = -0.5 * (square(z - p.mean) * exp(-lv) + lv) - kHalfLog2Pi;
  return row_sum(per);
}

LikelihoodKind parse_likelihood_kind(std::string_view name) {
  if (name == "Normal") return LikelihoodKind::Normal;
  if (name == "Bernoulli") return LikelihoodKind::Bernoulli;
  if (name == "Laplace") return LikelihoodKind::Laplace;
  if (name == "Categorical") return LikelihoodKind::Categorical;
  if (name == "Default") return LikelihoodKind::Default;
  throw DomainError("unknown likelihood '" + std::string(name) + "'");
}

std::string_view likelihood_kind_name(LikelihoodKind kind) {
  switch (kind) {
    case LikelihoodKind::Normal: return "Normal";
    case LikelihoodKind::Bernoulli: return "Bernoulli";
    case LikelihoodKind::Laplace: return "Laplace";
    case LikelihoodKind::Categorical: return "Categorical";
    case LikelihoodKind::Default: return "Default";
  }
  return "Default";
}

Tensor Likelihood::mean() const {
  switch (kind) {
    case LikelihoodKind::Bernoulli: return sigmoid(params);
    case LikelihoodKind::Categorical: return softmax(params, params.rank() - 1);
    default: return params;
  }
}

Tensor log_prob(const Likelihood& l, const Tensor& x) {
  require_same(l.params, x, "log_prob");
  if (l.scale <= 0) throw DomainError("log_prob: likelihood scale must be positive");
  switch (l.kind) {
    case LikelihoodKind::Normal: {
      const double s = l.scale;
      return row_sum(-0.5 * square((x - l.params) / s) - (std::log(s) + kHalfLog2Pi));
    }
    case LikelihoodKind::Laplace: {
      const double b = l.scale;
      return row_sum(-abs(x - l.params) / b - std::log(2.0 * b));
    }
    case LikelihoodKind::Bernoulli: {
      for (double v : x.values()) {
        if (v < 0.0 || v > 1.0) throw DomainError("log_prob: Bernoulli target outside [0, 1]");
      }
      // x·l − softplus(l)
      return row_sum(x * l.params - softplus(l.params));
    }
    case LikelihoodKind::Categorical: {
      for (double v : x.values()) {
        if (v < 0.0) throw DomainError("log_prob: Categorical target is negative");
      }
      return row_sum(x * log_softmax(l.params, l.params.rank() - 1));
    }
    case LikelihoodKind::Default: return row_sum(-square(x - l.params));
  }
  throw ContractError("log_prob: unknown likelihood");
}

Tensor kl_normal(const GaussianParams& q, const GaussianParams& p) {
  check_gaussian(q, "kl_normal");
  check_gaussian(p, "kl_normal");
  require_same(q.mean, p.mean, "kl_normal");
  const Tensor lq = clamped(q.log_var);
  const Tensor lp = clamped(p.log_var);
  const Tensor per = 0.5 * (exp(lq - lp) + square(q.mean - p.mean) * exp(-lp) - 1.0 + lp - lq);
  return row_sum(per);
}

Tensor kl_sparse_log_alpha(std::size_t batch, const Tensor& log_alpha) {
  // k1 − k1·σ(k2 + k3·ln α) + 0.5·ln(1 + 1/α)
  const Tensor per = kK1 - kK1 * sigmoid(kK2 + kK3 * log_alpha) + 0.5 * softplus(-log_alpha);
  if (per.rank() == 2 && per.rows() == batch) return sum(per, 1);
  if (per.rank() == 2 && per.rows() != 1) {
    throw DimensionError("kl_sparse: alpha " + shape_string(per.shape()) + " does not match batch " +
                         std::to_string(batch));
  }
  return Tensor(Shape{batch}, 0.0) + sum(per);
}

Tensor kl_sparse(const GaussianParams& p, const Tensor& alpha) {
  check_gaussian(p, "kl_sparse");
  for (double a : alpha.values()) {
    if (!(a > 0.0)) throw DomainError("kl_sparse: alpha must be positive");
  }
  const bool full = alpha.rank() == 2 && alpha.rows() == p.batch() && p.batch() != 1;
  const std::size_t d = full ? alpha.cols() : alpha.numel();
  if (d != p.dim()) throw DimensionError("kl_sparse: alpha width does not match latent dim");
  return kl_sparse_log_alpha(p.batch(), log(alpha));
}

double kl_log_uniform_approx(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("kl_sparse: alpha must be positive");
  const double la = std::log(alpha);
  const double s = 1.0 / (1.0 + std::exp(-(kK2 + kK3 * la)));
  return kK1 - kK1 * s + 0.5 * std::log1p(1.0 / alpha);
}

}  // namespace mvx
