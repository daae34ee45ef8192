#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "mvx/tensor.hpp"

namespace mvx {

inline constexpr double kLogVarMin = -20.0;
inline constexpr double kLogVarMax = 20.0;

/// Diagonal Gaussian over [batch×d].
struct GaussianParams {
  Tensor mean;
  Tensor log_var;

  std::size_t batch() const { return mean.rows(); }
  std::size_t dim() const { return mean.cols(); }
  /// exp(log_var) with log_var clamped to [kLogVarMin, kLogVarMax].
  Tensor variance() const;
  GaussianParams detach() const { return {mean.detach(), log_var.detach()}; }
};

/// N(0, I) with the given shape; constants, no gradient.
GaussianParams standard_normal(std::size_t batch, std::size_t dim);
/// Throws DimensionError when mean and log_var shapes differ.
void check_gaussian(const GaussianParams& p, std::string_view where);

/// z = mean + exp(0.5·log_var)·eps.
Tensor rsample(const GaussianParams& p, const Tensor& eps);
/// log N(z; mean, var) summed over features -> [batch].
Tensor gaussian_log_prob(const GaussianParams& p, const Tensor& z);

enum class LikelihoodKind { Normal, Bernoulli, Laplace, Categorical, Default };

LikelihoodKind parse_likelihood_kind(std::string_view name);
std::string_view likelihood_kind_name(LikelihoodKind kind);

/// Decoder output distribution. `params` holds the mean for Normal, Laplace
/// and Default, and logits for Bernoulli and Categorical.
struct Likelihood {
  LikelihoodKind kind = LikelihoodKind::Default;
  Tensor params;
  double scale = 1.0;

  /// Expected value: the mean, sigmoid(logits) or softmax(logits).
  Tensor mean() const;
};

/// Per-sample log-likelihood summed over features -> [batch].
/// Bernoulli targets outside [0, 1] (and negative Categorical targets) raise DomainError.
Tensor log_prob(const Likelihood& l, const Tensor& x);

/// KL(q || p) per sample -> [batch].
Tensor kl_normal(const GaussianParams& q, const GaussianParams& p);

/// KL of the dropout posterior N(μ, αμ²) to the log-uniform prior, summed
/// over dimensions -> [batch]. `alpha` is [batch×d], [d] or [1×d].
Tensor kl_sparse(const GaussianParams& p, const Tensor& alpha);
/// Same as kl_sparse, parameterized by ln α (no positivity check needed).
Tensor kl_sparse_log_alpha(std::size_t batch, const Tensor& log_alpha);
/// Per-dimension approximation for a single α > 0.
double kl_log_uniform_approx(double alpha);

}  // namespace mvx
