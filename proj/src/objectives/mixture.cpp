#include <cmath>
#include <string>

#include "common.hpp"
#include "mvx/objectives.hpp"
#include "mvx/ops.hpp"
#include "mvx/pooling.hpp"

namespace mvx {

using namespace obj;

namespace {

std::string sample_key(const std::string& base, std::size_t k) { return base + ".k" + std::to_string(k); }

// −[logsumexp_k log w_k − log K], averaged over the batch.
Tensor iwae_value(const std::vector<Tensor>& log_w) {
  const double K = static_cast<double>(log_w.size());
  return -mean(logsumexp(stack_cols(log_w), 1) - std::log(K));
}

Tensor log_lik(const Decoder& d, const Tensor& z, const Tensor& x) { return log_prob(decode(d, z), x); }

}  // namespace

LossBreakdown mmvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::mmVAE}, "mmVAE");
  check_batch(s, b, "mmVAE");
  const std::size_t M = s.n_views();
  const std::size_t K = s.spec.hyper.K;
  const auto posts = shared_posteriors(s, b);
  const ExpertSet mixture{posts, {}, false};
  const GaussianParams prior = standard_normal(b.size(), s.spec.z_dim);

  LossBuilder out("mmVAE");
  for (std::size_t m = 0; m < M; ++m) {
    std::vector<Tensor> log_w;
    for (std::size_t k = 0; k < K; ++k) {
      const Tensor z = draw(noise, sample_key(key("z", m), k), posts[m]);
      std::vector<Tensor> parts{gaussian_log_prob(prior, z), -moe_log_prob(mixture, z)};
      for (std::size_t n = 0; n < M; ++n) parts.push_back(log_lik(s.decoders[n], z, b.views[n]));
      log_w.push_back(add_n(parts));
    }
    out.add(key("iwae", m), 1.0 / static_cast<double>(M), iwae_value(log_w));
  }
  return out.finish();
}

LossBreakdown mmvaeplus_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::mmVAEPlus}, "mmVAEPlus");
  check_batch(s, b, "mmVAEPlus");
  const std::size_t M = s.n_views();
  const std::size_t K = s.spec.hyper.K;
  const std::size_t n_rows = b.size();
  const auto shared = shared_posteriors(s, b);
  const auto priv = private_posteriors(s, b);
  const ExpertSet mixture{shared, {}, false};
  const GaussianParams z_prior = standard_normal(n_rows, s.spec.z_dim);
  const GaussianParams h_prior = standard_normal(n_rows, s.spec.s_dim);

  LossBuilder out("mmVAEPlus");
  for (std::size_t m = 0; m < M; ++m) {
    std::vector<Tensor> log_w;
    for (std::size_t k = 0; k < K; ++k) {
      const Tensor z = draw(noise, sample_key(key("z", m), k), shared[m]);
      const Tensor h = draw(noise, sample_key(key("h", m), k), priv[m]);
      std::vector<Tensor> parts{
          log_lik(s.decoders[m], concat_cols(std::vector<Tensor>{z, h}), b.views[m]),
          gaussian_log_prob(z_prior, z),
          gaussian_log_prob(h_prior, h),
          -moe_log_prob(mixture, z),
          -gaussian_log_prob(priv[m], h),
      };
      for (std::size_t n = 0; n < M; ++n) {
        if (n == m) continue;
        // Auxiliary prior N(0, diag(exp(aux_log_var[n]))), independent of the batch.
        const Tensor eps = noise.normal(sample_key(key("htilde", m, n), k), n_rows, s.spec.s_dim);
        const Tensor h_tilde = eps * exp(0.5 * row(s.aux_log_var, n));
        parts.push_back(log_lik(s.decoders[n], concat_cols(std::vector<Tensor>{z, h_tilde}), b.views[n]));
      }
      log_w.push_back(add_n(parts));
    }
    out.add(key("iwae", m), 1.0 / static_cast<double>(M), iwae_value(log_w));
  }
  return out.finish();
}

}  // namespace mvx
