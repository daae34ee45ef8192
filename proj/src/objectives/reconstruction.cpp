#include "common.hpp"
#include "mvx/error.hpp"
#include "mvx/inference.hpp"
#include "mvx/linalg.hpp"
#include "mvx/objectives.hpp"
#include "mvx/ops.hpp"

namespace mvx {

using namespace obj;

LossBreakdown ae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource&) {
  check_batch(s, b, "AE");
  std::vector<Tensor> latents;
  for (std::size_t n = 0; n < s.n_views(); ++n) latents.push_back(encode_point(s.encoders[n], b.views[n]));
  LossBuilder out("AE");
  add_cross_recon(out, s, b, latents);
  return out.finish();
}

LossBreakdown dccae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource&) {
  require_kind(s, {ModelKind::DCCAE}, "DCCAE");
  check_batch(s, b, "DCCAE");
  const Tensor h1 = encode_point(s.encoders[0], b.views[0]);
  const Tensor h2 = encode_point(s.encoders[1], b.views[1]);
  LossBuilder out("DCCAE");
  out.add("corr", -1.0, cca_correlation(h1, h2, s.spec.hyper.ridge));
  const double lambda = lambda_of(s.spec.hyper, 0);
  out.add("recon[0]", lambda, nll(s.decoders[0], h1, b.views[0]));
  out.add("recon[1]", lambda, nll(s.decoders[1], h2, b.views[1]));
  return out.finish();
}

LossBreakdown mcvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::mcVAE}, "mcVAE");
  check_batch(s, b, "mcVAE");
  const std::size_t M = s.n_views();
  const auto posts = view_posteriors(s, b);
  const double beta = s.spec.hyper.beta;
  LossBuilder out("mcVAE");
  for (std::size_t m = 0; m < M; ++m) {
    const Tensor z = draw(noise, key("z", m), posts[m]);
    for (std::size_t n = 0; n < M; ++n) out.add(key("recon", n, m), 1.0, nll(s.decoders[n], z, b.views[n]));
    if (s.log_alpha.defined()) {
      out.add(key("kl", m), beta, mean(kl_sparse_log_alpha(b.size(), s.log_alpha)));
    } else {
      out.add(key("kl", m), beta, prior_kl(posts[m]));
    }
  }
  return out.finish();
}

}  // namespace mvx
