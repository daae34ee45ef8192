#include "common.hpp"
#include "mvx/objectives.hpp"
#include "mvx/ops.hpp"
#include "mvx/pooling.hpp"

namespace mvx {

using namespace obj;

namespace {

Tensor join(const Tensor& z, const Tensor& h) { return concat_cols(std::vector<Tensor>{z, h}); }

}  // namespace

LossBreakdown dvcca_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::DVCCA}, "DVCCA");
  check_batch(s, b, "DVCCA");
  const std::size_t M = s.n_views();
  const double beta = s.spec.hyper.beta;
  const GaussianParams q = encode_gaussian(s.encoders[0], b.views[0]);
  const Tensor z = draw(noise, "z", q);

  LossBuilder out("DVCCA");
  if (!s.spec.has_private()) {
    for (std::size_t m = 0; m < M; ++m) out.add(key("recon", m), 1.0, nll(s.decoders[m], z, b.views[m]));
    out.add("kl", beta, prior_kl(q));
    return out.finish();
  }
  const auto priv = private_posteriors(s, b);
  for (std::size_t m = 0; m < M; ++m) {
    const Tensor h = draw(noise, key("h", m), priv[m]);
    out.add(key("recon", m), 1.0, nll(s.decoders[m], join(z, h), b.views[m]));
  }
  out.add("kl", beta, prior_kl(q));
  for (std::size_t m = 0; m < M; ++m) out.add(key("kl_h", m), beta, prior_kl(priv[m]));
  return out.finish();
}

LossBreakdown dmvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::DMVAE}, "DMVAE");
  check_batch(s, b, "DMVAE");
  const std::size_t M = s.n_views();
  const double beta = s.spec.hyper.beta;
  const auto shared = shared_posteriors(s, b);
  const auto priv = private_posteriors(s, b);
  const GaussianParams joint = poe({shared, {}, true});

  const Tensor z = draw(noise, "z", joint);
  std::vector<Tensor> zs, hs, kl_h, kl_z;
  for (std::size_t n = 0; n < M; ++n) {
    zs.push_back(draw(noise, key("z", n), shared[n]));
    kl_z.push_back(prior_kl(shared[n]));
  }
  for (std::size_t m = 0; m < M; ++m) {
    hs.push_back(draw(noise, key("h", m), priv[m]));
    kl_h.push_back(prior_kl(priv[m]));
  }
  const Tensor kl_joint = prior_kl(joint);

  LossBuilder out("DMVAE");
  for (std::size_t m = 0; m < M; ++m) {
    const std::string g = key("joint", m) + ".";
    out.add(g + "recon", lambda_of(s.spec.hyper, m), nll(s.decoders[m], join(z, hs[m]), b.views[m]));
    out.add(g + "kl_h", beta, kl_h[m]);
    out.add(g + "kl_z", beta, kl_joint);
  }
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t n = 0; n < M; ++n) {
      const std::string g = key("pair", m, n) + ".";
      out.add(g + "recon", lambda_of(s.spec.hyper, m), nll(s.decoders[m], join(zs[n], hs[m]), b.views[m]));
      out.add(g + "kl_h", beta, kl_h[m]);
      out.add(g + "kl_z", beta, kl_z[n]);
    }
  }
  return out.finish();
}

}  // namespace mvx
