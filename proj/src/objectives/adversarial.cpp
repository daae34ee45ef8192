#include <string>

#include "common.hpp"
#include "mvx/error.hpp"
#include "mvx/objectives.hpp"
#include "mvx/ops.hpp"

namespace mvx {

using namespace obj;

namespace {

struct Encoded {
  std::vector<Tensor> latents;
  std::vector<Tensor> prior;
  LossBreakdown reconstruction;
};

Encoded encode_views(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise, const char* model) {
  check_batch(s, b, model);
  if (!s.discriminator) throw ContractError(std::string(model) + ": model has no discriminator");
  Encoded e;
  for (std::size_t m = 0; m < s.n_views(); ++m) {
    e.latents.push_back(encode_point(s.encoders[m], b.views[m]));
    e.prior.push_back(noise.normal(key("prior", m), b.size(), s.spec.z_dim));
  }
  LossBuilder rec(model);
  add_cross_recon(rec, s, b, e.latents);
  e.reconstruction = rec.finish();
  return e;
}

}  // namespace

AdversarialLosses maae_losses(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::mAAE}, "mAAE");
  Encoded e = encode_views(s, b, noise, "mAAE");
  const Discriminator& d = *s.discriminator;
  const std::size_t M = s.n_views();
  const double inv_m = 1.0 / static_cast<double>(M);

  std::vector<Tensor> disc, gen;
  std::size_t correct = 0, total = 0;
  for (std::size_t m = 0; m < M; ++m) {
    const Tensor l_prior = d.logits(e.prior[m]);
    const Tensor l_fake = d.logits(e.latents[m].detach());
    // −[log D(prior) + log(1 − D(z))]
    disc.push_back(mean(softplus(-l_prior) + softplus(l_fake)));
    const Tensor l_gen = d.logits(e.latents[m]);
    gen.push_back(s.spec.hyper.non_saturating ? mean(softplus(-l_gen)) : -mean(softplus(l_gen)));
    for (double v : l_prior.values()) correct += v > 0 ? 1 : 0;
    for (double v : l_fake.values()) correct += v < 0 ? 1 : 0;
    total += l_prior.numel() + l_fake.numel();
  }

  AdversarialLosses out;
  out.discriminator = add_n(disc) * inv_m;
  out.generator = add_n(gen) * inv_m;
  out.objective = e.reconstruction.total.item() - out.discriminator.item();
  out.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  out.reconstruction = std::move(e.reconstruction);
  return out;
}

AdversarialLosses mwae_losses(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::mWAE}, "mWAE");
  Encoded e = encode_views(s, b, noise, "mWAE");
  const Discriminator& c = *s.discriminator;
  const std::size_t M = s.n_views();
  const double inv_m = 1.0 / static_cast<double>(M);

  std::vector<Tensor> critic, gen;
  std::size_t correct = 0, total = 0;
  for (std::size_t m = 0; m < M; ++m) {
    const Tensor c_prior = c.logits(e.prior[m]);
    const Tensor c_fake = c.logits(e.latents[m].detach());
    critic.push_back(mean(c_fake) - mean(c_prior));
    gen.push_back(-mean(c.logits(e.latents[m])));
    // Scores are unbounded; split at the midpoint of the two means.
    const double t = 0.5 * (mean(c_prior).item() + mean(c_fake).item());
    for (double v : c_prior.values()) correct += v > t ? 1 : 0;
    for (double v : c_fake.values()) correct += v < t ? 1 : 0;
    total += c_prior.numel() + c_fake.numel();
  }

  AdversarialLosses out;
  out.discriminator = add_n(critic) * inv_m;
  out.generator = add_n(gen) * inv_m;
  out.objective = e.reconstruction.total.item() + out.discriminator.item() + out.generator.item();
  out.accuracy = static_cast<double>(correct) / static_cast<double>(total);
  out.reconstruction = std::move(e.reconstruction);
  return out;
}

AdversarialLosses adversarial_losses(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  switch (s.kind()) {
    case ModelKind::mAAE: return maae_losses(s, b, noise);
    case ModelKind::mWAE: return mwae_losses(s, b, noise);
    default: throw ContractError("adversarial_losses: " + std::string(model_name(s.kind())) + " is not adversarial");
  }
}

LossBreakdown model_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  switch (s.kind()) {
    case ModelKind::AE: return ae_loss(s, b, noise);
    case ModelKind::JMVAE: return jmvae_kl_loss(s, b, noise);
    case ModelKind::DCCAE: return dccae_loss(s, b, noise);
    case ModelKind::DVCCA: return dvcca_loss(s, b, noise);
    case ModelKind::mcVAE: return mcvae_loss(s, b, noise);
    case ModelKind::mVAE: return mvae_loss(s, b, noise);
    case ModelKind::me_mVAE: return me_mvae_loss(s, b, noise);
    case ModelKind::mmVAE: return mmvae_loss(s, b, noise);
    case ModelKind::MVTCAE: return mvtcae_loss(s, b, noise);
    case ModelKind::MoPoEVAE: return mopoe_loss(s, b, noise);
    case ModelKind::weighted_mVAE: return weighted_mvae_loss(s, b, noise);
    case ModelKind::mmJSD: return mmjsd_loss(s, b, noise);
    case ModelKind::mmVAEPlus: return mmvaeplus_loss(s, b, noise);
    case ModelKind::DMVAE: return dmvae_loss(s, b, noise);
    case ModelKind::mAAE:
    case ModelKind::mWAE: {
      AdversarialLosses a = adversarial_losses(s, b, noise);
      LossBuilder out{std::string(model_name(s.kind()))};
      for (const auto& t : a.reconstruction.terms) out.add(t.name, t.weight, t.value);
      out.add("generator", 1.0, a.generator);
      return out.finish();
    }
  }
  throw ContractError("model_loss: unknown model kind");
}

}  // namespace mvx
