#include <string>

#include "common.hpp"
#include "mvx/error.hpp"
#include "mvx/objectives.hpp"
#include "mvx/ops.hpp"
#include "mvx/pooling.hpp"

namespace mvx {

using namespace obj;

namespace {

GaussianParams jmvae_joint(const ModelState& s, const MultiViewBatch& b) {
  return encode_gaussian(*s.joint_encoder, concat_cols(std::vector<Tensor>{b.views[0], b.views[1]}));
}

// Shared body of JMVAE and JMVAE-kl; alpha = 0 drops the encoder-matching terms.
LossBreakdown jmvae_impl(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise, double alpha) {
  require_kind(s, {ModelKind::JMVAE}, "JMVAE");
  check_batch(s, b, "JMVAE");
  const GaussianParams joint = jmvae_joint(s, b);
  const Tensor z = draw(noise, "z", joint);
  LossBuilder out("JMVAE");
  out.add("recon[0]", 1.0, nll(s.decoders[0], z, b.views[0]));
  out.add("recon[1]", 1.0, nll(s.decoders[1], z, b.views[1]));
  out.add("kl", s.spec.hyper.beta, prior_kl(joint));
  if (alpha != 0.0) {
    const auto posts = shared_posteriors(s, b);
    out.add("kl_joint[0]", alpha, mean_kl(joint, posts[0]));
    out.add("kl_joint[1]", alpha, mean_kl(joint, posts[1]));
  }
  return out.finish();
}

// −ELBO of a pooled posterior decoding every view.
void add_elbo(LossBuilder& out, const std::string& prefix, const ModelState& s, const MultiViewBatch& b,
              const GaussianParams& q, const Tensor& z) {
  for (std::size_t m = 0; m < s.n_views(); ++m) out.add(prefix + key("recon", m), 1.0, nll(s.decoders[m], z, b.views[m]));
  out.add(prefix + "kl", s.spec.hyper.beta, prior_kl(q));
}

std::string subset_name(const SubsetIndex& subset) {
  std::string name = "{";
  for (std::size_t i = 0; i < subset.members.size(); ++i) {
    if (i) name += ",";
    name += std::to_string(subset.members[i]);
  }
  return name + "}";
}

}  // namespace

LossBreakdown jmvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  return jmvae_impl(s, b, noise, 0.0);
}

LossBreakdown jmvae_kl_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  return jmvae_impl(s, b, noise, s.spec.hyper.alpha);
}

LossBreakdown mvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::mVAE}, "mVAE");
  check_batch(s, b, "mVAE");
  ExpertSet e{shared_posteriors(s, b), {}, true};
  const GaussianParams q = poe(e);
  LossBuilder out("mVAE");
  add_elbo(out, "", s, b, q, draw(noise, "z", q));
  return out.finish();
}

LossBreakdown me_mvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::me_mVAE}, "me_mVAE");
  check_batch(s, b, "me_mVAE");
  const auto posts = shared_posteriors(s, b);
  LossBuilder out("me_mVAE");
  const GaussianParams joint = poe({posts, {}, true});
  add_elbo(out, "joint.", s, b, joint, draw(noise, "z", joint));
  for (std::size_t m = 0; m < s.n_views(); ++m) {
    const GaussianParams q = poe({{posts[m]}, {}, true});
    add_elbo(out, key("view", m) + ".", s, b, q, draw(noise, key("z", m), q));
  }
  return out.finish();
}

LossBreakdown mvtcae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::MVTCAE}, "MVTCAE");
  check_batch(s, b, "MVTCAE");
  const std::size_t M = s.n_views();
  const double Md = static_cast<double>(M);
  const double alpha = s.spec.hyper.alpha, beta = s.spec.hyper.beta;
  if (alpha < 0 || alpha > 1) throw DomainError("MVTCAE: alpha must lie in [0, 1]");
  const auto posts = shared_posteriors(s, b);
  const GaussianParams q = poe({posts, {}, false});
  const Tensor z = draw(noise, "z", q);
  LossBuilder out("MVTCAE");
  for (std::size_t m = 0; m < M; ++m) out.add(key("recon", m), (Md - alpha) / Md, nll(s.decoders[m], z, b.views[m]));
  out.add("kl", beta * (1.0 - alpha), prior_kl(q));
  for (std::size_t m = 0; m < M; ++m) out.add(key("cvib", m), beta * alpha / Md, mean_kl(q, posts[m]));
  return out.finish();
}

LossBreakdown mopoe_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::MoPoEVAE}, "MoPoEVAE");
  check_batch(s, b, "MoPoEVAE");
  const std::size_t M = s.n_views();
  const auto posts = shared_posteriors(s, b);
  const auto subsets = enumerate_subsets(M);
  const double N = static_cast<double>(subsets.size());
  const double beta = s.spec.hyper.beta;

  std::vector<GaussianParams> qs;
  std::vector<Tensor> zs;
  for (const auto& sub : subsets) {
    ExpertSet e;
    for (std::size_t m : sub.members) e.experts.push_back(posts[m]);
    qs.push_back(poe(e));
    zs.push_back(draw(noise, "z" + subset_name(sub), qs.back()));
  }

  LossBuilder out("MoPoEVAE");
  if (!s.spec.hyper.subset_sampling) {
    for (std::size_t k = 0; k < subsets.size(); ++k) {
      const std::string prefix = "subset" + subset_name(subsets[k]) + ".";
      for (std::size_t m = 0; m < M; ++m) out.add(prefix + key("recon", m), 1.0 / N, nll(s.decoders[m], zs[k], b.views[m]));
      out.add(prefix + "kl", beta / N, prior_kl(qs[k]));
    }
    return out.finish();
  }

  // Stochastic mode: one subset per row.
  const std::size_t n = b.size();
  const auto choice = noise.indices("subset", n, subsets.size());
  std::vector<Tensor> z_parts, kl_parts;
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    std::vector<double> mask(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) mask[i] = choice[i] == k ? 1.0 : 0.0;
    const Tensor w = Tensor::vector(mask);
    z_parts.push_back(scale_rows(zs[k], w));
    kl_parts.push_back(w * kl_normal(qs[k], standard_normal(n, s.spec.z_dim)));
  }
  const Tensor z = add_n(z_parts);
  for (std::size_t m = 0; m < M; ++m) out.add(key("recon", m), 1.0, nll(s.decoders[m], z, b.views[m]));
  out.add("kl", beta, mean(add_n(kl_parts)));
  return out.finish();
}

LossBreakdown weighted_mvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::weighted_mVAE}, "weighted_mVAE");
  check_batch(s, b, "weighted_mVAE");
  ExpertSet e{shared_posteriors(s, b), s.gpoe_weights(), true};
  const GaussianParams q = gpoe(e);
  LossBuilder out("weighted_mVAE");
  add_elbo(out, "", s, b, q, draw(noise, "z", q));
  return out.finish();
}

LossBreakdown mmjsd_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise) {
  require_kind(s, {ModelKind::mmJSD}, "mmJSD");
  check_batch(s, b, "mmJSD");
  const std::size_t M = s.n_views();
  const auto posts = shared_posteriors(s, b);
  std::vector<double> pi = s.spec.hyper.pi;
  if (pi.empty()) pi.assign(M + 1, 1.0 / static_cast<double>(M + 1));
  const double beta = s.spec.hyper.beta;
  const GaussianParams pf = poe({posts, {}, true});
  const GaussianParams prior = standard_normal(b.size(), s.spec.z_dim);

  LossBuilder out("mmJSD");
  const double w = 1.0 / static_cast<double>(M);
  for (std::size_t m = 0; m < M; ++m) {
    const Tensor z = draw(noise, key("z", m), posts[m]);
    for (std::size_t n = 0; n < M; ++n) out.add(key("recon", n, m), w, nll(s.decoders[n], z, b.views[n]));
  }
  for (std::size_t m = 0; m < M; ++m) out.add(key("jsd", m), beta * pi[m], mean_kl(posts[m], pf));
  out.add("jsd_prior", beta * pi[M], mean_kl(prior, pf));
  return out.finish();
}

}  // namespace mvx
