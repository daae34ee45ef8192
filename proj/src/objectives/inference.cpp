#include "mvx/inference.hpp"

#include <string>

#include "common.hpp"
#include "mvx/error.hpp"
#include "mvx/networks.hpp"
#include "mvx/ops.hpp"

namespace mvx {
namespace obj {

void check_batch(const ModelState& s, const MultiViewBatch& b, const char* model) {
  b.validate();
  if (b.n_views() != s.n_views()) {
    throw DimensionError(std::string(model) + ": batch has " + std::to_string(b.n_views()) + " views, model expects " +
                         std::to_string(s.n_views()));
  }
  for (std::size_t m = 0; m < b.n_views(); ++m) {
    if (b.views[m].cols() != s.spec.view_dims[m]) {
      throw DimensionError(std::string(model) + ": view " + std::to_string(m) + " has " +
                           std::to_string(b.views[m].cols()) + " features, model expects " +
                           std::to_string(s.spec.view_dims[m]));
    }
  }
  if (b.size() == 0) throw DimensionError(std::string(model) + ": empty batch");
}

void require_kind(const ModelState& s, std::initializer_list<ModelKind> kinds, const char* model) {
  for (ModelKind k : kinds) {
    if (s.kind() == k) return;
  }
  throw ContractError(std::string(model) + ": not defined for a " + std::string(model_name(s.kind())) + " model");
}

std::string key(const char* name, std::size_t m) { return std::string(name) + "[" + std::to_string(m) + "]"; }

std::string key(const char* name, std::size_t m, std::size_t n) {
  return std::string(name) + "[" + std::to_string(m) + "," + std::to_string(n) + "]";
}

Tensor draw(NoiseSource& noise, const std::string& k, const GaussianParams& q) {
  return rsample(q, noise.normal(k, q.batch(), q.dim()));
}

Tensor nll(const Decoder& d, const Tensor& z, const Tensor& x) { return -mean(log_prob(decode(d, z), x)); }

Tensor mean_kl(const GaussianParams& q, const GaussianParams& p) { return mean(kl_normal(q, p)); }

Tensor prior_kl(const GaussianParams& q) { return mean_kl(q, standard_normal(q.batch(), q.dim())); }

std::vector<GaussianParams> shared_posteriors(const ModelState& s, const MultiViewBatch& b) {
  std::vector<GaussianParams> out;
  out.reserve(s.encoders.size());
  for (std::size_t m = 0; m < s.encoders.size(); ++m) out.push_back(encode_gaussian(s.encoders[m], b.views[m]));
  return out;
}

std::vector<GaussianParams> private_posteriors(const ModelState& s, const MultiViewBatch& b) {
  std::vector<GaussianParams> out;
  out.reserve(s.private_encoders.size());
  for (std::size_t m = 0; m < s.private_encoders.size(); ++m) {
    out.push_back(encode_gaussian(s.private_encoders[m], b.views[m]));
  }
  return out;
}

void add_cross_recon(LossBuilder& out, const ModelState& s, const MultiViewBatch& b, const std::vector<Tensor>& latents) {
  const std::size_t M = s.n_views();
  const double w = 1.0 / static_cast<double>(M * M);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t n = 0; n < M; ++n) out.add(key("recon", m, n), w, nll(s.decoders[m], latents[n], b.views[m]));
  }
}

double lambda_of(const Hyper& h, std::size_t m) {
  if (h.lambda.empty()) return 1.0;
  return h.lambda.size() == 1 ? h.lambda[0] : h.lambda.at(m);
}

}  // namespace obj

bool has_joint_latent(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::DCCAE:
    case ModelKind::DVCCA: return false;
    case ModelKind::AE:
    case ModelKind::mcVAE:
    case ModelKind::mAAE:
    case ModelKind::mWAE: return spec.hyper.join_type.has_value();
    default: return true;
  }
}

bool supports_subset_encoding(const ModelSpec& spec) { return has_joint_latent(spec); }

std::vector<GaussianParams> view_posteriors(const ModelState& s, const MultiViewBatch& b) {
  obj::check_batch(s, b, "view_posteriors");
  std::vector<GaussianParams> out;
  for (std::size_t m = 0; m < s.encoders.size(); ++m) {
    Encoding e = encode(s.encoders[m], b.views[m]);
    if (auto* g = std::get_if<GaussianParams>(&e)) {
      out.push_back(*g);
      continue;
    }
    const Tensor mu = std::get<Tensor>(e);
    if (s.log_alpha.defined()) {
      // Dropout posterior N(μ, αμ²).
      out.push_back({mu, s.log_alpha + log(square(mu) + s.spec.hyper.eps)});
    } else {
      out.push_back({mu, Tensor(mu.shape(), 0.0)});
    }
  }
  return out;
}

GaussianParams subset_posterior(const ModelState& s, const MultiViewBatch& b, const std::vector<GaussianParams>& views,
                                const SubsetIndex& subset) {
  if (!supports_subset_encoding(s.spec)) {
    throw UnsupportedError("subset encoding is not defined for " + std::string(model_name(s.kind())));
  }
  if (subset.members.empty()) throw ContractError("subset_posterior: empty subset");
  ExpertSet e;
  for (std::size_t m : subset.members) e.experts.push_back(views.at(m));
  const std::size_t M = s.n_views();
  switch (s.kind()) {
    case ModelKind::JMVAE:
      if (subset.members.size() == M) {
        return encode_gaussian(*s.joint_encoder, concat_cols(std::vector<Tensor>{b.views[0], b.views[1]}));
      }
      return e.experts[0];
    case ModelKind::mVAE:
    case ModelKind::me_mVAE:
    case ModelKind::mmJSD:
    case ModelKind::DMVAE: e.include_prior_expert = true; return poe(e);
    case ModelKind::MVTCAE:
    case ModelKind::MoPoEVAE: return poe(e);
    case ModelKind::weighted_mVAE: {
      std::vector<Tensor> rows;
      for (std::size_t m : subset.members) rows.push_back(row(s.gpoe_logits, m));
      rows.push_back(row(s.gpoe_logits, M));
      e.include_prior_expert = true;
      e.weights = softmax(transpose(stack_cols(rows)), 0);
      return gpoe(e);
    }
    case ModelKind::mmVAE:
    case ModelKind::mmVAEPlus: {
      std::vector<Tensor> means;
      for (const auto& g : e.experts) means.push_back(g.mean);
      const Tensor mu = add_n(means) * (1.0 / static_cast<double>(means.size()));
      return {mu, Tensor(mu.shape(), 0.0)};
    }
    default:
      if (*s.spec.hyper.join_type == JoinType::PoE) return poe(e);
      return mean_pool(e);
  }
}

Tensor decode_mean(const ModelState& s, const MultiViewBatch& b, std::size_t target, const Tensor& z,
                   bool target_observed, Rng& rng) {
  if (target >= s.decoders.size()) throw DimensionError("decode_mean: target view out of range");
  Tensor input = z;
  if (s.spec.has_private()) {
    const std::size_t n = z.rows(), sd = s.spec.s_dim;
    Tensor h;
    if (target_observed) {
      h = encode_gaussian(s.private_encoders[target], b.views[target]).mean;
    } else if (s.kind() == ModelKind::mmVAEPlus) {
      std::vector<double> eps(n * sd);
      for (auto& v : eps) v = rng.normal();
      h = Tensor::matrix(n, sd, std::move(eps)) * exp(0.5 * row(s.aux_log_var, target));
    } else {
      h = Tensor(Shape{n, sd}, 0.0);
    }
    input = concat_cols(std::vector<Tensor>{z, h});
  }
  return decode(s.decoders[target], input).mean();
}

std::vector<bool> retained_dimensions(const ModelState& s) {
  std::vector<bool> keep(s.spec.z_dim, true);
  if (!s.log_alpha.defined() || s.spec.hyper.threshold <= 0) return keep;
  const auto la = s.log_alpha.values();
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const double alpha = std::exp(la[j]);
    keep[j] = alpha / (1.0 + alpha) <= s.spec.hyper.threshold;
  }
  return keep;
}

}  // namespace mvx
