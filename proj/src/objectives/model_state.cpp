#include "mvx/model.hpp"

#include <cmath>
#include <string>

#include "mvx/error.hpp"
#include "mvx/ops.hpp"

namespace mvx {
namespace {

struct NameEntry {
  ModelKind kind;
  std::string_view name;
};

constexpr NameEntry kNames[] = {
    {ModelKind::AE, "AE"},
    {ModelKind::JMVAE, "JMVAE"},
    {ModelKind::DCCAE, "DCCAE"},
    {ModelKind::DVCCA, "DVCCA"},
    {ModelKind::mcVAE, "mcVAE"},
    {ModelKind::mVAE, "mVAE"},
    {ModelKind::me_mVAE, "me_mVAE"},
    {ModelKind::mmVAE, "mmVAE"},
    {ModelKind::MVTCAE, "MVTCAE"},
    {ModelKind::MoPoEVAE, "MoPoEVAE"},
    {ModelKind::weighted_mVAE, "weighted_mVAE"},
    {ModelKind::mmJSD, "mmJSD"},
    {ModelKind::mmVAEPlus, "mmVAEPlus"},
    {ModelKind::DMVAE, "DMVAE"},
    {ModelKind::mAAE, "mAAE"},
    {ModelKind::mWAE, "mWAE"},
};

[[noreturn]] void fail(const std::string& key, const std::string& msg) { throw ConfigError(key + ": " + msg); }

MlpSpec mlp(const NetSpec& n, std::size_t in, std::size_t out) {
  MlpSpec s;
  s.input_dim = in;
  s.hidden_layer_dims = n.hidden;
  s.output_dim = out;
  s.non_linear = n.non_linear;
  s.bias = n.bias;
  s.activation = n.activation;
  return s;
}

}  // namespace

std::string_view model_name(ModelKind kind) {
  for (const auto& e : kNames) {
    if (e.kind == kind) return e.name;
  }
  return "unknown";
}

ModelKind parse_model_name(std::string_view name) {
  for (const auto& e : kNames) {
    if (e.name == name) return e.kind;
  }
  throw ConfigError("model.name: unknown model '" + std::string(name) + "'");
}

bool is_variational(ModelKind kind) {
  switch (kind) {
    case ModelKind::AE:
    case ModelKind::DCCAE:
    case ModelKind::mAAE:
    case ModelKind::mWAE: return false;
    default: return true;
  }
}

bool is_adversarial(ModelKind kind) { return kind == ModelKind::mAAE || kind == ModelKind::mWAE; }

bool uses_iwae(ModelKind kind) { return kind == ModelKind::mmVAE || kind == ModelKind::mmVAEPlus; }

bool has_builtin_joint(ModelKind kind) {
  switch (kind) {
    case ModelKind::AE:
    case ModelKind::mcVAE:
    case ModelKind::mAAE:
    case ModelKind::mWAE:
    case ModelKind::DCCAE:
    case ModelKind::DVCCA: return false;
    default: return true;
  }
}

bool ModelSpec::has_private() const {
  return kind == ModelKind::mmVAEPlus || kind == ModelKind::DMVAE || (kind == ModelKind::DVCCA && hyper.private_latents);
}

std::size_t ModelSpec::decoder_input_dim() const { return has_private() ? z_dim + s_dim : z_dim; }

void ModelSpec::validate() const {
  const std::size_t M = n_views();
  if (M == 0) fail("data", "at least one view is required");
  for (std::size_t m = 0; m < M; ++m) {
    if (view_dims[m] == 0) fail("data", "view " + std::to_string(m) + " has zero features");
  }
  if (encoders.size() != M) fail("encoder", "expected one encoder spec per view");
  if (decoders.size() != M) fail("decoder", "expected one decoder spec per view");
  if (z_dim == 0) fail("model.z_dim", "must be >= 1");
  if (has_private() && s_dim == 0) fail("model.s_dim", "must be >= 1 for models with private latents");
  if ((kind == ModelKind::JMVAE || kind == ModelKind::DCCAE) && M != 2) {
    fail("model.name", std::string(model_name(kind)) + " requires exactly 2 views, got " + std::to_string(M));
  }
  if (kind == ModelKind::MoPoEVAE && M > 10) fail("model.name", "MoPoEVAE supports at most 10 views");
  if (!(hyper.beta > 0)) fail("model.beta", "must be > 0");
  if (hyper.K < 1) fail("model.K", "must be >= 1");
  if (!(hyper.alpha >= 0)) fail("model.alpha", "must be >= 0");
  if (kind == ModelKind::MVTCAE && hyper.alpha > 1) fail("model.alpha", "must lie in [0, 1] for MVTCAE");
  if (!hyper.lambda.empty() && hyper.lambda.size() != M && hyper.lambda.size() != 1) {
    fail("model.lambda", "expected 1 or " + std::to_string(M) + " values");
  }
  for (double l : hyper.lambda) {
    if (!(l >= 0)) fail("model.lambda", "values must be >= 0");
  }
  if (!hyper.pi.empty()) {
    if (hyper.pi.size() != M + 1) fail("model.pi", "expected " + std::to_string(M + 1) + " weights");
    double total = 0;
    for (double p : hyper.pi) {
      if (!(p >= 0)) fail("model.pi", "weights must be >= 0");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) fail("model.pi", "weights must sum to 1");
  }
  if (!(hyper.ridge >= 0)) fail("model.ridge", "must be >= 0");
  if (!(hyper.clip > 0)) fail("model.clip", "must be > 0");
  if (hyper.critic_steps < 1) fail("model.critic_steps", "must be >= 1");
  if (hyper.join_type) {
    if (has_builtin_joint(kind) || kind == ModelKind::DCCAE || kind == ModelKind::DVCCA) {
      fail("model.join_type", "not supported by " + std::string(model_name(kind)));
    }
    if (!is_variational(kind) && *hyper.join_type == JoinType::PoE) {
      fail("model.join_type", "PoE requires a variational model; use Mean");
    }
  }
  for (std::size_t m = 0; m < M; ++m) {
    if (!(decoders[m].scale > 0)) fail("decoder.dec" + std::to_string(m) + ".scale", "must be > 0");
  }
}

std::vector<Tensor> ModelState::parameters() const {
  std::vector<Tensor> out;
  auto take = [&out](const std::vector<Tensor>& ps) { out.insert(out.end(), ps.begin(), ps.end()); };
  for (const auto& e : encoders) take(e.parameters());
  for (const auto& e : private_encoders) take(e.parameters());
  if (joint_encoder) take(joint_encoder->parameters());
  for (const auto& d : decoders) take(d.parameters());
  if (gpoe_logits.defined()) out.push_back(gpoe_logits);
  if (log_alpha.defined()) out.push_back(log_alpha);
  if (aux_log_var.defined()) out.push_back(aux_log_var);
  return out;
}

std::vector<Tensor> ModelState::adversary_parameters() const {
  return discriminator ? discriminator->parameters() : std::vector<Tensor>{};
}

std::vector<Tensor> ModelState::all_parameters() const {
  auto out = parameters();
  auto adv = adversary_parameters();
  out.insert(out.end(), adv.begin(), adv.end());
  return out;
}

Tensor ModelState::gpoe_weights() const {
  if (!gpoe_logits.defined()) throw ContractError("gpoe_weights: model has no gPoE weights");
  return softmax(gpoe_logits, 0);
}

ModelState build_model(const ModelSpec& spec) {
  spec.validate();
  ModelState s;
  s.spec = spec;
  Rng rng(spec.seed);
  const std::size_t M = spec.n_views();
  const ModelKind k = spec.kind;
  const bool variational = is_variational(k);
  const bool sparse = k == ModelKind::mcVAE && spec.hyper.sparse;

  if (k == ModelKind::DVCCA) {
    s.encoders.push_back(Encoder::build(mlp(spec.encoders[0], spec.view_dims[0], spec.z_dim), true, rng));
  } else {
    for (std::size_t m = 0; m < M; ++m) {
      s.encoders.push_back(
          Encoder::build(mlp(spec.encoders[m], spec.view_dims[m], spec.z_dim), variational && !sparse, rng));
    }
  }
  if (spec.has_private()) {
    for (std::size_t m = 0; m < M; ++m) {
      s.private_encoders.push_back(Encoder::build(mlp(spec.encoders[m], spec.view_dims[m], spec.s_dim), true, rng));
    }
  }
  if (k == ModelKind::JMVAE) {
    s.joint_encoder = Encoder::build(mlp(spec.encoders[0], spec.view_dims[0] + spec.view_dims[1], spec.z_dim), true, rng);
  }
  const std::size_t dec_in = spec.decoder_input_dim();
  for (std::size_t m = 0; m < M; ++m) {
    const NetSpec& d = spec.decoders[m];
    s.decoders.push_back(Decoder::build(mlp(d, dec_in, spec.view_dims[m]), d.dist, d.scale, rng));
  }
  if (k == ModelKind::weighted_mVAE) {
    s.gpoe_logits = Tensor::parameter({M + 1, spec.z_dim}, std::vector<double>((M + 1) * spec.z_dim, 0.0));
  }
  if (sparse) s.log_alpha = Tensor::parameter({spec.z_dim}, std::vector<double>(spec.z_dim, -2.0));
  if (k == ModelKind::mmVAEPlus) {
    s.aux_log_var = Tensor::parameter({M, spec.s_dim}, std::vector<double>(M * spec.s_dim, 0.0));
  }
  if (is_adversarial(k)) {
    MlpSpec ds;
    ds.input_dim = spec.z_dim;
    ds.hidden_layer_dims = spec.disc_hidden;
    ds.output_dim = 1;
    s.discriminator = Discriminator::build(ds, k == ModelKind::mWAE, rng);
  }
  return s;
}

}  // namespace mvx
