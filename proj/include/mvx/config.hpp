#pragma once

// Text configuration: `section.key = value` lines, '#' comments, lists as
// "[a, b]". Sections are model, encoder, decoder and trainer. Network keys
// live under encoder.default / encoder.enc<m> and decoder.default /
// decoder.dec<m>; per-view entries override the defaults key by key.
//
// Every ConfigError message starts with the offending key path.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvx/model.hpp"

namespace mvx {

/// Network keys of one config block; unset fields fall back to the default block.
struct NetPatch {
  std::optional<std::vector<std::size_t>> hidden;
  std::optional<bool> non_linear;
  std::optional<bool> bias;
  std::optional<Activation> activation;
  std::optional<LikelihoodKind> dist;  // decoders only
  std::optional<double> scale;         // decoders only

  NetSpec apply(NetSpec base) const;
};

struct TrainerConfig {
  std::size_t max_epochs = 100;
  std::size_t batch_size = 64;
  bool full_batch = false;
};

struct ModelConfig {
  ModelKind kind = ModelKind::mVAE;
  std::size_t z_dim = 10;
  std::optional<std::size_t> s_dim;
  double learning_rate = 1e-3;
  std::optional<std::uint64_t> seed;  // unset: command line, then MVX_SEED, then 0
  bool save_model = true;
  bool seed_everything = true;
  bool sparse = false;
  double threshold = 0.0;
  double eps = 1e-10;
  std::optional<double> beta;
  std::optional<double> alpha;
  std::size_t K = 1;
  bool private_latents = false;
  std::optional<JoinType> join_type;
  std::vector<double> lambda;
  std::vector<double> pi;
  double ridge = 1e-3;
  double clip = 0.01;
  std::size_t critic_steps = 5;
  bool non_saturating = false;
  bool subset_sampling = false;
  std::vector<std::size_t> disc_hidden{64};

  NetPatch encoder_default;
  NetPatch decoder_default;
  std::map<std::size_t, NetPatch> encoder_views;
  std::map<std::size_t, NetPatch> decoder_views;

  TrainerConfig trainer;

  std::uint64_t seed_or_zero() const { return seed.value_or(0); }
};

/// Parses and validates config text; `origin` prefixes parse errors (file name).
ModelConfig parse_config(std::string_view text, std::string_view origin = "config");
ModelConfig load_config(const std::filesystem::path& path);

/// Model defaults applied to unset options: beta 1; alpha 0.1 (JMVAE), 0.5 (MVTCAE), 0 otherwise.
double default_beta(ModelKind kind);
double default_alpha(ModelKind kind);

/// Built-in network block: one hidden layer of 64 units; decoders of
/// non-variational models default to the MSE (Default) likelihood.
NetSpec default_net(ModelKind kind, bool decoder);

/// Architecture for data with the given view dims. Throws ConfigError when a
/// per-view block names a view the data lacks or the result is inconsistent.
ModelSpec resolve_spec(const ModelConfig& cfg, const std::vector<std::size_t>& view_dims);

/// Canonical text with every option spelled out; parse_config(render_config(c)) == c.
std::string render_config(const ModelConfig& cfg);

}  // namespace mvx
