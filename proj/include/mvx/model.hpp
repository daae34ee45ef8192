#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mvx/distributions.hpp"
#include "mvx/networks.hpp"

namespace mvx {

enum class ModelKind {
  AE,
  JMVAE,
  DCCAE,
  DVCCA,
  mcVAE,
  mVAE,
  me_mVAE,
  mmVAE,
  MVTCAE,
  MoPoEVAE,
  weighted_mVAE,
  mmJSD,
  mmVAEPlus,
  DMVAE,
  mAAE,
  mWAE,
};

inline constexpr ModelKind kAllModels[] = {
    ModelKind::AE,     ModelKind::JMVAE,    ModelKind::DCCAE,    ModelKind::DVCCA,         ModelKind::mcVAE,
    ModelKind::mVAE,   ModelKind::me_mVAE,  ModelKind::mmVAE,    ModelKind::MVTCAE,        ModelKind::MoPoEVAE,
    ModelKind::weighted_mVAE, ModelKind::mmJSD, ModelKind::mmVAEPlus, ModelKind::DMVAE, ModelKind::mAAE,
    ModelKind::mWAE,
};

std::string_view model_name(ModelKind kind);
/// Throws ConfigError for unknown names.
ModelKind parse_model_name(std::string_view name);

bool is_variational(ModelKind kind);
bool is_adversarial(ModelKind kind);
/// Models whose loss uses K importance samples.
bool uses_iwae(ModelKind kind);
/// Models that define their own joint posterior; the others (AE, mcVAE, mAAE,
/// mWAE) accept an explicit join_type, DCCAE and DVCCA have no joint at all.
bool has_builtin_joint(ModelKind kind);

enum class JoinType { PoE, Mean };

struct Hyper {
  double beta = 1.0;
  double alpha = 0.0;
  std::vector<double> lambda;  // per view; DCCAE uses lambda[0]
  std::size_t K = 1;
  std::vector<double> pi;      // mmJSD weights, M+1 entries; empty -> uniform
  double ridge = 1e-3;
  double clip = 0.01;
  std::size_t critic_steps = 5;
  bool non_saturating = false;
  bool subset_sampling = false;
  bool sparse = false;
  double threshold = 0.0;
  double eps = 1e-10;
  bool private_latents = false;  // DVCCA-private
  std::optional<JoinType> join_type;  // explicit fusion for models without a built-in joint
};

/// Per-network architecture choices.
struct NetSpec {
  std::vector<std::size_t> hidden;
  bool non_linear = true;
  bool bias = true;
  Activation activation = Activation::Relu;
  LikelihoodKind dist = LikelihoodKind::Normal;
  double scale = 1.0;
};

struct ModelSpec {
  ModelKind kind = ModelKind::mVAE;
  std::vector<std::size_t> view_dims;
  std::size_t z_dim = 2;
  std::size_t s_dim = 0;
  std::vector<NetSpec> encoders;  // one per view
  std::vector<NetSpec> decoders;  // one per view
  std::vector<std::size_t> disc_hidden;
  Hyper hyper;
  std::uint64_t seed = 0;

  std::size_t n_views() const { return view_dims.size(); }
  /// Shared + private latent split (MMVAE+, DMVAE, DVCCA with private=true).
  bool has_private() const;
  /// Decoder input width: z_dim, plus s_dim when latents are split.
  std::size_t decoder_input_dim() const;
  /// Throws ConfigError on structural inconsistencies (view counts, dims).
  void validate() const;
};

/// Networks and free parameters of one model instance.
struct ModelState {
  ModelSpec spec;
  std::vector<Encoder> encoders;          // shared-latent encoders (DVCCA: one, on view 0)
  std::vector<Encoder> private_encoders;  // private latents, one per view
  std::optional<Encoder> joint_encoder;   // JMVAE
  std::vector<Decoder> decoders;
  std::optional<Discriminator> discriminator;
  Tensor gpoe_logits;  // weighted_mVAE [(M+1)×z], prior expert last
  Tensor log_alpha;    // sparse mcVAE [z]
  Tensor aux_log_var;  // MMVAE+ auxiliary priors [M×s]

  std::size_t n_views() const { return spec.n_views(); }
  ModelKind kind() const { return spec.kind; }
  /// Encoder/decoder group (generator side), in declaration order.
  std::vector<Tensor> parameters() const;
  /// Discriminator or critic parameters; empty for other models.
  std::vector<Tensor> adversary_parameters() const;
  /// parameters() followed by adversary_parameters().
  std::vector<Tensor> all_parameters() const;
  /// gPoE exponents softmax(gpoe_logits) over experts.
  Tensor gpoe_weights() const;
};

/// Builds every network with spec.seed. Throws ConfigError for invalid specs.
ModelState build_model(const ModelSpec& spec);

}  // namespace mvx
