#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "mvx/distributions.hpp"
#include "mvx/rng.hpp"
#include "mvx/tensor.hpp"

namespace mvx {

enum class Activation { Relu, Tanh, Sigmoid };

Activation parse_activation(std::string_view name);
std::string_view activation_name(Activation a);

struct MlpSpec {
  std::size_t input_dim = 1;
  std::vector<std::size_t> hidden_layer_dims;
  std::size_t output_dim = 1;
  bool non_linear = true;
  bool bias = true;
  Activation activation = Activation::Relu;

  void validate() const;
};

/// Affine layer x·W + b with W [in×out], b [out].
struct Linear {
  Tensor weight;
  Tensor bias;  // undefined when the layer has no bias

  static Linear init(std::size_t in, std::size_t out, bool bias, Rng& rng);
  static Linear zeros(std::size_t in, std::size_t out, bool bias);
  Tensor forward(const Tensor& x) const;
  std::size_t in_dim() const { return weight.rows(); }
  std::size_t out_dim() const { return weight.cols(); }
  void collect(std::vector<Tensor>& out) const;
};

Tensor apply_activation(Activation a, const Tensor& x);

/// Hidden stack: input -> hidden layers, activation after each when non_linear.
struct Trunk {
  std::vector<Linear> layers;
  Activation activation = Activation::Relu;
  bool non_linear = true;

  Tensor forward(const Tensor& x) const;
  void collect(std::vector<Tensor>& out) const;
};

/// Encoder with either one head (plain) or mean/log-variance heads (variational).
struct Encoder {
  MlpSpec spec;
  bool variational = true;
  Trunk trunk;
  Linear mean_head;
  Linear log_var_head;  // variational only; zero-initialized

  static Encoder build(const MlpSpec& spec, bool variational, Rng& rng);
  std::vector<Tensor> parameters() const;
};

struct Decoder {
  MlpSpec spec;
  LikelihoodKind kind = LikelihoodKind::Default;
  double scale = 1.0;
  Trunk trunk;
  Linear head;

  static Decoder build(const MlpSpec& spec, LikelihoodKind kind, double scale, Rng& rng);
  std::vector<Tensor> parameters() const;
};

/// Discriminator (sigmoid output) or critic (raw score) over latents.
struct Discriminator {
  MlpSpec spec;
  bool critic = false;
  Trunk trunk;
  Linear head;

  static Discriminator build(const MlpSpec& spec, bool critic, Rng& rng);
  std::vector<Tensor> parameters() const;
  /// Pre-sigmoid score -> [batch].
  Tensor logits(const Tensor& z) const;
};

/// GaussianParams for a variational encoder, a [batch×out] tensor otherwise.
using Encoding = std::variant<GaussianParams, Tensor>;

Encoding encode(const Encoder& net, const Tensor& x);
/// Variational encoder output; throws ContractError for a plain encoder.
GaussianParams encode_gaussian(const Encoder& net, const Tensor& x);
/// Plain encoder output, or the posterior mean of a variational one.
Tensor encode_point(const Encoder& net, const Tensor& x);
Likelihood decode(const Decoder& net, const Tensor& z);
/// sigmoid(logits) for a discriminator, raw logits for a critic -> [batch].
Tensor discriminate(const Discriminator& net, const Tensor& z);

/// Number of scalars in an MLP built from `spec` with a single output head.
std::size_t parameter_count(const MlpSpec& spec);

}  // namespace mvx
