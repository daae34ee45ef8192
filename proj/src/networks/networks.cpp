#include "mvx/networks.hpp"

#include <cmath>
#include <string>

#include "mvx/error.hpp"
#include "mvx/ops.hpp"

namespace mvx {
namespace {

void require_input(const Tensor& x, std::size_t dim, const char* where) {
  if (x.rank() != 2 || x.cols() != dim) {
    throw DimensionError(std::string(where) + ": input " + shape_string(x.shape()) + " does not match feature dim " +
                         std::to_string(dim));
  }
}

Trunk build_trunk(const MlpSpec& spec, Rng& rng, std::size_t& last) {
  Trunk t;
  t.activation = spec.activation;
  t.non_linear = spec.non_linear;
  last = spec.input_dim;
  for (std::size_t h : spec.hidden_layer_dims) {
    t.layers.push_back(Linear::init(last, h, spec.bias, rng));
    last = h;
  }
  return t;
}

}  // namespace

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::Relu;
  if (name == "tanh") return Activation::Tanh;
  if (name == "sigmoid") return Activation::Sigmoid;
  throw DomainError("unknown activation '" + std::string(name) + "'");
}

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "relu";
}

void MlpSpec::validate() const {
  if (input_dim == 0 || output_dim == 0) throw DimensionError("mlp: dimensions must be >= 1");
  for (std::size_t h : hidden_layer_dims) {
    if (h == 0) throw DimensionError("mlp: hidden dimensions must be >= 1");
  }
}

Linear Linear::init(std::size_t in, std::size_t out, bool bias, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  std::vector<double> w(in * out);
  for (auto& v : w) v = rng.uniform(-bound, bound);
  Linear l;
  l.weight = Tensor::parameter({in, out}, std::move(w));
  if (bias) {
    std::vector<double> b(out);
    for (auto& v : b) v = rng.uniform(-bound, bound);
    l.bias = Tensor::parameter({out}, std::move(b));
  }
  return l;
}

Linear Linear::zeros(std::size_t in, std::size_t out, bool bias) {
  Linear l;
  l.weight = Tensor::parameter({in, out}, std::vector<double>(in * out, 0.0));
  if (bias) l.bias = Tensor::parameter({out}, std::vector<double>(out, 0.0));
  return l;
}

Tensor Linear::forward(const Tensor& x) const {
  Tensor y = matmul(x, weight);
  return bias.defined() ? y + bias : y;
}

void Linear::collect(std::vector<Tensor>& out) const {
  out.push_back(weight);
  if (bias.defined()) out.push_back(bias);
}

Tensor apply_activation(Activation a, const Tensor& x) {
  switch (a) {
    case Activation::Relu: return relu(x);
    case Activation::Tanh: return tanh(x);
    case Activation::Sigmoid: return sigmoid(x);
  }
  return x;
}

Tensor Trunk::forward(const Tensor& x) const {
  Tensor h = x;
  for (const auto& l : layers) {
    h = l.forward(h);
    if (non_linear) h = apply_activation(activation, h);
  }
  return h;
}

void Trunk::collect(std::vector<Tensor>& out) const {
  for (const auto& l : layers) l.collect(out);
}

Encoder Encoder::build(const MlpSpec& spec, bool variational, Rng& rng) {
  spec.validate();
  Encoder e;
  e.spec = spec;
  e.variational = variational;
  std::size_t last = 0;
  e.trunk = build_trunk(spec, rng, last);
  e.mean_head = Linear::init(last, spec.output_dim, spec.bias, rng);
  if (variational) e.log_var_head = Linear::zeros(last, spec.output_dim, spec.bias);
  return e;
}

std::vector<Tensor> Encoder::parameters() const {
  std::vector<Tensor> out;
  trunk.collect(out);
  mean_head.collect(out);
  if (variational) log_var_head.collect(out);
  return out;
}

Decoder Decoder::build(const MlpSpec& spec, LikelihoodKind kind, double scale, Rng& rng) {
  spec.validate();
  Decoder d;
  d.spec = spec;
  d.kind = kind;
  d.scale = scale;
  std::size_t last = 0;
  d.trunk = build_trunk(spec, rng, last);
  d.head = Linear::init(last, spec.output_dim, spec.bias, rng);
  return d;
}

std::vector<Tensor> Decoder::parameters() const {
  std::vector<Tensor> out;
  trunk.collect(out);
  head.collect(out);
  return out;
}

Discriminator Discriminator::build(const MlpSpec& spec, bool critic, Rng& rng) {
  spec.validate();
  if (spec.output_dim != 1) throw DimensionError("discriminator: output dim must be 1");
  Discriminator d;
  d.spec = spec;
  d.critic = critic;
  std::size_t last = 0;
  d.trunk = build_trunk(spec, rng, last);
  d.head = Linear::init(last, 1, spec.bias, rng);
  return d;
}

std::vector<Tensor> Discriminator::parameters() const {
  std::vector<Tensor> out;
  trunk.collect(out);
  head.collect(out);
  return out;
}

Tensor Discriminator::logits(const Tensor& z) const {
  require_input(z, spec.input_dim, "discriminate");
  const Tensor s = head.forward(trunk.forward(z));
  return sum(s, 1);
}

Encoding encode(const Encoder& net, const Tensor& x) {
  require_input(x, net.spec.input_dim, "encode");
  const Tensor h = net.trunk.forward(x);
  if (!net.variational) return net.mean_head.forward(h);
  return GaussianParams{net.mean_head.forward(h), net.log_var_head.forward(h)};
}

GaussianParams encode_gaussian(const Encoder& net, const Tensor& x) {
  if (!net.variational) throw ContractError("encode: encoder is not variational");
  return std::get<GaussianParams>(encode(net, x));
}

Tensor encode_point(const Encoder& net, const Tensor& x) {
  Encoding e = encode(net, x);
  if (auto* g = std::get_if<GaussianParams>(&e)) return g->mean;
  return std::get<Tensor>(e);
}

Likelihood decode(const Decoder& net, const Tensor& z) {
  require_input(z, net.spec.input_dim, "decode");
  return {net.kind, net.head.forward(net.trunk.forward(z)), net.scale};
}

Tensor discriminate(const Discriminator& net, const Tensor& z) {
  const Tensor s = net.logits(z);
  return net.critic ? s : sigmoid(s);
}

std::size_t parameter_count(const MlpSpec& spec) {
  std::size_t total = 0, last = spec.input_dim;
  auto layer = [&](std::size_t out) {
    total += last * out + (spec.bias ? out : 0);
    last = out;
  };
  for (std::size_t h : spec.hidden_layer_dims) layer(h);
  layer(spec.output_dim);
  return total;
}

}  // namespace mvx
