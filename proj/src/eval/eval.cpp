#include "mvx/eval.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "mvx/error.hpp"
#include "mvx/inference.hpp"
#include "mvx/ops.hpp"
#include "mvx/optim.hpp"
#include "mvx/pooling.hpp"

namespace mvx {
namespace {

Tensor normal_tensor(Rng& rng, std::size_t rows, std::size_t cols) {
  std::vector<double> v(rows * cols);
  for (auto& x : v) x = rng.normal();
  return Tensor::matrix(rows, cols, std::move(v));
}

SubsetIndex full_set(std::size_t M) {
  SubsetIndex all;
  for (std::size_t m = 0; m < M; ++m) all.members.push_back(m);
  return all;
}

// One draw per row from the equal-weight mixture of `experts`.
Tensor sample_mixture(const std::vector<GaussianParams>& experts, Rng& rng) {
  const std::size_t n = experts[0].batch(), d = experts[0].dim();
  std::vector<std::size_t> pick(n);
  for (auto& c : pick) c = rng.index(experts.size());
  std::vector<double> out(n * d);
  for (std::size_t c = 0; c < experts.size(); ++c) {
    const auto mu = experts[c].mean.values();
    const auto lv = experts[c].log_var.values();
    for (std::size_t i = 0; i < n; ++i) {
      if (pick[i] != c) continue;
      for (std::size_t j = 0; j < d; ++j) {
        const double l = std::clamp(lv[i * d + j], kLogVarMin, kLogVarMax);
        out[i * d + j] = mu[i * d + j] + std::exp(0.5 * l) * rng.normal();
      }
    }
  }
  return Tensor::matrix(n, d, std::move(out));
}

}  // namespace

ProbeClassifier ProbeClassifier::init(std::size_t input_dim, std::size_t n_classes, const ProbeOptions& opt) {
  if (n_classes < 2) throw DomainError("probe: at least two classes are required");
  Rng rng(opt.seed);
  ProbeClassifier p;
  p.hidden = Linear::init(input_dim, opt.hidden, true, rng);
  p.output = Linear::init(opt.hidden, n_classes, true, rng);
  p.n_classes = n_classes;
  return p;
}

Tensor ProbeClassifier::logits(const Tensor& x) const { return output.forward(relu(hidden.forward(x))); }

std::vector<std::uint32_t> ProbeClassifier::predict(const Tensor& x) const {
  const Tensor l = logits(x).detach();
  const std::size_t n = l.rows(), C = l.cols();
  const auto v = l.values();
  std::vector<std::uint32_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < C; ++c) {
      if (v[i * C + c] > v[i * C + best]) best = c;
    }
    out[i] = static_cast<std::uint32_t>(best);
  }
  return out;
}

double ProbeClassifier::accuracy(const Tensor& x, std::span<const std::uint32_t> labels) const {
  const auto pred = predict(x);
  if (pred.size() != labels.size()) throw DimensionError("probe: label count does not match the data");
  if (pred.empty()) return 0.0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hit += pred[i] == labels[i] ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

std::vector<Tensor> ProbeClassifier::parameters() const {
  std::vector<Tensor> out;
  hidden.collect(out);
  output.collect(out);
  return out;
}

ProbeClassifier train_probe(const Tensor& view, std::span<const std::uint32_t> labels, std::size_t n_classes,
                            const ProbeOptions& opt) {
  if (view.rows() != labels.size()) throw DimensionError("probe: label count does not match the data");
  const std::set<std::uint32_t> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) throw DomainError("probe: degenerate labels, need at least two classes");
  for (std::uint32_t l : labels) {
    if (l >= n_classes) throw DomainError("probe: label " + std::to_string(l) + " >= n_classes");
  }

  ProbeClassifier p = ProbeClassifier::init(view.cols(), n_classes, opt);
  Adam adam(p.parameters(), opt.learning_rate);
  Rng rng(opt.seed + 1);
  MultiViewBatch data{{view}, std::vector<std::uint32_t>(labels.begin(), labels.end())};
  const std::size_t n = view.rows();
  const std::size_t bs = std::max<std::size_t>(1, std::min(opt.batch_size, n));
  for (std::size_t e = 0; e < opt.epochs; ++e) {
    const auto order = rng.permutation(n);
    for (std::size_t i = 0; i < n; i += bs) {
      const std::vector<std::size_t> idx(order.begin() + i, order.begin() + std::min(n, i + bs));
      const MultiViewBatch b = data.select(idx);
      std::vector<double> target(b.size() * n_classes, 0.0);
      for (std::size_t r = 0; r < b.size(); ++r) target[r * n_classes + b.labels[r]] = 1.0;
      const Tensor lp = log_softmax(p.logits(b.views[0]), 1);
      const Tensor loss = -sum(lp * Tensor::matrix(b.size(), n_classes, std::move(target))) / static_cast<double>(b.size());
      adam.zero_grad();
      loss.backward();
      adam.step();
    }
  }
  return p;
}

std::vector<ProbeClassifier> train_probes(const MultiViewBatch& train, std::size_t n_classes, const ProbeOptions& opt) {
  train.validate();
  if (!train.has_labels()) throw DomainError("probe: training data has no labels");
  std::vector<ProbeClassifier> out;
  for (const auto& v : train.views) out.push_back(train_probe(v, train.labels, n_classes, opt));
  return out;
}

double CoherenceReport::mean_cross() const {
  if (by_size.empty()) return 0.0;
  double s = 0;
  for (double a : by_size) s += a;
  return s / static_cast<double>(by_size.size());
}

std::string CoherenceReport::csv() const {
  std::string out = "subset_size,accuracy\n";
  char buf[64];
  auto row = [&](std::size_t k, double a) {
    const auto r = std::to_chars(buf, buf + sizeof buf, a);
    out += std::to_string(k) + "," + std::string(buf, r.ptr) + "\n";
  };
  for (std::size_t k = 0; k < by_size.size(); ++k) row(k + 1, by_size[k]);
  if (self_coherence) row(by_size.size() + 1, *self_coherence);
  return out;
}

CoherenceReport coherence(const ModelState& s, const MultiViewBatch& test, const std::vector<ProbeClassifier>& probes,
                          std::uint64_t seed) {
  if (!supports_subset_encoding(s.spec)) {
    throw UnsupportedError("coherence: unsupported for " + std::string(model_name(s.kind())) +
                           " (no subset encoding)");
  }
  test.validate();
  if (!test.has_labels()) throw DomainError("coherence: test data has no labels");
  const std::size_t M = s.n_views();
  if (probes.size() != M) throw DimensionError("coherence: expected one probe per view");
  Rng rng(seed);
  const auto views = view_posteriors(s, test);

  CoherenceReport report;
  std::vector<double> sum(M + 1, 0.0);
  std::vector<std::size_t> count(M + 1, 0);
  for (const auto& subset : enumerate_subsets(M)) {
    const Tensor z = subset_posterior(s, test, views, subset).mean;
    const bool full = subset.members.size() == M;
    for (std::size_t t = 0; t < M; ++t) {
      if (!full && subset.contains(t)) continue;
      const Tensor x = decode_mean(s, test, t, z, full, rng);
      sum[subset.members.size()] += probes[t].accuracy(x, test.labels);
      ++count[subset.members.size()];
    }
  }
  for (std::size_t k = 1; k < M; ++k) report.by_size.push_back(sum[k] / static_cast<double>(count[k]));
  if (has_joint_latent(s.spec)) report.self_coherence = sum[M] / static_cast<double>(count[M]);
  return report;
}

double joint_log_likelihood(const ModelState& s, const MultiViewBatch& test, std::size_t K, std::uint64_t seed) {
  if (K < 1) throw DomainError("joint_log_likelihood: K must be >= 1");
  if (!is_variational(s.kind()) || !has_joint_latent(s.spec)) {
    throw UnsupportedError("joint_log_likelihood: unsupported for " + std::string(model_name(s.kind())) +
                           " (no variational joint posterior)");
  }
  test.validate();
  const std::size_t M = s.n_views(), n = test.size();
  Rng rng(seed);
  const auto views = view_posteriors(s, test);
  const bool mixture = uses_iwae(s.kind());
  GaussianParams joint;
  if (!mixture) joint = subset_posterior(s, test, views, full_set(M)).detach();
  std::vector<GaussianParams> priv;
  for (std::size_t m = 0; m < s.private_encoders.size(); ++m) {
    priv.push_back(encode_gaussian(s.private_encoders[m], test.views[m]).detach());
  }
  std::vector<GaussianParams> experts;
  for (const auto& v : views) experts.push_back(v.detach());
  const ExpertSet moe{experts, {}, false};
  const GaussianParams z_prior = standard_normal(n, s.spec.z_dim);
  const GaussianParams h_prior = standard_normal(n, s.spec.s_dim);

  std::vector<Tensor> log_w;
  log_w.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    Tensor z, log_q;
    if (mixture) {
      z = sample_mixture(experts, rng);
      log_q = moe_log_prob(moe, z);
    } else {
      z = rsample(joint, normal_tensor(rng, n, s.spec.z_dim));
      log_q = gaussian_log_prob(joint, z);
    }
    std::vector<Tensor> parts{gaussian_log_prob(z_prior, z), -log_q};
    for (std::size_t m = 0; m < M; ++m) {
      Tensor input = z;
      if (!priv.empty()) {
        const Tensor h = rsample(priv[m], normal_tensor(rng, n, s.spec.s_dim));
        parts.push_back(gaussian_log_prob(h_prior, h) - gaussian_log_prob(priv[m], h));
        input = concat_cols(std::vector<Tensor>{z, h});
      }
      parts.push_back(log_prob(decode(s.decoders[m], input), test.views[m]));
    }
    log_w.push_back(add_n(parts).detach());
  }
  const Tensor lse = logsumexp(stack_cols(log_w), 1);
  return mean(lse).item() - std::log(static_cast<double>(K));
}

}  // namespace mvx
