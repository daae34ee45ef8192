#pragma once

// Cross-modal coherence and importance-weighted joint log-likelihood.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvx/batch.hpp"
#include "mvx/model.hpp"
#include "mvx/networks.hpp"

namespace mvx {

struct ProbeOptions {
  std::size_t hidden = 64;
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
};

/// One-hidden-layer softmax classifier over a single view.
struct ProbeClassifier {
  Linear hidden;
  Linear output;
  std::size_t n_classes = 0;

  /// Untrained probe with seeded initialization.
  static ProbeClassifier init(std::size_t input_dim, std::size_t n_classes, const ProbeOptions& opt);
  Tensor logits(const Tensor& x) const;
  /// argmax per row; ties go to the lowest class index.
  std::vector<std::uint32_t> predict(const Tensor& x) const;
  double accuracy(const Tensor& x, std::span<const std::uint32_t> labels) const;
  std::vector<Tensor> parameters() const;
};

/// Trains on (view, labels) with Adam and seeded shuffles. Throws DomainError
/// when the labels hold fewer than two classes.
ProbeClassifier train_probe(const Tensor& view, std::span<const std::uint32_t> labels, std::size_t n_classes,
                            const ProbeOptions& opt = {});
/// One probe per view of a labeled batch.
std::vector<ProbeClassifier> train_probes(const MultiViewBatch& train, std::size_t n_classes, const ProbeOptions& opt = {});

struct CoherenceReport {
  /// Mean accuracy per subset size 1..M−1 (index 0 is size 1).
  std::vector<double> by_size;
  /// Accuracy of regenerating every view from the full set, when the model has a joint.
  std::optional<double> self_coherence;

  /// Average of by_size.
  double mean_cross() const;
  /// `subset_size,accuracy` rows; size M appears when self_coherence is set.
  std::string csv() const;
};

/// For every non-empty proper subset S, pools the posterior means of S,
/// decodes each view outside S and scores the probe prediction against the
/// true label. Throws UnsupportedError for models without subset encoding.
CoherenceReport coherence(const ModelState& s, const MultiViewBatch& test, const std::vector<ProbeClassifier>& probes,
                          std::uint64_t seed = 0);

/// mean_i log (1/K) Σ_k p(z_k)·∏_m p_m(x_m|z_k) / q(z_k|X), in nats. Private
/// latents (DMVAE, MMVAE+) are importance-sampled from their own posteriors;
/// mixture models sample and score the mixture. Throws DomainError for K < 1
/// and UnsupportedError for models without a variational joint posterior.
double joint_log_likelihood(const ModelState& s, const MultiViewBatch& test, std::size_t K, std::uint64_t seed = 0);

}  // namespace mvx
