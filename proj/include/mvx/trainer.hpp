#pragma once

// fit / predict_latent / predict_reconstruction.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mvx/batch.hpp"
#include "mvx/config.hpp"
#include "mvx/model.hpp"
#include "mvx/optim.hpp"
#include "mvx/rng.hpp"

namespace mvx {

/// Epoch-mean value of every loss term plus the total; epoch 0 is the
/// untrained state evaluated over the same batching.
struct EpochRecord {
  std::size_t epoch = 0;
  std::vector<std::pair<std::string, double>> terms;

  std::optional<double> find(const std::string& name) const;
};

struct RunState {
  ModelConfig config;
  ModelState model;
  Adam optimizer;
  Adam adversary;  // discriminator/critic; empty for other models
  std::size_t epoch = 0;
  Rng rng;
  std::vector<EpochRecord> history;
};

/// Model built from `cfg` for data with `view_dims`; no epochs run.
RunState init_run(const ModelConfig& cfg, const std::vector<std::size_t>& view_dims);

/// Called after each epoch record (including epoch 0) is appended.
using EpochSink = std::function<void(const EpochRecord&)>;

/// Runs epochs until `run.epoch == target_epochs`. A fresh run first records
/// epoch 0. Mini-batches follow a seeded shuffle per epoch; DCCAE and
/// trainer.full_batch use the whole set. Throws NumericError naming the epoch
/// and term when a loss turns non-finite.
void train(RunState& run, const MultiViewBatch& data, std::size_t target_epochs, const EpochSink& sink = {});

/// init_run + train for cfg.trainer.max_epochs.
RunState fit(const ModelConfig& cfg, const MultiViewBatch& data, const EpochSink& sink = {});

/// Header `epoch,term,value` plus one row per term.
std::string metrics_csv_header();
std::string metrics_csv_rows(const EpochRecord& r);

struct LatentPrediction {
  /// Posterior mean per encoder (DVCCA: one).
  std::vector<Tensor> views;
  /// Joint posterior mean when the model defines one.
  std::optional<Tensor> joint;
  /// Private posterior means for split-latent models.
  std::vector<Tensor> private_latents;
  /// Sparse mcVAE: dimensions kept under cfg threshold (all true otherwise).
  /// `views` and `joint` hold only the kept columns.
  std::vector<bool> retained;
};

LatentPrediction predict_latent(const ModelState& s, const MultiViewBatch& data);

/// grid[source][target]: sources are each encoder's latent, then the joint
/// when defined; every decoder is applied. Private parts follow decode_mean.
std::vector<std::vector<Tensor>> predict_reconstruction(const ModelState& s, const MultiViewBatch& data);

}  // namespace mvx
