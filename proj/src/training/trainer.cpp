#include "mvx/trainer.hpp"

#include <charconv>
#include <map>

#include "mvx/error.hpp"
#include "mvx/inference.hpp"
#include "mvx/objectives.hpp"
#include "mvx/ops.hpp"

namespace mvx {
namespace {

// Keeps the shuffle stream apart from the initialization stream of the same seed.
constexpr std::uint64_t kShuffleSalt = 0x9e3779b97f4a7c15ULL;

// Row-weighted running means in first-seen order.
class EpochAccumulator {
 public:
  void add(const std::string& name, double value, std::size_t rows) {
    auto [it, fresh] = index_.try_emplace(name, sums_.size());
    if (fresh) sums_.push_back({name, 0.0});
    sums_[it->second].second += value * static_cast<double>(rows);
  }
  void add_rows(std::size_t rows) { rows_ += rows; }

  EpochRecord finish(std::size_t epoch) const {
    EpochRecord r;
    r.epoch = epoch;
    for (const auto& [name, sum] : sums_) r.terms.push_back({name, sum / static_cast<double>(rows_)});
    return r;
  }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::pair<std::string, double>> sums_;
  std::size_t rows_ = 0;
};

void record_breakdown(EpochAccumulator& acc, const LossBreakdown& l, std::size_t rows) {
  for (const auto& t : l.terms) acc.add(t.name, t.value.item(), rows);
}

std::vector<std::vector<std::size_t>> make_batches(const RunState& run, std::size_t n, Rng& rng) {
  const bool full = run.config.trainer.full_batch || run.model.kind() == ModelKind::DCCAE;
  const std::size_t bs = full ? n : std::min(run.config.trainer.batch_size, n);
  const auto order = rng.permutation(n);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < n; i += bs) out.emplace_back(order.begin() + i, order.begin() + std::min(n, i + bs));
  return out;
}

void step_standard(RunState& run, const MultiViewBatch& b, bool update, EpochAccumulator& acc) {
  NoiseSource noise(run.rng);
  const LossBreakdown l = model_loss(run.model, b, noise);
  record_breakdown(acc, l, b.size());
  acc.add("total", l.total.item(), b.size());
  if (!update) return;
  run.optimizer.zero_grad();
  l.total.backward();
  run.optimizer.step();
}

// Encoder/decoder step on reconstruction + generator, then the adversary steps.
void step_adversarial(RunState& run, const MultiViewBatch& b, bool update, EpochAccumulator& acc) {
  NoiseSource noise(run.rng);
  const AdversarialLosses a = adversarial_losses(run.model, b, noise);
  record_breakdown(acc, a.reconstruction, b.size());
  acc.add("reconstruction", a.reconstruction.total.item(), b.size());
  acc.add("discriminator", a.discriminator.item(), b.size());
  acc.add("generator", a.generator.item(), b.size());
  acc.add("accuracy", a.accuracy, b.size());
  acc.add("total", a.objective, b.size());
  if (!update) return;

  run.optimizer.zero_grad();
  (a.reconstruction.total + a.generator).backward();
  run.optimizer.step();

  const bool wasserstein = run.model.kind() == ModelKind::mWAE;
  const std::size_t steps = wasserstein ? run.model.spec.hyper.critic_steps : 1;
  for (std::size_t k = 0; k < steps; ++k) {
    NoiseSource adv_noise(run.rng);
    const AdversarialLosses d = adversarial_losses(run.model, b, adv_noise);
    run.adversary.zero_grad();
    d.discriminator.backward();
    run.adversary.step();
    if (wasserstein) run.adversary.clip(run.model.spec.hyper.clip);
  }
}

EpochRecord run_epoch(RunState& run, const MultiViewBatch& data, bool update) {
  EpochAccumulator acc;
  const bool adversarial = is_adversarial(run.model.kind());
  for (const auto& idx : make_batches(run, data.size(), run.rng)) {
    const MultiViewBatch b = data.select(idx);
    if (adversarial) {
      step_adversarial(run, b, update, acc);
    } else {
      step_standard(run, b, update, acc);
    }
    acc.add_rows(b.size());
  }
  return acc.finish(run.epoch);
}

Tensor keep_columns(const Tensor& t, const std::vector<bool>& keep) {
  std::size_t kept = 0;
  for (bool k : keep) kept += k ? 1 : 0;
  if (kept == keep.size()) return t;
  const std::size_t n = t.rows(), d = t.cols();
  const auto src = t.values();
  std::vector<double> out;
  out.reserve(n * kept);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (keep[j]) out.push_back(src[i * d + j]);
    }
  }
  return Tensor::matrix(n, kept, std::move(out));
}

void check_dims(const ModelState& s, const MultiViewBatch& data, const char* where) {
  data.validate();
  if (data.dims() != s.spec.view_dims) throw DimensionError(std::string(where) + ": data view dims do not match the model");
}

}  // namespace

std::optional<double> EpochRecord::find(const std::string& name) const {
  for (const auto& [n, v] : terms) {
    if (n == name) return v;
  }
  return std::nullopt;
}

RunState init_run(const ModelConfig& cfg, const std::vector<std::size_t>& view_dims) {
  RunState run;
  run.config = cfg;
  run.model = build_model(resolve_spec(cfg, view_dims));
  run.optimizer = Adam(run.model.parameters(), cfg.learning_rate);
  if (is_adversarial(run.model.kind())) run.adversary = Adam(run.model.adversary_parameters(), cfg.learning_rate);
  run.rng = Rng(cfg.seed_or_zero() ^ kShuffleSalt);
  return run;
}

void train(RunState& run, const MultiViewBatch& data, std::size_t target_epochs, const EpochSink& sink) {
  check_dims(run.model, data, "fit");
  if (data.size() == 0) throw DimensionError("fit: empty dataset");
  try {
    if (run.history.empty()) {
      run.history.push_back(run_epoch(run, data, false));
      if (sink) sink(run.history.back());
    }
    while (run.epoch < target_epochs) {
      ++run.epoch;
      run.history.push_back(run_epoch(run, data, true));
      if (sink) sink(run.history.back());
    }
  } catch (const NumericError& e) {
    throw NumericError("epoch " + std::to_string(run.epoch) + ": " + e.what());
  }
}

RunState fit(const ModelConfig& cfg, const MultiViewBatch& data, const EpochSink& sink) {
  RunState run = init_run(cfg, data.dims());
  train(run, data, cfg.trainer.max_epochs, sink);
  return run;
}

std::string metrics_csv_header() { return "epoch,term,value\n"; }

std::string metrics_csv_rows(const EpochRecord& r) {
  std::string out;
  char buf[64];
  for (const auto& [name, value] : r.terms) {
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    out += std::to_string(r.epoch) + "," + name + "," + std::string(buf, res.ptr) + "\n";
  }
  return out;
}

LatentPrediction predict_latent(const ModelState& s, const MultiViewBatch& data) {
  check_dims(s, data, "predict_latent");
  LatentPrediction out;
  out.retained = retained_dimensions(s);
  for (std::size_t m = 0; m < s.encoders.size(); ++m) {
    out.views.push_back(keep_columns(encode_point(s.encoders[m], data.views[m]).detach(), out.retained));
  }
  if (has_joint_latent(s.spec)) {
    SubsetIndex all;
    for (std::size_t m = 0; m < s.n_views(); ++m) all.members.push_back(m);
    const GaussianParams q = subset_posterior(s, data, view_posteriors(s, data), all);
    out.joint = keep_columns(q.mean.detach(), out.retained);
  }
  for (const auto& e : s.private_encoders) {
    out.private_latents.push_back(encode_point(e, data.views[&e - s.private_encoders.data()]).detach());
  }
  return out;
}

std::vector<std::vector<Tensor>> predict_reconstruction(const ModelState& s, const MultiViewBatch& data) {
  check_dims(s, data, "predict_reconstruction");
  Rng rng(s.spec.seed);
  std::vector<std::vector<Tensor>> grid;
  const std::size_t M = s.n_views();
  for (std::size_t src = 0; src < s.encoders.size(); ++src) {
    const Tensor z = encode_point(s.encoders[src], data.views[src]);
    std::vector<Tensor> row_out;
    for (std::size_t t = 0; t < M; ++t) row_out.push_back(decode_mean(s, data, t, z, t == src, rng).detach());
    grid.push_back(std::move(row_out));
  }
  if (has_joint_latent(s.spec)) {
    SubsetIndex all;
    for (std::size_t m = 0; m < M; ++m) all.members.push_back(m);
    const Tensor z = subset_posterior(s, data, view_posteriors(s, data), all).mean;
    std::vector<Tensor> row_out;
    for (std::size_t t = 0; t < M; ++t) row_out.push_back(decode_mean(s, data, t, z, true, rng).detach());
    grid.push_back(std::move(row_out));
  }
  return grid;
}

}  // namespace mvx
