// mvx: train, evaluate and inspect multi-view autoencoders from the command line.
//
// Exit codes: 0 success, 1 usage or configuration error (including metrics a
// model does not support), 2 runtime failure (I/O, data mismatch, numerics).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvx/checkpoint.hpp"
#include "mvx/config.hpp"
#include "mvx/data.hpp"
#include "mvx/error.hpp"
#include "mvx/eval.hpp"
#include "mvx/trainer.hpp"

namespace fs = std::filesystem;
using namespace mvx;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

MultiViewBatch load_data(const std::string& path) {
  if (!fs::exists(path)) throw Error("data file not found: " + path);
  return read_dataset(path);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
  if (!os) throw Error("write failed for " + path.string());
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("MVX_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long s = std::stoull(v, &used);
    if (used != std::string(v).size() || s > 4294967295ULL) throw std::invalid_argument("range");
    return s;
  } catch (const std::exception&) {
    throw UsageError(std::string("MVX_SEED: expected an integer in [0, 4294967295], got '") + v + "'");
  }
}

struct TrainArgs {
  std::string config, data, out;
  std::optional<std::size_t> epochs, batch_size;
  std::optional<std::uint64_t> seed;
};

int run_train(const TrainArgs& a) {
  ModelConfig cfg = load_config(a.config);
  if (a.epochs) cfg.trainer.max_epochs = *a.epochs;
  if (a.batch_size) {
    if (*a.batch_size == 0) throw UsageError("--batch-size: must be >= 1");
    cfg.trainer.batch_size = *a.batch_size;
  }
  if (a.seed) {
    cfg.seed = *a.seed;
  } else if (!cfg.seed) {
    cfg.seed = env_seed().value_or(0);
  }
  const MultiViewBatch data = load_data(a.data);
  resolve_spec(cfg, data.dims());

  fs::create_directories(a.out);
  const fs::path out(a.out);
  write_text(out / "resolved.cfg", render_config(cfg));
  std::ofstream metrics(out / "metrics.csv", std::ios::trunc);
  if (!metrics) throw Error("cannot write " + (out / "metrics.csv").string());
  metrics << metrics_csv_header();
  const RunState run = fit(cfg, data, [&metrics](const EpochRecord& r) {
    metrics << metrics_csv_rows(r);
    metrics.flush();
  });
  save_checkpoint(out / "checkpoint.mvxc", run);
  const auto& last = run.history.back();
  std::cout << "trained " << model_name(run.model.kind()) << " for " << run.epoch << " epochs; total "
            << last.find("total").value_or(0.0) << "\n";
  return 0;
}

struct EvalArgs {
  std::string run, data, metric, probe_data;
  std::size_t K = 1000;
  std::uint64_t seed = 0;
  std::size_t n_classes = 0;
};

int run_eval(const EvalArgs& a) {
  const RunState run = load_checkpoint(fs::path(a.run) / "checkpoint.mvxc");
  const MultiViewBatch test = load_data(a.data);
  const fs::path dir(a.run);
  if (a.metric == "coherence") {
    const MultiViewBatch train = a.probe_data.empty() ? test : load_data(a.probe_data);
    if (!train.has_labels() || !test.has_labels()) throw UsageError("coherence: data files must carry labels");
    std::size_t C = a.n_classes;
    if (C == 0) {
      for (auto l : train.labels) C = std::max<std::size_t>(C, l + 1);
      for (auto l : test.labels) C = std::max<std::size_t>(C, l + 1);
    }
    // Capability check before spending time on probes.
    if (test.n_views() != run.model.n_views()) throw DimensionError("eval: data view count does not match the model");
    ProbeOptions opt;
    opt.seed = a.seed;
    CoherenceReport rep;
    {
      const auto probes = train_probes(train, C, opt);
      rep = coherence(run.model, test, probes, a.seed);
    }
    write_text(dir / "coherence.csv", rep.csv());
    std::cout << "coherence " << model_name(run.model.kind()) << ": mean " << rep.mean_cross();
    for (std::size_t k = 0; k < rep.by_size.size(); ++k) std::cout << " |S|=" << k + 1 << ":" << rep.by_size[k];
    if (rep.self_coherence) std::cout << " self:" << *rep.self_coherence;
    std::cout << "\n";
  } else {
    const double ll = joint_log_likelihood(run.model, test, a.K, a.seed);
    std::ostringstream os;
    os.precision(17);
    os << "metric,value\nloglik," << ll << "\nK," << a.K << "\n";
    write_text(dir / "loglik.csv", os.str());
    std::cout << "loglik " << model_name(run.model.kind()) << " (K=" << a.K << "): " << ll << " nats\n";
  }
  return 0;
}

int run_reconstruct(const std::string& run_dir, const std::string& data_path, const std::string& out_dir) {
  const RunState run = load_checkpoint(fs::path(run_dir) / "checkpoint.mvxc");
  const MultiViewBatch data = load_data(data_path);
  const auto grid = predict_reconstruction(run.model, data);
  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  const std::size_t view_sources = run.model.encoders.size();
  std::string manifest = "source,source_kind,target,file\n";
  for (std::size_t src = 0; src < grid.size(); ++src) {
    const bool joint = src >= view_sources;
    for (std::size_t t = 0; t < grid[src].size(); ++t) {
      const std::string file = "recon_" + std::to_string(src) + "_" + std::to_string(t) + ".mvds";
      MultiViewBatch b;
      b.views.push_back(grid[src][t]);
      b.labels = data.labels;
      write_dataset(out / file, b);
      manifest += std::to_string(src) + "," + (joint ? "joint" : "view") + "," + std::to_string(t) + "," + file + "\n";
    }
  }
  write_text(out / "manifest.csv", manifest);
  std::cout << "wrote " << grid.size() << "x" << (grid.empty() ? 0 : grid[0].size()) << " reconstructions to "
            << out_dir << "\n";
  return 0;
}

struct GenArgs {
  std::string out, kind = "synthetic";
  std::size_t samples = 1000, classes = 8, latent = 2;
  std::vector<std::size_t> dims{24, 24, 24};
  double style_noise = 0.5, background_noise = 0.5, noise = 0.1;
  std::uint64_t seed = 0;
};

int run_gen(const GenArgs& a) {
  MultiViewBatch b;
  if (a.kind == "synthetic") {
    SyntheticSpec spec;
    spec.n_classes = a.classes;
    spec.n_samples = a.samples;
    spec.dims = a.dims;
    spec.style_noise = a.style_noise;
    spec.background_noise = a.background_noise;
    spec.seed = a.seed;
    b = generate_synthetic(spec);
  } else {
    b = generate_linear_gaussian(a.samples, a.dims, a.latent, a.noise, a.seed);
  }
  write_dataset(a.out, b);
  std::cout << "wrote " << b.size() << " samples x " << b.n_views() << " views to " << a.out << "\n";
  return 0;
}

int run_validate(const std::vector<std::string>& paths) {
  int status = 0;
  for (const auto& p : paths) {
    try {
      load_config(p);
      std::cout << p << ": ok\n";
    } catch (const ConfigError& e) {
      std::cerr << p << ": " << e.what() << "\n";
      status = 1;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mvx: multi-view autoencoders"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "fit a model and write checkpoint, metrics and resolved config");
  t->add_option("--config", train.config, "config file")->required();
  t->add_option("--data", train.data, "MVDS training data")->required();
  t->add_option("--out", train.out, "output directory")->required();
  t->add_option("--epochs", train.epochs, "override trainer.max_epochs");
  t->add_option("--batch-size", train.batch_size, "override trainer.batch_size");
  t->add_option("--seed", train.seed, "override model.seed")->check(CLI::Range(0ULL, 4294967295ULL));

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "coherence or joint log-likelihood of a trained run");
  e->add_option("--run", ev.run, "run directory")->required();
  e->add_option("--data", ev.data, "MVDS test data")->required();
  e->add_option("--metric", ev.metric, "coherence or loglik")->required()->check(CLI::IsMember({"coherence", "loglik"}));
  e->add_option("--K", ev.K, "importance samples for loglik")->check(CLI::PositiveNumber);
  e->add_option("--probe-data", ev.probe_data, "labeled data for the probe classifiers (default: --data)");
  e->add_option("--classes", ev.n_classes, "number of classes (default: from labels)");
  e->add_option("--seed", ev.seed, "probe and sampling seed");

  std::string rec_run, rec_data, rec_out;
  auto* r = app.add_subcommand("reconstruct", "write the source x target reconstruction grid");
  r->add_option("--run", rec_run, "run directory")->required();
  r->add_option("--data", rec_data, "MVDS data")->required();
  r->add_option("--out", rec_out, "output directory")->required();

  GenArgs gen;
  auto* g = app.add_subcommand("gen-data", "write a synthetic MVDS dataset");
  g->add_option("--out", gen.out, "output file")->required();
  g->add_option("--kind", gen.kind, "synthetic or linear")->check(CLI::IsMember({"synthetic", "linear"}));
  g->add_option("--samples", gen.samples, "number of samples")->check(CLI::PositiveNumber);
  g->add_option("--classes", gen.classes, "classes (synthetic)");
  g->add_option("--dims", gen.dims, "per-view dims")->delimiter(',');
  g->add_option("--style-noise", gen.style_noise, "style noise (synthetic)");
  g->add_option("--background-noise", gen.background_noise, "background noise (synthetic)");
  g->add_option("--latent", gen.latent, "latent dim (linear)");
  g->add_option("--noise", gen.noise, "observation noise (linear)");
  g->add_option("--seed", gen.seed, "seed");

  std::vector<std::string> cfgs;
  auto* v = app.add_subcommand("validate-config", "check config files");
  v->add_option("configs", cfgs, "config files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*t) return run_train(train);
    if (*e) return run_eval(ev);
    if (*r) return run_reconstruct(rec_run, rec_data, rec_out);
    if (*g) return run_gen(gen);
    if (*v) return run_validate(cfgs);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 1;
  } catch (const UnsupportedError& err) {
    std::cerr << "unsupported: " << err.what() << "\n";
    return 1;
  } catch (const UsageError& err) {
    std::cerr << "usage: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 1;
}
