// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gradcheck.hpp"
#include "micro.hpp"
#include "mvx/checkpoint.hpp"
#include "mvx/config.hpp"
#include "mvx/data.hpp"
#include "mvx/error.hpp"
#include "mvx/eval.hpp"
#include "mvx/objectives.hpp"
#include "mvx/ops.hpp"
#include "mvx/pooling.hpp"
#include "mvx/trainer.hpp"
#include "oracle.hpp"

using namespace mvx;
using namespace mvx::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Instance {
  ModelState s;
  MultiViewBatch b;
  NoiseRecord noise;
};

Instance make(const MicroCase& c) {
  Instance in{perturbed_model(c.spec, 21), micro_batch(c.spec.view_dims, 5, 31), {}};
  in.noise = record_noise(in.s, in.b, 41);
  return in;
}

LossBreakdown replay(const Instance& in) {
  NoiseSource src = NoiseSource::replay(in.noise);
  return model_loss(in.s, in.b, src);
}

MicroCase find_case(const std::string& name) {
  for (auto& c : micro_cases()) {
    if (c.name == name) return c;
  }
  throw std::logic_error("no micro case " + name);
}

std::vector<fs::path> files_in(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".cfg") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

// 1. Finite-difference gradients of every objective.
void gradients(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  std::size_t cases = 0, checked = 0;
  for (std::size_t views : {2, 3}) {
    for (const auto& c : micro_cases(views)) {
      const Instance in = make(c);
      auto rep = check_gradients(in.s.all_parameters(), [&] { return replay(in).total; });
      if (is_adversarial(c.spec.kind)) {
        const auto adv = check_gradients(in.s.adversary_parameters(), [&] {
          NoiseSource src = NoiseSource::replay(in.noise);
          return adversarial_losses(in.s, in.b, src).discriminator;
        });
        rep.checked += adv.checked;
        if (adv.worst > rep.worst) rep.worst = adv.worst, rep.worst_at = adv.worst_at;
      }
      o.require(rep.worst < 1e-3, c.name + " (" + std::to_string(views) + " views) " + rep.worst_at);
      worst = std::max(worst, rep.worst);
      checked += rep.checked;
      ++cases;
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 60, "runtime");
  o.detail << cases << " instances, " << checked << " parameters, worst rel err " << worst << ", " << t << " s";
}

// 2. Closed-form KL, PoE, gPoE and subset enumeration.
void closed_forms(Outcome& o) {
  // The Monte-Carlo estimate reuses one set of draws for both densities.
  const GaussianParams q{Tensor::matrix(1, 3, {0.5, -1.0, 0.2}), Tensor::matrix(1, 3, {-0.4, 0.3, 0.0})};
  const GaussianParams p{Tensor::matrix(1, 3, {0.0, 0.5, -0.3}), Tensor::matrix(1, 3, {0.2, -0.5, 0.7})};
  const double exact = kl_normal(q, p).item();
  const std::size_t N = 100000;
  Rng rng(123);
  std::vector<double> eps(N * 3);
  for (auto& e : eps) e = rng.normal();
  const Tensor zero(Shape{N, 3}, 0.0);
  const GaussianParams qn{zero + q.mean, zero + q.log_var}, pn{zero + p.mean, zero + p.log_var};
  const Tensor z = rsample(qn, Tensor::matrix(N, 3, std::move(eps)));
  const Tensor d = gaussian_log_prob(qn, z) - gaussian_log_prob(pn, z);
  const double m = mean(d).item();
  const double se = std::sqrt(mean(square(d - m)).item() / static_cast<double>(N));
  o.require(std::abs(m - exact) < 3 * se, "kl_normal vs Monte-Carlo");
  o.detail << "KL " << exact << " vs MC " << m << " (" << std::abs(m - exact) / se << " sigma)";

  Rng g(1);
  auto gauss = [&g](std::size_t n, std::size_t dim) {
    std::vector<double> mu(n * dim), lv(n * dim);
    for (auto& v : mu) v = g.normal();
    for (auto& v : lv) v = 0.8 * g.normal();
    return GaussianParams{Tensor::matrix(n, dim, mu), Tensor::matrix(n, dim, lv)};
  };
  auto pdf = [](double x, double mu, double var) {
    return std::exp(-0.5 * (x - mu) * (x - mu) / var) / std::sqrt(2 * std::numbers::pi * var);
  };
  std::vector<GaussianParams> experts;
  for (int k = 0; k < 3; ++k) experts.push_back(gauss(1, 2));
  double dev = 0;
  for (bool prior : {false, true}) {
    const GaussianParams pq = poe({experts, {}, prior});
    for (std::size_t j = 0; j < 2; ++j) {
      const double lo = -12, hi = 12;
      const std::size_t G = 48001;
      const double h = (hi - lo) / static_cast<double>(G - 1);
      std::vector<double> dens(G);
      double zsum = 0;
      for (std::size_t i = 0; i < G; ++i) {
        const double x = lo + h * static_cast<double>(i);
        double v = prior ? pdf(x, 0, 1) : 1.0;
        for (const auto& e : experts) v *= pdf(x, e.mean.at(0, j), std::exp(e.log_var.at(0, j)));
        dens[i] = v;
        zsum += (i == 0 || i == G - 1 ? 0.5 : 1.0) * v * h;
      }
      for (std::size_t i = 0; i < G; ++i) {
        const double x = lo + h * static_cast<double>(i);
        dev = std::max(dev, std::abs(dens[i] / zsum - pdf(x, pq.mean.at(0, j), std::exp(pq.log_var.at(0, j)))));
      }
    }
  }
  o.require(dev < 1e-6, "poe grid");
  o.detail << "; poe grid dev " << dev;

  std::vector<GaussianParams> batch;
  for (int k = 0; k < 3; ++k) batch.push_back(gauss(4, 3));
  bool bitwise = true;
  for (bool prior : {false, true}) {
    const GaussianParams a = poe({batch, {}, prior});
    const GaussianParams b = gpoe({batch, Tensor(Shape{prior ? 4u : 3u, 3}, 1.0), prior});
    bitwise = bitwise && std::memcmp(a.mean.values().data(), b.mean.values().data(), 12 * sizeof(double)) == 0 &&
              std::memcmp(a.log_var.values().data(), b.log_var.values().data(), 12 * sizeof(double)) == 0;
  }
  o.require(bitwise, "gpoe unit weights");
  o.detail << "; gpoe(1) bitwise " << (bitwise ? "yes" : "no");

  bool counts = true;
  for (std::size_t M = 1; M <= 8; ++M) counts = counts && enumerate_subsets(M).size() == (std::size_t{1} << M) - 1;
  o.require(counts, "subset counts");
  o.detail << "; subsets 2^M-1 for M=1..8";
}

// 3. Structural reductions.
void reductions(Outcome& o) {
  {
    MicroCase c = find_case("JMVAE");
    c.spec.hyper.alpha = 0.0;
    const Instance in = make(c);
    NoiseSource a = NoiseSource::replay(in.noise), b = NoiseSource::replay(in.noise);
    const LossBreakdown kl = jmvae_kl_loss(in.s, in.b, a), plain = jmvae_loss(in.s, in.b, b);
    bool same = kl.terms.size() == plain.terms.size() && kl.total.item() == plain.total.item();
    for (std::size_t i = 0; same && i < kl.terms.size(); ++i) {
      same = kl.terms[i].name == plain.terms[i].name && kl.terms[i].weight == plain.terms[i].weight &&
             kl.terms[i].value.item() == plain.terms[i].value.item();
    }
    o.require(same && kl.count("kl_joint") == 0, "jmvae_kl(alpha=0)");
    o.detail << "jmvae_kl(0): " << kl.terms.size() << " terms equal";
  }
  {
    MicroCase c = find_case("MVTCAE");
    c.spec.hyper.alpha = 0.0;
    const LossBreakdown l = replay(make(c));
    const LossBreakdown full = replay(make(find_case("MVTCAE")));
    o.require(l.count("cvib") == 0 && full.count("cvib") == 3, "mvtcae(alpha=0)");
    o.detail << "; mvtcae(0): " << l.count("cvib") << " cvib terms (vs " << full.count("cvib") << ")";
  }
  {
    MicroCase c = find_case("mmVAE");
    c.spec.hyper.K = 1;
    c.spec.view_dims = {3};
    c.spec.encoders.resize(1);
    c.spec.decoders.resize(1);
    const Instance in = make(c);
    const LossBreakdown l = replay(in);
    const GaussianParams q = encode_gaussian(in.s.encoders[0], in.b.views[0]);
    const Tensor z = rsample(q, Tensor::matrix(in.b.size(), 2, in.noise.at("z[0].k0")));
    const double elbo = mean(log_prob(decode(in.s.decoders[0], z), in.b.views[0]) +
                             gaussian_log_prob(standard_normal(in.b.size(), 2), z) - gaussian_log_prob(q, z))
                            .item();
    const double diff = std::abs(l.total.item() + elbo);
    o.require(l.terms.size() == 1 && l.terms[0].name == "iwae[0]" && diff < 1e-9, "mmvae K=1 M=1");
    o.detail << "; mmvae K=1 M=1: single iwae term, |diff| " << diff;
  }
}

// 4. Independent scalar recomputation of every objective.
void oracle_match(Outcome& o) {
  double worst = 0;
  std::vector<ModelKind> seen;
  for (std::size_t views : {2, 3}) {
    for (const auto& c : micro_cases(views)) {
      const Instance in = make(c);
      const double ref = oracle::total_loss(in.s, in.b, in.noise);
      const double err = std::abs(replay(in).total.item() - ref) / std::max(1.0, std::abs(ref));
      o.require(err < 1e-6, c.name);
      worst = std::max(worst, err);
      if (is_adversarial(c.spec.kind)) {
        NoiseSource src = NoiseSource::replay(in.noise);
        const double adv = adversarial_losses(in.s, in.b, src).discriminator.item();
        const double aref = oracle::adversary_loss(in.s, in.b, in.noise);
        const double aerr = std::abs(adv - aref) / std::max(1.0, std::abs(aref));
        o.require(aerr < 1e-6, c.name + " adversary");
        worst = std::max(worst, aerr);
      }
      if (std::find(seen.begin(), seen.end(), c.spec.kind) == seen.end()) seen.push_back(c.spec.kind);
    }
  }
  o.require(seen.size() == std::size(kAllModels), "model coverage");
  o.detail << seen.size() << " models, worst rel diff " << worst;
}

// 5. Coherence on the synthetic 3-view set.
void coherence_experiment(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  SyntheticSpec spec;
  spec.n_classes = 8;
  spec.dims = {24, 24, 24};
  spec.n_samples = 2000;
  spec.seed = 1;
  const MultiViewBatch train = generate_synthetic(spec);
  spec.n_samples = 500;
  spec.seed = 2;
  const MultiViewBatch test = generate_synthetic(spec);
  const auto probes = train_probes(train, 8);
  o.detail << "probe acc";
  for (std::size_t m = 0; m < 3; ++m) o.detail << " " << probes[m].accuracy(test.views[m], test.labels);
  for (const char* name : {"me_mVAE", "MVTCAE", "MoPoEVAE", "weighted_mVAE"}) {
    const ModelConfig cfg = load_config(fs::path(MVX_CONFIGS) / (std::string(name) + ".cfg"));
    o.require(cfg.trainer.max_epochs == 200, std::string(name) + " epochs");
    const RunState run = fit(cfg, train);
    const CoherenceReport r = coherence(run.model, test, probes);
    o.require(r.mean_cross() >= 0.8, std::string(name) + " coherence");
    o.detail << "; " << name << " " << r.mean_cross() << " (";
    for (std::size_t k = 0; k < r.by_size.size(); ++k) o.detail << (k ? "/" : "") << r.by_size[k];
    o.detail << ")";
    if (std::string(name) == "MVTCAE") {
      o.require(std::is_sorted(r.by_size.begin(), r.by_size.end()), "MVTCAE monotone in subset size");
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 600, "runtime");
  o.detail << "; " << t << " s";
}

// Closed-form mean log N(x; b, W Wᵀ + σ²I) of a model with linear decoders.
double exact_log_likelihood(const ModelState& s, const MultiViewBatch& data) {
  std::size_t D = 0;
  for (auto d : s.spec.view_dims) D += d;
  const std::size_t Z = s.spec.z_dim;
  Eigen::MatrixXd W(D, Z);
  Eigen::VectorXd mu(D), var(D);
  std::size_t off = 0;
  for (std::size_t m = 0; m < s.n_views(); ++m) {
    const Linear& head = s.decoders[m].head;
    for (std::size_t r = 0; r < s.spec.view_dims[m]; ++r) {
      for (std::size_t k = 0; k < Z; ++k) W(off + r, k) = head.weight.at(k, r);
      mu(off + r) = head.bias.at(r);
      var(off + r) = s.decoders[m].scale * s.decoders[m].scale;
    }
    off += s.spec.view_dims[m];
  }
  Eigen::MatrixXd C = W * W.transpose();
  C.diagonal() += var;
  const Eigen::LLT<Eigen::MatrixXd> llt(C);
  const double logdet = 2 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
  double total = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Eigen::VectorXd x(D);
    off = 0;
    for (std::size_t m = 0; m < s.n_views(); ++m) {
      for (std::size_t r = 0; r < s.spec.view_dims[m]; ++r) x(off + r) = data.views[m].at(i, r);
      off += s.spec.view_dims[m];
    }
    const Eigen::VectorXd d = x - mu;
    total += -0.5 * (static_cast<double>(D) * std::log(2 * std::numbers::pi) + logdet + d.dot(llt.solve(d)));
  }
  return total / static_cast<double>(data.size());
}

// mVAE whose PoE posterior is the exact posterior of a linear-Gaussian model
// with orthogonal loading columns.
ModelState exact_posterior_model(double sigma) {
  ModelSpec spec;
  spec.kind = ModelKind::mVAE;
  spec.view_dims = {4, 3};
  spec.z_dim = 2;
  NetSpec lin;
  lin.non_linear = false;
  spec.encoders = {lin, lin};
  lin.scale = sigma;
  spec.decoders = {lin, lin};
  ModelState s = build_model(spec);
  const std::vector<std::vector<double>> W{{0.9, 0.0, 0.9, 0.0, 0.0, 0.7, 0.0, -0.7}, {1.2, 0.0, 0.0, 0.5, 1.2, 0.0}};
  const std::vector<std::vector<double>> b{{0.1, -0.2, 0.3, 0.0}, {0.5, -0.1, 0.2}};
  for (std::size_t m = 0; m < 2; ++m) {
    const std::size_t D = spec.view_dims[m];
    auto dw = s.decoders[m].head.weight.mutable_values();
    auto db = s.decoders[m].head.bias.mutable_values();
    auto ew = s.encoders[m].mean_head.weight.mutable_values();
    auto eb = s.encoders[m].mean_head.bias.mutable_values();
    auto lw = s.encoders[m].log_var_head.weight.mutable_values();
    auto lb = s.encoders[m].log_var_head.bias.mutable_values();
    std::fill(lw.begin(), lw.end(), 0.0);
    for (std::size_t k = 0; k < 2; ++k) {
      double norm2 = 0, shift = 0;
      for (std::size_t r = 0; r < D; ++r) norm2 += W[m][r * 2 + k] * W[m][r * 2 + k];
      for (std::size_t r = 0; r < D; ++r) {
        dw[k * D + r] = W[m][r * 2 + k];
        ew[r * 2 + k] = W[m][r * 2 + k] / norm2;
        shift += W[m][r * 2 + k] * b[m][r] / norm2;
      }
      eb[k] = -shift;
      lb[k] = std::log(sigma * sigma / norm2);
    }
    for (std::size_t r = 0; r < D; ++r) db[r] = b[m][r];
  }
  return s;
}

// 6. Importance-sampled joint log-likelihood against the closed form.
void loglik(Outcome& o) {
  const double sigma = 0.5;
  {
    const ModelState s = exact_posterior_model(sigma);
    Rng rng(8);
    MultiViewBatch data;
    const std::size_t n = 300;
    std::vector<double> z(n * 2);
    for (auto& v : z) v = rng.normal();
    for (std::size_t m = 0; m < 2; ++m) {
      const std::size_t D = s.spec.view_dims[m];
      std::vector<double> x(n * D);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < D; ++r) {
          double v = s.decoders[m].head.bias.at(r) + sigma * rng.normal();
          for (std::size_t k = 0; k < 2; ++k) v += s.decoders[m].head.weight.at(k, r) * z[i * 2 + k];
          x[i * D + r] = v;
        }
      }
      data.views.push_back(Tensor::matrix(n, D, std::move(x)));
    }
    const double exact = exact_log_likelihood(s, data);
    const double est = joint_log_likelihood(s, data, 1000, 3);
    o.require(std::abs(est - exact) < 0.05, "exact-posterior mVAE");
    o.detail << "exact-posterior mVAE: " << est << " vs " << exact;
  }
  // The seed also draws the loadings, so train and test come from one call.
  const MultiViewBatch all = generate_linear_gaussian(1300, {4, 3}, 2, sigma, 3);
  std::vector<std::size_t> idx(all.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const MultiViewBatch train = all.select(std::span(idx).first(1000));
  const MultiViewBatch test = all.select(std::span(idx).subspan(1000));
  for (const char* name : {"mVAE", "JMVAE", "MVTCAE", "weighted_mVAE", "MoPoEVAE", "mmVAE"}) {
    const ModelConfig cfg = parse_config(std::string("model.name = ") + name +
                                         "\nmodel.z_dim = 2\nmodel.seed = 1\nmodel.learning_rate = 0.01\n"
                                         "encoder.default.hidden_layer_dim = []\nencoder.default.non_linear = false\n"
                                         "decoder.default.hidden_layer_dim = []\ndecoder.default.non_linear = false\n"
                                         "decoder.default.scale = 0.5\ntrainer.max_epochs = 100\n"
                                         "trainer.batch_size = 100\n");
    const RunState run = fit(cfg, train);
    const double exact = exact_log_likelihood(run.model, test);
    const double est = joint_log_likelihood(run.model, test, 1000, 7);
    o.require(std::abs(est - exact) < 0.05, name);
    o.detail << "; " << name << " " << est << " vs " << exact;
  }
}

// 7. Training decreases the objective.
void optimization(Outcome& o) {
  const MultiViewBatch data = generate_linear_gaussian(500, {4, 3}, 2, 0.3, 5);
  std::vector<ModelConfig> configs;
  for (const auto& f : files_in(MVX_CONFIGS)) {
    ModelConfig cfg = load_config(f);
    // Shipped per-view vectors are sized for three views.
    if (cfg.lambda.size() > 2) cfg.lambda.resize(2);
    if (cfg.pi.size() > 3) cfg.pi.clear();
    cfg.trainer.max_epochs = 200;
    configs.push_back(cfg);
    if (cfg.kind == ModelKind::mcVAE && cfg.sparse) {
      cfg.sparse = false;
      cfg.threshold = 0.0;
      configs.push_back(cfg);
    }
  }
  for (const auto& cfg : configs) {
    const RunState run = fit(cfg, data);
    const auto& first = run.history.front();
    const auto& last = run.history.back();
    const std::string name(model_name(cfg.kind));
    o.detail << (o.detail.tellp() > 0 ? "; " : "") << name;
    if (is_adversarial(cfg.kind)) {
      double lo = 1, hi = 0;
      for (const auto& r : run.history) {
        lo = std::min(lo, *r.find("accuracy"));
        hi = std::max(hi, *r.find("accuracy"));
      }
      const double r0 = *first.find("reconstruction"), r1 = *last.find("reconstruction");
      o.require(r1 < r0, name + " reconstruction");
      o.require(lo > 0.3 && hi < 0.95, name + " accuracy");
      o.detail << " recon " << r0 << "->" << r1 << " acc [" << lo << ", " << hi << "]";
    } else {
      const double t0 = *first.find("total"), t1 = *last.find("total");
      o.require(t1 < t0, name + " total");
      o.detail << " " << t0 << "->" << t1;
    }
  }
}

// 8. Bitwise reproducibility of checkpoints and metrics.
void reproducibility(Outcome& o) {
  const fs::path dir = fs::temp_directory_path() / "mvx_acceptance";
  fs::create_directories(dir);
  const MultiViewBatch data = generate_linear_gaussian(200, {4, 3, 2}, 2, 0.3, 6);
  for (const char* name : {"mVAE", "MoPoEVAE", "mmVAEPlus", "mWAE", "DMVAE"}) {
    std::string ckpt[2], csv[2];
    for (int r = 0; r < 2; ++r) {
      ModelConfig cfg = load_config(fs::path(MVX_CONFIGS) / (std::string(name) + ".cfg"));
      cfg.trainer.max_epochs = 5;
      if (cfg.kind == ModelKind::MoPoEVAE) cfg.subset_sampling = true;
      csv[r] = metrics_csv_header();
      const RunState run = fit(cfg, data, [&](const EpochRecord& e) { csv[r] += metrics_csv_rows(e); });
      const fs::path p = dir / (std::string(name) + std::to_string(r) + ".mvxc");
      save_checkpoint(p, run);
      ckpt[r] = read_bytes(p);
    }
    o.require(!ckpt[0].empty() && ckpt[0] == ckpt[1], std::string(name) + " checkpoint");
    o.require(csv[0] == csv[1], std::string(name) + " metrics");
    o.detail << (o.detail.tellp() > 0 ? ", " : "") << name << " " << ckpt[0].size() << " B";
  }
}

// 9. Config fixtures.
void config_validation(Outcome& o) {
  std::size_t negative = 0, positive = 0;
  for (const auto& f : files_in(fs::path(MVX_FIXTURES) / "configs" / "negative")) {
    const std::string text = read_bytes(f);
    const std::string tag = "# expect: ";
    const std::string expect = text.substr(tag.size(), text.find('\n') - tag.size());
    std::string got;
    try {
      load_config(f);
    } catch (const ConfigError& e) {
      got = e.what();
    }
    o.require(text.rfind(tag, 0) == 0 && got.rfind(expect, 0) == 0, f.filename().string() + ": " + got);
    ++negative;
  }
  std::vector<fs::path> ok = files_in(fs::path(MVX_FIXTURES) / "configs" / "positive");
  const auto shipped = files_in(MVX_CONFIGS);
  ok.insert(ok.end(), shipped.begin(), shipped.end());
  for (const auto& f : ok) {
    try {
      load_config(f);
      ++positive;
    } catch (const ConfigError& e) {
      o.require(false, f.filename().string() + ": " + e.what());
    }
  }
  o.detail << negative << " negative fixtures rejected, " << positive << " positive configs accepted";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"gradient suite", gradients},
      {"closed-form oracles", closed_forms},
      {"reduction identities", reductions},
      {"scalar-oracle equivalence", oracle_match},
      {"coherence experiment", coherence_experiment},
      {"joint log-likelihood", loglik},
      {"optimization sanity", optimization},
      {"reproducibility", reproducibility},
      {"config validation", config_validation},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
