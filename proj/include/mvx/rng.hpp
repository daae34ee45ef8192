#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mvx/tensor.hpp"

namespace mvx {

/// Seeded generator with explicit uniform/normal transforms so a sequence is
/// fully determined by the engine state (no hidden distribution caches).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; one engine pair per draw.
  double normal();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  /// Seeded Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

  std::string state() const;
  void set_state(const std::string& state);

 private:
  std::mt19937_64 engine_;
};

/// Per-key record of noise draws.
using NoiseRecord = std::map<std::string, std::vector<double>, std::less<>>;

/// Named stream of reparameterization noise for one objective evaluation.
///
/// Every draw is keyed (e.g. "z[1]", "iwae[0].k3"). In live mode draws come
/// from an Rng and can be recorded; in replay mode the same keys return the
/// recorded values, so a loss can be re-evaluated under identical eps (finite
/// differences, independent oracles).
class NoiseSource {
 public:
  explicit NoiseSource(Rng& rng, bool record = false) : rng_(&rng), recording_(record) {}
  static NoiseSource replay(NoiseRecord record);

  /// [rows×cols] standard-normal draws.
  Tensor normal(std::string_view key, std::size_t rows, std::size_t cols);
  /// `count` uniform indices in [0, n).
  std::vector<std::size_t> indices(std::string_view key, std::size_t count, std::size_t n);

  bool recording() const { return recording_; }
  const NoiseRecord& record() const { return record_; }

 private:
  NoiseSource() = default;
  std::vector<double> take(std::string_view key, std::size_t count, const std::function<double()>& draw);

  Rng* rng_ = nullptr;
  bool recording_ = false;
  bool replaying_ = false;
  NoiseRecord record_;
};

}  // namespace mvx
