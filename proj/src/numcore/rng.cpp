#include "mvx/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mvx/error.hpp"

namespace mvx {

double Rng::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw DomainError("rng: index range is empty");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[index(i)]);
  return p;
}

std::string Rng::state() const {
  std::ostringstream os;
  os << engine_;
  return os.str();
}

void Rng::set_state(const std::string& state) {
  std::istringstream is(state);
  is >> engine_;
  if (!is) throw FormatError("rng: unreadable engine state");
}

NoiseSource NoiseSource::replay(NoiseRecord record) {
  NoiseSource src;
  src.replaying_ = true;
  src.record_ = std::move(record);
  return src;
}

std::vector<double> NoiseSource::take(std::string_view key, std::size_t count, const std::function<double()>& draw) {
  if (replaying_) {
    auto it = record_.find(key);
    if (it == record_.end()) throw ContractError("noise replay: no recorded draw for key '" + std::string(key) + "'");
    if (it->second.size() != count) {
      throw DimensionError("noise replay: key '" + std::string(key) + "' holds " + std::to_string(it->second.size()) +
                           " values, requested " + std::to_string(count));
    }
    return it->second;
  }
  std::vector<double> out(count);
  for (auto& v : out) v = draw();
  if (recording_) {
    auto [it, inserted] = record_.emplace(std::string(key), out);
    if (!inserted) throw ContractError("noise: key '" + std::string(key) + "' drawn twice in one evaluation");
  }
  return out;
}

Tensor NoiseSource::normal(std::string_view key, std::size_t rows, std::size_t cols) {
  auto values = take(key, rows * cols, [this] { return rng_->normal(); });
  return Tensor::matrix(rows, cols, std::move(values));
}

std::vector<std::size_t> NoiseSource::indices(std::string_view key, std::size_t count, std::size_t n) {
  auto values = take(key, count, [this, n] { return static_cast<double>(rng_->index(n)); });
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(values[i]);
    if (idx >= n) throw DimensionError("noise replay: index out of range for key '" + std::string(key) + "'");
    out[i] = idx;
  }
  return out;
}

}  // namespace mvx
