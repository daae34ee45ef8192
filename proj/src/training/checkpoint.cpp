#include "mvx/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <iterator>

#include "mvx/error.hpp"

namespace mvx {
namespace {

constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void text(const std::string& s) {
    u64(s.size());
    buf_ += s;
  }
  void blob(std::span<const double> xs) {
    u64(xs.size());
    for (double x : xs) f64(x);
  }
  void raw(const std::string& s) { buf_ += s; }
  const std::string& bytes() const { return buf_; }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string bytes, std::string path) : b_(std::move(bytes)), path_(std::move(path)) {}

  std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(get(4, what)); }
  std::uint64_t u64(const char* what) { return get(8, what); }
  double f64(const char* what) { return std::bit_cast<double>(get(8, what)); }
  std::string text(const char* what) {
    const std::size_t at = pos_;
    const std::uint64_t n = u64(what);
    need(n, what, at);
    std::string s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::vector<double> blob(const char* what, std::size_t expected) {
    const std::size_t at = pos_;
    const std::uint64_t n = u64(what);
    if (n != expected) {
      fail(at, std::string(what) + ": expected " + std::to_string(expected) + " values, found " + std::to_string(n));
    }
    need(8 * n, what, pos_);
    std::vector<double> xs(n);
    for (auto& x : xs) x = f64(what);
    return xs;
  }
  std::string raw(std::size_t n, const char* what) {
    need(n, what, pos_);
    std::string s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t offset() const { return pos_; }
  bool at_end() const { return pos_ == b_.size(); }

  [[noreturn]] void fail(std::size_t at, const std::string& msg) const {
    throw FormatError(path_ + ": byte " + std::to_string(at) + ": " + msg);
  }

 private:
  void need(std::uint64_t n, const char* what, std::size_t at) const {
    if (b_.size() - pos_ < n) {
      fail(at, std::string("truncated reading ") + what + ": expected " + std::to_string(n) + " bytes, " +
                   std::to_string(b_.size() - pos_) + " available");
    }
  }
  std::uint64_t get(int n, const char* what) {
    need(static_cast<std::uint64_t>(n), what, pos_);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(b_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::string b_;
  std::string path_;
  std::size_t pos_ = 0;
};

void write_adam(Writer& w, const Adam& a) {
  w.u64(a.steps());
  for (std::size_t i = 0; i < a.params().size(); ++i) {
    w.blob(a.first_moments()[i]);
    w.blob(a.second_moments()[i]);
  }
}

void read_adam(Reader& r, Adam& a) {
  a.set_steps(r.u64("adam steps"));
  for (std::size_t i = 0; i < a.params().size(); ++i) {
    a.first_moments()[i] = r.blob("adam first moment", a.params()[i].numel());
    a.second_moments()[i] = r.blob("adam second moment", a.params()[i].numel());
  }
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const RunState& run) {
  Writer w;
  w.raw("MVXC");
  w.u32(kVersion);
  const auto params = run.model.all_parameters();
  w.u32(static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) w.blob(p.values());

  w.text(render_config(run.config));
  w.u32(static_cast<std::uint32_t>(run.model.spec.view_dims.size()));
  for (std::size_t d : run.model.spec.view_dims) w.u64(d);
  w.u64(run.epoch);
  w.text(run.rng.state());
  write_adam(w, run.optimizer);
  write_adam(w, run.adversary);
  w.u64(run.history.size());
  for (const auto& rec : run.history) {
    w.u64(rec.epoch);
    w.u64(rec.terms.size());
    for (const auto& [name, value] : rec.terms) {
      w.text(name);
      w.f64(value);
    }
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("save_checkpoint: cannot open " + path.string());
  os.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!os) throw Error("save_checkpoint: write failed for " + path.string());
}

RunState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("load_checkpoint: cannot open " + path.string());
  Reader r(std::string(std::istreambuf_iterator<char>(is), {}), path.string());

  if (r.raw(4, "magic") != "MVXC") r.fail(0, "bad magic, expected \"MVXC\"");
  const std::uint32_t version = r.u32("version");
  if (version != kVersion) r.fail(4, "unsupported version " + std::to_string(version));
  const std::uint32_t n_params = r.u32("parameter count");
  std::vector<std::pair<std::size_t, std::string>> blobs;  // offset, raw f64 bytes
  for (std::uint32_t i = 0; i < n_params; ++i) {
    const std::size_t at = r.offset();
    const std::uint64_t n = r.u64("parameter length");
    blobs.push_back({at, r.raw(8 * n, "parameter values")});
  }

  const std::size_t config_at = r.offset();
  ModelConfig cfg;
  try {
    cfg = parse_config(r.text("config"), path.string());
  } catch (const ConfigError& e) {
    r.fail(config_at, std::string("embedded config: ") + e.what());
  }
  const std::uint32_t n_views = r.u32("view count");
  std::vector<std::size_t> dims;
  for (std::uint32_t m = 0; m < n_views; ++m) dims.push_back(r.u64("view dim"));

  RunState run = init_run(cfg, dims);
  const auto params = run.model.all_parameters();
  if (params.size() != n_params) {
    r.fail(8, "parameter count " + std::to_string(n_params) + " does not match the model (" +
                  std::to_string(params.size()) + ")");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& [at, bytes] = blobs[i];
    Tensor p = params[i];
    const auto dst = p.mutable_values();
    if (bytes.size() != 8 * dst.size()) {
      r.fail(at, "parameter " + std::to_string(i) + ": expected " + std::to_string(dst.size()) + " values, found " +
                     std::to_string(bytes.size() / 8));
    }
    for (std::size_t j = 0; j < dst.size(); ++j) {
      std::uint64_t v = 0;
      for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes[8 * j + k])) << (8 * k);
      dst[j] = std::bit_cast<double>(v);
    }
  }

  run.epoch = r.u64("epoch");
  const std::size_t rng_at = r.offset();
  try {
    run.rng.set_state(r.text("rng state"));
  } catch (const FormatError&) {
    r.fail(rng_at, "unreadable rng state");
  }
  read_adam(r, run.optimizer);
  read_adam(r, run.adversary);
  const std::uint64_t n_records = r.u64("history length");
  for (std::uint64_t i = 0; i < n_records; ++i) {
    EpochRecord rec;
    rec.epoch = r.u64("history epoch");
    const std::uint64_t n_terms = r.u64("history term count");
    for (std::uint64_t k = 0; k < n_terms; ++k) {
      std::string name = r.text("history term");
      rec.terms.push_back({std::move(name), r.f64("history value")});
    }
    run.history.push_back(std::move(rec));
  }
  if (!r.at_end()) r.fail(r.offset(), "trailing bytes");
  return run;
}

}  // namespace mvx
