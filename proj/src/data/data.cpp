#include "mvx/data.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "mvx/error.hpp"
#include "mvx/rng.hpp"

namespace mvx {

std::vector<std::size_t> MultiViewBatch::dims() const {
  std::vector<std::size_t> out;
  out.reserve(views.size());
  for (const auto& v : views) out.push_back(v.cols());
  return out;
}

void MultiViewBatch::validate() const {
  for (std::size_t m = 0; m < views.size(); ++m) {
    if (!views[m].defined() || views[m].rank() != 2) throw DimensionError("batch: view " + std::to_string(m) + " is not a matrix");
    if (views[m].rows() != size()) {
      throw DimensionError("batch: view " + std::to_string(m) + " has " + std::to_string(views[m].rows()) +
                           " rows, view 0 has " + std::to_string(size()));
    }
  }
  if (has_labels() && labels.size() != size()) {
    throw DimensionError("batch: " + std::to_string(labels.size()) + " labels for " + std::to_string(size()) + " samples");
  }
}

MultiViewBatch MultiViewBatch::select(std::span<const std::size_t> idx) const {
  MultiViewBatch out;
  const std::size_t n = size();
  for (const auto& v : views) {
    const std::size_t d = v.cols();
    const auto src = v.values();
    std::vector<double> dst(idx.size() * d);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] >= n) throw DimensionError("batch: row index " + std::to_string(idx[i]) + " out of range");
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(idx[i] * d), d, dst.begin() + static_cast<std::ptrdiff_t>(i * d));
    }
    out.views.push_back(Tensor::matrix(idx.size(), d, std::move(dst)));
  }
  if (has_labels()) {
    for (std::size_t i : idx) out.labels.push_back(labels[i]);
  }
  return out;
}

namespace {

// Fixed stream for the style maps so every seed shares one class structure.
constexpr std::uint64_t kStyleSeed = 0x5eed'57a1'e000ULL;

// [rows×cols] with orthonormal columns (modified Gram-Schmidt on Gaussian draws).
std::vector<double> orthonormal_columns(std::size_t rows, std::size_t cols, Rng& rng) {
  std::vector<double> a(rows * cols);
  for (auto& v : a) v = rng.normal();
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double dot = 0;
      for (std::size_t i = 0; i < rows; ++i) dot += a[i * cols + j] * a[i * cols + k];
      for (std::size_t i = 0; i < rows; ++i) a[i * cols + j] -= dot * a[i * cols + k];
    }
    double norm = 0;
    for (std::size_t i = 0; i < rows; ++i) norm += a[i * cols + j] * a[i * cols + j];
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < rows; ++i) a[i * cols + j] /= norm;
  }
  return a;
}

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t to_u32(std::size_t v, const char* what) {
  if (v > 0xffffffffULL) throw CapacityError(std::string("write_dataset: ") + what + " exceeds u32");
  return static_cast<std::uint32_t>(v);
}

class Reader {
 public:
  Reader(std::string bytes, std::string path) : bytes_(std::move(bytes)), path_(std::move(path)) {}

  std::size_t offset() const { return pos_; }

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError(path_ + ": truncated at byte " + std::to_string(pos_) + " reading " + what + ": expected " +
                        std::to_string(n) + " bytes, " + std::to_string(bytes_.size() - pos_) + " available (file length " +
                        std::to_string(bytes_.size()) + ")");
    }
  }

  std::uint8_t u8(const char* what) {
    need(1, what);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  float f32() { return std::bit_cast<float>(u32("view data")); }

  std::string raw(std::size_t n, const char* what) {
    need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  [[noreturn]] void fail(std::size_t at, const std::string& msg) const {
    throw FormatError(path_ + ": byte " + std::to_string(at) + ": " + msg);
  }

  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  std::string bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

void SyntheticSpec::validate() const {
  if (n_classes < 2) throw DomainError("synthetic: n_classes must be >= 2");
  if (n_samples == 0) throw DomainError("synthetic: n_samples must be >= 1");
  if (dims.empty()) throw DomainError("synthetic: at least one view is required");
  for (std::size_t d : dims) {
    if (d < n_classes) {
      throw DomainError("synthetic: view dim " + std::to_string(d) + " is smaller than n_classes " + std::to_string(n_classes));
    }
  }
  if (!(style_noise >= 0) || !(background_noise >= 0)) throw DomainError("synthetic: noise levels must be >= 0");
  if (!(template_scale > 0)) throw DomainError("synthetic: template_scale must be > 0");
}

MultiViewBatch generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t C = spec.n_classes, n = spec.n_samples;

  Rng style_rng(kStyleSeed);
  std::vector<std::vector<double>> maps;
  for (std::size_t d : spec.dims) maps.push_back(orthonormal_columns(d, C, style_rng));

  Rng rng(spec.seed);
  MultiViewBatch out;
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = static_cast<std::uint32_t>(i % C);
  const auto perm = rng.permutation(n);
  std::vector<std::uint32_t> shuffled(n);
  for (std::size_t i = 0; i < n; ++i) shuffled[i] = out.labels[perm[i]];
  out.labels = std::move(shuffled);

  for (std::size_t m = 0; m < spec.dims.size(); ++m) {
    const std::size_t D = spec.dims[m];
    const auto& S = maps[m];
    std::vector<double> x(n * D);
    std::vector<double> t(C);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < C; ++c) t[c] = spec.style_noise * rng.normal();
      t[out.labels[i]] += spec.template_scale;
      for (std::size_t r = 0; r < D; ++r) {
        double v = 0;
        for (std::size_t c = 0; c < C; ++c) v += S[r * C + c] * t[c];
        x[i * D + r] = v + spec.background_noise * rng.normal();
      }
    }
    out.views.push_back(Tensor::matrix(n, D, std::move(x)));
  }
  return out;
}

MultiViewBatch generate_linear_gaussian(std::size_t n_samples, const std::vector<std::size_t>& dims,
                                        std::size_t latent_dim, double noise, std::uint64_t seed) {
  if (n_samples == 0 || dims.empty() || latent_dim == 0) throw DomainError("linear_gaussian: empty shape");
  if (!(noise >= 0)) throw DomainError("linear_gaussian: noise must be >= 0");
  Rng rng(seed);
  std::vector<std::vector<double>> W;
  for (std::size_t d : dims) {
    std::vector<double> w(d * latent_dim);
    for (auto& v : w) v = rng.normal() / std::sqrt(static_cast<double>(latent_dim));
    W.push_back(std::move(w));
  }
  std::vector<double> z(n_samples * latent_dim);
  for (auto& v : z) v = rng.normal();
  MultiViewBatch out;
  for (std::size_t m = 0; m < dims.size(); ++m) {
    const std::size_t D = dims[m];
    std::vector<double> x(n_samples * D);
    for (std::size_t i = 0; i < n_samples; ++i) {
      for (std::size_t r = 0; r < D; ++r) {
        double v = 0;
        for (std::size_t k = 0; k < latent_dim; ++k) v += W[m][r * latent_dim + k] * z[i * latent_dim + k];
        x[i * D + r] = v + noise * rng.normal();
      }
    }
    out.views.push_back(Tensor::matrix(n_samples, D, std::move(x)));
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, const MultiViewBatch& b) {
  b.validate();
  if (b.n_views() == 0) throw DimensionError("write_dataset: batch has no views");
  std::string buf = "MVDS";
  put_u32(buf, 1);
  put_u32(buf, to_u32(b.n_views(), "n_views"));
  put_u32(buf, to_u32(b.size(), "n_samples"));
  buf.push_back(b.has_labels() ? 1 : 0);
  for (const auto& v : b.views) put_u32(buf, to_u32(v.cols(), "dim"));
  for (const auto& v : b.views) {
    for (double x : v.values()) put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
  }
  for (std::uint32_t l : b.labels) put_u32(buf, l);

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("write_dataset: cannot open " + path.string());
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw Error("write_dataset: write failed for " + path.string());
}

MultiViewBatch read_dataset(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("read_dataset: cannot open " + path.string());
  Reader r(std::string(std::istreambuf_iterator<char>(is), {}), path.string());

  if (r.raw(4, "magic") != "MVDS") r.fail(0, "bad magic, expected \"MVDS\"");
  std::size_t at = r.offset();
  const std::uint32_t version = r.u32("version");
  if (version != 1) r.fail(at, "unsupported version " + std::to_string(version));
  at = r.offset();
  const std::uint32_t n_views = r.u32("n_views");
  if (n_views == 0) r.fail(at, "n_views is 0");
  const std::uint32_t n = r.u32("n_samples");
  at = r.offset();
  const std::uint8_t has_labels = r.u8("has_labels");
  if (has_labels > 1) r.fail(at, "has_labels must be 0 or 1, got " + std::to_string(has_labels));
  std::vector<std::size_t> dims;
  for (std::uint32_t m = 0; m < n_views; ++m) {
    at = r.offset();
    dims.push_back(r.u32("view dim"));
    if (dims.back() == 0) r.fail(at, "view " + std::to_string(m) + " has dim 0");
  }

  std::size_t payload = has_labels ? 4ULL * n : 0;
  for (std::size_t d : dims) payload += 4ULL * n * d;
  r.need(payload, "payload");

  MultiViewBatch out;
  for (std::size_t d : dims) {
    std::vector<double> x(static_cast<std::size_t>(n) * d);
    for (auto& v : x) v = static_cast<double>(r.f32());
    out.views.push_back(Tensor::matrix(n, d, std::move(x)));
  }
  if (has_labels) {
    out.labels.resize(n);
    for (auto& l : out.labels) l = r.u32("labels");
  }
  if (!r.at_end()) r.fail(r.offset(), "trailing bytes after payload");
  return out;
}

MultiViewBatch binarize(const MultiViewBatch& b, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw DomainError("binarize: threshold must lie in [0, 1]");
  b.validate();
  MultiViewBatch out;
  out.labels = b.labels;
  for (std::size_t m = 0; m < b.n_views(); ++m) {
    std::vector<double> x(b.views[m].values().begin(), b.views[m].values().end());
    for (double& v : x) {
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("binarize: view " + std::to_string(m) + " has a value outside [0, 1]");
      v = v >= threshold ? 1.0 : 0.0;
    }
    out.views.push_back(Tensor(b.views[m].shape(), std::move(x)));
  }
  return out;
}

Tensor one_hot(std::span<const std::uint32_t> labels, std::size_t n_classes) {
  std::vector<double> x(labels.size() * n_classes, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= n_classes) {
      throw DomainError("one_hot: label " + std::to_string(labels[i]) + " >= n_classes " + std::to_string(n_classes));
    }
    x[i * n_classes + labels[i]] = 1.0;
  }
  return Tensor::matrix(labels.size(), n_classes, std::move(x));
}

Tensor images_to_view(std::span<const std::uint8_t> pixels, std::size_t n, std::size_t pixels_per_image) {
  if (pixels.size() != n * pixels_per_image) {
    throw DimensionError("images_to_view: expected " + std::to_string(n * pixels_per_image) + " bytes, got " +
                         std::to_string(pixels.size()));
  }
  std::vector<double> x(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) x[i] = pixels[i] / 255.0;
  return Tensor::matrix(n, pixels_per_image, std::move(x));
}

}  // namespace mvx
