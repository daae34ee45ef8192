#pragma once

// Dataset file format, synthetic generators and small view converters.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mvx/batch.hpp"

namespace mvx {

/// Class prototypes shared across views, each view seen through its own
/// linear style map, plus per-sample noise.
///
/// Sample i of class c in view m is
///   x = S_m (a·e_c + style_noise·u) + background_noise·v,   u ~ N(0, I_C), v ~ N(0, I_D)
/// with S_m a [D_m×C] matrix of orthonormal columns. The S_m depend only on
/// the dims and class count; `seed` drives the noise and the label order.
struct SyntheticSpec {
  std::size_t n_classes = 8;
  std::size_t n_samples = 1000;
  std::vector<std::size_t> dims{24, 24, 24};
  double style_noise = 0.5;
  double background_noise = 0.5;
  double template_scale = 3.0;
  std::uint64_t seed = 0;

  /// Throws DomainError for an unusable spec (dims below n_classes, negative noise, ...).
  void validate() const;
};

MultiViewBatch generate_synthetic(const SyntheticSpec& spec);

/// Views x_m = W_m z + noise·v with z ~ N(0, I_k) and fixed per-seed W_m. Unlabeled.
MultiViewBatch generate_linear_gaussian(std::size_t n_samples, const std::vector<std::size_t>& dims,
                                        std::size_t latent_dim, double noise, std::uint64_t seed);

/// MVDS file: magic "MVDS", u32 version=1, u32 n_views, u32 n_samples,
/// u8 has_labels, u32 dim per view, f32 row-major data per view, optional
/// u32 labels. Little-endian throughout.
void write_dataset(const std::filesystem::path& path, const MultiViewBatch& b);
/// Throws FormatError naming the byte offset on bad magic, version, counts or truncation.
MultiViewBatch read_dataset(const std::filesystem::path& path);

/// Thresholds every view: v >= threshold -> 1, else 0. Inputs must lie in [0, 1].
MultiViewBatch binarize(const MultiViewBatch& b, double threshold = 0.5);
/// [n×n_classes] one-hot rows; labels must be < n_classes.
Tensor one_hot(std::span<const std::uint32_t> labels, std::size_t n_classes);
/// Raw 8-bit image array [n×pixels] scaled to [0, 1].
Tensor images_to_view(std::span<const std::uint8_t> pixels, std::size_t n, std::size_t pixels_per_image);

}  // namespace mvx
