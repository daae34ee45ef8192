#pragma once

// MVXC run files: magic "MVXC", u32 version, u32 parameter count, then one
// length-prefixed f64 blob per parameter in declaration order (generator
// parameters, then the adversary). A run section follows with the resolved
// config, view dims, epoch, shuffle rng state, Adam moments and the metric
// history, so that load + train continues the same trajectory bit for bit.
// Integers and doubles are little-endian.

#include <filesystem>

#include "mvx/trainer.hpp"

namespace mvx {

void save_checkpoint(const std::filesystem::path& path, const RunState& run);
/// Throws FormatError naming the byte offset on malformed files.
RunState load_checkpoint(const std::filesystem::path& path);

}  // namespace mvx
