#pragma once

// Seeded micro-instances shared by the gradient, oracle and acceptance tests:
// small networks with smooth activations, mixed likelihoods and perturbed
// parameters so that no term is trivially zero.

#include <cstdint>
#include <string>
#include <vector>

#include "mvx/batch.hpp"
#include "mvx/model.hpp"
#include "mvx/rng.hpp"

namespace mvx::testing {

struct MicroCase {
  std::string name;
  ModelSpec spec;
};

/// One case per model plus the structural variants (sparse, private,
/// stochastic subsets, non-saturating generator). `views` is 2 or 3; JMVAE
/// and DCCAE always use two.
std::vector<MicroCase> micro_cases(std::size_t views = 3);

/// Uniform [0, 1) data so every likelihood (including Bernoulli) accepts it.
MultiViewBatch micro_batch(const std::vector<std::size_t>& dims, std::size_t n, std::uint64_t seed);

/// build_model followed by a seeded N(0, σ²) perturbation of every parameter.
ModelState perturbed_model(const ModelSpec& spec, std::uint64_t seed, double sigma = 0.3);

/// Draws the noise of one model_loss evaluation.
NoiseRecord record_noise(const ModelState& s, const MultiViewBatch& b, std::uint64_t seed);

}  // namespace mvx::testing
