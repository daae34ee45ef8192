#pragma once

// Deterministic latent queries shared by prediction and evaluation: which
// latents a model exposes and how it pools an arbitrary subset of views.

#include <cstddef>
#include <vector>

#include "mvx/batch.hpp"
#include "mvx/model.hpp"
#include "mvx/pooling.hpp"
#include "mvx/rng.hpp"

namespace mvx {

/// True when the model defines a joint latent over all views.
bool has_joint_latent(const ModelSpec& spec);
/// Coherence needs a latent for every subset of views; false for DCCAE, DVCCA
/// and models without a joint.
bool supports_subset_encoding(const ModelSpec& spec);

/// Shared-latent posterior of each view (plain encoders report log_var = 0).
std::vector<GaussianParams> view_posteriors(const ModelState& s, const MultiViewBatch& b);
/// Pooled shared-latent posterior of `subset` under the model's fusion rule.
/// Mixture models return the moment-free mean of member means with zero log-variance.
/// Throws UnsupportedError when the model cannot encode subsets.
GaussianParams subset_posterior(const ModelState& s, const MultiViewBatch& b, const std::vector<GaussianParams>& views,
                                const SubsetIndex& subset);

/// Mean reconstruction of view `target` from shared latent `z`. For split
/// latents the private part comes from the target's own posterior mean when
/// `target_observed`, otherwise from the prior mean (DMVAE, DVCCA) or an
/// auxiliary-prior draw (MMVAE+).
Tensor decode_mean(const ModelState& s, const MultiViewBatch& b, std::size_t target, const Tensor& z,
                   bool target_observed, Rng& rng);

/// Dropout keep-mask of a sparse mcVAE: p = α/(1+α) <= threshold.
std::vector<bool> retained_dimensions(const ModelState& s);

}  // namespace mvx
