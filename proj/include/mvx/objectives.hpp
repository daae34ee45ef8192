#pragma once

// One loss per model family. Every function takes the model state, a batch
// and a keyed noise source, and returns the negated bound as a LossBreakdown.
// Reconstruction terms are named recon[target,source] when a source latent
// is involved; latent draws use the keys documented next to each function so
// that callers can pin them with NoiseSource::replay.

#include "mvx/batch.hpp"
#include "mvx/loss.hpp"
#include "mvx/model.hpp"
#include "mvx/rng.hpp"

namespace mvx {

/// (1/M²) Σ_m Σ_n ||x_m − d_m(e_n(x_n))||². No noise.
LossBreakdown ae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// Joint-encoder ELBO. Key "z".
LossBreakdown jmvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// jmvae_loss plus α·[KL(q_joint||q_1) + KL(q_joint||q_2)]. Key "z".
LossBreakdown jmvae_kl_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// −Σ canonical correlations + λ·Σ_m mean reconstruction error. No noise.
LossBreakdown dccae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// Single encoder on view 0, optional private latents. Keys "z", "h[m]".
LossBreakdown dvcca_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// Per-view posteriors decoding every view; sparse variant uses the dropout posterior. Keys "z[m]".
LossBreakdown mcvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// PoE(prior, q_1..q_M) ELBO. Key "z".
LossBreakdown mvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// Full-set ELBO plus one ELBO per single view. Keys "z", "z[m]".
LossBreakdown me_mvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// Stratified IWAE bound with the MoE joint. Keys "z[m].k<k>".
LossBreakdown mmvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// Total-correlation bound with PoE (no prior expert). Key "z".
LossBreakdown mvtcae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// Mixture of subset PoEs. Keys "z{<members>}"; stochastic mode also "subset".
LossBreakdown mopoe_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// mvae_loss with gPoE fusion over the views and the prior. Key "z".
LossBreakdown weighted_mvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// Stratified MoE reconstruction plus π-weighted KLs to the PoE dynamic prior. Keys "z[m]".
LossBreakdown mmjsd_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// IWAE over shared and private latents with auxiliary priors for cross terms.
/// Keys "z[m].k<k>", "h[m].k<k>", "htilde[m,n].k<k>".
LossBreakdown mmvaeplus_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// Joint-path and pairwise-path groups over shared/private latents. Keys "z", "z[n]", "h[m]".
LossBreakdown dmvae_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);

/// Separable pieces of an adversarial objective.
struct AdversarialLosses {
  LossBreakdown reconstruction;
  /// Minimized by the discriminator/critic (latents detached).
  Tensor discriminator;
  /// Minimized by the encoders together with the reconstruction.
  Tensor generator;
  /// Value of the combined objective as written for the model.
  double objective = 0.0;
  /// Fraction of prior and encoded latents the adversary labels correctly.
  double accuracy = 0.0;
};

/// Keys "prior[m]".
AdversarialLosses maae_losses(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
/// Keys "prior[m]".
AdversarialLosses mwae_losses(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);
AdversarialLosses adversarial_losses(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);

/// Dispatch on the model kind. For adversarial models the breakdown is the
/// generator-side objective: reconstruction terms plus a "generator" term.
LossBreakdown model_loss(const ModelState& s, const MultiViewBatch& b, NoiseSource& noise);

}  // namespace mvx
