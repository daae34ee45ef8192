#pragma once

#include <string>
#include <vector>

#include "mvx/batch.hpp"
#include "mvx/distributions.hpp"
#include "mvx/loss.hpp"
#include "mvx/model.hpp"
#include "mvx/rng.hpp"

namespace mvx::obj {

/// Checks view count and feature dims against the model.
void check_batch(const ModelState& s, const MultiViewBatch& b, const char* model);
void require_kind(const ModelState& s, std::initializer_list<ModelKind> kinds, const char* model);

std::string key(const char* name, std::size_t m);
std::string key(const char* name, std::size_t m, std::size_t n);

/// Reparameterized draw from q with standard-normal noise under `k`.
Tensor draw(NoiseSource& noise, const std::string& k, const GaussianParams& q);
/// −mean_batch log p(x | z) under decoder `d`.
Tensor nll(const Decoder& d, const Tensor& z, const Tensor& x);
/// mean_batch KL(q || p).
Tensor mean_kl(const GaussianParams& q, const GaussianParams& p);
/// mean_batch KL(q || N(0, I)).
Tensor prior_kl(const GaussianParams& q);

/// Posterior of every shared-latent encoder on its own view.
std::vector<GaussianParams> shared_posteriors(const ModelState& s, const MultiViewBatch& b);
std::vector<GaussianParams> private_posteriors(const ModelState& s, const MultiViewBatch& b);

/// recon[m,n] = mean ||x_m − d_m(latents[n])||² with weight 1/M².
void add_cross_recon(LossBuilder& out, const ModelState& s, const MultiViewBatch& b, const std::vector<Tensor>& latents);

double lambda_of(const Hyper& h, std::size_t m);

}  // namespace mvx::obj
