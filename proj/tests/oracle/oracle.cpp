#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace oracle {
namespace {

using mvx::ModelKind;

constexpr double kLog2Pi = 1.8378770664093453;  // log(2π)

double clamp_lv(double v) { return std::clamp(v, -20.0, 20.0); }

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logsumexp(const Vec& v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

Vec row_of(const mvx::Tensor& t, std::size_t i) {
  const std::size_t d = t.cols();
  const auto v = t.values();
  return Vec(v.begin() + static_cast<std::ptrdiff_t>(i * d), v.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
}

Vec concat(const Vec& a, const Vec& b) {
  Vec out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Vec affine(const mvx::Linear& l, const Vec& x) {
  const std::size_t in = l.weight.rows(), out = l.weight.cols();
  if (x.size() != in) throw std::logic_error("oracle: layer input width");
  const auto w = l.weight.values();
  Vec y(out, 0.0);
  for (std::size_t j = 0; j < out; ++j) {
    double acc = l.bias.defined() ? l.bias.values()[j] : 0.0;
    for (std::size_t i = 0; i < in; ++i) acc += x[i] * w[i * out + j];
    y[j] = acc;
  }
  return y;
}

double activate(mvx::Activation a, double v) {
  switch (a) {
    case mvx::Activation::Relu: return v > 0 ? v : 0.0;
    case mvx::Activation::Tanh: return std::tanh(v);
    case mvx::Activation::Sigmoid: return sigmoid(v);
  }
  return v;
}

Vec hidden(const mvx::Trunk& t, Vec x) {
  for (const auto& l : t.layers) {
    x = affine(l, x);
    if (t.non_linear) {
      for (double& v : x) v = activate(t.activation, v);
    }
  }
  return x;
}

Gauss encode(const mvx::Encoder& e, const Vec& x) {
  const Vec h = hidden(e.trunk, x);
  Gauss g{affine(e.mean_head, h), {}};
  g.lv = e.variational ? affine(e.log_var_head, h) : Vec(g.mu.size(), 0.0);
  return g;
}

Vec point(const mvx::Encoder& e, const Vec& x) { return affine(e.mean_head, hidden(e.trunk, x)); }

double loglik(const mvx::Decoder& d, const Vec& z, const Vec& x) {
  const Vec p = affine(d.head, hidden(d.trunk, z));
  double s = 0;
  switch (d.kind) {
    case mvx::LikelihoodKind::Normal:
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double r = (x[j] - p[j]) / d.scale;
        s += -0.5 * r * r - std::log(d.scale) - 0.5 * kLog2Pi;
      }
      return s;
    case mvx::LikelihoodKind::Laplace:
      for (std::size_t j = 0; j < x.size(); ++j) s += -std::abs(x[j] - p[j]) / d.scale - std::log(2 * d.scale);
      return s;
    case mvx::LikelihoodKind::Bernoulli:
      for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * p[j] - softplus(p[j]);
      return s;
    case mvx::LikelihoodKind::Categorical: {
      const double lse = logsumexp(p);
      for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * (p[j] - lse);
      return s;
    }
    case mvx::LikelihoodKind::Default:
      for (std::size_t j = 0; j < x.size(); ++j) s -= (x[j] - p[j]) * (x[j] - p[j]);
      return s;
  }
  throw std::logic_error("oracle: likelihood");
}

double disc_score(const mvx::Discriminator& d, const Vec& z) { return affine(d.head, hidden(d.trunk, z))[0]; }

Vec draw(const Gauss& g, const Vec& eps) {
  Vec z(g.mu.size());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = g.mu[j] + std::exp(0.5 * clamp_lv(g.lv[j])) * eps[j];
  return z;
}

// Everything one sample's loss needs.
struct Ctx {
  const mvx::ModelState& s;
  const mvx::MultiViewBatch& b;
  const mvx::NoiseRecord& noise;
  std::size_t i = 0;

  std::size_t M() const { return s.n_views(); }
  Vec x(std::size_t m) const { return row_of(b.views[m], i); }
  Vec eps(const std::string& key, std::size_t d) const {
    const auto it = noise.find(key);
    if (it == noise.end()) throw std::logic_error("oracle: no noise for " + key);
    return Vec(it->second.begin() + static_cast<std::ptrdiff_t>(i * d),
               it->second.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
  }
  Gauss q(std::size_t m) const { return encode(s.encoders[m], x(m)); }
  Gauss p(std::size_t m) const { return encode(s.private_encoders[m], x(m)); }
  double nll(std::size_t m, const Vec& z) const { return -loglik(s.decoders[m], z, x(m)); }
};

std::string idx(const char* name, std::size_t m) { return std::string(name) + "[" + std::to_string(m) + "]"; }

std::string idx(const char* name, std::size_t m, std::size_t n) {
  return std::string(name) + "[" + std::to_string(m) + "," + std::to_string(n) + "]";
}

std::string kth(const std::string& base, std::size_t k) { return base + ".k" + std::to_string(k); }

double lambda_at(const mvx::Hyper& h, std::size_t m) {
  if (h.lambda.empty()) return 1.0;
  return h.lambda.size() == 1 ? h.lambda[0] : h.lambda[m];
}

std::vector<Gauss> all_q(const Ctx& c) {
  std::vector<Gauss> out;
  for (std::size_t m = 0; m < c.M(); ++m) out.push_back(c.q(m));
  return out;
}

std::vector<Gauss> with_prior(std::vector<Gauss> e) {
  e.push_back(standard(e[0].mu.size()));
  return e;
}

// Subsets as member lists, by size then lexicographic.
std::vector<std::vector<std::size_t>> subsets(std::size_t M) {
  std::vector<std::vector<std::size_t>> out;
  for (unsigned mask = 1; mask < (1u << M); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t m = 0; m < M; ++m) {
      if (mask & (1u << m)) s.push_back(m);
    }
    out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

std::string subset_label(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

double log_mixture(const std::vector<Gauss>& q, const Vec& z) {
  Vec parts;
  for (const auto& g : q) parts.push_back(log_normal(g, z));
  return logsumexp(parts) - std::log(static_cast<double>(q.size()));
}

double elbo_all(const Ctx& c, const Gauss& q, const Vec& z) {
  double v = c.s.spec.hyper.beta * kl_normal(q, standard(q.mu.size()));
  for (std::size_t m = 0; m < c.M(); ++m) v += c.nll(m, z);
  return v;
}

double jmvae_sample(const Ctx& c, double alpha) {
  const Gauss joint = encode(*c.s.joint_encoder, concat(c.x(0), c.x(1)));
  const Vec z = draw(joint, c.eps("z", joint.mu.size()));
  double v = c.nll(0, z) + c.nll(1, z) + c.s.spec.hyper.beta * kl_normal(joint, standard(joint.mu.size()));
  if (alpha != 0.0) v += alpha * (kl_normal(joint, c.q(0)) + kl_normal(joint, c.q(1)));
  return v;
}

double cross_recon(const Ctx& c, const std::vector<Vec>& z) {
  const double M = static_cast<double>(c.M());
  double v = 0;
  for (std::size_t m = 0; m < c.M(); ++m) {
    for (std::size_t n = 0; n < c.M(); ++n) v += c.nll(m, z[n]) / (M * M);
  }
  return v;
}

double sample_loss(const Ctx& c) {
  const auto& s = c.s;
  const auto& h = s.spec.hyper;
  const std::size_t M = c.M(), d = s.spec.z_dim, sd = s.spec.s_dim;
  const double Md = static_cast<double>(M), beta = h.beta;
  const Gauss N = standard(d);

  switch (s.kind()) {
    case ModelKind::AE: {
      std::vector<Vec> z;
      for (std::size_t n = 0; n < M; ++n) z.push_back(point(s.encoders[n], c.x(n)));
      return cross_recon(c, z);
    }
    case ModelKind::JMVAE: return jmvae_sample(c, h.alpha);
    case ModelKind::DCCAE: {
      const double lam = lambda_at(h, 0);
      return lam * (c.nll(0, point(s.encoders[0], c.x(0))) + c.nll(1, point(s.encoders[1], c.x(1))));
    }
    case ModelKind::DVCCA: {
      const Gauss q = c.q(0);
      const Vec z = draw(q, c.eps("z", d));
      double v = beta * kl_normal(q, N);
      for (std::size_t m = 0; m < M; ++m) {
        if (!s.spec.has_private()) {
          v += c.nll(m, z);
          continue;
        }
        const Gauss p = c.p(m);
        v += c.nll(m, concat(z, draw(p, c.eps(idx("h", m), sd)))) + beta * kl_normal(p, standard(sd));
      }
      return v;
    }
    case ModelKind::mcVAE: {
      double v = 0;
      for (std::size_t m = 0; m < M; ++m) {
        Gauss q = c.q(m);
        double kl = 0;
        if (s.log_alpha.defined()) {
          const auto la = s.log_alpha.values();
          q.mu = point(s.encoders[m], c.x(m));
          for (std::size_t j = 0; j < d; ++j) {
            q.lv[j] = la[j] + std::log(q.mu[j] * q.mu[j] + h.eps);
            kl += sparse_kl(la[j]);
          }
        } else {
          kl = kl_normal(q, N);
        }
        const Vec z = draw(q, c.eps(idx("z", m), d));
        for (std::size_t n = 0; n < M; ++n) v += c.nll(n, z);
        v += beta * kl;
      }
      return v;
    }
    case ModelKind::mVAE: {
      const Gauss q = product(with_prior(all_q(c)));
      return elbo_all(c, q, draw(q, c.eps("z", d)));
    }
    case ModelKind::me_mVAE: {
      const auto qs = all_q(c);
      const Gauss joint = product(with_prior(qs));
      double v = elbo_all(c, joint, draw(joint, c.eps("z", d)));
      for (std::size_t m = 0; m < M; ++m) {
        const Gauss q = product(with_prior({qs[m]}));
        v += elbo_all(c, q, draw(q, c.eps(idx("z", m), d)));
      }
      return v;
    }
    case ModelKind::MVTCAE: {
      const auto qs = all_q(c);
      const Gauss q = product(qs);
      const Vec z = draw(q, c.eps("z", d));
      const double a = h.alpha;
      double v = beta * (1 - a) * kl_normal(q, N);
      for (std::size_t m = 0; m < M; ++m) v += (Md - a) / Md * c.nll(m, z) + beta * a / Md * kl_normal(q, qs[m]);
      return v;
    }
    case ModelKind::MoPoEVAE: {
      const auto qs = all_q(c);
      const auto subs = subsets(M);
      std::vector<Gauss> pooled;
      std::vector<Vec> zs;
      for (const auto& sub : subs) {
        std::vector<Gauss> e;
        for (std::size_t m : sub) e.push_back(qs[m]);
        pooled.push_back(product(e));
        zs.push_back(draw(pooled.back(), c.eps("z" + subset_label(sub), d)));
      }
      if (h.subset_sampling) {
        const auto pick = static_cast<std::size_t>(c.noise.at("subset")[c.i]);
        return elbo_all(c, pooled[pick], zs[pick]);
      }
      double v = 0;
      for (std::size_t k = 0; k < subs.size(); ++k) v += elbo_all(c, pooled[k], zs[k]) / static_cast<double>(subs.size());
      return v;
    }
    case ModelKind::weighted_mVAE: {
      // Softmax over experts (rows of the logits), per latent dimension.
      const auto logits = s.gpoe_logits.values();
      std::vector<Vec> w(M + 1, Vec(d));
      for (std::size_t j = 0; j < d; ++j) {
        Vec col;
        for (std::size_t m = 0; m <= M; ++m) col.push_back(logits[m * d + j]);
        const double lse = logsumexp(col);
        for (std::size_t m = 0; m <= M; ++m) w[m][j] = std::exp(col[m] - lse);
      }
      const Gauss q = product(with_prior(all_q(c)), &w);
      return elbo_all(c, q, draw(q, c.eps("z", d)));
    }
    case ModelKind::mmJSD: {
      const auto qs = all_q(c);
      Vec pi = h.pi;
      if (pi.empty()) pi.assign(M + 1, 1.0 / (Md + 1));
      const Gauss pf = product(with_prior(qs));
      double v = beta * pi[M] * kl_normal(N, pf);
      for (std::size_t m = 0; m < M; ++m) {
        const Vec z = draw(qs[m], c.eps(idx("z", m), d));
        for (std::size_t n = 0; n < M; ++n) v += c.nll(n, z) / Md;
        v += beta * pi[m] * kl_normal(qs[m], pf);
      }
      return v;
    }
    case ModelKind::mmVAE: {
      const auto qs = all_q(c);
      double v = 0;
      for (std::size_t m = 0; m < M; ++m) {
        Vec lw;
        for (std::size_t k = 0; k < h.K; ++k) {
          const Vec z = draw(qs[m], c.eps(kth(idx("z", m), k), d));
          double w = log_normal(N, z) - log_mixture(qs, z);
          for (std::size_t n = 0; n < M; ++n) w -= c.nll(n, z);
          lw.push_back(w);
        }
        v -= (logsumexp(lw) - std::log(static_cast<double>(h.K))) / Md;
      }
      return v;
    }
    case ModelKind::mmVAEPlus: {
      const auto qs = all_q(c);
      const auto aux = s.aux_log_var.values();
      double v = 0;
      for (std::size_t m = 0; m < M; ++m) {
        const Gauss p = c.p(m);
        Vec lw;
        for (std::size_t k = 0; k < h.K; ++k) {
          const Vec z = draw(qs[m], c.eps(kth(idx("z", m), k), d));
          const Vec hm = draw(p, c.eps(kth(idx("h", m), k), sd));
          double w = -c.nll(m, concat(z, hm)) + log_normal(N, z) + log_normal(standard(sd), hm) - log_mixture(qs, z) -
                     log_normal(p, hm);
          for (std::size_t n = 0; n < M; ++n) {
            if (n == m) continue;
            Vec ht = c.eps(kth(idx("htilde", m, n), k), sd);
            for (std::size_t j = 0; j < sd; ++j) ht[j] *= std::exp(0.5 * aux[n * sd + j]);
            w -= c.nll(n, concat(z, ht));
          }
          lw.push_back(w);
        }
        v -= (logsumexp(lw) - std::log(static_cast<double>(h.K))) / Md;
      }
      return v;
    }
    case ModelKind::DMVAE: {
      const auto qs = all_q(c);
      const Gauss joint = product(with_prior(qs));
      const Vec z = draw(joint, c.eps("z", d));
      std::vector<Vec> zn, hm;
      std::vector<Gauss> ps;
      for (std::size_t m = 0; m < M; ++m) {
        zn.push_back(draw(qs[m], c.eps(idx("z", m), d)));
        ps.push_back(c.p(m));
        hm.push_back(draw(ps[m], c.eps(idx("h", m), sd)));
      }
      double v = 0;
      for (std::size_t m = 0; m < M; ++m) {
        const double lam = lambda_at(h, m), klh = kl_normal(ps[m], standard(sd));
        v += lam * c.nll(m, concat(z, hm[m])) + beta * klh + beta * kl_normal(joint, N);
        for (std::size_t n = 0; n < M; ++n) v += lam * c.nll(m, concat(zn[n], hm[m])) + beta * klh + beta * kl_normal(qs[n], N);
      }
      return v;
    }
    case ModelKind::mAAE:
    case ModelKind::mWAE: {
      std::vector<Vec> z;
      for (std::size_t n = 0; n < M; ++n) z.push_back(point(s.encoders[n], c.x(n)));
      double gen = 0;
      for (std::size_t m = 0; m < M; ++m) {
        const double l = disc_score(*s.discriminator, z[m]);
        if (s.kind() == ModelKind::mWAE) {
          gen -= l;
        } else {
          gen += h.non_saturating ? softplus(-l) : -softplus(l);
        }
      }
      return cross_recon(c, z) + gen / Md;
    }
  }
  throw std::logic_error("oracle: model");
}

template <class F>
double batch_mean(const mvx::ModelState& s, const mvx::MultiViewBatch& b, const mvx::NoiseRecord& noise, F f) {
  Ctx c{s, b, noise};
  double acc = 0;
  for (c.i = 0; c.i < b.size(); ++c.i) acc += f(c);
  return acc / static_cast<double>(b.size());
}

}  // namespace

double kl_normal(const Gauss& q, const Gauss& p) {
  double s = 0;
  for (std::size_t j = 0; j < q.mu.size(); ++j) {
    const double lq = clamp_lv(q.lv[j]), lp = clamp_lv(p.lv[j]), dm = q.mu[j] - p.mu[j];
    s += 0.5 * (std::exp(lq - lp) + dm * dm * std::exp(-lp) - 1.0 + lp - lq);
  }
  return s;
}

double log_normal(const Gauss& g, const Vec& z) {
  double s = 0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double l = clamp_lv(g.lv[j]), r = z[j] - g.mu[j];
    s += -0.5 * (r * r * std::exp(-l) + l + kLog2Pi);
  }
  return s;
}

Gauss standard(std::size_t d) { return {Vec(d, 0.0), Vec(d, 0.0)}; }

Gauss product(const std::vector<Gauss>& experts, const std::vector<Vec>* weights) {
  const std::size_t d = experts[0].mu.size();
  Gauss out{Vec(d), Vec(d)};
  for (std::size_t j = 0; j < d; ++j) {
    double prec = 0, num = 0;
    for (std::size_t m = 0; m < experts.size(); ++m) {
      const double t = (weights ? (*weights)[m][j] : 1.0) * std::exp(-clamp_lv(experts[m].lv[j]));
      prec += t;
      num += t * experts[m].mu[j];
    }
    out.mu[j] = num / prec;
    out.lv[j] = -std::log(prec);
  }
  return out;
}

double sparse_kl(double log_alpha) {
  constexpr double k1 = 0.63576, k2 = 1.87320, k3 = 1.48695;
  return k1 - k1 * sigmoid(k2 + k3 * log_alpha) + 0.5 * std::log1p(std::exp(-log_alpha));
}

double cca_sum(const std::vector<Vec>& h1, const std::vector<Vec>& h2, double ridge) {
  const auto n = static_cast<Eigen::Index>(h1.size());
  const auto o1 = static_cast<Eigen::Index>(h1[0].size()), o2 = static_cast<Eigen::Index>(h2[0].size());
  Eigen::MatrixXd a(n, o1), b(n, o2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < o1; ++j) a(i, j) = h1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    for (Eigen::Index j = 0; j < o2; ++j) b(i, j) = h2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  a.rowwise() -= a.colwise().mean();
  b.rowwise() -= b.colwise().mean();
  const double inv = 1.0 / static_cast<double>(n - 1);
  const Eigen::MatrixXd s11 = inv * a.transpose() * a + ridge * Eigen::MatrixXd::Identity(o1, o1);
  const Eigen::MatrixXd s22 = inv * b.transpose() * b + ridge * Eigen::MatrixXd::Identity(o2, o2);
  const Eigen::MatrixXd s12 = inv * a.transpose() * b;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(s11), e2(s22);
  const Eigen::MatrixXd t = e1.operatorInverseSqrt() * s12 * e2.operatorInverseSqrt();
  return Eigen::JacobiSVD<Eigen::MatrixXd>(t).singularValues().sum();
}

double total_loss(const mvx::ModelState& s, const mvx::MultiViewBatch& b, const mvx::NoiseRecord& noise) {
  double v = batch_mean(s, b, noise, [](const Ctx& c) { return sample_loss(c); });
  if (s.kind() == ModelKind::DCCAE) {
    std::vector<Vec> h1, h2;
    for (std::size_t i = 0; i < b.size(); ++i) {
      h1.push_back(point(s.encoders[0], row_of(b.views[0], i)));
      h2.push_back(point(s.encoders[1], row_of(b.views[1], i)));
    }
    v -= cca_sum(h1, h2, s.spec.hyper.ridge);
  }
  return v;
}

double adversary_loss(const mvx::ModelState& s, const mvx::MultiViewBatch& b, const mvx::NoiseRecord& noise) {
  const bool critic = s.kind() == ModelKind::mWAE;
  return batch_mean(s, b, noise, [critic](const Ctx& c) {
    const std::size_t M = c.M();
    double v = 0;
    for (std::size_t m = 0; m < M; ++m) {
      const double fake = disc_score(*c.s.discriminator, point(c.s.encoders[m], c.x(m)));
      const double real = disc_score(*c.s.discriminator, c.eps(idx("prior", m), c.s.spec.z_dim));
      v += critic ? fake - real : softplus(-real) + softplus(fake);
    }
    return v / static_cast<double>(M);
  });
}

double jmvae_loss(const mvx::ModelState& s, const mvx::MultiViewBatch& b, const mvx::NoiseRecord& noise, double alpha) {
  return batch_mean(s, b, noise, [alpha](const Ctx& c) { return jmvae_sample(c, alpha); });
}

}  // namespace oracle
