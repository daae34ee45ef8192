#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <set>

#include "gradcheck.hpp"
#include "mvx/error.hpp"
#include "mvx/ops.hpp"
#include "mvx/pooling.hpp"
#include "mvx/rng.hpp"
#include "oracle.hpp"

using namespace mvx;
using mvx::testing::check_gradients;

namespace {

GaussianParams random_gauss(Rng& rng, std::size_t n, std::size_t d) {
  std::vector<double> mu(n * d), lv(n * d);
  for (auto& v : mu) v = rng.normal();
  for (auto& v : lv) v = 0.8 * rng.normal();
  return {Tensor::matrix(n, d, mu), Tensor::matrix(n, d, lv)};
}

double normal_pdf(double x, double mu, double var) {
  return std::exp(-0.5 * (x - mu) * (x - mu) / var) / std::sqrt(2 * std::numbers::pi * var);
}

}  // namespace

TEST_CASE("poe matches the normalized grid product of expert densities") {
  Rng rng(1);
  std::vector<GaussianParams> experts;
  for (int m = 0; m < 3; ++m) experts.push_back(random_gauss(rng, 1, 2));
  for (bool prior : {false, true}) {
    const GaussianParams q = poe({experts, {}, prior});
    for (std::size_t j = 0; j < 2; ++j) {
      const double lo = -12, hi = 12;
      const std::size_t G = 48001;
      const double h = (hi - lo) / static_cast<double>(G - 1);
      std::vector<double> dens(G);
      double z = 0;
      for (std::size_t g = 0; g < G; ++g) {
        const double x = lo + h * static_cast<double>(g);
        double p = prior ? normal_pdf(x, 0, 1) : 1.0;
        for (const auto& e : experts) p *= normal_pdf(x, e.mean.at(0, j), std::exp(e.log_var.at(0, j)));
        dens[g] = p;
        z += (g == 0 || g == G - 1 ? 0.5 : 1.0) * p * h;
      }
      double dev = 0;
      for (std::size_t g = 0; g < G; ++g) {
        const double x = lo + h * static_cast<double>(g);
        dev = std::max(dev, std::abs(dens[g] / z - normal_pdf(x, q.mean.at(0, j), std::exp(q.log_var.at(0, j)))));
      }
      CAPTURE(prior);
      CHECK(dev < 1e-6);
    }
  }
}

TEST_CASE("gpoe with unit weights is bitwise poe") {
  Rng rng(2);
  std::vector<GaussianParams> experts;
  for (int m = 0; m < 3; ++m) experts.push_back(random_gauss(rng, 4, 3));
  for (bool prior : {false, true}) {
    const std::size_t K = prior ? 4 : 3;
    const GaussianParams a = poe({experts, {}, prior});
    const GaussianParams b = gpoe({experts, Tensor(Shape{K, 3}, 1.0), prior});
    REQUIRE(a.mean.numel() == b.mean.numel());
    CHECK(std::memcmp(a.mean.values().data(), b.mean.values().data(), 12 * sizeof(double)) == 0);
    CHECK(std::memcmp(a.log_var.values().data(), b.log_var.values().data(), 12 * sizeof(double)) == 0);
  }
}

TEST_CASE("weighted gpoe matches the scalar product oracle") {
  Rng rng(3);
  std::vector<GaussianParams> experts;
  for (int m = 0; m < 2; ++m) experts.push_back(random_gauss(rng, 1, 2));
  const std::vector<double> w{0.2, 0.7, 0.5, 0.1, 0.3, 0.2};
  const GaussianParams q = gpoe({experts, Tensor::matrix(3, 2, w), true});
  std::vector<oracle::Gauss> ge;
  for (const auto& e : experts) {
    ge.push_back({{e.mean.at(0, 0), e.mean.at(0, 1)}, {e.log_var.at(0, 0), e.log_var.at(0, 1)}});
  }
  ge.push_back(oracle::standard(2));
  const std::vector<oracle::Vec> wv{{w[0], w[1]}, {w[2], w[3]}, {w[4], w[5]}};
  const auto ref = oracle::product(ge, &wv);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(q.mean.at(0, j) == doctest::Approx(ref.mu[j]).epsilon(1e-14));
    CHECK(q.log_var.at(0, j) == doctest::Approx(ref.lv[j]).epsilon(1e-14));
  }
}

TEST_CASE("gpoe argument checks") {
  Rng rng(4);
  std::vector<GaussianParams> experts{random_gauss(rng, 2, 2), random_gauss(rng, 2, 2)};
  CHECK_THROWS_AS(gpoe({experts, {}, false}), ContractError);
  CHECK_THROWS_AS(gpoe({experts, Tensor(Shape{3, 2}, 1.0), false}), DimensionError);
  CHECK_THROWS_AS(gpoe({experts, Tensor(Shape{2, 2}, 0.0), false}), DomainError);
  CHECK_THROWS_AS(poe({}), ContractError);
  experts.push_back(random_gauss(rng, 2, 3));
  CHECK_THROWS_AS(poe({experts, {}, false}), DimensionError);
}

TEST_CASE("enumerate_subsets counts and ordering") {
  for (std::size_t M = 1; M <= 8; ++M) {
    const auto s = enumerate_subsets(M);
    CHECK(s.size() == (std::size_t{1} << M) - 1);
    std::set<std::vector<std::size_t>> distinct;
    for (std::size_t i = 0; i < s.size(); ++i) {
      distinct.insert(s[i].members);
      if (i > 0) CHECK(s[i - 1].members.size() <= s[i].members.size());
    }
    CHECK(distinct.size() == s.size());
  }
  const auto three = enumerate_subsets(3);
  CHECK(three[0].members == std::vector<std::size_t>{0});
  CHECK(three[3].members == std::vector<std::size_t>{0, 1});
  CHECK(three[5].members == std::vector<std::size_t>{1, 2});
  CHECK(three[6].members == std::vector<std::size_t>{0, 1, 2});
  CHECK(three[4].contains(2));
  CHECK_FALSE(three[4].contains(1));
  CHECK_THROWS_AS(enumerate_subsets(0), DomainError);
  CHECK_THROWS_AS(enumerate_subsets(11), CapacityError);
  CHECK(enumerate_subsets(10).size() == 1023);
}

TEST_CASE("mixture density and selection") {
  Rng rng(5);
  std::vector<GaussianParams> experts{random_gauss(rng, 1, 2), random_gauss(rng, 1, 2)};
  const Tensor z = Tensor::matrix(1, 2, {0.3, -0.4});
  std::vector<oracle::Gauss> ge;
  for (const auto& e : experts) {
    ge.push_back({{e.mean.at(0, 0), e.mean.at(0, 1)}, {e.log_var.at(0, 0), e.log_var.at(0, 1)}});
  }
  const double ref = std::log(0.5 * std::exp(oracle::log_normal(ge[0], {0.3, -0.4})) +
                              0.5 * std::exp(oracle::log_normal(ge[1], {0.3, -0.4})));
  CHECK(moe_log_prob({experts, {}, false}, z).item() == doctest::Approx(ref).epsilon(1e-13));
  CHECK(moe_select({experts, {}, false}, 1).mean.at(0, 0) == experts[1].mean.at(0, 0));
  CHECK_THROWS_AS(moe_select({experts, {}, false}, 2), DimensionError);
}

TEST_CASE("mean pooling averages means and variances") {
  const GaussianParams a{Tensor::matrix(1, 1, {1.0}), Tensor::matrix(1, 1, {std::log(2.0)})};
  const GaussianParams b{Tensor::matrix(1, 1, {3.0}), Tensor::matrix(1, 1, {std::log(4.0)})};
  const GaussianParams m = mean_pool({{a, b}, {}, false});
  CHECK(m.mean.item() == doctest::Approx(2.0));
  CHECK(std::exp(m.log_var.item()) == doctest::Approx(3.0));
}

TEST_CASE("js_divergence weights") {
  Rng rng(6);
  const std::vector<GaussianParams> c{random_gauss(rng, 2, 2), random_gauss(rng, 2, 2)};
  const GaussianParams pooled = poe({c, {}, true});
  const std::vector<double> pi{0.25, 0.75};
  const Tensor js = js_divergence(c, pi, pooled);
  const Tensor ref = 0.25 * kl_normal(c[0], pooled) + 0.75 * kl_normal(c[1], pooled);
  CHECK(js.at(1) == doctest::Approx(ref.at(1)).epsilon(1e-14));
  const std::vector<double> bad{0.5, 0.6}, neg{-0.5, 1.5};
  CHECK_THROWS_AS(js_divergence(c, bad, pooled), ContractError);
  CHECK_THROWS_AS(js_divergence(c, neg, pooled), ContractError);
}

TEST_CASE("pooling gradients match finite differences") {
  Rng rng(7);
  auto p = [&](std::size_t r, std::size_t c) {
    std::vector<double> v(r * c);
    for (auto& x : v) x = rng.normal() * 0.6;
    return Tensor::parameter({r, c}, v);
  };
  Tensor m1 = p(2, 2), l1 = p(2, 2), m2 = p(2, 2), l2 = p(2, 2), w = p(3, 2);
  const Tensor z = Tensor::matrix(2, 2, {0.1, -0.3, 0.4, 0.2});
  auto check = [](const mvx::testing::GradReport& r) {
    INFO(r.worst_at);
    CHECK(r.worst < 1e-6);
  };
  check(check_gradients({m1, l1, m2, l2}, [&] {
    const GaussianParams q = poe({{{m1, l1}, {m2, l2}}, {}, true});
    return sum(square(q.mean)) + sum(q.log_var);
  }));
  check(check_gradients({m1, l1, m2, l2, w}, [&] {
    const GaussianParams q = gpoe({{{m1, l1}, {m2, l2}}, softmax(w, 0), true});
    return sum(square(q.mean)) + sum(q.log_var);
  }));
  check(check_gradients({m1, l1, m2, l2}, [&] { return sum(moe_log_prob({{{m1, l1}, {m2, l2}}, {}, false}, z)); }));
  check(check_gradients({m1, l1, m2, l2}, [&] {
    const GaussianParams q = mean_pool({{{m1, l1}, {m2, l2}}, {}, false});
    return sum(square(q.mean)) + sum(q.log_var);
  }));
}
