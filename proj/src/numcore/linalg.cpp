#include "mvx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mvx/error.hpp"

namespace mvx {
namespace {

// Small dense row-major matrix for the whitening algebra.
struct Mat {
  std::size_t r = 0, c = 0;
  std::vector<double> v;

  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : r(rows), c(cols), v(rows * cols, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return v[i * c + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * c + j]; }
};

Mat from_tensor(const Tensor& t) {
  Mat m(t.rows(), t.cols());
  std::copy(t.values().begin(), t.values().end(), m.v.begin());
  return m;
}

Mat mul(const Mat& a, const Mat& b) {
  Mat out(a.r, b.c);
  for (std::size_t i = 0; i < a.r; ++i)
    for (std::size_t p = 0; p < a.c; ++p) {
      const double aip = a(i, p);
      for (std::size_t j = 0; j < b.c; ++j) out(i, j) += aip * b(p, j);
    }
  return out;
}

Mat transposed(const Mat& a) {
  Mat out(a.c, a.r);
  for (std::size_t i = 0; i < a.r; ++i)
    for (std::size_t j = 0; j < a.c; ++j) out(j, i) = a(i, j);
  return out;
}

struct EigResult {
  std::vector<double> values;
  Mat vectors;
};

EigResult jacobi(Mat a) {
  const std::size_t d = a.r;
  Mat vec(d, d);
  for (std::size_t i = 0; i < d; ++i) vec(i, i) = 1.0;

  double norm2 = 0.0;
  for (double x : a.v) norm2 += x * x;
  auto off_diagonal = [&] {
    double off = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) off += a(i, j) * a(i, j);
    return off;
  };

  const std::size_t max_sweeps = std::max<std::size_t>(1, 100 * d * d);
  bool converged = false;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    const double off = off_diagonal();
    if (off == 0.0 || off <= 1e-32 * norm2) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = vec(k, p), vkq = vec(k, q);
          vec(k, p) = c * vkp - s * vkq;
          vec(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) throw NumericError("sym_eig: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  EigResult out{std::vector<double>(d), Mat(d, d)};
  for (std::size_t j = 0; j < d; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < d; ++k) out.vectors(k, j) = vec(k, order[j]);
  }
  return out;
}

void check_symmetric(const Mat& a) {
  if (a.r != a.c) throw DimensionError("sym_eig: matrix is not square");
  double scale = 1.0;
  for (double x : a.v) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < a.r; ++i)
    for (std::size_t j = i + 1; j < a.c; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-8 * scale) throw ContractError("sym_eig: matrix is not symmetric");
}

// S^{-1/2} for a symmetric positive-definite S.
Mat inverse_sqrt(const Mat& s) {
  const EigResult e = jacobi(s);
  const std::size_t d = s.r;
  Mat out(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    if (!(e.values[k] > 0.0)) throw NumericError("cca: covariance block is not positive definite; increase the ridge");
    const double w = 1.0 / std::sqrt(e.values[k]);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out(i, j) += w * e.vectors(i, k) * e.vectors(j, k);
  }
  return out;
}

struct CcaPieces {
  std::vector<double> correlations;
  Mat grad_h1, grad_h2;  // d(sum of correlations)/d(h)
};

CcaPieces cca_solve(const Tensor& h1, const Tensor& h2, double ridge, bool with_grad) {
  if (h1.rank() != 2 || h2.rank() != 2) throw DimensionError("cca: inputs must be rank-2 batches");
  if (h1.rows() != h2.rows()) throw DimensionError("cca: batches have different sample counts");
  const std::size_t n = h1.rows();
  if (n < 2) throw DimensionError("cca: need at least two samples");
  if (ridge < 0) throw DomainError("cca: ridge must be non-negative");

  auto centered = [n](const Tensor& h) {
    Mat m = from_tensor(h);
    for (std::size_t j = 0; j < m.c; ++j) {
      double mu = 0.0;
      for (std::size_t i = 0; i < n; ++i) mu += m(i, j);
      mu /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) m(i, j) -= mu;
    }
    return m;
  };
  const Mat c1 = centered(h1), c2 = centered(h2);
  const double inv = 1.0 / static_cast<double>(n - 1);
  auto cov = [inv](const Mat& a, const Mat& b) {
    Mat s = mul(transposed(a), b);
    for (double& x : s.v) x *= inv;
    return s;
  };
  Mat s11 = cov(c1, c1), s22 = cov(c2, c2);
  const Mat s12 = cov(c1, c2);
  for (std::size_t i = 0; i < s11.r; ++i) s11(i, i) += ridge;
  for (std::size_t i = 0; i < s22.r; ++i) s22(i, i) += ridge;

  const Mat w1 = inverse_sqrt(s11), w2 = inverse_sqrt(s22);
  const Mat t = mul(mul(w1, s12), w2);
  const EigResult e = jacobi(mul(transposed(t), t));

  const std::size_t o1 = t.r, o2 = t.c, k = std::min(o1, o2);
  CcaPieces out;
  std::vector<double> sv(o2);
  for (std::size_t i = 0; i < o2; ++i) sv[i] = std::sqrt(std::max(e.values[i], 0.0));
  out.correlations.assign(sv.begin(), sv.begin() + static_cast<std::ptrdiff_t>(k));
  if (!with_grad) return out;

  // T = U D Vᵀ with U recovered as T V D⁻¹ on the non-degenerate part.
  Mat uvt(o1, o2), udu(o1, o1), vdv(o2, o2);
  for (std::size_t i = 0; i < k; ++i) {
    if (sv[i] <= 1e-12) continue;
    std::vector<double> u(o1, 0.0);
    for (std::size_t a = 0; a < o1; ++a) {
      for (std::size_t b = 0; b < o2; ++b) u[a] += t(a, b) * e.vectors(b, i);
      u[a] /= sv[i];
    }
    for (std::size_t a = 0; a < o1; ++a) {
      for (std::size_t b = 0; b < o2; ++b) uvt(a, b) += u[a] * e.vectors(b, i);
      for (std::size_t b = 0; b < o1; ++b) udu(a, b) += u[a] * sv[i] * u[b];
    }
    for (std::size_t a = 0; a < o2; ++a)
      for (std::size_t b = 0; b < o2; ++b) vdv(a, b) += e.vectors(a, i) * sv[i] * e.vectors(b, i);
  }
  const Mat d12 = mul(mul(w1, uvt), w2);
  Mat d11 = mul(mul(w1, udu), w1);
  Mat d22 = mul(mul(w2, vdv), w2);
  for (double& x : d11.v) x *= -0.5;
  for (double& x : d22.v) x *= -0.5;

  // dH1 = (2 H̄1 ∇11 + H̄2 ∇12ᵀ)/(n-1), dH2 = (2 H̄2 ∇22 + H̄1 ∇12)/(n-1)
  out.grad_h1 = mul(c1, d11);
  const Mat cross1 = mul(c2, transposed(d12));
  for (std::size_t i = 0; i < out.grad_h1.v.size(); ++i) out.grad_h1.v[i] = (2.0 * out.grad_h1.v[i] + cross1.v[i]) * inv;
  out.grad_h2 = mul(c2, d22);
  const Mat cross2 = mul(c1, d12);
  for (std::size_t i = 0; i < out.grad_h2.v.size(); ++i) out.grad_h2.v[i] = (2.0 * out.grad_h2.v[i] + cross2.v[i]) * inv;
  return out;
}

}  // namespace

SymEig sym_eig(const Tensor& a) {
  if (a.rank() != 2) throw DimensionError("sym_eig: expected a square matrix, got " + shape_string(a.shape()));
  const Mat m = from_tensor(a);
  check_symmetric(m);
  const EigResult e = jacobi(m);
  return {Tensor::vector(e.values), Tensor::matrix(m.r, m.r, e.vectors.v)};
}

std::vector<double> canonical_correlations(const Tensor& h1, const Tensor& h2, double ridge) {
  return cca_solve(h1, h2, ridge, false).correlations;
}

Tensor cca_correlation(const Tensor& h1, const Tensor& h2, double ridge) {
  CcaPieces pieces = cca_solve(h1, h2, ridge, h1.requires_grad() || h2.requires_grad());
  const double total = std::accumulate(pieces.correlations.begin(), pieces.correlations.end(), 0.0);
  return make_op_result("cca_correlation", Shape{}, {total}, {h1, h2},
                        [g1 = std::move(pieces.grad_h1.v), g2 = std::move(pieces.grad_h2.v)](detail::Node& self) {
                          const double g = self.grad[0];
                          if (self.inputs[0]->requires_grad) {
                            auto b = self.inputs[0]->grad_buffer();
                            for (std::size_t i = 0; i < b.size(); ++i) b[i] += g * g1[i];
                          }
                          if (self.inputs[1]->requires_grad) {
                            auto b = self.inputs[1]->grad_buffer();
                            for (std::size_t i = 0; i < b.size(); ++i) b[i] += g * g2[i];
                          }
                        });
}

}  // namespace mvx
