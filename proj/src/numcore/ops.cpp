#include "mvx/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mvx/error.hpp"
#include "mvx/kernels.hpp"

namespace mvx {
namespace {

using detail::Node;

enum class Bcast { Same, ScalarA, ScalarB, RowA, RowB };

struct BinaryPlan {
  Bcast kind;
  Shape out;
  std::size_t row_width = 1;

  std::size_t ia(std::size_t i) const {
    switch (kind) {
      case Bcast::ScalarA: return 0;
      case Bcast::RowA: return i % row_width;
      default: return i;
    }
  }
  std::size_t ib(std::size_t i) const {
    switch (kind) {
      case Bcast::ScalarB: return 0;
      case Bcast::RowB: return i % row_width;
      default: return i;
    }
  }
};

bool is_row_of(const Tensor& row, const Tensor& mat) {
  if (mat.rank() != 2) return false;
  const auto& s = row.shape();
  if (s.size() == 1) return s[0] == mat.cols();
  return s.size() == 2 && s[0] == 1 && s[1] == mat.cols();
}

BinaryPlan plan_binary(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() == b.shape()) return {Bcast::Same, a.shape()};
  if (b.numel() == 1) return {Bcast::ScalarB, a.shape()};
  if (a.numel() == 1) return {Bcast::ScalarA, b.shape()};
  if (is_row_of(b, a)) return {Bcast::RowB, a.shape(), a.cols()};
  if (is_row_of(a, b)) return {Bcast::RowA, b.shape(), b.cols()};
  throw DimensionError(std::string(op) + ": cannot broadcast " + shape_string(a.shape()) + " with " +
                       shape_string(b.shape()));
}

double floor_denominator(double b) {
  if (std::abs(b) >= kEpsFloor) return b;
  return b < 0 ? -kEpsFloor : kEpsFloor;
}

// f(x, y) -> value; da(x, y, out) and db(x, y, out) -> local partials.
template <typename F, typename DA, typename DB>
Tensor binary(const char* op, const Tensor& a, const Tensor& b, F f, DA da, DB db) {
  const BinaryPlan plan = plan_binary(a, b, op);
  const auto av = a.values();
  const auto bv = b.values();
  const std::size_t n = shape_numel(plan.out);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(av[plan.ia(i)], bv[plan.ib(i)]);
  return make_op_result(op, plan.out, std::move(out), {a, b}, [plan, f, da, db](Node& self) {
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    const std::size_t n = self.value.size();
    if (na.requires_grad) {
      auto g = na.grad_buffer();
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ja = plan.ia(i);
        g[ja] += self.grad[i] * da(na.value[ja], nb.value[plan.ib(i)], self.value[i]);
      }
    }
    if (nb.requires_grad) {
      auto g = nb.grad_buffer();
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t jb = plan.ib(i);
        g[jb] += self.grad[i] * db(na.value[plan.ia(i)], nb.value[jb], self.value[i]);
      }
    }
  });
}

// Same-shape add/sub/mul go through the kernel table.
Tensor fast_same(const char* op, const Tensor& a, const Tensor& b,
                 void (*kernels::KernelTable::*fn)(const double*, const double*, double*, std::size_t), int kind) {
  const auto& table = kernels::active();
  std::vector<double> out(a.numel());
  (table.*fn)(a.values().data(), b.values().data(), out.data(), out.size());
  return make_op_result(op, a.shape(), std::move(out), {a, b}, [kind](Node& self) {
    const auto& t = kernels::active();
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    const std::size_t n = self.value.size();
    switch (kind) {
      case 0:
        if (na.requires_grad) t.axpy(1.0, self.grad.data(), na.grad_buffer().data(), n);
        if (nb.requires_grad) t.axpy(1.0, self.grad.data(), nb.grad_buffer().data(), n);
        break;
      case 1:
        if (na.requires_grad) t.axpy(1.0, self.grad.data(), na.grad_buffer().data(), n);
        if (nb.requires_grad) t.axpy(-1.0, self.grad.data(), nb.grad_buffer().data(), n);
        break;
      default: {
        std::vector<double> tmp(n);
        if (na.requires_grad) {
          t.mul(self.grad.data(), nb.value.data(), tmp.data(), n);
          t.axpy(1.0, tmp.data(), na.grad_buffer().data(), n);
        }
        if (nb.requires_grad) {
          t.mul(self.grad.data(), na.value.data(), tmp.data(), n);
          t.axpy(1.0, tmp.data(), nb.grad_buffer().data(), n);
        }
      }
    }
  });
}

// f(x) -> value; df(x, out) -> derivative.
template <typename F, typename DF>
Tensor unary(const char* op, const Tensor& a, F f, DF df) {
  const auto av = a.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = f(av[i]);
  return make_op_result(op, a.shape(), std::move(out), {a}, [df](Node& self) {
    Node& na = *self.inputs[0];
    auto g = na.grad_buffer();
    for (std::size_t i = 0; i < self.value.size(); ++i) g[i] += self.grad[i] * df(na.value[i], self.value[i]);
  });
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor constant(double v) { return Tensor::scalar(v); }

void require_rank2(const Tensor& a, const char* op) {
  if (a.rank() != 2) throw DimensionError(std::string(op) + ": expected a rank-2 tensor, got " + shape_string(a.shape()));
}

// Reduction geometry: `outer` groups, each reducing `len` elements spaced by `stride`.
struct ReduceGeom {
  Shape out;
  std::size_t outer, len, stride;
  std::size_t base(std::size_t o) const { return stride == 1 ? o * len : o; }
};

ReduceGeom reduce_geometry(const Tensor& a, std::size_t axis, const char* op) {
  if (axis >= a.rank()) {
    throw DimensionError(std::string(op) + ": axis " + std::to_string(axis) + " out of range for " +
                         shape_string(a.shape()));
  }
  if (a.rank() > 2) throw DimensionError(std::string(op) + ": axis reductions support rank <= 2");
  ReduceGeom g;
  if (a.rank() == 1) {
    g = {Shape{}, 1, a.dim(0), 1};
  } else if (axis == 0) {
    g = {Shape{a.cols()}, a.cols(), a.rows(), a.cols()};
  } else {
    g = {Shape{a.rows()}, a.rows(), a.cols(), 1};
  }
  if (g.len == 0) throw DimensionError(std::string(op) + ": empty reduction axis");
  return g;
}

Tensor reduce_axis(const char* op, const Tensor& a, std::size_t axis, bool is_mean) {
  const ReduceGeom geo = reduce_geometry(a, axis, op);
  const auto av = a.values();
  std::vector<double> out(geo.outer, 0.0);
  for (std::size_t o = 0; o < geo.outer; ++o) {
    double acc = 0.0;
    for (std::size_t j = 0; j < geo.len; ++j) acc += av[geo.base(o) + j * geo.stride];
    out[o] = is_mean ? acc / static_cast<double>(geo.len) : acc;
  }
  return make_op_result(op, geo.out, std::move(out), {a}, [geo, is_mean](Node& self) {
    auto g = self.inputs[0]->grad_buffer();
    const double scale = is_mean ? 1.0 / static_cast<double>(geo.len) : 1.0;
    for (std::size_t o = 0; o < geo.outer; ++o) {
      for (std::size_t j = 0; j < geo.len; ++j) g[geo.base(o) + j * geo.stride] += self.grad[o] * scale;
    }
  });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() == b.shape()) return fast_same("add", a, b, &kernels::KernelTable::add, 0);
  return binary(
      "add", a, b, [](double x, double y) { return x + y; }, [](double, double, double) { return 1.0; },
      [](double, double, double) { return 1.0; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  if (a.shape() == b.shape()) return fast_same("sub", a, b, &kernels::KernelTable::sub, 1);
  return binary(
      "sub", a, b, [](double x, double y) { return x - y; }, [](double, double, double) { return 1.0; },
      [](double, double, double) { return -1.0; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  if (a.shape() == b.shape()) return fast_same("mul", a, b, &kernels::KernelTable::mul, 2);
  return binary(
      "mul", a, b, [](double x, double y) { return x * y; }, [](double, double y, double) { return y; },
      [](double x, double, double) { return x; });
}

Tensor div(const Tensor& a, const Tensor& b) {
  return binary(
      "div", a, b, [](double x, double y) { return x / floor_denominator(y); },
      [](double, double y, double) { return 1.0 / floor_denominator(y); },
      [](double x, double y, double) {
        if (std::abs(y) < kEpsFloor) return 0.0;
        return -x / (y * y);
      });
}

Tensor exp(const Tensor& a) {
  return unary("exp", a, [](double x) { return std::exp(x); }, [](double, double out) { return out; });
}

Tensor log(const Tensor& a) {
  return unary(
      "log", a, [](double x) { return std::log(std::max(x, kEpsFloor)); },
      [](double x, double) { return x < kEpsFloor ? 0.0 : 1.0 / x; });
}

Tensor tanh(const Tensor& a) {
  return unary("tanh", a, [](double x) { return std::tanh(x); }, [](double, double out) { return 1.0 - out * out; });
}

Tensor relu(const Tensor& a) {
  return unary(
      "relu", a, [](double x) { return x > 0 ? x : 0.0; }, [](double x, double) { return x > 0 ? 1.0 : 0.0; });
}

Tensor sigmoid(const Tensor& a) {
  return unary("sigmoid", a, stable_sigmoid, [](double, double out) { return out * (1.0 - out); });
}

Tensor neg(const Tensor& a) {
  return unary("neg", a, [](double x) { return -x; }, [](double, double) { return -1.0; });
}

Tensor square(const Tensor& a) {
  return unary("square", a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Tensor sqrt(const Tensor& a) {
  return unary(
      "sqrt", a, [](double x) { return std::sqrt(std::max(x, kEpsFloor)); },
      [](double x, double out) { return x < kEpsFloor ? 0.0 : 0.5 / out; });
}

Tensor abs(const Tensor& a) {
  return unary(
      "abs", a, [](double x) { return std::abs(x); },
      [](double x, double) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); });
}

Tensor softplus(const Tensor& a) {
  return unary(
      "softplus", a, [](double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); },
      [](double x, double) { return stable_sigmoid(x); });
}

Tensor clamp(const Tensor& a, double lo, double hi) {
  return unary(
      "clamp", a, [lo, hi](double x) { return std::clamp(x, lo, hi); },
      [lo, hi](double x, double) { return (x >= lo && x <= hi) ? 1.0 : 0.0; });
}

Tensor elementwise(ElementwiseOp op, const Tensor& a, const Tensor& b) {
  const bool binary_op = op == ElementwiseOp::Add || op == ElementwiseOp::Sub || op == ElementwiseOp::Mul ||
                         op == ElementwiseOp::Div;
  if (binary_op && !b.defined()) throw ContractError("elementwise: binary op requires two operands");
  switch (op) {
    case ElementwiseOp::Add: return add(a, b);
    case ElementwiseOp::Sub: return sub(a, b);
    case ElementwiseOp::Mul: return mul(a, b);
    case ElementwiseOp::Div: return div(a, b);
    case ElementwiseOp::Exp: return exp(a);
    case ElementwiseOp::Log: return log(a);
    case ElementwiseOp::Tanh: return tanh(a);
    case ElementwiseOp::Relu: return relu(a);
    case ElementwiseOp::Sigmoid: return sigmoid(a);
    case ElementwiseOp::Neg: return neg(a);
    case ElementwiseOp::Square: return square(a);
    case ElementwiseOp::Sqrt: return sqrt(a);
  }
  throw ContractError("elementwise: unknown op");
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank2(a, "matmul");
  require_rank2(b, "matmul");
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  if (b.rows() != k) {
    throw DimensionError("matmul: inner dimensions differ, " + shape_string(a.shape()) + " x " +
                         shape_string(b.shape()));
  }
  std::vector<double> out(n * m);
  kernels::gemm_nn(kernels::active(), a.values().data(), b.values().data(), out.data(), n, k, m);
  return make_op_result("matmul", Shape{n, m}, std::move(out), {a, b}, [n, k, m](Node& self) {
    const auto& t = kernels::active();
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    if (na.requires_grad) kernels::gemm_nt_acc(t, self.grad.data(), nb.value.data(), na.grad_buffer().data(), n, m, k);
    if (nb.requires_grad) kernels::gemm_tn_acc(t, na.value.data(), self.grad.data(), nb.grad_buffer().data(), n, k, m);
  });
}

Tensor transpose(const Tensor& a) {
  require_rank2(a, "transpose");
  const std::size_t r = a.rows(), c = a.cols();
  const auto av = a.values();
  std::vector<double> out(r * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = av[i * c + j];
  return make_op_result("transpose", Shape{c, r}, std::move(out), {a}, [r, c](Node& self) {
    auto g = self.inputs[0]->grad_buffer();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) g[i * c + j] += self.grad[j * r + i];
  });
}

Tensor sum(const Tensor& a) {
  if (a.numel() == 0) throw DimensionError("sum: empty tensor");
  const double total = kernels::active().sum(a.values().data(), a.numel());
  return make_op_result("sum", Shape{}, {total}, {a}, [](Node& self) {
    auto g = self.inputs[0]->grad_buffer();
    for (double& v : g) v += self.grad[0];
  });
}

Tensor sum(const Tensor& a, std::size_t axis) { return reduce_axis("sum", a, axis, false); }

Tensor mean(const Tensor& a) {
  if (a.numel() == 0) throw DimensionError("mean: empty tensor");
  const double n = static_cast<double>(a.numel());
  const double total = kernels::active().sum(a.values().data(), a.numel()) / n;
  return make_op_result("mean", Shape{}, {total}, {a}, [n](Node& self) {
    auto g = self.inputs[0]->grad_buffer();
    for (double& v : g) v += self.grad[0] / n;
  });
}

Tensor mean(const Tensor& a, std::size_t axis) { return reduce_axis("mean", a, axis, true); }

Tensor logsumexp(const Tensor& a, std::size_t axis) {
  const ReduceGeom geo = reduce_geometry(a, axis, "logsumexp");
  const auto av = a.values();
  std::vector<double> out(geo.outer);
  for (std::size_t o = 0; o < geo.outer; ++o) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < geo.len; ++j) mx = std::max(mx, av[geo.base(o) + j * geo.stride]);
    double acc = 0.0;
    for (std::size_t j = 0; j < geo.len; ++j) acc += std::exp(av[geo.base(o) + j * geo.stride] - mx);
    out[o] = mx + std::log(acc);
  }
  return make_op_result("logsumexp", geo.out, std::move(out), {a}, [geo](Node& self) {
    Node& in = *self.inputs[0];
    auto g = in.grad_buffer();
    for (std::size_t o = 0; o < geo.outer; ++o) {
      for (std::size_t j = 0; j < geo.len; ++j) {
        const std::size_t idx = geo.base(o) + j * geo.stride;
        g[idx] += self.grad[o] * std::exp(in.value[idx] - self.value[o]);
      }
    }
  });
}

Tensor log_softmax(const Tensor& a, std::size_t axis) {
  const ReduceGeom geo = reduce_geometry(a, axis, "log_softmax");
  const auto av = a.values();
  std::vector<double> out(av.size());
  for (std::size_t o = 0; o < geo.outer; ++o) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < geo.len; ++j) mx = std::max(mx, av[geo.base(o) + j * geo.stride]);
    double acc = 0.0;
    for (std::size_t j = 0; j < geo.len; ++j) acc += std::exp(av[geo.base(o) + j * geo.stride] - mx);
    const double lse = mx + std::log(acc);
    for (std::size_t j = 0; j < geo.len; ++j) out[geo.base(o) + j * geo.stride] = av[geo.base(o) + j * geo.stride] - lse;
  }
  return make_op_result("log_softmax", a.shape(), std::move(out), {a}, [geo](Node& self) {
    auto g = self.inputs[0]->grad_buffer();
    for (std::size_t o = 0; o < geo.outer; ++o) {
      double total = 0.0;
      for (std::size_t j = 0; j < geo.len; ++j) total += self.grad[geo.base(o) + j * geo.stride];
      for (std::size_t j = 0; j < geo.len; ++j) {
        const std::size_t idx = geo.base(o) + j * geo.stride;
        g[idx] += self.grad[idx] - std::exp(self.value[idx]) * total;
      }
    }
  });
}

Tensor softmax(const Tensor& a, std::size_t axis) { return exp(log_softmax(a, axis)); }

Tensor scale_rows(const Tensor& a, const Tensor& w) {
  require_rank2(a, "scale_rows");
  if (w.rank() != 1 || w.numel() != a.rows()) {
    throw DimensionError("scale_rows: weights " + shape_string(w.shape()) + " do not match " + shape_string(a.shape()));
  }
  const std::size_t n = a.rows(), c = a.cols();
  const auto av = a.values();
  const auto wv = w.values();
  std::vector<double> out(n * c);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = av[i * c + j] * wv[i];
  return make_op_result("scale_rows", a.shape(), std::move(out), {a, w}, [n, c](Node& self) {
    Node& na = *self.inputs[0];
    Node& nw = *self.inputs[1];
    if (na.requires_grad) {
      auto g = na.grad_buffer();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j) g[i * c + j] += self.grad[i * c + j] * nw.value[i];
    }
    if (nw.requires_grad) {
      auto g = nw.grad_buffer();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j) g[i] += self.grad[i * c + j] * na.value[i * c + j];
    }
  });
}

Tensor reduce(ReduceOp op, const Tensor& a, std::optional<std::size_t> axis) {
  switch (op) {
    case ReduceOp::Sum: return axis ? sum(a, *axis) : sum(a);
    case ReduceOp::Mean: return axis ? mean(a, *axis) : mean(a);
    case ReduceOp::LogSumExp:
      if (axis) return logsumexp(a, *axis);
      if (a.rank() == 1) return logsumexp(a, 0);
      if (a.rank() == 2) return logsumexp(logsumexp(a, 1), 0);
      throw DimensionError("logsumexp: full reduction needs rank 1 or 2");
  }
  throw ContractError("reduce: unknown op");
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  const std::size_t n = parts[0].rows();
  std::size_t width = 0;
  std::vector<std::size_t> offsets;
  for (const auto& p : parts) {
    require_rank2(p, "concat_cols");
    if (p.rows() != n) throw DimensionError("concat_cols: row counts differ");
    offsets.push_back(width);
    width += p.cols();
  }
  std::vector<double> out(n * width);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto pv = parts[k].values();
    const std::size_t c = parts[k].cols();
    for (std::size_t i = 0; i < n; ++i) std::copy_n(pv.begin() + i * c, c, out.begin() + i * width + offsets[k]);
  }
  return make_op_result("concat_cols", Shape{n, width}, std::move(out), {parts.begin(), parts.end()},
                        [n, width, offsets](Node& self) {
                          for (std::size_t k = 0; k < self.inputs.size(); ++k) {
                            Node& in = *self.inputs[k];
                            if (!in.requires_grad) continue;
                            const std::size_t c = in.shape[1];
                            auto g = in.grad_buffer();
                            for (std::size_t i = 0; i < n; ++i)
                              for (std::size_t j = 0; j < c; ++j) g[i * c + j] += self.grad[i * width + offsets[k] + j];
                          }
                        });
}

Tensor stack_cols(std::span<const Tensor> columns) {
  if (columns.empty()) throw DimensionError("stack_cols: no inputs");
  const std::size_t n = columns[0].numel();
  const std::size_t k = columns.size();
  for (const auto& c : columns) {
    if (c.rank() != 1 || c.numel() != n) throw DimensionError("stack_cols: inputs must be rank-1 of equal length");
  }
  std::vector<double> out(n * k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto cv = columns[j].values();
    for (std::size_t i = 0; i < n; ++i) out[i * k + j] = cv[i];
  }
  return make_op_result("stack_cols", Shape{n, k}, std::move(out), {columns.begin(), columns.end()},
                        [n, k](Node& self) {
                          for (std::size_t j = 0; j < k; ++j) {
                            Node& in = *self.inputs[j];
                            if (!in.requires_grad) continue;
                            auto g = in.grad_buffer();
                            for (std::size_t i = 0; i < n; ++i) g[i] += self.grad[i * k + j];
                          }
                        });
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end) {
  require_rank2(a, "slice_cols");
  if (begin > end || end > a.cols()) throw DimensionError("slice_cols: range out of bounds");
  const std::size_t n = a.rows(), c = a.cols(), w = end - begin;
  const auto av = a.values();
  std::vector<double> out(n * w);
  for (std::size_t i = 0; i < n; ++i) std::copy_n(av.begin() + i * c + begin, w, out.begin() + i * w);
  return make_op_result("slice_cols", Shape{n, w}, std::move(out), {a}, [n, c, w, begin](Node& self) {
    auto g = self.inputs[0]->grad_buffer();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < w; ++j) g[i * c + begin + j] += self.grad[i * w + j];
  });
}

Tensor row(const Tensor& a, std::size_t r) {
  require_rank2(a, "row");
  if (r >= a.rows()) throw DimensionError("row: index out of range");
  const std::size_t c = a.cols();
  const auto av = a.values();
  std::vector<double> out(av.begin() + r * c, av.begin() + (r + 1) * c);
  return make_op_result("row", Shape{c}, std::move(out), {a}, [r, c](Node& self) {
    auto g = self.inputs[0]->grad_buffer();
    for (std::size_t j = 0; j < c; ++j) g[r * c + j] += self.grad[j];
  });
}

Tensor add_n(std::span<const Tensor> parts) {
  if (parts.empty()) throw DimensionError("add_n: no inputs");
  Tensor acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = add(acc, parts[i]);
  return acc;
}

Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
Tensor operator-(const Tensor& a, const Tensor& b) { return sub(a, b); }
Tensor operator*(const Tensor& a, const Tensor& b) { return mul(a, b); }
Tensor operator/(const Tensor& a, const Tensor& b) { return div(a, b); }
Tensor operator-(const Tensor& a) { return neg(a); }
Tensor operator+(const Tensor& a, double b) { return add(a, constant(b)); }
Tensor operator+(double a, const Tensor& b) { return add(constant(a), b); }
Tensor operator-(const Tensor& a, double b) { return sub(a, constant(b)); }
Tensor operator-(double a, const Tensor& b) { return sub(constant(a), b); }
Tensor operator*(const Tensor& a, double b) { return mul(a, constant(b)); }
Tensor operator*(double a, const Tensor& b) { return mul(constant(a), b); }
Tensor operator/(const Tensor& a, double b) { return div(a, constant(b)); }
Tensor operator/(double a, const Tensor& b) { return div(constant(a), b); }

}  // namespace mvx
