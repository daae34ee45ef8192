#pragma once

// Differentiable tensor operations. Binary ops accept equal shapes, a
// single-element operand, or a row vector ([d] or [1×d]) broadcast along the
// leading batch axis of an [n×d] operand.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mvx/tensor.hpp"

namespace mvx {

/// Floor applied inside log, div and sqrt.
inline constexpr double kEpsFloor = 1e-10;

enum class ElementwiseOp { Add, Sub, Mul, Div, Exp, Log, Tanh, Relu, Sigmoid, Neg, Square, Sqrt };
enum class ReduceOp { Sum, Mean, LogSumExp };

Tensor elementwise(ElementwiseOp op, const Tensor& a, const Tensor& b = {});
Tensor reduce(ReduceOp op, const Tensor& a, std::optional<std::size_t> axis = std::nullopt);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);

Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor neg(const Tensor& a);
Tensor square(const Tensor& a);
Tensor sqrt(const Tensor& a);
Tensor abs(const Tensor& a);
/// log(1 + e^x), stable for large |x|.
Tensor softplus(const Tensor& a);
/// Gradient passes only where lo <= a <= hi.
Tensor clamp(const Tensor& a, double lo, double hi);

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

Tensor sum(const Tensor& a);
Tensor sum(const Tensor& a, std::size_t axis);
Tensor mean(const Tensor& a);
Tensor mean(const Tensor& a, std::size_t axis);
/// Max-shifted; never overflows for finite input.
Tensor logsumexp(const Tensor& a, std::size_t axis);

/// a - logsumexp(a) along `axis`.
Tensor log_softmax(const Tensor& a, std::size_t axis);
Tensor softmax(const Tensor& a, std::size_t axis);
/// Multiply row i of an [n×d] tensor by w[i].
Tensor scale_rows(const Tensor& a, const Tensor& w);

/// Concatenate rank-2 tensors with equal row counts along the feature axis.
Tensor concat_cols(std::span<const Tensor> parts);
/// Stack rank-1 tensors of equal length into the columns of an [n×k] matrix.
Tensor stack_cols(std::span<const Tensor> columns);
/// Columns [begin, end) of a rank-2 tensor.
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end);
/// Row `r` of a rank-2 tensor as a rank-1 tensor.
Tensor row(const Tensor& a, std::size_t r);
/// Sum of a list of equally shaped tensors.
Tensor add_n(std::span<const Tensor> parts);

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);
Tensor operator*(const Tensor& a, const Tensor& b);
Tensor operator/(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a);
Tensor operator+(const Tensor& a, double b);
Tensor operator+(double a, const Tensor& b);
Tensor operator-(const Tensor& a, double b);
Tensor operator-(double a, const Tensor& b);
Tensor operator*(const Tensor& a, double b);
Tensor operator*(double a, const Tensor& b);
Tensor operator/(const Tensor& a, double b);
Tensor operator/(double a, const Tensor& b);

}  // namespace mvx
