#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mvx {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_string(const Shape& shape);

namespace detail {

// One record in the define-by-run graph. Non-leaf nodes own the closure that
// pushes their gradient into their inputs; leaves accumulate.
struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> inputs;
  std::function<void(Node&)> backward;

  bool is_leaf() const { return inputs.empty(); }
  std::span<double> grad_buffer();
};

}  // namespace detail

/// Dense row-major array of doubles with an optional handle into the autodiff graph.
///
/// Copies are shallow: two Tensor objects copied from each other refer to the
/// same storage and the same gradient buffer. Parameters rely on this so that
/// networks, optimizers and checkpoints all see one set of values.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  static Tensor scalar(double value);
  static Tensor vector(std::vector<double> values);
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  /// Leaf that participates in the graph and accumulates gradient.
  static Tensor parameter(Shape shape, std::vector<double> values);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t numel() const;
  std::size_t dim(std::size_t axis) const;
  /// Leading extent for rank-2 tensors; for rank-1 the length.
  std::size_t rows() const;
  /// Trailing extent for rank-2 tensors; 1 for rank-1.
  std::size_t cols() const;

  std::span<const double> values() const;
  /// Writable view of a leaf's storage (optimizer updates, initialization).
  std::span<double> mutable_values();
  double item() const;
  double at(std::size_t i) const;
  double at(std::size_t r, std::size_t c) const;

  bool requires_grad() const;
  void set_requires_grad(bool on);
  bool has_grad() const;
  /// Accumulated gradient; empty span when none has been written yet.
  std::span<const double> grad() const;
  void zero_grad();

  /// Same values, detached from the graph; never accumulates gradient.
  Tensor detach() const;

  /// Reverse-mode sweep from this scalar. Leaf gradients accumulate (+=).
  void backward() const;

  const char* op_name() const;
  const std::shared_ptr<detail::Node>& node() const { return node_; }
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<detail::Node> node_;
};

/// Builds a graph node. Throws NumericError naming `op` when any output is
/// non-finite. `backward` is dropped when no input requires gradient.
Tensor make_op_result(const char* op, Shape shape, std::vector<double> value,
                      std::vector<Tensor> inputs, std::function<void(detail::Node&)> backward);

}  // namespace mvx
