#pragma once

#include <cstddef>
#include <vector>

#include "mvx/tensor.hpp"

namespace mvx {

struct SymEig {
  Tensor eigenvalues;   // [d], descending
  Tensor eigenvectors;  // [d×d], column i pairs with eigenvalue i
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (values only; no graph).
/// Throws ContractError when asymmetric beyond 1e-8 and NumericError when
/// 100·d² sweeps do not converge.
SymEig sym_eig(const Tensor& a);

/// Canonical correlations between two [n×o] batches, descending. Both
/// covariance blocks get `ridge`·I before whitening.
std::vector<double> canonical_correlations(const Tensor& h1, const Tensor& h2, double ridge);

/// Sum of canonical correlations (trace norm of the whitened cross-covariance),
/// differentiable with respect to both batches.
Tensor cca_correlation(const Tensor& h1, const Tensor& h2, double ridge);

}  // namespace mvx
