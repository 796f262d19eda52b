#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "specdim/errors.hpp"

namespace specdim {

// Finite kernels k(x, y) with values in End(V), V = R^block, stored as a
// dense (n * block) x (n * block) matrix. block = 1 is a scalar kernel.

template <typename Scalar>
using KernelMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct OneInfNorm {
  Scalar value{};
  Scalar max_diagonal{};
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  bool positivity_checked = false;
};

/// Operator norm of block (i, j).
template <typename Derived>
typename Derived::RealScalar block_norm(const Eigen::MatrixBase<Derived>& k, Eigen::Index i, Eigen::Index j,
                                        Eigen::Index block) {
  using Real = typename Derived::RealScalar;
  if (block == 1) return std::abs(k(i, j));
  const KernelMatrix<typename Derived::Scalar> b = k.block(i * block, j * block, block, block);
  return static_cast<Real>(Eigen::JacobiSVD<KernelMatrix<typename Derived::Scalar>>(b).singularValues()(0));
}

template <typename Derived>
Eigen::Index kernel_sites(const Eigen::MatrixBase<Derived>& k, Eigen::Index block) {
  if (block < 1 || k.rows() != k.cols() || k.rows() % block != 0 || k.rows() == 0) {
    throw InputError("kernel must be square with a size divisible by the block size");
  }
  return k.rows() / block;
}

/// Smallest eigenvalue of the symmetric part of diagonal block x, i.e. the
/// minimum of <v, k(x, x) v> over unit v.
template <typename Derived>
typename Derived::RealScalar diagonal_form_min(const Eigen::MatrixBase<Derived>& k, Eigen::Index x,
                                               Eigen::Index block) {
  using Real = typename Derived::RealScalar;
  const auto d = k.block(x * block, x * block, block, block).eval();
  const KernelMatrix<Real> sym = (d + d.transpose()) / Real(2);
  return Eigen::SelfAdjointEigenSolver<KernelMatrix<Real>>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

/// <f, K f> >= 0 on indicator pairs f = e_x +- e_y (scalar kernels):
/// k(x,x) + k(y,y) +- 2 k(x,y) >= -tol * scale. These are the vectors the
/// entry bound |k(x,y)| <= max diagonal is derived from.
template <typename Derived>
bool indicator_positive(const Eigen::MatrixBase<Derived>& k, typename Derived::RealScalar tol = 1e-12) {
  using Real = typename Derived::RealScalar;
  const Real scale = k.cwiseAbs().maxCoeff();
  for (Eigen::Index x = 0; x < k.rows(); ++x) {
    if (k(x, x) < -tol * scale) return false;
    for (Eigen::Index y = x + 1; y < k.cols(); ++y) {
      const Real sym = k(x, y) + k(y, x);
      if (k(x, x) + k(y, y) - std::abs(sym) < -tol * scale) return false;
    }
  }
  return true;
}

/// Full positivity test by the spectrum of the symmetric part.
template <typename Derived>
bool is_positive_semidefinite(const Eigen::MatrixBase<Derived>& k, typename Derived::RealScalar tol = 1e-12) {
  using Real = typename Derived::RealScalar;
  const KernelMatrix<Real> sym = (k + k.transpose()) / Real(2);
  const Real scale = std::max(Real(1), sym.cwiseAbs().maxCoeff());
  return Eigen::SelfAdjointEigenSolver<KernelMatrix<Real>>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0) >=
         -tol * scale * static_cast<Real>(k.rows());
}

/// ||K||_{1 -> inf} for counting measure: the largest block norm over all
/// entries. With `positive`, every diagonal block must have a nonnegative
/// quadratic form (InvariantViolation otherwise) and the result must equal the
/// largest diagonal block norm to `rel_tol` (InvariantViolation otherwise).
template <typename Derived>
OneInfNorm<typename Derived::RealScalar> one_inf_norm(const Eigen::MatrixBase<Derived>& k, bool positive = false,
                                                      Eigen::Index block = 1,
                                                      typename Derived::RealScalar rel_tol = 1e-12) {
  using Real = typename Derived::RealScalar;
  const Eigen::Index n = kernel_sites(k, block);
  if (!k.allFinite()) throw InputError("kernel entries must be finite");
  OneInfNorm<Real> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Real v = block_norm(k, i, j, block);
      if (v > out.value) {
        out.value = v;
        out.row = i;
        out.col = j;
      }
      if (i == j) out.max_diagonal = std::max(out.max_diagonal, v);
    }
  }
  if (!positive) return out;

  const Real scale = std::max(out.value, std::numeric_limits<Real>::min());
  for (Eigen::Index x = 0; x < n; ++x) {
    const Real m = diagonal_form_min(k, x, block);
    if (m < -rel_tol * scale) {
      throw InvariantViolation("diagonal block " + std::to_string(x) + " has a negative quadratic form (" +
                               std::to_string(static_cast<double>(m)) + ")");
    }
  }
  if (out.value - out.max_diagonal > rel_tol * scale) {
    throw InvariantViolation("entry (" + std::to_string(out.row) + ", " + std::to_string(out.col) + ") exceeds " +
                             "the largest diagonal block; the kernel is not positive");
  }
  out.positivity_checked = true;
  out.value = out.max_diagonal;
  return out;
}

/// Gram kernel A A^T: positive by construction.
template <typename Derived>
KernelMatrix<typename Derived::Scalar> gram_kernel(const Eigen::MatrixBase<Derived>& a) {
  return a * a.transpose();
}

}  // namespace specdim
