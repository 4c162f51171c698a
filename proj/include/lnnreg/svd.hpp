#pragma once

#include <cstddef>
#include <optional>

#include "lnnreg/matrix.hpp"

namespace lnnreg {

/// Full singular value decomposition a = u·diag(sigma)·vᵀ.
///
/// For a K×N input, u is K×K, v is N×N and sigma holds min(K,N) non-negative
/// values in non-increasing order. Only the leading min(K,N) columns of u and
/// v take part in the reconstruction; the rest complete orthonormal bases.
struct Svd {
  Matrix u;
  Vector sigma;
  Matrix v;

  std::size_t rows() const noexcept { return u.rows(); }
  std::size_t cols() const noexcept { return v.rows(); }

  /// u·diag(sigma)·vᵀ.
  Matrix reconstruct() const;
};

/// One-sided Jacobi SVD. Deterministic for a fixed input; throws
/// Error{InternalError} if the sweep cap is reached without convergence.
Svd svd(const Matrix& a);

/// Largest singular value; 0 for the zero matrix.
double spectral_norm(const Matrix& a);

/// max(K,N)·machine_epsilon·sigma[0].
double default_rank_tolerance(const Svd& s);

/// Number of singular values strictly above tol (default_rank_tolerance when absent).
std::size_t numerical_rank(const Svd& s, std::optional<double> tol = std::nullopt);
std::size_t numerical_rank(const Matrix& a, std::optional<double> tol = std::nullopt);

/// sigma[0]/sigma[r-1] over the numerical rank r, +infinity when r < min(K,N).
/// Throws Error{ZeroMatrix} for the zero matrix.
double condition_number(const Svd& s);
double condition_number(const Matrix& a);

}  // namespace lnnreg
