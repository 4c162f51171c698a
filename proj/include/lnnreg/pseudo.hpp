#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "lnnreg/matrix.hpp"
#include "lnnreg/svd.hpp"

namespace lnnreg {

struct PseudoSolveResult {
  Vector q;
  double residual_norm = 0.0;  // ‖A·q − f‖
  double solution_norm = 0.0;  // ‖q‖
  std::size_t rank_used = 0;
};

/// Rotated-basis view of A·q = f: the values (Vᵀq)_j = (Uᵀf)_j / σ_j that
/// the data determines, in non-increasing σ order.
struct CombinationReport {
  std::size_t rho = 0;  // singular values above the default rank tolerance
  std::size_t k0 = 0;   // of those, singular values above the noise floor
  Vector sigma;
  Vector combination_values;  // length rho
};

/// Moore–Penrose pseudo-inverse V·Σ†·Uᵀ. Singular values at or below
/// rel_tol·σ_0 are treated as zero; rel_tol defaults to max(K,N)·machine_epsilon
/// so the cutoff matches numerical_rank.
Matrix pinv(const Matrix& a, std::optional<double> rel_tol = std::nullopt);
Matrix pinv(const Svd& s, std::optional<double> rel_tol = std::nullopt);

/// Normal pseudo-solution A†f: the minimum-norm minimiser of ‖A·q − f‖.
PseudoSolveResult pseudo_solution(const Matrix& a, const Vector& f);

/// Pseudo-solution closest to q0: A†f + (I − A†A)·q0.
PseudoSolveResult normal_pseudo_solution_rel(const Matrix& a, const Vector& f, const Vector& q0);

/// (AᵀA, Aᵀf).
std::pair<Matrix, Vector> normal_equations(const Matrix& a, const Vector& f);

CombinationReport identifiable_combinations(const Matrix& a, const Vector& f, double noise_floor);

}  // namespace lnnreg
