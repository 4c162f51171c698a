#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lnnreg/matrix.hpp"

namespace lnnreg {

/// Perturbed operator and data with known error levels:
/// ‖A − a_h‖ ≤ h and ‖f − f_delta‖ ≤ delta.
struct NoisyProblem {
  Matrix a_h;
  Vector f_delta;
  double h = 0.0;
  double delta = 0.0;

  /// Throws Error{DimMismatch} / Error{InvalidArgument} when inconsistent.
  void validate() const;
};

struct AlphaSearchResult {
  double alpha = 0.0;
  double discrepancy_gap = 0.0;  // signed residual of the defining equation at alpha
  std::size_t iterations = 0;
  std::vector<double> trajectory;  // every α at which the gap was evaluated, in order
};

/// Bisection on log10(α) over [1e-16, 1e16] for ‖A q^α − f_δ‖ = δ, with
/// q^α the Tikhonov solution for q0 = 0. tol defaults to 1e-10·‖f_δ‖.
AlphaSearchResult discrepancy_alpha(const Matrix& a, const Vector& f_delta, double delta,
                                    std::optional<double> tol = std::nullopt);

/// Bisection for ‖A_h q^α − f_δ‖ = h‖q^α‖ + δ on the same bracket.
AlphaSearchResult generalized_discrepancy_alpha(const NoisyProblem& p,
                                                std::optional<double> tol = std::nullopt);

/// (h + δ)^(1/p) for p > 1.
double apriori_alpha_rule(const NoisyProblem& p, double exponent_p);
double apriori_alpha_rule(double h, double delta, double exponent_p);

}  // namespace lnnreg
