#pragma once

#include <optional>

#include "lnnreg/matrix.hpp"
#include "lnnreg/svd.hpp"

namespace lnnreg {

struct RegularizedSolution {
  Vector q;
  double alpha = 0.0;
  double residual_norm = 0.0;
  double solution_norm = 0.0;
};

/// Tikhonov solutions of one system for many α, sharing one SVD.
///
/// q(α) solves (AᵀA + αI)q = Aᵀf + α·q0 through the filter-factor form
///   q = Σ_j σ_j/(σ_j²+α)·(u_jᵀf)·v_j + α·Σ_j 1/(σ_j²+α)·(v_jᵀq0)·v_j
/// with σ_j = 0 beyond min(K,N), so AᵀA is never formed.
class TikhonovFamily {
 public:
  TikhonovFamily(const Matrix& a, const Vector& f);

  /// Throws Error{BadAlpha} unless alpha > 0; Error{DimMismatch} on a q0 of wrong length.
  RegularizedSolution solve(double alpha, const std::optional<Vector>& q0 = std::nullopt) const;

  const Matrix& a() const noexcept { return a_; }
  const Vector& f() const noexcept { return f_; }
  const Svd& decomposition() const noexcept { return svd_; }

 private:
  Matrix a_;
  Vector f_;
  Svd svd_;
  Vector utf_;  // Uᵀf, leading min(K,N) entries
};

/// Minimiser of ‖Aq − f‖² + α‖q − q0‖² (q0 = 0 when absent).
RegularizedSolution tikhonov(const Matrix& a, const Vector& f, double alpha,
                             const std::optional<Vector>& q0 = std::nullopt);

/// Lavrentiev shift (A + αI)q = f + α·q0 for symmetric positive semi-definite A.
RegularizedSolution lavrentiev(const Matrix& a, const Vector& f, double alpha,
                               const std::optional<Vector>& q0 = std::nullopt);

/// Minimiser of ‖Aq − f‖² + α‖L(q − q0)‖² for square invertible L.
RegularizedSolution tikhonov_general(const Matrix& a, const Vector& f, double alpha,
                                     const Matrix& l,
                                     const std::optional<Vector>& q0 = std::nullopt);

/// Solves (A + αB)q = f. B is supplied by the caller.
RegularizedSolution shifted_b(const Matrix& a, const Vector& f, double alpha, const Matrix& b);

/// Lavrentiev preconditions: symmetric to 1e-10 relative and no eigenvalue below
/// −1e-10·σ_0. Throws Error{NotSymmetric} / Error{NotPsd}.
void require_symmetric_psd(const Matrix& a);

/// Constants and noise order of the a-priori error bound for Tikhonov
/// solutions. With no estimate of the solution norm, unit constants are used.
struct ErrorBoundModel {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  double epsilon = 0.0;  // common order of h and δ
};

/// ε^(2/3) when the exact system is solvable, ε^(1/2) otherwise. Requires 0 < ε ≤ 1.
double apriori_alpha(double epsilon, bool exact_system_solvable);

/// c1·α + c2·ε + c3·ε/√α (exact system solvable).
double bound_phi(const ErrorBoundModel& model, double alpha);
/// c1·α + c2·ε/α + c3·ε/√α (exact system not solvable).
double bound_psi(const ErrorBoundModel& model, double alpha);

}  // namespace lnnreg
