#include "lnnreg/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lnnreg/error.hpp"

namespace lnnreg {

namespace {

void require_positive_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::BadAlpha, "alpha must be finite and > 0, got " + std::to_string(alpha));
  }
}

void require_system(const Matrix& a, const Vector& f) {
  if (f.size() != a.rows()) {
    throw Error(ErrorCode::DimMismatch, "right-hand side length " + std::to_string(f.size()) +
                                            " != rows " + std::to_string(a.rows()));
  }
}

void require_q0(const Matrix& a, const std::optional<Vector>& q0) {
  if (q0 && q0->size() != a.cols()) {
    throw Error(ErrorCode::DimMismatch, "q0 length " + std::to_string(q0->size()) +
                                            " != columns " + std::to_string(a.cols()));
  }
}

RegularizedSolution finish(const Matrix& a, const Vector& f, double alpha, Vector q) {
  RegularizedSolution out;
  out.residual_norm = norm2(a * q - f);
  out.solution_norm = norm2(q);
  out.alpha = alpha;
  out.q = std::move(q);
  return out;
}

// Cholesky of s + shift·I; false on a non-positive pivot.
bool shifted_cholesky_ok(const Matrix& s, double shift) {
  const std::size_t n = s.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j) + shift;
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return false;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double x = s(i, j);
      for (std::size_t k = 0; k < j; ++k) x -= l(i, k) * l(j, k);
      l(i, j) = x / l(j, j);
    }
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tikhonov

TikhonovFamily::TikhonovFamily(const Matrix& a, const Vector& f) : a_(a), f_(f), svd_(svd(a)) {
  require_system(a, f);
  const std::size_t rho = svd_.sigma.size();
  utf_ = Vector(rho);
  for (std::size_t j = 0; j < rho; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += svd_.u(i, j) * f[i];
    utf_[j] = s;
  }
}

RegularizedSolution TikhonovFamily::solve(double alpha, const std::optional<Vector>& q0) const {
  require_positive_alpha(alpha);
  require_q0(a_, q0);
  const std::size_t n = a_.cols();
  const std::size_t rho = svd_.sigma.size();

  Vector q(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double sj = j < rho ? svd_.sigma[j] : 0.0;
    const double denom = sj * sj + alpha;
    double coef = j < rho ? sj * utf_[j] / denom : 0.0;
    if (q0) {
      double vq0 = 0.0;
      for (std::size_t i = 0; i < n; ++i) vq0 += svd_.v(i, j) * (*q0)[i];
      coef += alpha * vq0 / denom;
    }
    if (coef == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) q[i] += coef * svd_.v(i, j);
  }
  return finish(a_, f_, alpha, std::move(q));
}

RegularizedSolution tikhonov(const Matrix& a, const Vector& f, double alpha,
                             const std::optional<Vector>& q0) {
  require_positive_alpha(alpha);
  return TikhonovFamily(a, f).solve(alpha, q0);
}

// ---------------------------------------------------------------------------
// Lavrentiev and shifted systems

void require_symmetric_psd(const Matrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::DimMismatch, "operator must be square");
  const Matrix at = a.transpose();
  const double scale = frobenius_norm(a);
  if (frobenius_norm(a - at) > 1e-10 * scale) {
    throw Error(ErrorCode::NotSymmetric, "operator is not symmetric to 1e-10 relative");
  }
  const Matrix sym = 0.5 * (a + at);
  const Svd s = svd(sym);
  const double floor = 1e-10 * s.sigma[0];
  if (s.sigma[0] == 0.0) return;

  // Rayleigh quotients along the right singular vectors find the negative
  // eigenvalues unless singular values are tied; the shifted Cholesky below
  // settles the tied case.
  for (std::size_t j = 0; j < s.sigma.size(); ++j) {
    const Vector vj = s.v.col(j);
    if (dot(vj, sym * vj) < -floor) {
      throw Error(ErrorCode::NotPsd, "operator has an eigenvalue below -1e-10*sigma_0");
    }
  }
  if (!shifted_cholesky_ok(sym, floor)) {
    throw Error(ErrorCode::NotPsd, "operator has an eigenvalue below -1e-10*sigma_0");
  }
}

RegularizedSolution lavrentiev(const Matrix& a, const Vector& f, double alpha,
                               const std::optional<Vector>& q0) {
  if (!a.is_square()) throw Error(ErrorCode::DimMismatch, "Lavrentiev needs a square operator");
  require_system(a, f);
  require_q0(a, q0);
  require_positive_alpha(alpha);
  require_symmetric_psd(a);

  const std::size_t n = a.cols();
  const Matrix shifted = a + alpha * Matrix::identity(n);
  const Vector rhs = q0 ? f + alpha * *q0 : f;
  Vector q;
  if (!solve_dense(shifted, rhs, q)) {
    throw Error(ErrorCode::SingularShift, "A + alpha*I is numerically singular");
  }
  return finish(a, f, alpha, std::move(q));
}

RegularizedSolution tikhonov_general(const Matrix& a, const Vector& f, double alpha,
                                     const Matrix& l, const std::optional<Vector>& q0) {
  require_system(a, f);
  require_q0(a, q0);
  require_positive_alpha(alpha);
  if (!l.is_square() || l.cols() != a.cols()) {
    throw Error(ErrorCode::DimMismatch, "stabiliser L must be N x N with N = columns of A");
  }
  if (numerical_rank(l) < l.cols()) {
    throw Error(ErrorCode::SingularL, "stabiliser L is numerically singular");
  }

  const Matrix ltl = gram(l);
  const Matrix m = gram(a) + alpha * ltl;
  Vector rhs = transpose_times(a, f);
  if (q0) rhs = rhs + alpha * (ltl * *q0);
  Vector q;
  if (!solve_dense(m, rhs, q)) {
    throw Error(ErrorCode::SingularL, "AᵀA + alpha*LᵀL is numerically singular");
  }
  return finish(a, f, alpha, std::move(q));
}

RegularizedSolution shifted_b(const Matrix& a, const Vector& f, double alpha, const Matrix& b) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw Error(ErrorCode::DimMismatch, "A and B must be square and of equal size");
  }
  require_system(a, f);
  if (alpha == 0.0 || !std::isfinite(alpha)) {
    throw Error(ErrorCode::BadAlpha, "alpha must be finite and nonzero");
  }
  Vector q;
  if (!solve_dense(a + alpha * b, f, q)) {
    throw Error(ErrorCode::SingularShift, "A + alpha*B is numerically singular");
  }
  return finish(a, f, alpha, std::move(q));
}

// ---------------------------------------------------------------------------
// A-priori bounds

double apriori_alpha(double epsilon, bool exact_system_solvable) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::BadEpsilon, "epsilon must lie in (0, 1]");
  }
  return exact_system_solvable ? std::cbrt(epsilon * epsilon) : std::sqrt(epsilon);
}

namespace {

void require_model(const ErrorBoundModel& m, double alpha) {
  for (double c : {m.c1, m.c2, m.c3}) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error(ErrorCode::InvalidArgument, "bound constants must be finite and > 0");
    }
  }
  if (!(m.epsilon > 0.0) || !std::isfinite(m.epsilon)) {
    throw Error(ErrorCode::BadEpsilon, "epsilon must be finite and > 0");
  }
  require_positive_alpha(alpha);
}

}  // namespace

double bound_phi(const ErrorBoundModel& model, double alpha) {
  require_model(model, alpha);
  return model.c1 * alpha + model.c2 * model.epsilon + model.c3 * model.epsilon / std::sqrt(alpha);
}

double bound_psi(const ErrorBoundModel& model, double alpha) {
  require_model(model, alpha);
  return model.c1 * alpha + model.c2 * model.epsilon / alpha +
         model.c3 * model.epsilon / std::sqrt(alpha);
}

}  // namespace lnnreg
