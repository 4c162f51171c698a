#include "lnnreg/pseudo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lnnreg/error.hpp"

namespace lnnreg {

namespace {

void require_rhs(const Matrix& a, const Vector& f) {
  if (f.size() != a.rows()) {
    throw Error(ErrorCode::DimMismatch, "right-hand side length " + std::to_string(f.size()) +
                                            " != rows " + std::to_string(a.rows()));
  }
}

double relative_cutoff(const Svd& s, std::optional<double> rel_tol) {
  const double dim = static_cast<double>(std::max(s.rows(), s.cols()));
  const double rel = rel_tol.value_or(dim * std::numeric_limits<double>::epsilon());
  if (!(rel >= 0.0)) throw Error(ErrorCode::InvalidArgument, "pinv tolerance must be >= 0");
  return rel * s.sigma[0];
}

}  // namespace

Matrix pinv(const Svd& s, std::optional<double> rel_tol) {
  const double cutoff = relative_cutoff(s, rel_tol);
  const std::size_t k = s.rows();
  const std::size_t n = s.cols();
  Matrix out(n, k);
  for (std::size_t j = 0; j < s.sigma.size(); ++j) {
    const double sj = s.sigma[j];
    if (!(sj > cutoff)) break;
    const double inv = 1.0 / sj;
    for (std::size_t r = 0; r < n; ++r) {
      const double vr = s.v(r, j) * inv;
      for (std::size_t c = 0; c < k; ++c) out(r, c) += vr * s.u(c, j);
    }
  }
  return out;
}

Matrix pinv(const Matrix& a, std::optional<double> rel_tol) { return pinv(svd(a), rel_tol); }

PseudoSolveResult pseudo_solution(const Matrix& a, const Vector& f) {
  require_rhs(a, f);
  const Svd s = svd(a);
  PseudoSolveResult out;
  out.q = pinv(s) * f;
  out.residual_norm = norm2(a * out.q - f);
  out.solution_norm = norm2(out.q);
  out.rank_used = numerical_rank(s);
  return out;
}

PseudoSolveResult normal_pseudo_solution_rel(const Matrix& a, const Vector& f, const Vector& q0) {
  require_rhs(a, f);
  if (q0.size() != a.cols()) {
    throw Error(ErrorCode::DimMismatch, "q0 length " + std::to_string(q0.size()) +
                                            " != columns " + std::to_string(a.cols()));
  }
  const Svd s = svd(a);
  const Matrix ap = pinv(s);
  PseudoSolveResult out;
  // q0 − A†A·q0 is the component of q0 in the numerical null space.
  out.q = ap * f + (q0 - ap * (a * q0));
  out.residual_norm = norm2(a * out.q - f);
  out.solution_norm = norm2(out.q);
  out.rank_used = numerical_rank(s);
  return out;
}

std::pair<Matrix, Vector> normal_equations(const Matrix& a, const Vector& f) {
  require_rhs(a, f);
  return {gram(a), transpose_times(a, f)};
}

CombinationReport identifiable_combinations(const Matrix& a, const Vector& f, double noise_floor) {
  require_rhs(a, f);
  if (!(noise_floor >= 0.0) || !std::isfinite(noise_floor)) {
    throw Error(ErrorCode::InvalidArgument, "noise floor must be finite and >= 0");
  }
  const Svd s = svd(a);
  CombinationReport out;
  out.sigma = s.sigma;
  out.rho = numerical_rank(s);
  out.combination_values = Vector(out.rho);
  for (std::size_t j = 0; j < out.rho; ++j) {
    double utf = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) utf += s.u(i, j) * f[i];
    out.combination_values[j] = utf / s.sigma[j];
    if (s.sigma[j] > noise_floor) ++out.k0;
  }
  return out;
}

}  // namespace lnnreg
