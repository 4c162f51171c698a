#include "lnnreg/param_select.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "lnnreg/error.hpp"
#include "lnnreg/pseudo.hpp"
#include "lnnreg/regularizers.hpp"

namespace lnnreg {

namespace {

constexpr double kLogAlphaLo = -16.0;
constexpr double kLogAlphaHi = 16.0;
constexpr std::size_t kMaxBisections = 200;

enum class BracketFailure { Below, Above };

// Root of an increasing gap function of log10(α). Returns the bracket side
// that failed when the gap does not change sign on the bracket.
std::variant<AlphaSearchResult, BracketFailure> bisect_log_alpha(
    const std::function<double(double)>& gap_fn, double tol) {
  std::vector<double> visited;
  auto gap = [&](double alpha) {
    visited.push_back(alpha);
    return gap_fn(alpha);
  };
  auto found = [&](double alpha, double g, std::size_t it) {
    return AlphaSearchResult{alpha, g, it, visited};
  };

  const double g_lo = gap(std::pow(10.0, kLogAlphaLo));
  if (std::abs(g_lo) <= tol) return found(std::pow(10.0, kLogAlphaLo), g_lo, 0);
  if (g_lo > 0.0) return BracketFailure::Below;
  const double g_hi = gap(std::pow(10.0, kLogAlphaHi));
  if (std::abs(g_hi) <= tol) return found(std::pow(10.0, kLogAlphaHi), g_hi, 0);
  if (g_hi < 0.0) return BracketFailure::Above;

  double lo = kLogAlphaLo;
  double hi = kLogAlphaHi;
  for (std::size_t it = 1; it <= kMaxBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double alpha = std::pow(10.0, mid);
    const double g = gap(alpha);
    if (std::abs(g) <= tol) return found(alpha, g, it);
    (g < 0.0 ? lo : hi) = mid;
  }
  throw Error(ErrorCode::NoConvergence,
              "bisection did not reach the tolerance in " + std::to_string(kMaxBisections) +
                  " steps");
}

double resolve_tol(std::optional<double> tol, const Vector& f) {
  const double t = tol.value_or(1e-10 * norm2(f));
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance must be finite and >= 0");
  }
  return t;
}

}  // namespace

void NoisyProblem::validate() const {
  if (f_delta.size() != a_h.rows()) {
    throw Error(ErrorCode::DimMismatch, "f_delta length " + std::to_string(f_delta.size()) +
                                            " != rows " + std::to_string(a_h.rows()));
  }
  if (!(h >= 0.0) || !std::isfinite(h) || !(delta >= 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidArgument, "noise levels h, delta must be finite and >= 0");
  }
}

AlphaSearchResult discrepancy_alpha(const Matrix& a, const Vector& f_delta, double delta,
                                    std::optional<double> tol) {
  if (f_delta.size() != a.rows()) {
    throw Error(ErrorCode::DimMismatch, "f_delta length does not match the operator rows");
  }
  const double t = resolve_tol(tol, f_delta);
  const double f_norm = norm2(f_delta);
  if (delta >= f_norm) {
    throw Error(ErrorCode::DeltaTooLarge,
                "delta " + std::to_string(delta) + " >= ||f_delta|| " + std::to_string(f_norm));
  }
  const double r_min = pseudo_solution(a, f_delta).residual_norm;
  if (delta <= r_min + t) {
    throw Error(ErrorCode::DeltaTooSmall, "delta " + std::to_string(delta) +
                                              " <= minimal residual " + std::to_string(r_min) +
                                              " + tol");
  }

  const TikhonovFamily family(a, f_delta);
  auto gap = [&](double alpha) { return family.solve(alpha).residual_norm - delta; };
  auto res = bisect_log_alpha(gap, t);
  if (auto* found = std::get_if<AlphaSearchResult>(&res)) return *found;
  throw Error(ErrorCode::NoConvergence, std::get<BracketFailure>(res) == BracketFailure::Below
                                            ? "root lies below alpha = 1e-16"
                                            : "root lies above alpha = 1e16");
}

AlphaSearchResult generalized_discrepancy_alpha(const NoisyProblem& p, std::optional<double> tol) {
  p.validate();
  const double t = resolve_tol(tol, p.f_delta);
  if (p.delta >= norm2(p.f_delta)) {
    throw Error(ErrorCode::NoSignChange, "delta >= ||f_delta||: the gap is negative for every alpha");
  }

  const TikhonovFamily family(p.a_h, p.f_delta);
  auto gap = [&](double alpha) {
    const auto sol = family.solve(alpha);
    return sol.residual_norm - p.h * sol.solution_norm - p.delta;
  };
  auto res = bisect_log_alpha(gap, t);
  if (auto* found = std::get_if<AlphaSearchResult>(&res)) return *found;
  throw Error(ErrorCode::NoSignChange, std::get<BracketFailure>(res) == BracketFailure::Below
                                           ? "gap is positive already at alpha = 1e-16"
                                           : "gap is negative still at alpha = 1e16");
}

double apriori_alpha_rule(const NoisyProblem& p, double exponent_p) {
  return apriori_alpha_rule(p.h, p.delta, exponent_p);
}

double apriori_alpha_rule(double h, double delta, double exponent_p) {
  if (!(exponent_p > 1.0) || !std::isfinite(exponent_p)) {
    throw Error(ErrorCode::BadExponent, "exponent p must be > 1");
  }
  if (!(h >= 0.0) || !(delta >= 0.0) || !std::isfinite(h) || !std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidArgument, "noise levels must be finite and >= 0");
  }
  const double noise = h + delta;
  if (!(noise > 0.0)) throw Error(ErrorCode::ZeroNoise, "h + delta must be > 0");
  return std::pow(noise, 1.0 / exponent_p);
}

}  // namespace lnnreg
