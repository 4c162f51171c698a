#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lnnreg/error.hpp"
#include "lnnreg/param_select.hpp"
#include "lnnreg/pseudo.hpp"
#include "lnnreg/regularizers.hpp"
#include "test_support.hpp"

using namespace lnnreg;
using lnnreg::testing::Rng;

namespace {

template <class F>
ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InternalError;
}

}  // namespace

TEST_SUITE("discrepancy principle") {
  TEST_CASE("closed-form root") {
    const auto r = discrepancy_alpha(Matrix::identity(2), Vector{1, 0}, 0.5);
    CHECK(std::abs(r.alpha - 1.0) <= 1e-8);
    CHECK(std::abs(r.discrepancy_gap) <= 1e-10);
    CHECK(r.iterations > 0);
    CHECK(r.trajectory.size() >= r.iterations);
  }

  TEST_CASE("delta close to the data norm gives a large alpha") {
    const double delta = 0.999999;
    const auto r = discrepancy_alpha(Matrix::identity(2), Vector{1, 0}, delta);
    const double expected = 1.0 / (1.0 / delta - 1.0);
    CHECK(std::abs(r.discrepancy_gap) <= 1e-10);
    CHECK(r.alpha == doctest::Approx(expected).epsilon(1e-3));
  }

  TEST_CASE("errors") {
    const Matrix a{{1, 0}, {0, 0}};
    const Vector f{1, 1};  // minimal residual 1
    CHECK(code_of([&] { discrepancy_alpha(a, f, 0.5); }) == ErrorCode::DeltaTooSmall);
    CHECK(code_of([&] { discrepancy_alpha(a, f, 1.0); }) == ErrorCode::DeltaTooSmall);
    CHECK(code_of([&] { discrepancy_alpha(a, f, 2.0); }) == ErrorCode::DeltaTooLarge);
    CHECK(code_of([&] { discrepancy_alpha(a, Vector{1, 1, 1}, 0.1); }) == ErrorCode::DimMismatch);
  }

  TEST_CASE("returned alpha reproduces the defining equation") {
    Rng rng(300);
    int checked = 0;
    for (int sys = 0; sys < 50; ++sys) {
      const Matrix a = rng.matrix(5, 3);
      const Vector f = rng.vector(5);
      const double f_norm = norm2(f);
      const double r_min = pseudo_solution(a, f).residual_norm;
      const double delta = 0.5 * (r_min + f_norm);
      const double tol = 1e-10 * f_norm;
      const auto r = discrepancy_alpha(a, f, delta);
      const double resid = tikhonov(a, f, r.alpha).residual_norm;
      CHECK(std::abs(resid - delta) <= 2 * tol);
      ++checked;
    }
    CHECK(checked == 50);
  }

  TEST_CASE("residual is non-decreasing in alpha along the trajectory") {
    Rng rng(301);
    for (int sys = 0; sys < 50; ++sys) {
      const Matrix a = rng.matrix(4, 4);
      const Vector f = rng.vector(4);
      const double delta = 0.3 * norm2(f);
      const auto r = discrepancy_alpha(a, f, delta);
      std::vector<std::pair<double, double>> pts;
      const TikhonovFamily fam(a, f);
      for (double alpha : r.trajectory) pts.emplace_back(alpha, fam.solve(alpha).residual_norm);
      std::sort(pts.begin(), pts.end());
      for (std::size_t i = 1; i < pts.size(); ++i) {
        CHECK(pts[i].second >= pts[i - 1].second - 1e-12);
      }
    }
  }
}

TEST_SUITE("generalized discrepancy principle") {
  TEST_CASE("closed-form root") {
    const NoisyProblem p{Matrix::identity(2), Vector{1, 0}, 0.1, 0.2};
    const auto r = generalized_discrepancy_alpha(p);
    CHECK(std::abs(r.alpha - 0.375) <= 1e-8);
  }

  TEST_CASE("h = 0 matches the discrepancy principle") {
    Rng rng(302);
    for (int sys = 0; sys < 20; ++sys) {
      const Matrix a = rng.matrix(4, 3);
      const Vector f = rng.vector(4);
      const double delta = 0.5 * (pseudo_solution(a, f).residual_norm + norm2(f));
      const double tol = 1e-10 * norm2(f);
      const auto plain = discrepancy_alpha(a, f, delta);
      const auto gen = generalized_discrepancy_alpha(NoisyProblem{a, f, 0.0, delta});
      const double r1 = tikhonov(a, f, plain.alpha).residual_norm;
      const double r2 = tikhonov(a, f, gen.alpha).residual_norm;
      CHECK(std::abs(r1 - r2) <= 2 * tol);
      CHECK(gen.alpha == doctest::Approx(plain.alpha).epsilon(1e-6));
    }
  }

  TEST_CASE("re-solving reproduces the generalized equation") {
    Rng rng(303);
    for (int sys = 0; sys < 20; ++sys) {
      const Matrix a = rng.matrix(5, 3);
      const Vector f = rng.vector(5);
      const NoisyProblem p{a, f, 0.01, 0.5 * (pseudo_solution(a, f).residual_norm + norm2(f))};
      const double tol = 1e-10 * norm2(f);
      const auto r = generalized_discrepancy_alpha(p);
      const auto sol = tikhonov(a, f, r.alpha);
      CHECK(std::abs(sol.residual_norm - p.h * sol.solution_norm - p.delta) <= 2 * tol);
    }
  }

  TEST_CASE("no sign change") {
    const NoisyProblem big{Matrix::identity(2), Vector{1, 0}, 0.0, 1.5};
    CHECK(code_of([&] { generalized_discrepancy_alpha(big); }) == ErrorCode::NoSignChange);
    const NoisyProblem small{Matrix{{1, 0}, {0, 0}}, Vector{1, 1}, 0.0, 0.5};
    CHECK(code_of([&] { generalized_discrepancy_alpha(small); }) == ErrorCode::NoSignChange);
  }
}

TEST_SUITE("a-priori rule") {
  TEST_CASE("values") {
    CHECK(apriori_alpha_rule(NoisyProblem{Matrix::identity(1), Vector{1}, 5e-7, 5e-7}, 2.0) ==
          doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(apriori_alpha_rule(4e-7, 6e-7, 3.0) == doctest::Approx(1e-2).epsilon(1e-12));
  }

  TEST_CASE("errors") {
    CHECK(code_of([] { apriori_alpha_rule(0.0, 0.0, 2.0); }) == ErrorCode::ZeroNoise);
    CHECK(code_of([] { apriori_alpha_rule(0.1, 0.1, 1.0); }) == ErrorCode::BadExponent);
    CHECK(code_of([] { apriori_alpha_rule(0.1, 0.1, 0.5); }) == ErrorCode::BadExponent);
  }

  TEST_CASE("Tikhonov error shrinks with the noise on the perturbed 2x2 system") {
    // Exact system diag(1,0) q = (1,0); noise enters at the (2,2) entry and in f.
    double prev = INFINITY;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
      const NoisyProblem p{Matrix::diagonal({1, eps}), Vector{1, eps}, eps, eps};
      const double alpha = apriori_alpha_rule(p, 1.5);
      const double err = norm2(tikhonov(p.a_h, p.f_delta, alpha).q - Vector{1, 0});
      CHECK(err < prev);
      prev = err;
    }
  }
}
