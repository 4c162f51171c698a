#include <doctest.h>

#include <cmath>

#include "lnnreg/error.hpp"
#include "lnnreg/pseudo.hpp"
#include "test_support.hpp"

using namespace lnnreg;
using lnnreg::testing::max_abs_diff;
using lnnreg::testing::Rng;

namespace {

bool is_symmetric(const Matrix& m, double tol) { return max_abs(m - m.transpose()) <= tol; }

}  // namespace

TEST_SUITE("pinv") {
  TEST_CASE("worked examples") {
    CHECK(pinv(Matrix{{1, 0}, {0, 0}}) == (Matrix{{1, 0}, {0, 0}}));
    CHECK(pinv(Matrix::identity(3)) == Matrix::identity(3));
    CHECK(max_abs_diff(pinv(Matrix::diagonal({1, 10, 0})), Matrix::diagonal({1, 0.1, 0})) < 1e-16);
    CHECK(pinv(Matrix(2, 3)) == Matrix(3, 2));
  }

  TEST_CASE("explicit tolerance truncates small singular values") {
    const Matrix a = Matrix::diagonal({1, 1e-6});
    CHECK(max_abs_diff(pinv(a), Matrix::diagonal({1, 1e6})) < 1e-9);
    CHECK(max_abs_diff(pinv(a, 1e-3), Matrix::diagonal({1, 0})) == 0.0);
  }

  TEST_CASE("Moore-Penrose identities on 200 random matrices") {
    Rng rng(314159);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t k = rng.index(1, 6);
      const std::size_t n = rng.index(1, 6);
      // Every fourth matrix is rank-deficient.
      const Matrix a = (trial % 4 == 3 && std::min(k, n) > 1)
                           ? rng.low_rank(k, n, std::min(k, n) - 1)
                           : rng.matrix(k, n);
      const Matrix ap = pinv(a);
      const double na = frobenius_norm(a);
      const double nap = frobenius_norm(ap);
      CHECK(frobenius_norm(a * ap * a - a) <= 1e-10 * na);
      CHECK(frobenius_norm(ap * a * ap - ap) <= 1e-10 * nap);
      CHECK(is_symmetric(a * ap, 1e-10));
      CHECK(is_symmetric(ap * a, 1e-10));
    }
  }

  TEST_CASE("agrees with the exact inverse on well-conditioned square matrices") {
    Rng rng(2718);
    int checked = 0;
    while (checked < 50) {
      const std::size_t n = rng.index(1, 6);
      const Matrix a = rng.matrix(n, n) + 2.0 * Matrix::identity(n);
      if (condition_number(a) > 1e3) continue;
      // Inverse column by column from the identity.
      Matrix inv(n, n);
      for (std::size_t j = 0; j < n; ++j) {
        Vector x;
        REQUIRE(solve_dense(a, Vector::unit(n, j), x));
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = x[i];
      }
      CHECK(frobenius_norm(pinv(a) - inv) <= 1e-9 * frobenius_norm(inv));
      ++checked;
    }
  }
}

TEST_SUITE("pseudo-solutions") {
  TEST_CASE("worked inconsistent systems") {
    auto r1 = pseudo_solution(Matrix{{1, 0}, {0, 0}}, Vector{1, 1});
    CHECK(max_abs_diff(r1.q, Vector{1, 0}) <= 1e-12);
    CHECK(r1.residual_norm == doctest::Approx(1.0));
    CHECK(r1.rank_used == 1);

    auto r2 = pseudo_solution(Matrix::diagonal({1, 1, 0}), Vector{1, 1, 1});
    CHECK(max_abs_diff(r2.q, Vector{1, 1, 0}) <= 1e-12);

    auto r3 = pseudo_solution(Matrix::diagonal({1, 10, 0}), Vector{1, 1, 1});
    CHECK(max_abs_diff(r3.q, Vector{1, 0.1, 0}) <= 1e-12);
    CHECK(r3.solution_norm == doctest::Approx(std::sqrt(1.01)));
  }

  TEST_CASE("dimension mismatch") {
    try {
      (void)pseudo_solution(Matrix::identity(2), Vector{1, 2, 3});
      FAIL("expected DimMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DimMismatch);
    }
  }

  TEST_CASE("residual matches recomputation") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix a = rng.matrix(5, 3);
      const Vector f = rng.vector(5);
      const auto r = pseudo_solution(a, f);
      CHECK(r.residual_norm == doctest::Approx(norm2(a * r.q - f)).epsilon(1e-12));
    }
  }

  TEST_CASE("residual minimality against random probes") {
    Rng rng(1001);
    for (int sys = 0; sys < 50; ++sys) {
      const std::size_t k = rng.index(2, 6);
      const std::size_t n = rng.index(2, 6);
      const Matrix a = rng.low_rank(k, n, rng.index(1, std::min(k, n) - 1));
      const Vector f = rng.vector(k);
      const double best = pseudo_solution(a, f).residual_norm;
      for (int probe = 0; probe < 1000; ++probe) {
        const Vector x = 3.0 * rng.vector(n);
        REQUIRE(best <= norm2(a * x - f) + 1e-12);
      }
    }
  }

  TEST_CASE("norm minimality along the null space") {
    Rng rng(1002);
    for (int sys = 0; sys < 20; ++sys) {
      const Matrix a = rng.low_rank(4, 5, 2);
      const Vector f = rng.vector(4);
      const Vector q = pseudo_solution(a, f).q;
      const Matrix ap = pinv(a);
      const Matrix null_proj = Matrix::identity(5) - ap * a;
      for (int probe = 0; probe < 100; ++probe) {
        const Vector z = null_proj * rng.vector(5);
        REQUIRE(norm2(q) <= norm2(q + z) + 1e-12);
      }
    }
  }

  TEST_CASE("pseudo-solution satisfies the normal equations") {
    Rng rng(1003);
    for (int sys = 0; sys < 50; ++sys) {
      const std::size_t k = rng.index(2, 6);
      const std::size_t n = rng.index(2, 6);
      const Matrix a = rng.low_rank(k, n, rng.index(1, std::min(k, n)));
      const Vector f = rng.vector(k);
      const Vector q = pseudo_solution(a, f).q;
      const auto [ata, atf] = normal_equations(a, f);
      CHECK(norm2(ata * q - atf) <= 1e-10 * std::max(norm2(atf), 1e-300));
    }
  }

  TEST_CASE("normal pseudo-solution relative to q0") {
    const Matrix a{{1, 0}, {0, 0}};
    const Vector f{1, 1};
    const auto zero = normal_pseudo_solution_rel(a, f, Vector{0, 0});
    CHECK(zero.q == pseudo_solution(a, f).q);

    // Null space is span(e2); the closest residual minimiser to q0 keeps q0's e2 part.
    const auto shifted = normal_pseudo_solution_rel(a, f, Vector{0, 5});
    CHECK(max_abs_diff(shifted.q, Vector{1, 5}) <= 1e-14);

    const Matrix inv{{2, 1}, {1, 3}};
    const Vector q_true{1, -1};
    const auto unique = normal_pseudo_solution_rel(inv, inv * q_true, Vector{7, 7});
    CHECK(max_abs_diff(unique.q, q_true) <= 1e-13);

    CHECK_THROWS_AS(normal_pseudo_solution_rel(a, f, Vector{1, 2, 3}), Error);
  }

  TEST_CASE("closest to q0 among residual minimisers") {
    Rng rng(1004);
    for (int sys = 0; sys < 20; ++sys) {
      const Matrix a = rng.low_rank(4, 4, 2);
      const Vector f = rng.vector(4);
      const Vector q0 = rng.vector(4);
      const Vector q = normal_pseudo_solution_rel(a, f, q0).q;
      const Matrix null_proj = Matrix::identity(4) - pinv(a) * a;
      CHECK(norm2(a * q - f) <= pseudo_solution(a, f).residual_norm + 1e-12);
      for (int probe = 0; probe < 50; ++probe) {
        const Vector z = null_proj * rng.vector(4);
        REQUIRE(norm2(q - q0) <= norm2(q + z - q0) + 1e-12);
      }
    }
  }
}

TEST_SUITE("normal equations") {
  TEST_CASE("worked examples") {
    const auto [ata, atf] = normal_equations(Matrix{{1, 0}, {0, 0}}, Vector{1, 1});
    CHECK(ata == (Matrix{{1, 0}, {0, 0}}));
    CHECK(atf == Vector{1, 0});

    const auto [i2, f2] = normal_equations(Matrix::identity(2), Vector{3, 4});
    CHECK(i2 == Matrix::identity(2));
    CHECK(f2 == Vector{3, 4});

    const auto [c, d] = normal_equations(Matrix{{1}, {1}}, Vector{1, 3});
    CHECK(c == Matrix{{2}});
    CHECK(d == Vector{4});
  }
}

TEST_SUITE("identifiable combinations") {
  TEST_CASE("diagonal operator") {
    const auto r = identifiable_combinations(Matrix::diagonal({1, 10, 0}), Vector{1, 1, 1}, 0.0);
    CHECK(r.rho == 2);
    CHECK(r.k0 == 2);
    REQUIRE(r.combination_values.size() == 2);
    CHECK(r.combination_values[0] == doctest::Approx(0.1));
    CHECK(r.combination_values[1] == doctest::Approx(1.0));
  }

  TEST_CASE("noise floor above the top singular value leaves nothing stable") {
    const auto r = identifiable_combinations(Matrix::diagonal({1, 10, 0}), Vector{1, 1, 1}, 11.0);
    CHECK(r.k0 == 0);
    CHECK(r.rho == 2);
    const auto mid = identifiable_combinations(Matrix::diagonal({1, 10, 0}), Vector{1, 1, 1}, 5.0);
    CHECK(mid.k0 == 1);
  }

  TEST_CASE("identity") {
    const auto r = identifiable_combinations(Matrix::identity(2), Vector{2, 3}, 0.0);
    CHECK(r.rho == 2);
    CHECK(r.k0 == 2);
    CHECK(r.combination_values == Vector{2, 3});
  }

  TEST_CASE("values are the rotated coordinates of the pseudo-solution") {
    Rng rng(77);
    for (int sys = 0; sys < 20; ++sys) {
      const Matrix a = rng.low_rank(5, 4, 3);
      const Vector f = rng.vector(5);
      const auto r = identifiable_combinations(a, f, 0.0);
      REQUIRE(r.rho == 3);
      const Svd s = svd(a);
      const Vector q = pseudo_solution(a, f).q;
      for (std::size_t j = 0; j < r.rho; ++j) {
        CHECK(r.combination_values[j] == doctest::Approx(dot(s.v.col(j), q)).epsilon(1e-10));
      }
    }
  }
}
