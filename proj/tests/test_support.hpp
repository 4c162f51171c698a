#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "lnnreg/matrix.hpp"

namespace lnnreg::testing {

// Uniform doubles in [lo, hi) from raw 53-bit draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53);
  }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(gen_() % (hi - lo + 1));
  }

  Matrix matrix(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform();
    return m;
  }
  Vector vector(std::size_t n) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = uniform();
    return v;
  }
  // Product of random factors, rank at most r.
  Matrix low_rank(std::size_t rows, std::size_t cols, std::size_t r) {
    return matrix(rows, r) * matrix(r, cols);
  }

 private:
  std::mt19937_64 gen_;
};

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline Matrix from_eigen(const Eigen::MatrixXd& e) {
  Matrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

inline Eigen::VectorXd to_eigen(const Vector& v) {
  Eigen::VectorXd e(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) e(i) = v[i];
  return e;
}

inline double max_abs_diff(const Vector& a, const Vector& b) { return norm_inf(a - b); }
inline double max_abs_diff(const Matrix& a, const Matrix& b) { return max_abs(a - b); }

}  // namespace lnnreg::testing
