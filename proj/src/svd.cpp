#include "lnnreg/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "lnnreg/error.hpp"

namespace lnnreg {

namespace {

constexpr int kMaxSweeps = 60;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Scaled columns with norm below this are treated as null directions: their
// left singular vector is taken from the basis completion instead.
constexpr double kNullColumn = 1e-150;

// Column-major dense storage; Jacobi works on whole columns.
struct ColumnMajor {
  std::size_t rows;
  std::size_t cols;
  std::vector<double> data;

  ColumnMajor(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double* col(std::size_t j) { return data.data() + j * rows; }
  const double* col(std::size_t j) const { return data.data() + j * rows; }
};

double column_norm(const double* x, std::size_t n) {
  double scale = 0.0;
  double ssq = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    const double ax = std::abs(x[i]);
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

void rotate(double* x, double* y, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

// Extends `basis` (orthonormal columns of length n) to a full orthonormal
// basis of R^n by greedy Gram-Schmidt over the coordinate vectors.
void complete_basis(std::vector<std::vector<double>>& basis, std::size_t n) {
  while (basis.size() < n) {
    std::vector<double> best;
    double best_norm = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> cand(n, 0.0);
      cand[i] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
          double proj = 0.0;
          for (std::size_t k = 0; k < n; ++k) proj += b[k] * cand[k];
          for (std::size_t k = 0; k < n; ++k) cand[k] -= proj * b[k];
        }
      }
      const double nrm = column_norm(cand.data(), n);
      if (nrm > best_norm) {
        best_norm = nrm;
        best = std::move(cand);
      }
    }
    for (double& x : best) x /= best_norm;
    basis.push_back(std::move(best));
  }
}

// Requires a.rows() >= a.cols().
Svd jacobi_tall(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  const double scale = max_abs(a);
  ColumnMajor w(m, n);
  ColumnMajor v(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    v.col(j)[j] = 1.0;
    if (scale > 0.0)
      for (std::size_t i = 0; i < m; ++i) w.col(j)[i] = a(i, j) / scale;
  }

  const double tol = static_cast<double>(m) * kEps;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* wp = w.col(p);
        double* wq = w.col(q);
        double alpha = 0.0;
        double beta = 0.0;
        double gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += wp[i] * wp[i];
          beta += wq[i] * wq[i];
          gamma += wp[i] * wq[i];
        }
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;

        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(wp, wq, m, c, s);
        rotate(v.col(p), v.col(q), n, c, s);
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw Error(ErrorCode::InternalError, "one-sided Jacobi did not converge in 60 sweeps");
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = column_norm(w.col(j), m);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  Svd out{Matrix(m, m), Vector(n), Matrix(n, n)};
  std::vector<std::vector<double>> left;
  left.reserve(m);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = norms[j] * scale;
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v.col(j)[i];
    if (norms[j] > kNullColumn) {
      std::vector<double> u(w.col(j), w.col(j) + m);
      for (double& x : u) x /= norms[j];
      left.push_back(std::move(u));
    }
  }

  // Null columns come last after sorting, so the leading entries of `left`
  // line up with the leading singular values.
  complete_basis(left, m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i) out.u(i, k) = left[k][i];
  return out;
}

}  // namespace

Matrix Svd::reconstruct() const {
  Matrix out(u.rows(), v.rows());
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const double s = sigma[k];
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < u.rows(); ++i) {
      const double us = u(i, k) * s;
      for (std::size_t j = 0; j < v.rows(); ++j) out(i, j) += us * v(j, k);
    }
  }
  return out;
}

Svd svd(const Matrix& a) {
  if (a.rows() >= a.cols()) return jacobi_tall(a);
  Svd t = jacobi_tall(a.transpose());
  return Svd{std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

double spectral_norm(const Matrix& a) { return svd(a).sigma[0]; }

double default_rank_tolerance(const Svd& s) {
  const auto dim = static_cast<double>(std::max(s.rows(), s.cols()));
  return dim * kEps * s.sigma[0];
}

std::size_t numerical_rank(const Svd& s, std::optional<double> tol) {
  const double cutoff = tol.value_or(default_rank_tolerance(s));
  if (cutoff < 0.0 || std::isnan(cutoff)) {
    throw Error(ErrorCode::InvalidArgument, "rank tolerance must be non-negative");
  }
  return static_cast<std::size_t>(
      std::count_if(s.sigma.begin(), s.sigma.end(), [&](double x) { return x > cutoff; }));
}

std::size_t numerical_rank(const Matrix& a, std::optional<double> tol) {
  return numerical_rank(svd(a), tol);
}

double condition_number(const Svd& s) {
  if (s.sigma[0] == 0.0) throw Error(ErrorCode::ZeroMatrix, "condition number of zero matrix");
  const std::size_t r = numerical_rank(s);
  if (r < s.sigma.size()) return std::numeric_limits<double>::infinity();
  return s.sigma[0] / s.sigma[r - 1];
}

double condition_number(const Matrix& a) { return condition_number(svd(a)); }

}  // namespace lnnreg
