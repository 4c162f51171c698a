// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "lnnreg/error.hpp"
#include "lnnreg/iterative.hpp"
#include "lnnreg/lnn.hpp"
#include "lnnreg/param_select.hpp"
#include "lnnreg/pseudo.hpp"
#include "lnnreg/regularizers.hpp"
#include "lnnreg/svd.hpp"
#include "test_support.hpp"

using namespace lnnreg;
using lnnreg::testing::Rng;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double max_diff(const Vector& a, const Vector& b) { return norm_inf(a - b); }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Outcome criterion_1() {
  Outcome o;
  const auto r = pseudo_solution(Matrix{{1, 0}, {0, 0}}, Vector{1, 1});
  const double d = max_diff(r.q, Vector{1, 0});
  o.require(d <= 1e-12, "|q - (1,0)|_inf = " + num(d));
  o.detail = o.pass ? "q = (1,0), deviation " + num(d) : o.detail;
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const double d2 = max_diff(pseudo_solution(Matrix::diagonal({1, 1, 0}), Vector{1, 1, 1}).q, Vector{1, 1, 0});
  const double d3 =
      max_diff(pseudo_solution(Matrix::diagonal({1, 10, 0}), Vector{1, 1, 1}).q, Vector{1, 0.1, 0});
  o.require(d2 <= 1e-12, "first system deviation " + num(d2));
  o.require(d3 <= 1e-12, "second system deviation " + num(d3));
  if (o.pass) o.detail = "deviations " + num(d2) + ", " + num(d3);
  return o;
}

Outcome criterion_3() {
  Outcome o;
  const Vector f{1, 1};
  const double h = 1e-8;
  const double blowup = norm2(pseudo_solution(Matrix::diagonal({1, h}), f).q);
  o.require(blowup >= 1e7, "unregularized norm " + num(blowup));

  const double eps = 1e-6;
  const auto r = tikhonov(Matrix::diagonal({1, eps}), f, apriori_alpha(eps, true));
  const double err = norm2(r.q - Vector{1, 0});
  o.require(r.solution_norm <= 2.0, "regularized norm " + num(r.solution_norm));
  o.require(err <= 2e-2, "regularized error " + num(err));
  if (o.pass) {
    o.detail = "pseudo norm " + num(blowup) + "; tikhonov norm " + num(r.solution_norm) +
               ", error " + num(err);
  }
  return o;
}

Outcome criterion_4() {
  Outcome o;
  const auto d = diagnose(TrainingSet{Matrix{{1, 0}, {0, 0}}, Matrix{{1, 0}, {1, 0}}}, 0.0);
  o.require(d.rank_g == 1, "rank " + std::to_string(d.rank_g));
  o.require(!d.full_rank, "full_rank reported true");
  if (o.pass) o.detail = "rank 1, full_rank false";
  return o;
}

Outcome criterion_5() {
  Outcome o;
  Rng rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = rng.index(1, 6);
    const std::size_t n = rng.index(1, 6);
    const Matrix a = (trial % 4 == 3 && std::min(k, n) > 1) ? rng.low_rank(k, n, std::min(k, n) - 1)
                                                            : rng.matrix(k, n);
    const Matrix p = pinv(a);
    const Matrix ap = a * p;
    const Matrix pa = p * a;
    const double e1 = frobenius_norm(ap * a - a) / frobenius_norm(a);
    const double e2 = frobenius_norm(pa * p - p) / frobenius_norm(p);
    const double e3 = frobenius_norm(ap - ap.transpose()) / std::max(frobenius_norm(ap), 1.0);
    const double e4 = frobenius_norm(pa - pa.transpose()) / std::max(frobenius_norm(pa), 1.0);
    worst = std::max({worst, e1, e2, e3, e4});
  }
  o.require(worst <= 1e-10, "worst relative axiom error " + num(worst));
  if (o.pass) o.detail = "200 matrices, worst relative error " + num(worst);
  return o;
}

Outcome criterion_6() {
  Outcome o;
  Rng rng(6);
  double worst = 0.0;
  std::size_t max_epochs_used = 0;
  for (int sys = 0; sys < 20; ++sys) {
    const Matrix a = rng.matrix(5, 3);
    const Vector f = rng.vector(5);
    const double alpha = 0.1;
    const double s0 = spectral_norm(a);
    GdConfig cfg;
    cfg.learning_rate = 0.5 / (s0 * s0 + alpha);
    cfg.max_epochs = 100000;
    cfg.l2_alpha = 2.0 * alpha;  // (l2/2)|q|^2 matches alpha|q|^2
    cfg.step_tolerance = 1e-15;
    const auto r = gd_train(a, f, cfg, Vector(3));
    max_epochs_used = std::max(max_epochs_used, r.trace.size() - 1);
    worst = std::max(worst, max_diff(r.q, tikhonov(a, f, alpha).q));
  }
  o.require(worst <= 1e-6, "worst deviation " + num(worst));
  if (o.pass) {
    o.detail = "20 systems, worst deviation " + num(worst) + " within " +
               std::to_string(max_epochs_used) + " epochs";
  }
  return o;
}

Outcome criterion_7() {
  Outcome o;
  Rng rng(7);
  double worst = 0.0;
  for (int sys = 0; sys < 20; ++sys) {
    const std::size_t k = rng.index(2, 6);
    const std::size_t n = rng.index(2, 6);
    const Matrix a = 2.0 * rng.matrix(k, n);
    const Vector f = rng.vector(k);
    const auto lw = landweber(NoisyProblem{a, f, 0, 0}, Vector(n), 50);
    const double s = std::max(spectral_norm(a), 1.0);
    GdConfig cfg;
    cfg.learning_rate = 1.0 / (2.0 * s * s);
    cfg.max_epochs = 50;
    const auto gd = gd_train(a, f, cfg, Vector(n));
    for (std::size_t i = 0; i < lw.size(); ++i) {
      worst = std::max(worst, max_diff(lw.iterates[i], gd.trace.iterates[i]));
    }
  }
  o.require(worst <= 1e-12, "worst iterate difference " + num(worst));
  if (o.pass) o.detail = "20 systems x 50 steps, worst difference " + num(worst);
  return o;
}

Outcome criterion_8() {
  Outcome o;
  const auto r = discrepancy_alpha(Matrix::identity(2), Vector{1, 0}, 0.5);
  o.require(std::abs(r.alpha - 1.0) <= 1e-8, "analytic alpha " + num(r.alpha));

  Rng rng(8);
  double worst = 0.0;
  for (int sys = 0; sys < 50; ++sys) {
    const Matrix a = rng.matrix(5, 3);
    const Vector f = rng.vector(5);
    const double delta = 0.5 * (pseudo_solution(a, f).residual_norm + norm2(f));
    const auto s = discrepancy_alpha(a, f, delta);
    const double gap = std::abs(tikhonov(a, f, s.alpha).residual_norm - delta) / norm2(f);
    worst = std::max(worst, gap);
  }
  o.require(worst <= 1e-10, "worst relative gap " + num(worst));
  if (o.pass) o.detail = "alpha = " + num(r.alpha) + "; 50 systems, worst gap/|f| " + num(worst);
  return o;
}

Outcome criterion_9() {
  Outcome o;
  double prev = INFINITY;
  std::string trail;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    // Consistent exact system diag(1,0) q = (1,0), perturbed at the (2,2) entry and in f.
    const NoisyProblem p{Matrix::diagonal({1, eps}), Vector{1, eps}, eps, eps};
    const auto t = landweber(p, Vector{0, 0}, 2000);
    const auto d = stop_rule_2(p, t, 1.0, 1.5);
    const double err = norm2(t.iterates[d.stop_index] - Vector{1, 0});
    const double late = norm2(t.iterates[10 * d.stop_index] - Vector{1, 0});
    o.require(err < prev, "error did not decrease at eps " + num(eps));
    o.require(err <= late, "stopped past the minimum at eps " + num(eps));
    trail += (trail.empty() ? "" : ", ") + std::string("n=") + std::to_string(d.stop_index) +
             " err=" + num(err);
    prev = err;
  }
  if (o.pass) o.detail = trail;
  return o;
}

Outcome criterion_10() {
  Outcome o;
  Rng rng(10);
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(std::pow(10.0, -8.0 + 12.0 * i / 19.0));
  for (int sys = 0; sys < 50 && o.pass; ++sys) {
    const std::size_t k = rng.index(2, 6);
    const std::size_t n = rng.index(2, 6);
    const TikhonovFamily fam(rng.matrix(k, n), rng.vector(k));
    double prev_norm = INFINITY;
    double prev_res = -INFINITY;
    for (double alpha : grid) {
      const auto r = fam.solve(alpha);
      o.require(r.solution_norm <= prev_norm + 1e-12, "norm increased on system " + std::to_string(sys));
      o.require(r.residual_norm >= prev_res - 1e-12, "residual decreased on system " + std::to_string(sys));
      prev_norm = r.solution_norm;
      prev_res = r.residual_norm;
    }
  }
  if (o.pass) o.detail = "50 systems x 20 alphas";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 pseudo-solution of the 2x2 rank-1 system", criterion_1},
      {"2 pseudo-solutions of the diagonal 3x3 systems", criterion_2},
      {"3 instability of the perturbed system and a-priori Tikhonov", criterion_3},
      {"4 rank diagnostics of G", criterion_4},
      {"5 Moore-Penrose identities", criterion_5},
      {"6 L2 gradient descent matches closed-form Tikhonov", criterion_6},
      {"7 Landweber equals matched-step gradient descent", criterion_7},
      {"8 discrepancy principle", criterion_8},
      {"9 rule-2 stopped Landweber under shrinking noise", criterion_9},
      {"10 Tikhonov monotonicity in alpha", criterion_10},
  };

  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    if (!o.pass) ++failures;
  }
  std::printf(
      "SKIP criterion 11 training-curve figures and the unpublished blood-test data: "
      "not reproducible, out of scope\n");
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
