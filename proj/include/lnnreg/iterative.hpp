#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lnnreg/matrix.hpp"
#include "lnnreg/param_select.hpp"

namespace lnnreg {

/// Iterates of a fixed-step scheme and their diagnostics.
///
/// step_norms[n] = ‖q_n − q_{n−1}‖ for n ≥ 1; step_norms[0] is 0 and is never
/// consulted. For Landweber runs the residuals belong to the scaled system
/// (scale_factor·A, scale_factor·f), which has ‖A‖ ≤ 1.
struct IterationTrace {
  std::vector<Vector> iterates;
  std::vector<double> residual_norms;
  std::vector<double> step_norms;
  double scale_factor = 1.0;

  std::size_t size() const noexcept { return iterates.size(); }
};

enum class StopRule { Rule1, Rule2, Rule3 };

struct StopDecision {
  StopRule rule = StopRule::Rule1;
  std::size_t stop_index = 0;
  std::string triggered_condition;  // "step", "residual" or "iteration_count"
};

/// q_{n+1} = (I − AᵀA)q_n + Aᵀf on the system rescaled to ‖A‖ ≤ 1.
/// Records q_0 … q_max_iter.
IterationTrace landweber(const NoisyProblem& p, const Vector& q0, std::size_t max_iter);

/// First n ≥ 1 with ‖q_n − q_{n−1}‖ ≤ a1·h + a2·δ. h and δ are given for the
/// original system and rescaled with the trace.
StopDecision stop_rule_1(const IterationTrace& trace, double h, double delta, double a1, double a2);

/// First n with ‖A_h q_n − f_δ‖ ≤ a0·h + a1·δ. The caller guarantees a0
/// bounds the norm of the sought solution; it cannot be checked here.
StopDecision stop_rule_2(const NoisyProblem& p, const IterationTrace& trace, double a0, double a1);

/// First n with ‖A_h q_n − f_δ‖ ≤ a1‖q_n‖h + a2·δ or n ≥ a/(a1‖q_n‖h + a2·δ)².
StopDecision stop_rule_3(const NoisyProblem& p, const IterationTrace& trace, double a, double a1,
                         double a2);

struct ValidationSet {
  Matrix a;
  Vector f;
};

struct EarlyStopping {
  /// Explicit held-out equations. When absent, the trailing
  /// ceil(validation_fraction·K) rows of the training system are held out.
  std::optional<ValidationSet> validation;
  double validation_fraction = 0.0;
  std::size_t patience = 5;
  std::size_t check_every = 1;
};

struct GdConfig {
  double learning_rate = 0.0;
  std::size_t max_epochs = 1000;
  double l1_alpha = 0.0;
  double l2_alpha = 0.0;
  /// Stop once ‖q_n − q_{n−1}‖ falls to this value; 0 disables the check.
  double step_tolerance = 0.0;
  std::optional<EarlyStopping> early_stopping;

  void validate() const;
};

struct GdResult {
  IterationTrace trace;
  Vector q;                // final iterate, or the best validated one when early stopping is on
  std::size_t q_index = 0; // index of q within trace.iterates
  bool stopped_early = false;
  std::vector<double> validation_residuals;  // one entry per check
  std::vector<std::string> warnings;
};

/// Proximal gradient descent on ‖Aq − f‖² + (l2/2)‖q‖₂² + l1‖q‖₁: a gradient
/// step on the smooth part followed by soft-thresholding at lr·l1.
/// Throws Error{DivergenceDetected} once the residual exceeds 1e6× its start.
GdResult gd_train(const Matrix& a, const Vector& f, const GdConfig& config, const Vector& q0);

/// Tracks a validation curve: the best index so far and whether `patience`
/// consecutive checks have failed to improve on it. Ties keep the first index.
class EarlyStopMonitor {
 public:
  explicit EarlyStopMonitor(std::size_t patience);

  /// Records the next value; returns true once patience is exhausted.
  bool update(double validation_residual);

  std::size_t best_index() const noexcept { return best_; }
  bool triggered() const noexcept { return triggered_; }

 private:
  std::size_t patience_;
  std::size_t seen_ = 0;
  std::size_t best_ = 0;
  double best_value_ = 0.0;
  std::size_t stale_ = 0;
  bool triggered_ = false;
};

/// Index of the best validation residual before patience ran out. Without a
/// trigger this is the best index of the whole curve, which is the last one on
/// a decreasing curve.
std::size_t early_stop_monitor(std::span<const double> validation_residuals, std::size_t patience);

}  // namespace lnnreg
