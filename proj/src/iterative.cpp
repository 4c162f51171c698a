#include "lnnreg/iterative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lnnreg/error.hpp"
#include "lnnreg/svd.hpp"

namespace lnnreg {

namespace {

void require_nonempty(const IterationTrace& trace) {
  if (trace.iterates.empty() || trace.residual_norms.size() != trace.iterates.size() ||
      trace.step_norms.size() != trace.iterates.size()) {
    throw Error(ErrorCode::InvalidArgument, "iteration trace is empty or inconsistent");
  }
}

void require_finite_nonneg(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be finite and >= 0");
  }
}

void require_greater_than_one(double x, const char* what) {
  if (!(x > 1.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be finite and > 1");
  }
}

Vector soft_threshold(const Vector& y, double t) {
  Vector out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double m = std::abs(y[i]) - t;
    out[i] = m > 0.0 ? std::copysign(m, y[i]) : 0.0;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Landweber

IterationTrace landweber(const NoisyProblem& p, const Vector& q0, std::size_t max_iter) {
  p.validate();
  if (q0.size() != p.a_h.cols()) {
    throw Error(ErrorCode::DimMismatch, "q0 length " + std::to_string(q0.size()) +
                                            " != columns " + std::to_string(p.a_h.cols()));
  }
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");

  IterationTrace trace;
  const double op_norm = spectral_norm(p.a_h);
  trace.scale_factor = op_norm > 1.0 ? 1.0 / op_norm : 1.0;
  const Matrix a = trace.scale_factor == 1.0 ? p.a_h : trace.scale_factor * p.a_h;
  const Vector f = trace.scale_factor == 1.0 ? p.f_delta : trace.scale_factor * p.f_delta;

  trace.iterates.reserve(max_iter + 1);
  trace.residual_norms.reserve(max_iter + 1);
  trace.step_norms.reserve(max_iter + 1);

  Vector q = q0;
  Vector r = a * q - f;
  trace.iterates.push_back(q);
  trace.residual_norms.push_back(norm2(r));
  trace.step_norms.push_back(0.0);
  for (std::size_t n = 0; n < max_iter; ++n) {
    // (I − AᵀA)q + Aᵀf written as q − Aᵀ(Aq − f).
    Vector next = q - transpose_times(a, r);
    trace.step_norms.push_back(norm2(next - q));
    q = std::move(next);
    r = a * q - f;
    trace.iterates.push_back(q);
    trace.residual_norms.push_back(norm2(r));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Stopping rules

StopDecision stop_rule_1(const IterationTrace& trace, double h, double delta, double a1,
                         double a2) {
  require_nonempty(trace);
  require_finite_nonneg(h, "h");
  require_finite_nonneg(delta, "delta");
  require_finite_nonneg(a1, "a1");
  require_finite_nonneg(a2, "a2");
  const double threshold = trace.scale_factor * (a1 * h + a2 * delta);
  for (std::size_t n = 1; n < trace.size(); ++n) {
    if (trace.step_norms[n] <= threshold) return {StopRule::Rule1, n, "step"};
  }
  throw Error(ErrorCode::NeverTriggered,
              "no step norm fell to a1*h + a2*delta within " + std::to_string(trace.size() - 1) +
                  " iterations");
}

StopDecision stop_rule_2(const NoisyProblem& p, const IterationTrace& trace, double a0, double a1) {
  require_nonempty(trace);
  p.validate();
  require_finite_nonneg(a0, "a0");
  require_greater_than_one(a1, "a1");
  const double threshold = trace.scale_factor * (a0 * p.h + a1 * p.delta);
  for (std::size_t n = 0; n < trace.size(); ++n) {
    if (trace.residual_norms[n] <= threshold) return {StopRule::Rule2, n, "residual"};
  }
  throw Error(ErrorCode::NeverTriggered,
              "residual never fell to a0*h + a1*delta within " +
                  std::to_string(trace.size() - 1) + " iterations");
}

StopDecision stop_rule_3(const NoisyProblem& p, const IterationTrace& trace, double a, double a1,
                         double a2) {
  require_nonempty(trace);
  p.validate();
  require_greater_than_one(a, "a");
  require_greater_than_one(a1, "a1");
  require_greater_than_one(a2, "a2");
  const double h = trace.scale_factor * p.h;
  const double delta = trace.scale_factor * p.delta;
  bool always_degenerate = true;
  for (std::size_t n = 0; n < trace.size(); ++n) {
    const double threshold = a1 * norm2(trace.iterates[n]) * h + a2 * delta;
    if (trace.residual_norms[n] <= threshold) return {StopRule::Rule3, n, "residual"};
    if (threshold > 0.0) {
      always_degenerate = false;
      if (static_cast<double>(n) >= a / (threshold * threshold)) {
        return {StopRule::Rule3, n, "iteration_count"};
      }
    }
  }
  if (always_degenerate) {
    throw Error(ErrorCode::DegenerateThreshold,
                "a1*|q_n|*h + a2*delta is zero and the residual never reached zero");
  }
  throw Error(ErrorCode::NeverTriggered,
              "neither rule-3 inequality held within " + std::to_string(trace.size() - 1) +
                  " iterations");
}

// ---------------------------------------------------------------------------
// Early stopping

EarlyStopMonitor::EarlyStopMonitor(std::size_t patience) : patience_(patience) {
  if (patience < 1) throw Error(ErrorCode::InvalidArgument, "patience must be >= 1");
}

bool EarlyStopMonitor::update(double validation_residual) {
  if (triggered_) return true;
  const std::size_t index = seen_++;
  if (index == 0 || validation_residual < best_value_) {
    best_ = index;
    best_value_ = validation_residual;
    stale_ = 0;
  } else if (++stale_ >= patience_) {
    triggered_ = true;
  }
  return triggered_;
}

std::size_t early_stop_monitor(std::span<const double> validation_residuals,
                               std::size_t patience) {
  EarlyStopMonitor monitor(patience);
  for (double v : validation_residuals) {
    if (monitor.update(v)) break;
  }
  return monitor.best_index();
}

// ---------------------------------------------------------------------------
// Gradient descent

void GdConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::InvalidArgument, "learning rate must be finite and > 0");
  }
  if (max_epochs < 1) throw Error(ErrorCode::InvalidArgument, "max_epochs must be >= 1");
  require_finite_nonneg(l1_alpha, "l1_alpha");
  require_finite_nonneg(l2_alpha, "l2_alpha");
  require_finite_nonneg(step_tolerance, "step_tolerance");
  if (early_stopping) {
    const auto& es = *early_stopping;
    if (es.patience < 1) throw Error(ErrorCode::InvalidArgument, "patience must be >= 1");
    if (es.check_every < 1) throw Error(ErrorCode::InvalidArgument, "check_every must be >= 1");
    if (!es.validation && !(es.validation_fraction > 0.0 && es.validation_fraction < 1.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "early stopping needs a validation set or a fraction in (0, 1)");
    }
  }
}

GdResult gd_train(const Matrix& a, const Vector& f, const GdConfig& config, const Vector& q0) {
  config.validate();
  if (f.size() != a.rows()) {
    throw Error(ErrorCode::DimMismatch, "right-hand side length does not match the rows");
  }
  if (q0.size() != a.cols()) {
    throw Error(ErrorCode::DimMismatch, "q0 length does not match the columns");
  }

  // Training/validation split.
  Matrix a_train = a;
  Vector f_train = f;
  std::optional<ValidationSet> validation;
  if (config.early_stopping) {
    const auto& es = *config.early_stopping;
    if (es.validation) {
      if (es.validation->a.cols() != a.cols() || es.validation->f.size() != es.validation->a.rows()) {
        throw Error(ErrorCode::DimMismatch, "validation set does not match the system");
      }
      validation = es.validation;
    } else {
      const std::size_t k = a.rows();
      const auto held = static_cast<std::size_t>(std::ceil(es.validation_fraction * k));
      if (held < 1 || held >= k) {
        throw Error(ErrorCode::InvalidArgument,
                    "validation fraction leaves no training or no validation rows");
      }
      const std::size_t kept = k - held;
      std::vector<double> at(a.data().begin(), a.data().begin() + kept * a.cols());
      std::vector<double> av(a.data().begin() + kept * a.cols(), a.data().end());
      a_train = Matrix(kept, a.cols(), std::move(at));
      f_train = Vector(std::vector<double>(f.begin(), f.begin() + kept));
      validation = ValidationSet{Matrix(held, a.cols(), std::move(av)),
                                 Vector(std::vector<double>(f.begin() + kept, f.end()))};
    }
  }

  GdResult out;
  const double sigma0 = spectral_norm(a_train);
  if (sigma0 > 0.0 && config.learning_rate >= 1.0 / (sigma0 * sigma0)) {
    out.warnings.push_back("learning rate " + std::to_string(config.learning_rate) +
                           " is not below 1/sigma_0^2 = " +
                           std::to_string(1.0 / (sigma0 * sigma0)) + "; iterates may diverge");
  }

  auto& trace = out.trace;
  const double lr = config.learning_rate;
  const double shrink = lr * config.l1_alpha;

  Vector q = q0;
  Vector r = a_train * q - f_train;
  const double r0 = norm2(r);
  const double base = r0 > 0.0 ? r0 : std::max(norm2(f_train), std::numeric_limits<double>::min());
  const double blowup = 1e6 * base;
  trace.iterates.push_back(q);
  trace.residual_norms.push_back(r0);
  trace.step_norms.push_back(0.0);

  std::optional<EarlyStopMonitor> monitor;
  std::size_t check_every = 1;
  if (validation) {
    check_every = config.early_stopping->check_every;
    monitor.emplace(config.early_stopping->patience);
    const double v = norm2(validation->a * q - validation->f);
    out.validation_residuals.push_back(v);
    monitor->update(v);
  }

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    Vector grad = 2.0 * transpose_times(a_train, r);
    if (config.l2_alpha > 0.0) grad = grad + config.l2_alpha * q;
    Vector next = q - lr * grad;
    if (shrink > 0.0) next = soft_threshold(next, shrink);

    const double step = norm2(next - q);
    q = std::move(next);
    r = a_train * q - f_train;
    const double res = norm2(r);
    if (!std::isfinite(res) || res > blowup) {
      throw Error(ErrorCode::DivergenceDetected,
                  "residual grew beyond 1e6 times its initial value at epoch " +
                      std::to_string(epoch));
    }
    trace.iterates.push_back(q);
    trace.residual_norms.push_back(res);
    trace.step_norms.push_back(step);

    if (monitor && epoch % check_every == 0) {
      const double v = norm2(validation->a * q - validation->f);
      out.validation_residuals.push_back(v);
      if (monitor->update(v)) {
        out.stopped_early = true;
        break;
      }
    }
    if (config.step_tolerance > 0.0 && step <= config.step_tolerance) break;
  }

  if (monitor) {
    out.q_index = monitor->best_index() * check_every;
  } else {
    out.q_index = trace.size() - 1;
  }
  out.q = trace.iterates[out.q_index];
  return out;
}

}  // namespace lnnreg
