#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>

#include "lnnreg/iterative.hpp"
#include "lnnreg/matrix.hpp"

namespace lnnreg {

struct PseudoMethod {};

struct TikhonovMethod {
  double alpha = 0.0;
  std::optional<Vector> q0;
};

struct LavrentievMethod {
  double alpha = 0.0;
  std::optional<Vector> q0;
};

/// Constants of the Landweber stopping rules. Rule 1 reads a1, a2; rule 2
/// reads a0, a1; rule 3 reads a, a1, a2.
struct RuleConstants {
  double a = 2.0;
  double a0 = 1.0;
  double a1 = 1.5;
  double a2 = 1.5;
};

struct LandweberMethod {
  StopRule rule = StopRule::Rule2;
  RuleConstants constants;
  double h = 0.0;
  double delta = 0.0;
  std::size_t max_iter = 10000;
  std::optional<Vector> q0;
};

struct GdMethod {
  GdConfig config;
  std::optional<Vector> q0;
};

using Method = std::variant<PseudoMethod, TikhonovMethod, LavrentievMethod, LandweberMethod, GdMethod>;

/// Outcome of solving one system A·q = f.
struct SolveReport {
  Vector q;
  std::string method;
  std::optional<double> alpha;
  std::optional<std::size_t> stop_index;
  double residual_norm = 0.0;
  double solution_norm = 0.0;
  std::string diagnostics;
};

std::string method_tag(const Method& m);

SolveReport solve(const Matrix& a, const Vector& f, const Method& method);

}  // namespace lnnreg
