#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lnnreg/matrix.hpp"
#include "lnnreg/solve.hpp"

namespace lnnreg::experiment {

enum class PerturbationMode { OperatorEntry, DataVector, Both };

/// How a method obtains its regularisation parameter at each noise level.
enum class AlphaRule {
  Fixed,         // "alpha": value
  Apriori,       // ε^(2/3) or ε^(1/2) depending on "solvable"
  AprioriPower,  // (h + δ)^(1/p)
  Discrepancy,   // ‖Aq − f‖ = δ
  Generalized,   // ‖Aq − f‖ = h‖q‖ + δ
};

struct MethodSpec {
  std::string label;
  std::string name;  // pseudo | tikhonov | lavrentiev | landweber | gd
  AlphaRule alpha_rule = AlphaRule::Fixed;
  double alpha = 0.0;
  bool solvable = true;
  double p = 2.0;
  LandweberMethod landweber;
  GdConfig gd;
};

/// A noise sweep over one base system. Noise level ε enters as
///  - OperatorEntry: A(row, col) += ε, h = ε, δ = 0;
///  - DataVector: f += ε·u with u a seeded unit vector, h = 0, δ = ε;
///  - Both: both of the above, h = δ = ε.
/// Indices are zero-based.
struct ExperimentSpec {
  Matrix a;
  Vector f;
  Vector reference;
  std::vector<double> epsilons;  // positive, strictly decreasing
  PerturbationMode mode = PerturbationMode::OperatorEntry;
  std::size_t row = 0;
  std::size_t col = 0;
  std::vector<MethodSpec> methods;
  std::uint64_t seed = 0;
};

/// Throws Error{ParseError} on schema violations.
ExperimentSpec parse_spec(const nlohmann::json& j);

struct ResultRow {
  double epsilon = 0.0;
  std::string method;
  std::optional<double> alpha_or_n;
  double residual = 0.0;
  double error_to_reference = 0.0;
  double solution_norm = 0.0;
  std::optional<std::string> failure;  // error name when the solve failed
};

struct PerturbedSystem {
  Matrix a_h;
  Vector f_delta;
  double h = 0.0;
  double delta = 0.0;
};

/// The system at noise level ε; `index` selects the RNG stream (seed + index).
PerturbedSystem perturb(const ExperimentSpec& spec, double epsilon, std::size_t index);

std::vector<ResultRow> run(const ExperimentSpec& spec);

/// Header line plus one CSV row per result.
std::string to_csv(const std::vector<ResultRow>& rows);

}  // namespace lnnreg::experiment
