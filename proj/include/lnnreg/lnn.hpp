#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lnnreg/matrix.hpp"
#include "lnnreg/solve.hpp"

namespace lnnreg {

/// Training pairs of a linear network: inputs g^(k) are the columns of g
/// (N×K), answers h^(k) the columns of h (M×K).
struct TrainingSet {
  Matrix g;
  Matrix h;

  void validate() const;
};

/// h = q·g + bias.
struct WeightModel {
  Matrix q;  // M×N
  std::optional<Vector> bias;
  std::string method_tag;
  std::vector<SolveReport> per_row_reports;
};

struct DiagnosisReport {
  std::size_t rank_g = 0;
  Vector sigma;
  std::size_t rho = 0;
  std::size_t k0 = 0;
  bool full_rank = false;
  double condition = 0.0;  // +infinity when G is rank-deficient or zero
};

/// (A, F) = (Gᵀ, Hᵀ): row m of Q solves A·q = F.col(m).
std::pair<Matrix, Matrix> assemble_system(const TrainingSet& t);

/// Solves the M row systems independently and stacks them into Q. Solver
/// errors are rethrown tagged with the failing row.
WeightModel train(const TrainingSet& t, const Method& method);

/// Appends a constant 1 to every input, trains, and splits the last column off as bias.
WeightModel train_with_bias(const TrainingSet& t, const Method& method);

Vector predict(const WeightModel& model, const Vector& g);

DiagnosisReport diagnose(const TrainingSet& t, double noise_floor);

}  // namespace lnnreg
