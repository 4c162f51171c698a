#include "lnnreg/lnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lnnreg/error.hpp"
#include "lnnreg/svd.hpp"

namespace lnnreg {

void TrainingSet::validate() const {
  if (g.cols() != h.cols()) {
    throw Error(ErrorCode::DimMismatch, "G has " + std::to_string(g.cols()) + " columns, H has " +
                                            std::to_string(h.cols()));
  }
}

std::pair<Matrix, Matrix> assemble_system(const TrainingSet& t) {
  t.validate();
  return {t.g.transpose(), t.h.transpose()};
}

WeightModel train(const TrainingSet& t, const Method& method) {
  const auto [a, f] = assemble_system(t);
  const std::size_t m_rows = f.cols();

  WeightModel model{Matrix(m_rows, a.cols()), std::nullopt, method_tag(method), {}};
  model.per_row_reports.reserve(m_rows);
  for (std::size_t m = 0; m < m_rows; ++m) {
    SolveReport report;
    try {
      report = solve(a, f.col(m), method);
    } catch (const Error& e) {
      throw e.with_row(m);
    }
    for (std::size_t j = 0; j < a.cols(); ++j) model.q(m, j) = report.q[j];
    model.per_row_reports.push_back(std::move(report));
  }
  return model;
}

WeightModel train_with_bias(const TrainingSet& t, const Method& method) {
  t.validate();
  const std::size_t n = t.g.rows();
  const std::size_t k = t.g.cols();
  Matrix g_aug(n + 1, k, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) g_aug(i, j) = t.g(i, j);

  WeightModel aug = train(TrainingSet{g_aug, t.h}, method);
  const std::size_t m_rows = aug.q.rows();
  WeightModel model{Matrix(m_rows, n), Vector(m_rows), aug.method_tag,
                    std::move(aug.per_row_reports)};
  for (std::size_t m = 0; m < m_rows; ++m) {
    for (std::size_t j = 0; j < n; ++j) model.q(m, j) = aug.q(m, j);
    (*model.bias)[m] = aug.q(m, n);
  }
  return model;
}

Vector predict(const WeightModel& model, const Vector& g) {
  if (g.size() != model.q.cols()) {
    throw Error(ErrorCode::DimMismatch, "input length " + std::to_string(g.size()) +
                                            " != model inputs " + std::to_string(model.q.cols()));
  }
  Vector out = model.q * g;
  if (model.bias) {
    if (model.bias->size() != out.size()) {
      throw Error(ErrorCode::DimMismatch, "bias length does not match the model outputs");
    }
    out = out + *model.bias;
  }
  return out;
}

DiagnosisReport diagnose(const TrainingSet& t, double noise_floor) {
  if (!(noise_floor >= 0.0) || !std::isfinite(noise_floor)) {
    throw Error(ErrorCode::InvalidArgument, "noise floor must be finite and >= 0");
  }
  const Svd s = svd(t.g);
  DiagnosisReport out;
  out.sigma = s.sigma;
  out.rank_g = numerical_rank(s);
  out.rho = out.rank_g;
  for (std::size_t j = 0; j < out.rho; ++j)
    if (s.sigma[j] > noise_floor) ++out.k0;
  out.full_rank = out.rank_g == std::min(t.g.rows(), t.g.cols());
  out.condition = s.sigma[0] == 0.0 ? std::numeric_limits<double>::infinity() : condition_number(s);
  return out;
}

}  // namespace lnnreg
