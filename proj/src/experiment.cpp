#include "lnnreg/experiment.hpp"

#include <cmath>
#include <random>
#include <string>

#include "lnnreg/error.hpp"
#include "lnnreg/io.hpp"
#include "lnnreg/param_select.hpp"
#include "lnnreg/regularizers.hpp"
#include "lnnreg/svd.hpp"

namespace lnnreg::experiment {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::ParseError, "experiment: " + msg); }

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) bad(std::string("'") + key + "' must be a number");
  const double x = j.at(key).get<double>();
  if (!std::isfinite(x)) bad(std::string("'") + key + "' must be finite");
  return x;
}

std::size_t index_or(const json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_unsigned()) bad(std::string("'") + key + "' must be a non-negative integer");
  return j.at(key).get<std::size_t>();
}

MethodSpec parse_method(const json& j) {
  if (!j.is_object() || !j.contains("name") || !j.at("name").is_string()) {
    bad("each method needs a string 'name'");
  }
  MethodSpec m;
  m.name = j.at("name").get<std::string>();
  if (m.name != "pseudo" && m.name != "tikhonov" && m.name != "lavrentiev" &&
      m.name != "landweber" && m.name != "gd") {
    bad("unknown method '" + m.name + "'");
  }
  m.label = m.name;

  if (m.name == "tikhonov" || m.name == "lavrentiev") {
    std::string rule = j.contains("alpha") ? "fixed" : "apriori";
    if (j.contains("alpha_rule")) {
      if (!j.at("alpha_rule").is_string()) bad("'alpha_rule' must be a string");
      rule = j.at("alpha_rule").get<std::string>();
    }
    if (rule == "fixed") {
      if (!j.contains("alpha")) bad("alpha_rule 'fixed' needs 'alpha'");
      m.alpha_rule = AlphaRule::Fixed;
      m.alpha = number_or(j, "alpha", 0.0);
    } else if (rule == "apriori") {
      m.alpha_rule = AlphaRule::Apriori;
      if (j.contains("solvable")) {
        if (!j.at("solvable").is_boolean()) bad("'solvable' must be a boolean");
        m.solvable = j.at("solvable").get<bool>();
      }
    } else if (rule == "apriori_p") {
      m.alpha_rule = AlphaRule::AprioriPower;
      m.p = number_or(j, "p", 2.0);
    } else if (rule == "discrepancy") {
      m.alpha_rule = AlphaRule::Discrepancy;
    } else if (rule == "generalized") {
      m.alpha_rule = AlphaRule::Generalized;
    } else {
      bad("unknown alpha_rule '" + rule + "'");
    }
    m.label += "/" + rule;
  }

  if (m.name == "landweber") {
    const std::size_t rule = index_or(j, "rule", 2);
    if (rule < 1 || rule > 3) bad("landweber 'rule' must be 1, 2 or 3");
    m.landweber.rule = static_cast<StopRule>(rule - 1);
    auto& c = m.landweber.constants;
    c.a = number_or(j, "a", c.a);
    c.a0 = number_or(j, "a0", c.a0);
    c.a1 = number_or(j, "a1", c.a1);
    c.a2 = number_or(j, "a2", c.a2);
    m.landweber.max_iter = index_or(j, "max_iter", m.landweber.max_iter);
    m.label += "/rule" + std::to_string(rule);
  }

  if (m.name == "gd") {
    m.gd.learning_rate = number_or(j, "learning_rate", 0.0);
    m.gd.max_epochs = index_or(j, "max_epochs", m.gd.max_epochs);
    m.gd.l1_alpha = number_or(j, "l1", 0.0);
    m.gd.l2_alpha = number_or(j, "l2", 0.0);
    m.gd.step_tolerance = number_or(j, "step_tolerance", 0.0);
  }

  if (j.contains("label")) {
    if (!j.at("label").is_string()) bad("'label' must be a string");
    m.label = j.at("label").get<std::string>();
  }
  return m;
}

Vector unit_direction(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  while (true) {
    Vector u(n);
    // Raw 53-bit draws keep the stream identical across standard libraries.
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    }
    const double nrm = norm2(u);
    if (nrm > 0.0) return (1.0 / nrm) * u;
  }
}

Method resolve_method(const MethodSpec& m, const PerturbedSystem& sys, double epsilon) {
  if (m.name == "pseudo") return PseudoMethod{};
  if (m.name == "landweber") {
    LandweberMethod lw = m.landweber;
    lw.h = sys.h;
    lw.delta = sys.delta;
    return lw;
  }
  if (m.name == "gd") {
    GdMethod g{m.gd, std::nullopt};
    if (g.config.learning_rate == 0.0) {
      // Largest curvature of the objective is 2*sigma_0^2 + l2.
      const double s0 = spectral_norm(sys.a_h);
      const double curvature = 2.0 * s0 * s0 + g.config.l2_alpha;
      g.config.learning_rate = curvature > 0.0 ? 1.0 / curvature : 1.0;
    }
    return g;
  }

  const NoisyProblem p{sys.a_h, sys.f_delta, sys.h, sys.delta};
  double alpha = 0.0;
  switch (m.alpha_rule) {
    case AlphaRule::Fixed: alpha = m.alpha; break;
    case AlphaRule::Apriori: alpha = apriori_alpha(epsilon, m.solvable); break;
    case AlphaRule::AprioriPower: alpha = apriori_alpha_rule(p, m.p); break;
    case AlphaRule::Discrepancy: alpha = discrepancy_alpha(p.a_h, p.f_delta, p.delta).alpha; break;
    case AlphaRule::Generalized: alpha = generalized_discrepancy_alpha(p).alpha; break;
  }
  if (m.name == "tikhonov") return TikhonovMethod{alpha, std::nullopt};
  return LavrentievMethod{alpha, std::nullopt};
}

}  // namespace

ExperimentSpec parse_spec(const json& j) {
  if (!j.is_object()) bad("spec must be a JSON object");
  for (const char* key : {"a", "f", "reference", "epsilons", "methods"}) {
    if (!j.contains(key)) bad(std::string("missing key '") + key + "'");
  }
  ExperimentSpec s;
  s.a = io::matrix_from_json(j.at("a"), "experiment.a");
  s.f = io::vector_from_json(j.at("f"), "experiment.f");
  s.reference = io::vector_from_json(j.at("reference"), "experiment.reference");
  if (s.f.size() != s.a.rows()) bad("'f' length does not match the rows of 'a'");
  if (s.reference.size() != s.a.cols()) bad("'reference' length does not match the columns of 'a'");

  const auto& eps = j.at("epsilons");
  if (!eps.is_array() || eps.empty()) bad("'epsilons' must be a non-empty array");
  for (const auto& e : eps) {
    if (!e.is_number()) bad("'epsilons' entries must be numbers");
    const double x = e.get<double>();
    if (!(x > 0.0) || !std::isfinite(x)) bad("'epsilons' entries must be positive");
    if (!s.epsilons.empty() && !(x < s.epsilons.back())) bad("'epsilons' must strictly decrease");
    s.epsilons.push_back(x);
  }

  if (j.contains("perturbation")) {
    const auto& pj = j.at("perturbation");
    if (!pj.is_object()) bad("'perturbation' must be an object");
    const std::string mode = pj.value("mode", std::string("operator_entry"));
    if (mode == "operator_entry") {
      s.mode = PerturbationMode::OperatorEntry;
    } else if (mode == "data_vector") {
      s.mode = PerturbationMode::DataVector;
    } else if (mode == "both") {
      s.mode = PerturbationMode::Both;
    } else {
      bad("unknown perturbation mode '" + mode + "'");
    }
    s.row = index_or(pj, "row", s.a.rows() - 1);
    s.col = index_or(pj, "col", s.a.cols() - 1);
  } else {
    s.row = s.a.rows() - 1;
    s.col = s.a.cols() - 1;
  }
  if (s.row >= s.a.rows() || s.col >= s.a.cols()) bad("perturbation entry lies outside 'a'");

  const auto& methods = j.at("methods");
  if (!methods.is_array() || methods.empty()) bad("'methods' must be a non-empty array");
  for (const auto& m : methods) s.methods.push_back(parse_method(m));

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) bad("'seed' must be a non-negative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  return s;
}

PerturbedSystem perturb(const ExperimentSpec& spec, double epsilon, std::size_t index) {
  PerturbedSystem sys{spec.a, spec.f, 0.0, 0.0};
  if (spec.mode != PerturbationMode::DataVector) {
    sys.a_h(spec.row, spec.col) += epsilon;
    sys.h = epsilon;
  }
  if (spec.mode != PerturbationMode::OperatorEntry) {
    sys.f_delta = spec.f + epsilon * unit_direction(spec.f.size(), spec.seed + index);
    sys.delta = epsilon;
  }
  return sys;
}

std::vector<ResultRow> run(const ExperimentSpec& spec) {
  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < spec.epsilons.size(); ++i) {
    const double eps = spec.epsilons[i];
    const PerturbedSystem sys = perturb(spec, eps, i);
    for (const auto& m : spec.methods) {
      ResultRow row;
      row.epsilon = eps;
      row.method = m.label;
      try {
        const SolveReport r = solve(sys.a_h, sys.f_delta, resolve_method(m, sys, eps));
        if (r.alpha) row.alpha_or_n = *r.alpha;
        if (r.stop_index) row.alpha_or_n = static_cast<double>(*r.stop_index);
        row.residual = r.residual_norm;
        row.error_to_reference = norm2(r.q - spec.reference);
        row.solution_norm = r.solution_norm;
      } catch (const Error& e) {
        row.failure = std::string(e.name());
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = "epsilon,method,alpha_or_n,residual,error_to_reference,solution_norm\n";
  for (const auto& r : rows) {
    out += io::format_number(r.epsilon) + "," + r.method + ",";
    if (r.failure) {
      out += "FAILED," + *r.failure + ",,\n";
      continue;
    }
    if (r.alpha_or_n) out += io::format_number(*r.alpha_or_n);
    out += "," + io::format_number(r.residual) + "," + io::format_number(r.error_to_reference) +
           "," + io::format_number(r.solution_norm) + "\n";
  }
  return out;
}

}  // namespace lnnreg::experiment
