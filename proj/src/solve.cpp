#include "lnnreg/solve.hpp"

#include <string>

#include "lnnreg/error.hpp"
#include "lnnreg/pseudo.hpp"
#include "lnnreg/regularizers.hpp"

namespace lnnreg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string rule_name(StopRule r) {
  switch (r) {
    case StopRule::Rule1: return "rule1";
    case StopRule::Rule2: return "rule2";
    case StopRule::Rule3: return "rule3";
  }
  return "rule?";
}

SolveReport from_regularized(RegularizedSolution s, std::string method) {
  SolveReport out;
  out.q = std::move(s.q);
  out.method = std::move(method);
  out.alpha = s.alpha;
  out.residual_norm = s.residual_norm;
  out.solution_norm = s.solution_norm;
  return out;
}

}  // namespace

std::string method_tag(const Method& m) {
  return std::visit(overloaded{
                        [](const PseudoMethod&) { return std::string("pseudo"); },
                        [](const TikhonovMethod&) { return std::string("tikhonov"); },
                        [](const LavrentievMethod&) { return std::string("lavrentiev"); },
                        [](const LandweberMethod&) { return std::string("landweber"); },
                        [](const GdMethod&) { return std::string("gd"); },
                    },
                    m);
}

SolveReport solve(const Matrix& a, const Vector& f, const Method& method) {
  return std::visit(
      overloaded{
          [&](const PseudoMethod&) {
            auto r = pseudo_solution(a, f);
            SolveReport out;
            out.q = std::move(r.q);
            out.method = "pseudo";
            out.residual_norm = r.residual_norm;
            out.solution_norm = r.solution_norm;
            out.diagnostics = "rank=" + std::to_string(r.rank_used);
            return out;
          },
          [&](const TikhonovMethod& m) {
            return from_regularized(tikhonov(a, f, m.alpha, m.q0), "tikhonov");
          },
          [&](const LavrentievMethod& m) {
            return from_regularized(lavrentiev(a, f, m.alpha, m.q0), "lavrentiev");
          },
          [&](const LandweberMethod& m) {
            const NoisyProblem p{a, f, m.h, m.delta};
            const Vector q0 = m.q0.value_or(Vector(a.cols()));
            const IterationTrace trace = landweber(p, q0, m.max_iter);
            const auto& c = m.constants;
            StopDecision d;
            switch (m.rule) {
              case StopRule::Rule1: d = stop_rule_1(trace, m.h, m.delta, c.a1, c.a2); break;
              case StopRule::Rule2: d = stop_rule_2(p, trace, c.a0, c.a1); break;
              case StopRule::Rule3: d = stop_rule_3(p, trace, c.a, c.a1, c.a2); break;
            }
            SolveReport out;
            out.q = trace.iterates[d.stop_index];
            out.method = "landweber";
            out.stop_index = d.stop_index;
            out.residual_norm = norm2(a * out.q - f);
            out.solution_norm = norm2(out.q);
            out.diagnostics = rule_name(d.rule) + " condition=" + d.triggered_condition +
                              " scale=" + std::to_string(trace.scale_factor);
            return out;
          },
          [&](const GdMethod& m) {
            const Vector q0 = m.q0.value_or(Vector(a.cols()));
            GdResult g = gd_train(a, f, m.config, q0);
            SolveReport out;
            out.q = std::move(g.q);
            out.method = "gd";
            out.stop_index = g.q_index;
            out.residual_norm = norm2(a * out.q - f);
            out.solution_norm = norm2(out.q);
            out.diagnostics = g.stopped_early ? "early_stopped" : "ran_to_end";
            for (const auto& w : g.warnings) out.diagnostics += "; warning: " + w;
            return out;
          },
      },
      method);
}

}  // namespace lnnreg
