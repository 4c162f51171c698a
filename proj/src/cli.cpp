#include "lnnreg/cli.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lnnreg/error.hpp"
#include "lnnreg/experiment.hpp"
#include "lnnreg/io.hpp"
#include "lnnreg/lnn.hpp"
#include "lnnreg/param_select.hpp"
#include "lnnreg/pseudo.hpp"
#include "lnnreg/regularizers.hpp"
#include "lnnreg/solve.hpp"
#include "lnnreg/svd.hpp"

namespace lnnreg::cli {

namespace {

using nlohmann::json;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::NonFinite: return kParse;
    case ErrorCode::DimMismatch: return kShape;
    default: return kSolver;
  }
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "--rule-consts: bad number '" + tok + "'");
    }
  }
  return out;
}

// Solver selection shared by `solve` and `train`.
struct MethodFlags {
  std::string method = "pseudo";
  double alpha = 0.0;
  std::string q0_file;
  double h = 0.0;
  double delta = 0.0;
  double p = 2.0;
  int rule = 2;
  std::string rule_consts;
  std::size_t max_iter = 10000;
  double lr = 0.0;
  std::size_t epochs = 10000;
  double l1 = 0.0;
  double l2 = 0.0;
  double step_tol = 0.0;

  CLI::Option* alpha_opt = nullptr;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* lr_opt = nullptr;
};

void add_method_flags(CLI::App* app, MethodFlags& f) {
  app->add_option("--method", f.method, "Solver")
      ->check(CLI::IsMember({"pseudo", "tikhonov", "lavrentiev", "landweber", "gd"}));
  f.alpha_opt = app->add_option("--alpha", f.alpha, "Regularisation parameter");
  app->add_option("--q0-file", f.q0_file, "Trial solution q0 (vector CSV)");
  app->add_option("--h", f.h, "Operator error level");
  f.delta_opt = app->add_option("--delta", f.delta, "Data error level");
  f.p_opt = app->add_option("--p", f.p, "Exponent of the a-priori rule alpha = (h+delta)^(1/p)");
  app->add_option("--rule", f.rule, "Landweber stopping rule")->check(CLI::Range(1, 3));
  app->add_option("--rule-consts", f.rule_consts,
                  "Rule constants: rule 1 'a1,a2'; rule 2 'a0,a1'; rule 3 'a,a1,a2'");
  app->add_option("--max-iter", f.max_iter, "Landweber iteration cap");
  f.lr_opt = app->add_option("--lr", f.lr, "Gradient-descent learning rate (default 1/(2 sigma_0^2 + l2))");
  app->add_option("--epochs", f.epochs, "Gradient-descent epochs");
  app->add_option("--l1", f.l1, "L1 penalty weight");
  app->add_option("--l2", f.l2, "L2 penalty weight, objective (l2/2)|q|^2");
  app->add_option("--step-tol", f.step_tol, "Gradient-descent step-norm stopping tolerance");
}

// `system` is the single system being solved, when there is one; it enables
// discrepancy-based choice of alpha.
Method build_method(const MethodFlags& f, std::optional<std::pair<Matrix, Vector>> system,
                    std::size_t n_cols) {
  std::optional<Vector> q0;
  if (!f.q0_file.empty()) {
    q0 = io::read_vector(f.q0_file);
    if (q0->size() != n_cols) throw Error(ErrorCode::DimMismatch, "q0 length does not match the system");
  }

  auto choose_alpha = [&]() -> double {
    if (f.alpha_opt->count() > 0) return f.alpha;
    if (f.p_opt->count() > 0) return apriori_alpha_rule(f.h, f.delta, f.p);
    if (f.delta_opt->count() > 0 && system) {
      const NoisyProblem p{system->first, system->second, f.h, f.delta};
      return f.h > 0.0 ? generalized_discrepancy_alpha(p).alpha
                       : discrepancy_alpha(p.a_h, p.f_delta, p.delta).alpha;
    }
    throw Error(ErrorCode::BadAlpha, "--method " + f.method + " needs --alpha, --p or --delta");
  };

  if (f.method == "pseudo") return PseudoMethod{};
  if (f.method == "tikhonov") return TikhonovMethod{choose_alpha(), q0};
  if (f.method == "lavrentiev") return LavrentievMethod{choose_alpha(), q0};
  if (f.method == "landweber") {
    LandweberMethod lw;
    lw.rule = static_cast<StopRule>(f.rule - 1);
    lw.h = f.h;
    lw.delta = f.delta;
    lw.max_iter = f.max_iter;
    lw.q0 = q0;
    if (!f.rule_consts.empty()) {
      const auto c = parse_number_list(f.rule_consts);
      auto& k = lw.constants;
      const std::size_t want = f.rule == 3 ? 3 : 2;
      if (c.size() != want) {
        throw Error(ErrorCode::InvalidArgument,
                    "--rule-consts needs " + std::to_string(want) + " values for rule " +
                        std::to_string(f.rule));
      }
      if (f.rule == 1) {
        k.a1 = c[0];
        k.a2 = c[1];
      } else if (f.rule == 2) {
        k.a0 = c[0];
        k.a1 = c[1];
      } else {
        k.a = c[0];
        k.a1 = c[1];
        k.a2 = c[2];
      }
    }
    return lw;
  }
  GdMethod g;
  g.q0 = q0;
  g.config.max_epochs = f.epochs;
  g.config.l1_alpha = f.l1;
  g.config.l2_alpha = f.l2;
  g.config.step_tolerance = f.step_tol;
  if (f.lr_opt->count() > 0) {
    g.config.learning_rate = f.lr;
  } else if (system) {
    // Largest curvature of the objective is 2*sigma_0^2 + l2.
    const double s0 = spectral_norm(system->first);
    const double curvature = 2.0 * s0 * s0 + f.l2;
    g.config.learning_rate = curvature > 0.0 ? 1.0 / curvature : 1.0;
  } else {
    throw Error(ErrorCode::InvalidArgument, "--method gd needs --lr here");
  }
  return g;
}

void print_report(std::ostream& out, const SolveReport& r, bool as_json) {
  if (as_json) {
    json j;
    j["q"] = r.q.as_std();
    j["residual_norm"] = r.residual_norm;
    j["solution_norm"] = r.solution_norm;
    j["alpha"] = optional_json(r.alpha);
    j["stop_index"] = r.stop_index ? json(*r.stop_index) : json(nullptr);
    j["method"] = r.method;
    out << j.dump() << '\n';
    return;
  }
  out << "method = " << r.method << '\n';
  out << "q = " << io::format_row(r.q) << '\n';
  out << "residual_norm = " << io::format_number(r.residual_norm) << '\n';
  out << "solution_norm = " << io::format_number(r.solution_norm) << '\n';
  if (r.alpha) out << "alpha = " << io::format_number(*r.alpha) << '\n';
  if (r.stop_index) out << "stop_index = " << *r.stop_index << '\n';
  if (!r.diagnostics.empty()) out << "diagnostics = " << r.diagnostics << '\n';
}

std::string format_condition(double c) {
  return std::isinf(c) ? std::string("inf") : io::format_number(c);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
  CLI::App app{"Regularised solvers for linear systems and linear-network weight recovery",
               "lnnreg"};
  app.require_subcommand(1);
  // -h would collide with the operator error level --h.
  app.set_help_flag("--help", "Print this help message and exit");

  std::function<void()> action;

  // svd / pinv / rank
  std::string matrix_file;
  bool show_vectors = false;
  double tol = 0.0;
  auto* svd_cmd = app.add_subcommand("svd", "Print singular values of a matrix");
  svd_cmd->add_option("file", matrix_file, "Matrix CSV")->required();
  svd_cmd->add_flag("--vectors", show_vectors, "Also print U and V");
  svd_cmd->callback([&] {
    action = [&] {
      const Svd s = svd(io::read_matrix(matrix_file));
      out << io::format_row(s.sigma) << '\n';
      if (show_vectors) {
        out << "# U\n" << io::format_matrix(s.u) << "# V\n" << io::format_matrix(s.v);
      }
    };
  });

  auto* pinv_cmd = app.add_subcommand("pinv", "Print the Moore-Penrose pseudo-inverse");
  pinv_cmd->add_option("file", matrix_file, "Matrix CSV")->required();
  auto* pinv_tol = pinv_cmd->add_option("--tol", tol, "Relative singular-value cutoff");
  pinv_cmd->callback([&] {
    action = [&] {
      const Matrix a = io::read_matrix(matrix_file);
      out << io::format_matrix(pinv_tol->count() ? pinv(a, tol) : pinv(a));
    };
  });

  auto* rank_cmd = app.add_subcommand("rank", "Print the numerical rank");
  rank_cmd->add_option("file", matrix_file, "Matrix CSV")->required();
  auto* rank_tol = rank_cmd->add_option("--tol", tol, "Absolute singular-value threshold");
  rank_cmd->callback([&] {
    action = [&] {
      const Matrix a = io::read_matrix(matrix_file);
      out << (rank_tol->count() ? numerical_rank(a, tol) : numerical_rank(a)) << '\n';
    };
  });

  // solve
  std::string a_file;
  std::string f_file;
  bool as_json = false;
  MethodFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "Solve A q = f with a chosen method");
  solve_cmd->add_option("a_file", a_file, "Operator matrix CSV")->required();
  solve_cmd->add_option("f_file", f_file, "Right-hand side vector CSV")->required();
  add_method_flags(solve_cmd, solve_flags);
  solve_cmd->add_flag("--json", as_json, "Print a single JSON object");
  solve_cmd->callback([&] {
    action = [&] {
      const Matrix a = io::read_matrix(a_file);
      const Vector f = io::read_vector(f_file);
      if (f.size() != a.rows()) throw Error(ErrorCode::DimMismatch, "f length does not match A");
      const Method m = build_method(solve_flags, std::make_pair(a, f), a.cols());
      print_report(out, solve(a, f, m), as_json);
    };
  });

  // select-alpha
  std::string principle = "discrepancy";
  double sel_h = 0.0;
  double sel_delta = 0.0;
  double sel_p = 2.0;
  auto* sel_cmd = app.add_subcommand("select-alpha", "Choose the regularisation parameter");
  sel_cmd->add_option("a_file", a_file, "Operator matrix CSV")->required();
  sel_cmd->add_option("f_file", f_file, "Right-hand side vector CSV")->required();
  sel_cmd->add_option("--principle", principle, "Selection principle")
      ->check(CLI::IsMember({"discrepancy", "generalized", "apriori"}));
  sel_cmd->add_option("--h", sel_h, "Operator error level");
  sel_cmd->add_option("--delta", sel_delta, "Data error level");
  sel_cmd->add_option("--p", sel_p, "Exponent of the a-priori rule");
  auto* sel_tol = sel_cmd->add_option("--tol", tol, "Gap tolerance (default 1e-10*|f|)");
  sel_cmd->callback([&] {
    action = [&] {
      const Matrix a = io::read_matrix(a_file);
      const Vector f = io::read_vector(f_file);
      if (f.size() != a.rows()) throw Error(ErrorCode::DimMismatch, "f length does not match A");
      const NoisyProblem p{a, f, sel_h, sel_delta};
      const std::optional<double> t = sel_tol->count() ? std::optional<double>(tol) : std::nullopt;
      if (principle == "apriori") {
        out << "alpha = " << io::format_number(apriori_alpha_rule(sel_h, sel_delta, sel_p)) << '\n';
        return;
      }
      const AlphaSearchResult r = principle == "discrepancy"
                                      ? discrepancy_alpha(a, f, sel_delta, t)
                                      : generalized_discrepancy_alpha(p, t);
      out << "alpha = " << io::format_number(r.alpha) << '\n';
      out << "discrepancy_gap = " << io::format_number(r.discrepancy_gap) << '\n';
      out << "iterations = " << r.iterations << '\n';
    };
  });

  // train
  std::string g_file;
  std::string h_file;
  std::string model_out;
  bool with_bias = false;
  MethodFlags train_flags;
  auto* train_cmd = app.add_subcommand("train", "Recover the weight matrix Q from G and H");
  train_cmd->add_option("g_file", g_file, "Inputs as columns (N x K CSV)")->required();
  train_cmd->add_option("h_file", h_file, "Answers as columns (M x K CSV)")->required();
  add_method_flags(train_cmd, train_flags);
  train_cmd->add_flag("--bias", with_bias, "Fit a bias vector as well");
  train_cmd->add_option("--model-out", model_out, "Write the model JSON here instead of stdout");
  train_cmd->callback([&] {
    action = [&] {
      const TrainingSet t{io::read_matrix(g_file), io::read_matrix(h_file)};
      t.validate();
      std::optional<std::pair<Matrix, Vector>> single;
      if (t.h.rows() == 1) single.emplace(t.g.transpose(), t.h.row(0));
      const std::size_t n_cols = t.g.rows() + (with_bias ? 1 : 0);
      if (with_bias && single) {
        Matrix g_aug(t.g.rows() + 1, t.g.cols(), 1.0);
        for (std::size_t i = 0; i < t.g.rows(); ++i)
          for (std::size_t j = 0; j < t.g.cols(); ++j) g_aug(i, j) = t.g(i, j);
        single->first = g_aug.transpose();
      }
      const Method m = build_method(train_flags, single, n_cols);
      const WeightModel model = with_bias ? train_with_bias(t, m) : train(t, m);
      const std::string text = io::model_to_json(model).dump(2) + "\n";
      if (model_out.empty()) {
        out << text;
      } else {
        io::write_text(model_out, text);
        out << "method = " << model.method_tag << '\n';
        out << "rows = " << model.q.rows() << '\n';
        for (std::size_t m_row = 0; m_row < model.per_row_reports.size(); ++m_row) {
          out << "row " << m_row << " residual_norm = "
              << io::format_number(model.per_row_reports[m_row].residual_norm) << '\n';
        }
      }
    };
  });

  // predict
  std::string model_in;
  std::string input_file;
  bool columns = false;
  auto* predict_cmd = app.add_subcommand("predict", "Apply a trained model to an input vector");
  predict_cmd->add_option("--model-in", model_in, "Model JSON")->required();
  predict_cmd->add_option("input", input_file, "Input vector CSV")->required();
  predict_cmd->add_flag("--columns", columns,
                        "Treat the input as an N x K matrix of column inputs; one output row each");
  predict_cmd->callback([&] {
    action = [&] {
      json j;
      try {
        j = json::parse(io::read_text(model_in));
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, model_in + ": " + e.what());
      }
      const WeightModel model = io::model_from_json(j);
      if (columns) {
        const Matrix g = io::read_matrix(input_file);
        for (std::size_t k = 0; k < g.cols(); ++k) out << io::format_row(predict(model, g.col(k))) << '\n';
      } else {
        out << io::format_row(predict(model, io::read_vector(input_file))) << '\n';
      }
    };
  });

  // diagnose
  double noise_floor = 0.0;
  auto* diag_cmd = app.add_subcommand("diagnose", "Rank and identifiability report for G");
  diag_cmd->add_option("g_file", g_file, "Inputs as columns (N x K CSV)")->required();
  diag_cmd->add_option("--noise-floor", noise_floor, "Singular values at or below this are unstable");
  diag_cmd->callback([&] {
    action = [&] {
      const Matrix g = io::read_matrix(g_file);
      const DiagnosisReport d = diagnose(TrainingSet{g, Matrix(1, g.cols())}, noise_floor);
      out << "rank_g," << d.rank_g << '\n';
      out << "full_rank," << (d.full_rank ? "true" : "false") << '\n';
      out << "rho," << d.rho << '\n';
      out << "k0," << d.k0 << '\n';
      out << "condition," << format_condition(d.condition) << '\n';
      out << "sigma," << io::format_row(d.sigma) << '\n';
    };
  });

  // experiment
  std::string spec_file;
  int experiment_status = kOk;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a noise sweep and print a CSV table");
  exp_cmd->add_option("spec", spec_file, "Experiment JSON")->required();
  exp_cmd->callback([&] {
    action = [&] {
      json j;
      try {
        j = json::parse(io::read_text(spec_file));
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, spec_file + ": " + e.what());
      }
      const auto rows = experiment::run(experiment::parse_spec(j));
      out << experiment::to_csv(rows);
      for (const auto& r : rows) {
        if (r.failure) experiment_status = kSolver;
      }
    };
  });

  std::vector<std::string> argv_storage = args.empty() ? std::vector<std::string>{"lnnreg"} : args;
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    action();
  } catch (const Error& e) {
    err << (color ? "\x1b[31merror:\x1b[0m " : "error: ") << e.what() << '\n';
    return exit_code_for(e);
  } catch (const json::exception& e) {
    err << (color ? "\x1b[31merror:\x1b[0m " : "error: ") << "ParseError: " << e.what() << '\n';
    return kParse;
  }
  return experiment_status;
}

}  // namespace lnnreg::cli
