#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "reports.hpp"
#include "toepexp/bounds.hpp"
#include "toepexp/dense.hpp"
#include "toepexp/driver.hpp"
#include "toepexp/gsf.hpp"

namespace toepexp::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const char* command_name(Command c) {
  switch (c) {
    case Command::expm: return "expm";
    case Command::condition: return "condition";
    case Command::bounds: return "bounds";
    case Command::bench: return "bench";
    case Command::gap_sweep: return "gap-sweep";
  }
  return "?";
}

struct Problem {
  std::size_t n;
  ToeplitzMatrix a;
};

std::vector<Problem> problems(const ExperimentConfig& cfg) {
  std::vector<Problem> out;
  if (cfg.matrix_path) {
    ToeplitzMatrix a = load_toeplitz(*cfg.matrix_path);
    out.push_back({static_cast<std::size_t>(a.size()), std::move(a)});
    return out;
  }
  for (const std::size_t n : cfg.n_list) out.push_back({n, ToeplitzMatrix::from_symbol(cfg.symbol, n)});
  return out;
}

Json config_json(const ExperimentConfig& cfg) {
  Json c = Json::object();
  c["command"] = command_name(cfg.command);
  if (cfg.matrix_path) {
    c["matrix"] = *cfg.matrix_path;
  } else {
    c["symbol"] = to_string(cfg.symbol.kind);
    c["coefficients"] = cfg.symbol.method == CoefficientMethod::closed_form ? "closed-form" : "quadrature";
    c["quadrature_size"] = cfg.symbol.quadrature_size;
    c["n"] = cfg.n_list;
  }
  c["t"] = cfg.t;
  c["gamma"] = cfg.gamma;
  c["tol_exp"] = cfg.tol_exp_list;
  if (cfg.command == Command::bounds) {
    c["eps"] = cfg.eps_list;
    c["seed"] = cfg.seed;
    c["seeds"] = cfg.seeds;
  }
  c["m_max"] = cfg.m_max;
  if (cfg.command == Command::expm) c["algorithm"] = cfg.algorithm;
  c["verify"] = cfg.verify;
  c["dense_cap"] = dense_cap();
  return c;
}

/// Reference for relative errors: the dense exponential when verification is
/// requested and n fits under the dense cap, otherwise a tight exact run.
std::pair<CVector, std::string> reference_for(const ExperimentConfig& cfg, const ToeplitzMatrix& a, const CVector& v) {
  if (cfg.verify && static_cast<std::size_t>(a.size()) <= dense_cap()) {
    return {reference_solution(a, v, cfg.t, ReferenceMode::dense_expm), "dense_expm"};
  }
  return {reference_solution(a, v, cfg.t, ReferenceMode::tight_arnoldi, cfg.gamma), "tight_arnoldi"};
}

class Emitter {
 public:
  explicit Emitter(const ExperimentConfig& cfg) : cfg_(cfg) {}
  Json time(double seconds) const { return cfg_.timings ? Json(seconds) : Json(nullptr); }

 private:
  const ExperimentConfig& cfg_;
};

Json run_fields(const RunReport& r, const Emitter& em) {
  Json row = Json::object();
  row["algorithm"] = to_string(r.algorithm);
  row["tol_exp"] = r.budget.tol_exp;
  row["tol_sys"] = r.expm_result.tol_sys_used;
  row["m"] = r.expm_result.m;
  row["converged"] = r.expm_result.converged;
  row["breakdown"] = r.expm_result.breakdown;
  row["gmres_iters_x"] = r.gsf_solve_iters.first;
  row["gmres_iters_y"] = r.gsf_solve_iters.second;
  row["residual"] = r.expm_result.residual_history.empty() ? 0.0 : r.expm_result.residual_history.back();
  row["Error"] = r.relative_error ? Json(*r.relative_error) : Json(nullptr);
  row["gap"] = r.residual_gap ? Json(*r.residual_gap) : Json(nullptr);
  row["assumption_ratio"] = r.assumption_ratio;
  row["CPU"] = em.time(r.wall_times.total_seconds);
  row["cpu_solve"] = em.time(r.wall_times.solve_systems_seconds);
  row["cpu_arnoldi"] = em.time(r.wall_times.arnoldi_seconds);
  row["cpu_expm"] = em.time(r.wall_times.small_expm_seconds);
  return row;
}

RunOptions run_options(const ExperimentConfig& cfg, double tol_exp) {
  RunOptions o;
  o.tol_exp = tol_exp;
  o.m_max = cfg.m_max;
  o.retain_basis = cfg.verify;
  return o;
}

Report cmd_expm(const ExperimentConfig& cfg) {
  const Emitter em(cfg);
  Report rep;
  rep.columns = {"n",   "algorithm", "tol_exp",  "tol_sys", "m",          "converged",   "gmres_iters_x",
                 "gmres_iters_y", "residual", "y_norm", "Error", "gap", "assumption_ratio", "CPU",
                 "cpu_solve",     "cpu_arnoldi", "cpu_expm"};
  for (const Problem& p : problems(cfg)) {
    const CVector v = CVector::Ones(static_cast<Eigen::Index>(p.n));
    std::optional<CVector> y_ref;
    std::string ref_kind;
    if (cfg.verify) std::tie(y_ref, ref_kind) = reference_for(cfg, p.a, v);
    for (const double tol : cfg.tol_exp_list) {
      std::vector<Algorithm> algs;
      if (cfg.algorithm != "inexact") algs.push_back(Algorithm::exact);
      if (cfg.algorithm != "exact") algs.push_back(Algorithm::inexact);
      for (const Algorithm alg : algs) {
        RunReport r = alg == Algorithm::exact ? run_exact(p.a, v, cfg.t, cfg.gamma, run_options(cfg, tol))
                                              : run_inexact(p.a, v, cfg.t, cfg.gamma, run_options(cfg, tol));
        if (y_ref) attach_reference(r, *y_ref);
        Json row = Json::object();
        row["n"] = p.n;
        row.update(run_fields(r, em));
        const CVector& y = r.expm_result.y;
        row["y_norm"] = two_norm_vec(y);
        row["y_first"] = {y[0].real(), y[0].imag()};
        row["y_last"] = {y[y.size() - 1].real(), y[y.size() - 1].imag()};
        row["reference"] = y_ref ? Json(ref_kind) : Json(nullptr);
        row["budget"] = {{"tol_exp", r.budget.tol_exp},
                         {"tol_sys", r.budget.tol_sys},
                         {"gamma", r.budget.gamma},
                         {"m_cap", r.budget.m_cap},
                         {"norm_factor", r.budget.norm_factor}};
        row["residual_history"] = r.expm_result.residual_history;
        rep.rows.push_back(std::move(row));
      }
    }
  }
  return rep;
}

Report cmd_condition(const ExperimentConfig& cfg) {
  const Emitter em(cfg);
  Report rep;
  rep.columns = {"n",   "gamma", "kappa1", "kappa_gsf", "kappa_gsf_exact", "ratio", "kappa_eff_1", "kappa_eff_2_estimate",
                 "xi0_abs", "gmres_iters_x", "gmres_iters_y", "cpu_gsf", "cpu_dense"};
  for (const Problem& p : problems(cfg)) {
    const ToeplitzMatrix t = p.a.shifted(cfg.gamma);
    auto start = Clock::now();
    const GsfInverse g = build_gsf(t, 1e-14);
    const GsfConditionNumbers proxy = gsf_condition_number(g, t, NormMode::colrow_proxy);
    const double cpu_gsf = seconds_since(start);
    const GsfConditionNumbers exact = gsf_condition_number(g, t, NormMode::exact_1norm);
    Json row = Json::object();
    row["n"] = p.n;
    row["gamma"] = cfg.gamma;
    Json kappa1 = nullptr;
    Json cpu_dense = nullptr;
    if (p.n <= dense_cap()) {
      start = Clock::now();
      kappa1 = dense::condition_1norm(t.to_dense());
      cpu_dense = em.time(seconds_since(start));
    }
    row["kappa1"] = kappa1;
    row["kappa_gsf"] = proxy.kappa_gsf;
    row["kappa_gsf_exact"] = exact.kappa_gsf;
    row["ratio"] = kappa1.is_null() ? Json(nullptr) : Json(proxy.kappa_gsf / kappa1.get<double>());
    row["kappa_eff_1"] = proxy.kappa_eff_1;
    row["kappa_eff_2_estimate"] = proxy.kappa_eff_2_estimate;
    row["xi0_abs"] = std::abs(g.xi0());
    row["gmres_iters_x"] = g.x_report()->iterations;
    row["gmres_iters_y"] = g.y_report()->iterations;
    row["cpu_gsf"] = em.time(cpu_gsf);
    row["cpu_dense"] = cpu_dense;
    row["t_norm_proxy"] = proxy.t_norm;
    row["t_norm_exact"] = exact.t_norm;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

Report cmd_bounds(const ExperimentConfig& cfg) {
  Report rep;
  rep.columns = {"n",           "eps",          "seed",           "eps_tilde",    "new_abs_bound",
                 "gh_abs_bound", "abs_error_2norm", "new_rel_bound", "gh_rel_bound", "rel_error_2norm",
                 "new_rel_bound_product", "new_rel_bound_1norm", "rel_error_1norm"};
  for (const Problem& p : problems(cfg)) {
    const ToeplitzMatrix t = p.a.shifted(cfg.gamma);
    const DenseInverseOracle oracle = DenseInverseOracle::build(t);
    const CVector x = oracle.inverse.col(0);
    const CVector y = oracle.inverse.col(oracle.inverse.cols() - 1);
    for (const double eps : cfg.eps_list) {
      for (std::size_t s = 0; s < cfg.seeds; ++s) {
        const std::uint64_t seed = cfg.seed + s;
        const BoundReport b = evaluate_bounds(oracle, x, y, eps, seed);
        Json row = Json::object();
        row["n"] = p.n;
        row["eps"] = eps;
        row["seed"] = seed;
        row["eps_tilde"] = b.eps_tilde;
        row["new_abs_bound"] = b.abs_bound_2norm;
        row["gh_abs_bound"] = b.gh_abs_bound_2norm;
        row["abs_error_2norm"] = b.true_errors_2norm_perturbation.abs_2norm;
        row["new_rel_bound"] = b.rel_bound_2norm;
        row["gh_rel_bound"] = b.gh_rel_bound_2norm;
        row["rel_error_2norm"] = b.true_errors_2norm_perturbation.rel_2norm;
        row["new_rel_bound_product"] = b.rel_bound_2norm_product;
        row["new_rel_bound_1norm"] = b.rel_bound_1norm;
        row["rel_error_1norm"] = b.true_errors.rel_1norm;
        row["one_norm_perturbation"] = {{"abs_1norm", b.true_errors.abs_1norm},
                                        {"abs_2norm", b.true_errors.abs_2norm},
                                        {"rel_1norm", b.true_errors.rel_1norm},
                                        {"rel_2norm", b.true_errors.rel_2norm}};
        rep.rows.push_back(std::move(row));
      }
    }
  }
  return rep;
}

Report cmd_bench(const ExperimentConfig& cfg) {
  const Emitter em(cfg);
  Report rep;
  rep.columns = {"n",   "algorithm", "tol_exp",   "tol_sys",     "m",       "gmres_iters_x", "gmres_iters_y",
                 "Error", "gap",     "CPU",       "cpu_solve",   "cpu_arnoldi", "cpu_expm"};
  for (const Problem& p : problems(cfg)) {
    const CVector v = CVector::Ones(static_cast<Eigen::Index>(p.n));
    const auto [y_ref, ref_kind] = reference_for(cfg, p.a, v);
    for (const double tol : cfg.tol_exp_list) {
      for (const Algorithm alg : {Algorithm::exact, Algorithm::inexact}) {
        RunReport r = alg == Algorithm::exact ? run_exact(p.a, v, cfg.t, cfg.gamma, run_options(cfg, tol))
                                              : run_inexact(p.a, v, cfg.t, cfg.gamma, run_options(cfg, tol));
        attach_reference(r, y_ref);
        Json row = Json::object();
        row["n"] = p.n;
        row.update(run_fields(r, em));
        row["reference"] = ref_kind;
        rep.rows.push_back(std::move(row));
      }
    }
  }
  return rep;
}

Report cmd_gap_sweep(const ExperimentConfig& cfg) {
  const Emitter em(cfg);
  Report rep;
  rep.columns = {"n", "tol_exp", "tol_sys", "gap", "gap_ratio", "Error", "m", "gmres_iters_x", "gmres_iters_y",
                 "assumption_ratio", "CPU"};
  for (const Problem& p : problems(cfg)) {
    const CVector v = CVector::Ones(static_cast<Eigen::Index>(p.n));
    const auto [y_ref, ref_kind] = reference_for(cfg, p.a, v);
    const std::vector<SweepCell> cells = tolerance_sweep(p.a, v, cfg.t, cfg.gamma, cfg.tol_exp_list, y_ref, cfg.threads);
    for (const SweepCell& c : cells) {
      Json row = Json::object();
      row["n"] = p.n;
      row.update(run_fields(c.report, em));
      row["gap_ratio"] = *c.report.residual_gap / c.tol_exp;
      row["reference"] = ref_kind;
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

void add_common(CLI::App* sub, ExperimentConfig& cfg, std::string& symbol, std::string& coefficients,
                std::string& format) {
  sub->add_option("--symbol", symbol, "Test matrix family: theta2, theta2-itheta3, parter")
      ->check(CLI::IsMember({"theta2", "theta2-itheta3", "parter"}));
  sub->add_option("--coefficients", coefficients, "Fourier coefficients: quadrature or closed-form")
      ->check(CLI::IsMember({"quadrature", "closed-form"}));
  sub->add_option("--quadrature-size", cfg.symbol.quadrature_size, "Quadrature points (0 = 8n)");
  sub->add_option("--matrix", cfg.matrix_path, "Toeplitz matrix file (replaces --symbol/--n)")
      ->check(CLI::ExistingFile);
  sub->add_option("--n", cfg.n_list, "Matrix sizes")->expected(1, -1)->check(CLI::PositiveNumber);
  sub->add_option("--t", cfg.t, "Time t")->check(CLI::NonNegativeNumber);
  sub->add_option("--gamma", cfg.gamma, "Shift gamma")->check(CLI::PositiveNumber);
  sub->add_option("--tol-exp", cfg.tol_exp_list, "Exponential tolerances")
      ->expected(1, -1)
      ->check(CLI::PositiveNumber);
  sub->add_option("--m-max", cfg.m_max, "Maximum Arnoldi steps")->check(CLI::PositiveNumber);
  sub->add_option("--seed", cfg.seed, "Random seed");
  sub->add_option("--output", cfg.output_path, "Report file (default: standard output)");
  sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--verify", cfg.verify, "Dense-oracle errors and residual-gap checks");
  sub->add_flag("!--no-timings", cfg.timings, "Omit wall-clock columns (byte-reproducible reports)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Toeplitz matrix exponential via shift-and-invert Arnoldi with a Gohberg-Semencul inverse"};
  app.require_subcommand(1);
  ExperimentConfig cfg;
  std::string symbol = "theta2";
  std::string coefficients = "quadrature";
  std::string format;

  struct Sub {
    Command command;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {Command::expm, "expm", "Approximate exp(-tA)v and report the run"},
      {Command::condition, "condition", "GSF condition numbers of I + gamma A"},
      {Command::bounds, "bounds", "GSF stability bounds against dense-oracle errors"},
      {Command::bench, "bench", "Exact vs inexact runs: tol_sys, Error, CPU"},
      {Command::gap_sweep, "gap-sweep", "Residual gap over a tol_exp sweep"},
  };
  std::vector<std::pair<CLI::App*, Command>> registered;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, cfg, symbol, coefficients, format);
    if (s.command == Command::expm) {
      sub->add_option("--algorithm", cfg.algorithm, "exact, inexact or both")
          ->check(CLI::IsMember({"exact", "inexact", "both"}));
    }
    if (s.command == Command::bounds) {
      sub->add_option("--eps", cfg.eps_list, "Perturbation sizes")->expected(1, -1)->check(CLI::PositiveNumber);
      sub->add_option("--seeds", cfg.seeds, "Number of consecutive seeds per cell")->check(CLI::PositiveNumber);
    }
    if (s.command == Command::gap_sweep) {
      sub->add_option("--threads", cfg.threads, "Concurrent sweep cells (0 = hardware concurrency)");
    }
    registered.emplace_back(sub, s.command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (const auto& [sub, command] : registered) {
    if (sub->parsed()) cfg.command = command;
  }
  cfg.symbol.kind = *parse_symbol(symbol);
  cfg.symbol.method = coefficients == "closed-form" ? CoefficientMethod::closed_form : CoefficientMethod::quadrature;
  if (format.empty()) {
    cfg.format = (cfg.command == Command::expm || cfg.command == Command::condition) ? Format::json : Format::csv;
  } else {
    cfg.format = format == "json" ? Format::json : Format::csv;
  }

  try {
    Report rep;
    switch (cfg.command) {
      case Command::expm: rep = cmd_expm(cfg); break;
      case Command::condition: rep = cmd_condition(cfg); break;
      case Command::bounds: rep = cmd_bounds(cfg); break;
      case Command::bench: rep = cmd_bench(cfg); break;
      case Command::gap_sweep: rep = cmd_gap_sweep(cfg); break;
    }
    rep.command = command_name(cfg.command);
    rep.config = config_json(cfg);

    std::ostringstream buffer;
    if (cfg.format == Format::json) {
      write_json(buffer, rep);
    } else {
      write_csv(buffer, rep);
    }
    if (cfg.output_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(cfg.output_path, std::ios::binary);
      if (!file || !(file << buffer.str())) {
        throw Error(ErrorKind::Io, "cli_reports::run_cli", "cannot write " + cfg.output_path);
      }
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return (e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::Io) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace toepexp::cli
