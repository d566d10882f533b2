#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "minimax.hpp"

namespace minimax::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string subcommand;
  std::string payoff = "call";
  double strike = 1.0;
  std::string payoff_csv;
  double constant = 0.0;
  std::optional<double> lipschitz;
  double c = 0.04;
  int n = 1;
  std::vector<int> n_list{4, 16, 64, 256};
  std::optional<double> zeta;
  double delta = 0.25;
  std::size_t grid_size = 1025;
  std::size_t lp_grid_size = 513;
  std::optional<double> s_min;
  std::optional<double> s_max;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::string output;
  std::string format = "json";
  unsigned workers = 1;
  bool dry_run = false;
  std::vector<std::string> strategies{"zero", "bs-delta"};
  std::vector<double> truncation_levels{10, 100, 1000};
  std::string load;
  std::string save;
  std::string values_csv;
  std::string policy_csv;
  std::string loss_csv;
  int refine = 0;
  double spot = 1.0;

  ZetaRule zeta_rule() const { return zeta ? ZetaRule::fixed(*zeta) : ZetaRule::power(delta); }

  GameConfig game(int steps) const {
    GameConfig g;
    g.n = steps;
    g.c = c;
    g.zeta_rule = zeta_rule();
    g.grid_size = grid_size;
    g.lp_grid_size = lp_grid_size;
    g.s_min = s_min;
    g.s_max = s_max;
    g.workers = workers;
    return g;
  }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json nullable(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

Json to_json(const RunConfig& rc) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["subcommand"] = rc.subcommand;
  j["payoff"] = rc.payoff;
  j["K"] = rc.strike;
  j["payoff_csv"] = rc.payoff_csv;
  j["constant"] = rc.constant;
  j["lipschitz"] = nullable(rc.lipschitz);
  j["c"] = rc.c;
  j["n"] = rc.n;
  j["n_list"] = rc.n_list;
  j["zeta_rule"] = rc.zeta ? "explicit" : "power";
  j["zeta"] = nullable(rc.zeta);
  j["delta"] = rc.delta;
  j["grid_size"] = rc.grid_size;
  j["lp_grid_size"] = rc.lp_grid_size;
  j["s_min"] = nullable(rc.s_min);
  j["s_max"] = nullable(rc.s_max);
  j["samples"] = rc.samples;
  j["seed"] = rc.seed;
  j["output"] = rc.output;
  j["format"] = rc.format;
  j["workers"] = rc.workers;
  j["strategies"] = rc.strategies;
  j["truncation_levels"] = rc.truncation_levels;
  j["load"] = rc.load;
  j["save"] = rc.save;
  j["values_csv"] = rc.values_csv;
  j["policy_csv"] = rc.policy_csv;
  j["loss_csv"] = rc.loss_csv;
  j["refine"] = rc.refine;
  j["spot"] = rc.spot;
  return j;
}

Json to_json(const CheckReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["check"] = r.name;
  j["status"] = to_string(r.status);
  Json params = Json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  j["parameters"] = params;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"label", row.label},
                    {"measured", row.measured},
                    {"bound", row.bound},
                    {"margin", row.margin},
                    {"status", to_string(row.status)},
                    {"note", row.note}});
  }
  j["rows"] = rows;
  j["message"] = r.message;
  return j;
}

PayoffSpec make_payoff(const RunConfig& rc) {
  if (rc.payoff == "call") return make_call(rc.strike);
  if (rc.payoff == "put") return make_put(rc.strike);
  if (rc.payoff == "identity") return make_identity();
  if (rc.payoff == "constant") return make_constant(rc.constant);
  if (rc.payoff == "csv") {
    if (rc.payoff_csv.empty()) throw ConfigError("payoff = csv needs --payoff-csv");
    return load_payoff_csv(rc.payoff_csv, rc.lipschitz);
  }
  throw ConfigError("unknown payoff '" + rc.payoff + "' (call, put, identity, constant, csv)");
}

void validate_common(const RunConfig& rc) {
  if (!(rc.c > 0.0)) throw ConfigError("c must be > 0");
  if (rc.format != "json" && rc.format != "csv" && rc.format != "human") {
    throw ConfigError("format must be json, csv or human");
  }
  if (rc.workers < 1) throw ConfigError("workers must be >= 1");
}

// Output sink: the --output file when given, else `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot open output '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::ofstream open_file(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  return f;
}

// --- subcommands -----------------------------------------------------------

int cmd_price_bs(const RunConfig& rc, std::ostream& out) {
  const PayoffSpec g = make_payoff(rc);
  const bool is_call = g.kind() == PayoffKind::call;
  struct Record {
    std::string method;
    double value, stderr_value;
    std::size_t samples;
    bool mc;
  };
  std::vector<Record> records;
  const double beta = is_call && g.strike() > 0.0 ? bs_price_closed_form(g.strike(), rc.c) : bs_price_closed_form(g, rc.c);
  records.push_back({"closed-form", beta, 0.0, 0, false});
  if (rc.samples > 0) {
    const McEstimate mc = bs_price_mc(g, rc.c, rc.samples, rc.seed, rc.workers);
    records.push_back({"monte-carlo", mc.estimate, mc.standard_error, mc.samples, true});
  }
  Sink sink(rc.output, out);
  if (rc.format == "csv") {
    sink.get() << "K,c,method,value,stderr,samples,seed\n";
    for (const auto& r : records) {
      sink.get() << (is_call ? fmt17(g.strike()) : "") << ',' << fmt17(rc.c) << ',' << r.method << ','
                 << fmt17(r.value) << ',' << fmt17(r.stderr_value) << ',' << r.samples << ','
                 << (r.mc ? std::to_string(rc.seed) : "") << '\n';
    }
  } else if (rc.format == "human") {
    for (const auto& r : records) {
      sink.get() << r.method << ": " << fmt6(r.value);
      if (r.mc) sink.get() << " +- " << fmt6(r.stderr_value) << " (" << r.samples << " samples)";
      sink.get() << '\n';
    }
  } else {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "price-bs";
    j["payoff"] = to_string(g.kind());
    Json arr = Json::array();
    for (const auto& r : records) {
      Json rec;
      rec["K"] = is_call ? Json(g.strike()) : Json(nullptr);
      rec["c"] = rc.c;
      rec["method"] = r.method;
      rec["value"] = r.value;
      rec["stderr"] = r.stderr_value;
      rec["samples"] = r.samples;
      rec["seed"] = r.mc ? Json(rc.seed) : Json(nullptr);
      arr.push_back(rec);
    }
    j["results"] = arr;
    sink.get() << j.dump() << '\n';
  }
  return kExitOk;
}

GameSolution solve_or_load(const RunConfig& rc, const PayoffSpec& g) {
  if (!rc.load.empty()) return load_solution(rc.load);
  return solve_game(rc.game(rc.n), g);
}

int cmd_solve_game(const RunConfig& rc, std::ostream& out) {
  const PayoffSpec g = make_payoff(rc);
  const GameSolution sol = solve_or_load(rc, g);
  if (!rc.save.empty()) save_solution(rc.save, sol);
  if (!rc.values_csv.empty()) {
    auto f = open_file(rc.values_csv);
    write_values_csv(f, sol);
  }
  if (!rc.policy_csv.empty()) {
    auto f = open_file(rc.policy_csv);
    write_policy_csv(f, sol.policy);
  }
  std::optional<RefinementEstimate> refinement;
  if (rc.refine >= 2) refinement = refine_and_estimate_error(rc.game(rc.n), g, rc.refine);
  const double beta = bs_price_closed_form(g, rc.c);

  Sink sink(rc.output, out);
  if (rc.format == "human") {
    sink.get() << "n " << sol.config.n << ", zeta " << fmt6(sol.zeta) << ", V0(1) " << fmt6(sol.value)
               << ", beta " << fmt6(beta) << ", gap " << fmt6(sol.value - beta) << '\n';
    return kExitOk;
  }
  if (rc.format == "csv") {
    sink.get() << "n,c,zeta,v,grid_size,value,beta,gap\n"
               << sol.config.n << ',' << fmt17(sol.config.c) << ',' << fmt17(sol.zeta) << ',' << fmt17(sol.v) << ','
               << sol.grid.size() << ',' << fmt17(sol.value) << ',' << fmt17(beta) << ','
               << fmt17(sol.value - beta) << '\n';
    return kExitOk;
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "solve-game";
  j["n"] = sol.config.n;
  j["c"] = sol.config.c;
  j["zeta"] = sol.zeta;
  j["v"] = sol.v;
  j["zeta_condition"] = sol.config.zeta_condition();
  j["grid_size"] = sol.grid.size();
  j["s_min"] = sol.grid.min_price();
  j["s_max"] = sol.grid.max_price();
  j["value"] = sol.value;
  j["beta"] = beta;
  j["gap"] = sol.value - beta;
  if (refinement) {
    j["refinement"] = {{"factor", rc.refine},
                       {"value_coarse", refinement->value_coarse},
                       {"value_fine", refinement->value_fine},
                       {"gap", refinement->gap}};
  }
  sink.get() << j.dump() << '\n';
  return kExitOk;
}

int cmd_sample_adversary(const RunConfig& rc, std::ostream& out) {
  const PayoffSpec g = make_payoff(rc);
  const GameSolution sol = solve_or_load(rc, g);
  const std::size_t count = rc.samples;
  Sink sink(rc.output, out);
  if (rc.format == "csv") {
    // Paths are generated one at a time in index order so memory stays flat.
    for (std::size_t i = 0; i < count; ++i) {
      write_path_row(sink.get(), sample_adversary_path(sol.policy, stream_seed(rc.seed, i)));
    }
    return kExitOk;
  }
  RunningStats terminal, second;
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const DiscretePath p = sample_adversary_path(sol.policy, stream_seed(rc.seed, i));
    terminal.add(p.terminal());
    second.add(p.terminal() * p.terminal());
    worst_ratio = std::max(worst_ratio, max_step_ratio(p));
  }
  if (rc.format == "human") {
    sink.get() << count << " paths, E[S_n] " << fmt6(terminal.mean()) << " +- " << fmt6(terminal.stderr_of_mean())
               << ", E[S_n^2] " << fmt6(second.mean()) << " (target " << fmt6(std::exp(sol.config.c)) << ")\n";
    return kExitOk;
  }
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "sample-adversary";
  j["n"] = sol.config.n;
  j["paths"] = count;
  j["seed"] = rc.seed;
  j["mean_terminal"] = terminal.mean();
  j["stderr_terminal"] = terminal.stderr_of_mean();
  j["mean_terminal_squared"] = second.mean();
  j["stderr_terminal_squared"] = second.stderr_of_mean();
  j["max_step_ratio"] = worst_ratio;
  j["zeta"] = sol.zeta;
  sink.get() << j.dump() << '\n';
  return kExitOk;
}

int cmd_hedge_sim(const RunConfig& rc, std::ostream& out) {
  const PayoffSpec g = make_payoff(rc);
  std::vector<Strategy> strategies;
  for (const auto& name : rc.strategies) strategies.push_back(make_strategy(name, g, rc.c));
  const GameSolution sol = solve_or_load(rc, g);
  const bool keep = !rc.loss_csv.empty();
  std::vector<LossSummary> results;
  for (const auto& s : strategies) {
    results.push_back(expected_loss(s, sol.policy, g, rc.samples, rc.seed, rc.workers, keep));
  }
  if (keep) {
    auto f = open_file(rc.loss_csv);
    f << "strategy,seed,path,terminal,payoff,trading_pnl,loss\n";
    for (const auto& r : results) {
      for (std::size_t i = 0; i < r.records.size(); ++i) {
        const auto& x = r.records[i];
        f << r.strategy << ',' << rc.seed << ',' << i << ',' << fmt17(x.terminal) << ',' << fmt17(x.payoff) << ','
          << fmt17(x.trading_pnl) << ',' << fmt17(x.loss) << '\n';
      }
    }
  }
  Sink sink(rc.output, out);
  if (rc.format == "csv") {
    sink.get() << "strategy,mean,stderr,min,max,paths,game_value\n";
    for (const auto& r : results) {
      sink.get() << r.strategy << ',' << fmt17(r.mean) << ',' << fmt17(r.standard_error) << ',' << fmt17(r.min)
                 << ',' << fmt17(r.max) << ',' << r.paths << ',' << fmt17(sol.value) << '\n';
    }
  } else if (rc.format == "human") {
    sink.get() << "game value " << fmt6(sol.value) << '\n';
    for (const auto& r : results) {
      sink.get() << r.strategy << ": " << fmt6(r.mean) << " +- " << fmt6(r.standard_error) << " [" << fmt6(r.min)
                 << ", " << fmt6(r.max) << "]\n";
    }
  } else {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "hedge-sim";
    j["n"] = sol.config.n;
    j["game_value"] = sol.value;
    j["paths"] = rc.samples;
    j["seed"] = rc.seed;
    Json arr = Json::array();
    for (const auto& r : results) {
      arr.push_back({{"strategy", r.strategy},
                     {"mean", r.mean},
                     {"stderr", r.standard_error},
                     {"min", r.min},
                     {"max", r.max},
                     {"paths", r.paths}});
    }
    j["results"] = arr;
    sink.get() << j.dump() << '\n';
  }
  return kExitOk;
}

// One node of the recursion at the last stage: sup E[g(s (1 + T))].
int cmd_solve_moment(const RunConfig& rc, std::ostream& out) {
  const PayoffSpec g = make_payoff(rc);
  const GameConfig cfg = rc.game(rc.n);
  const double zeta = cfg.zeta();
  const double v = cfg.step_variance();
  const PiecewiseLinear& f = g.function();
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < f.size(); ++i) {
    xs.push_back(f.xs()[i] / rc.spot - 1.0);
    ys.push_back(f.ys()[i]);
  }
  const PiecewiseLinear ft(xs, ys);
  MomentGridOptions mopts;
  mopts.uniform_points = rc.lp_grid_size;
  const MomentSolution sol = solve_moment_problem(ft, v, zeta, mopts);
  const CertificateReport cert = check_dual_certificate(ft, sol.law, sol.certificate);
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "solve-moment";
  j["spot"] = rc.spot;
  j["v"] = v;
  j["zeta"] = zeta;
  j["value"] = sol.value;
  Json atoms = Json::array();
  for (const auto& a : sol.law.atoms) atoms.push_back({{"t", a.t}, {"p", a.p}});
  j["law"] = atoms;
  j["certificate"] = {{"a", sol.certificate.a}, {"b", sol.certificate.b}, {"c", sol.certificate.cq}};
  j["certificate_ok"] = cert.ok;
  j["max_domination_violation"] = cert.max_domination_violation;
  j["duality_gap"] = cert.duality_gap;
  Sink sink(rc.output, out);
  sink.get() << j.dump() << '\n';
  return cert.ok ? kExitOk : kExitCheckFailed;
}

void print_sweep(const SweepResult& sw, const RunConfig& rc, std::ostream& os) {
  if (rc.format == "csv") {
    os << "n,zeta,feasible,value,beta,gap\n";
    for (const auto& r : sw.rows) {
      os << r.n << ',' << fmt17(r.zeta) << ',' << (r.feasible ? 1 : 0) << ',' << fmt17(r.value) << ','
         << fmt17(r.beta) << ',' << fmt17(r.gap) << '\n';
    }
  } else if (rc.format == "human") {
    os << "     n        zeta    V0(1)        beta         gap\n";
    for (const auto& r : sw.rows) {
      char line[128];
      if (r.feasible) {
        std::snprintf(line, sizeof line, "%6d  %10.6g  %10.6g  %10.6g  %10.6g\n", r.n, r.zeta, r.value, r.beta, r.gap);
      } else {
        std::snprintf(line, sizeof line, "%6d  %10.6g  infeasible\n", r.n, r.zeta);
      }
      os << line;
    }
    os << "check: " << to_string(sw.report.status) << '\n';
  } else {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "sweep";
    j["c"] = rc.c;
    Json rows = Json::array();
    for (const auto& r : sw.rows) {
      rows.push_back({{"n", r.n},
                      {"zeta", r.zeta},
                      {"feasible", r.feasible},
                      {"value", r.feasible ? Json(r.value) : Json(nullptr)},
                      {"beta", r.beta},
                      {"gap", r.feasible ? Json(r.gap) : Json(nullptr)}});
    }
    j["rows"] = rows;
    j["check"] = to_json(sw.report);
    os << j.dump() << '\n';
  }
}

int cmd_sweep(const RunConfig& rc, std::ostream& out) {
  const PayoffSpec g = make_payoff(rc);
  SweepOptions opts;
  opts.grid_size = rc.grid_size;
  opts.lp_grid_size = rc.lp_grid_size;
  opts.workers = rc.workers;
  const SweepResult sw = convergence_sweep(rc.c, g, rc.n_list, rc.zeta_rule(), opts);
  Sink sink(rc.output, out);
  print_sweep(sw, rc, sink.get());
  return sw.report.status == CheckStatus::fail ? kExitCheckFailed : kExitOk;
}

void print_summary(const std::vector<CheckReport>& reports, std::ostream& err) {
  err << "check                        status    worst margin\n";
  for (const auto& r : reports) {
    char line[160];
    const CheckRow* w = r.worst();
    std::snprintf(line, sizeof line, "%-28s %-9s %s\n", r.name.c_str(), to_string(r.status),
                  w ? fmt6(w->margin).c_str() : "-");
    err << line;
  }
}

int cmd_verify(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const PayoffSpec g = make_payoff(rc);
  std::vector<CheckReport> reports;
  SweepOptions opts;
  opts.grid_size = rc.grid_size;
  opts.lp_grid_size = rc.lp_grid_size;
  opts.workers = rc.workers;
  const SweepResult sw = convergence_sweep(rc.c, g, rc.n_list, rc.zeta_rule(), opts, true);
  reports.push_back(sw.report);
  std::vector<const AdversaryPolicy*> policies;
  for (const auto& sol : sw.solutions) {
    const int n = sol.config.n;
    const auto laws = policy_laws(sol.policy);
    for (auto rep : {check_taylor_logs1(rc.c, n, sol.zeta, laws), check_taylor_logs2(rc.c, n, sol.zeta, laws),
                     check_conditional_variance(rc.c, n, sol.zeta, laws),
                     check_variance_identity(sol.policy, rc.samples, rc.seed, rc.workers),
                     check_martingale_mean(sol.policy, rc.samples, rc.seed, rc.workers),
                     check_truncation_bound(sol.policy, g, rc.truncation_levels, rc.samples, rc.seed, rc.workers)}) {
      rep.name += " n=" + std::to_string(n);
      reports.push_back(std::move(rep));
    }
    policies.push_back(&sol.policy);
  }
  reports.push_back(check_gaussian_tail(rc.n_list, rc.c, rc.zeta_rule()));
  reports.push_back(check_probconv(rc.c, rc.n_list, rc.zeta_rule(), std::max<std::size_t>(rc.samples, 10000),
                                   rc.seed, rc.workers));
  if (policies.size() >= 2) reports.push_back(ks_terminal_convergence(policies, rc.samples, rc.seed, rc.workers));

  Sink sink(rc.output, out);
  for (const auto& r : reports) sink.get() << to_json(r).dump() << '\n';
  print_summary(reports, err);
  for (const auto& r : reports) {
    if (r.status == CheckStatus::fail) return kExitCheckFailed;
  }
  return kExitOk;
}

// Validates everything that can be checked without computing.
void preflight(const RunConfig& rc) {
  validate_common(rc);
  const PayoffSpec g = make_payoff(rc);
  if (auto bad = validate(g)) throw InvalidParameter("payoff rejected: " + bad.message);
  const std::string& s = rc.subcommand;
  if ((s == "solve-game" || s == "sample-adversary" || s == "hedge-sim") && rc.load.empty()) rc.game(rc.n).validate();
  if (s == "solve-moment") {
    rc.game(rc.n).validate();
    if (!(rc.spot > 0.0)) throw ConfigError("spot must be > 0");
  }
  if (s == "verify") {
    for (int n : rc.n_list) rc.game(n).validate();
  }
  if (s == "sweep") {
    for (int n : rc.n_list) {
      GameConfig cfg = rc.game(n);
      if (cfg.feasible()) cfg.validate();
    }
  }
  if (s == "hedge-sim") {
    for (const auto& name : rc.strategies) make_strategy(name, g, rc.c);
  }
  if ((s == "verify" || s == "sweep") && rc.n_list.empty()) throw ConfigError("n-list is empty");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  rc.workers = default_workers();
  CLI::App app{"Robust minimax option pricing lab: game solver, Black-Scholes pricing and verification checks",
               "minimax"};
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "INI file of key = value pairs using the long option names; flags override it");
  app.allow_config_extras(false);
  app.require_subcommand(1, 1);

  app.add_option("--payoff", rc.payoff, "call | put | identity | constant | csv")->capture_default_str();
  app.add_option("--K", rc.strike, "strike for call and put")->capture_default_str();
  app.add_option("--payoff-csv", rc.payoff_csv, "two-column CSV x,g with a header row (payoff = csv)");
  app.add_option("--constant", rc.constant, "value of the constant payoff")->capture_default_str();
  app.add_option("--lipschitz", rc.lipschitz, "Lipschitz constant of a CSV payoff (default: largest slope)");
  app.add_option("--c", rc.c, "variance parameter c > 0")->capture_default_str();
  app.add_option("--n", rc.n, "number of rounds")->capture_default_str();
  app.add_option("--n-list", rc.n_list, "rounds for sweep and verify")->delimiter(',')->capture_default_str();
  app.add_option("--zeta", rc.zeta, "explicit zeta_n (overrides --delta)");
  app.add_option("--delta", rc.delta, "zeta_n = n^(-1/2 + delta)")->capture_default_str();
  app.add_option("--grid-size", rc.grid_size, "value-function grid points")->capture_default_str();
  app.add_option("--lp-grid-size", rc.lp_grid_size, "uniform candidate atoms per moment problem")->capture_default_str();
  app.add_option("--s-min", rc.s_min, "lower price-grid bound");
  app.add_option("--s-max", rc.s_max, "upper price-grid bound");
  app.add_option("--samples,--paths", rc.samples, "Monte Carlo samples or paths")->capture_default_str();
  app.add_option("--seed", rc.seed, "master seed")->capture_default_str();
  app.add_option("--output,-o", rc.output, "write results here instead of stdout");
  app.add_option("--format", rc.format, "json | csv | human")->capture_default_str();
  app.add_option("--workers", rc.workers, "worker threads (default: MINIMAX_WORKERS or 1)")->capture_default_str();
  app.add_flag("--dry-run", rc.dry_run, "print the resolved configuration and exit");
  app.add_option("--strategy", rc.strategies, "hedge-sim strategies: zero, bs-delta, buy-and-hold")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--truncation-levels", rc.truncation_levels, "levels M for the truncation check")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--load", rc.load, "load a saved solution instead of solving");
  app.add_option("--save", rc.save, "save the solution (binary)");
  app.add_option("--values-csv", rc.values_csv, "CSV stage,price,value");
  app.add_option("--policy-csv", rc.policy_csv, "CSV stage,node,price,t1,p1,t2,p2,t3,p3");
  app.add_option("--loss-csv", rc.loss_csv, "CSV strategy,seed,path,terminal,payoff,trading_pnl,loss");
  app.add_option("--refine", rc.refine, "also re-solve with the grid refined by this factor (>= 2)");
  app.add_option("--spot", rc.spot, "price s of the one-step problem (solve-moment)")->capture_default_str();

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"price-bs", "Black-Scholes price, closed form and (with --samples > 0) Monte Carlo. CSV: K,c,method,value,stderr,samples,seed"},
      {"solve-game", "solve the discrete game by backward induction. CSV: n,c,zeta,v,grid_size,value,beta,gap"},
      {"sample-adversary", "sample paths from the optimal adversary. CSV: one row per path, S_0..S_n"},
      {"hedge-sim", "expected loss of investor strategies against the adversary. CSV: strategy,mean,stderr,min,max,paths,game_value"},
      {"verify", "run every verification check; JSON lines, summary on stderr"},
      {"sweep", "game value against Black-Scholes over --n-list. CSV: n,zeta,feasible,value,beta,gap"},
      {"solve-moment", "debug: one-step problem sup E[g(s (1 + T))] as JSON (law, value, certificate)"},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();
  if (argc > 1 && argv[1][0] != '-' &&
      std::none_of(std::begin(subs), std::end(subs), [&](const Sub& s) { return std::string(s.name) == argv[1]; })) {
    err << "configuration error: unknown subcommand '" << argv[1] << "'\n";
    return kExitConfigError;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  }
  rc.subcommand = app.get_subcommands().front()->get_name();

  try {
    preflight(rc);
    if (rc.dry_run) {
      out << to_json(rc).dump(2) << '\n';
      return kExitOk;
    }
    if (rc.subcommand == "price-bs") return cmd_price_bs(rc, out);
    if (rc.subcommand == "solve-game") return cmd_solve_game(rc, out);
    if (rc.subcommand == "sample-adversary") return cmd_sample_adversary(rc, out);
    if (rc.subcommand == "hedge-sim") return cmd_hedge_sim(rc, out);
    if (rc.subcommand == "verify") return cmd_verify(rc, out, err);
    if (rc.subcommand == "sweep") return cmd_sweep(rc, out);
    if (rc.subcommand == "solve-moment") return cmd_solve_moment(rc, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const InvalidParameter& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const InfeasibleError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const UnsupportedStrategy& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ExtentError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitConfigError;
}

}  // namespace minimax::cli
