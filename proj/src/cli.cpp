#include "hungrybat/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hungrybat/core.hpp"
#include "hungrybat/simulator.hpp"
#include "hungrybat/solver.hpp"

namespace hbat::cli {

namespace {

struct RunConfig {
  std::string instance_path;
  std::string strategy_path;
  std::optional<double> epsilon;
  std::vector<double> epsilons;
  std::vector<std::size_t> ns;
  std::optional<double> s;
  std::int64_t rounds = 0;
  std::uint64_t seed = 0;
  std::size_t replications = 8;
  std::size_t threads = 0;
  std::string format = "json";
  std::string output_path;
};

// Bad flags or values; maps to kUsageError.
class UsageError : public Error {
 public:
  using Error::Error;
};

io::Format parse_format(const std::string& f) {
  return f == "csv" ? io::Format::kCsv : io::Format::kJson;
}

void require_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw UsageError("--epsilon must lie in (0, 1), got " +
                     io::format_real(eps));
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot write " + cfg.output_path);
  file << text;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = io::read_instance(cfg.instance_path);
  emit(cfg, io::render_validate(inst, parse_format(cfg.format)), out);
  return kOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Instance inst = io::read_instance(cfg.instance_path);
  const SolveReport rep = solve_optimal(inst);
  emit(cfg, io::render_solve(inst, rep, parse_format(cfg.format)), out);
  if (!rep.kkt.passes()) {
    err << "error: optimality certificate failed (spread "
        << io::format_real(rep.kkt.max_derivative_spread_on_support)
        << ", excess " << io::format_real(rep.kkt.max_off_support_excess)
        << ")\n";
    return kInternalError;
  }
  return kOk;
}

int cmd_core(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.epsilon) throw UsageError("core requires --epsilon");
  require_epsilon(*cfg.epsilon);
  const Instance inst = io::read_instance(cfg.instance_path);
  const CoreResult res = build_core(inst, *cfg.epsilon);
  emit(cfg, io::render_core(res, parse_format(cfg.format)), out);
  if (!res.guarantee_holds()) {
    err << "error: core ratio " << io::format_real(res.ratio)
        << " is below 1 - epsilon\n";
    return kGuaranteeFailed;
  }
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.rounds < 1) throw UsageError("--rounds must be >= 1");
  if (cfg.replications < 1) throw UsageError("--replications must be >= 1");
  const Instance inst = io::read_instance(cfg.instance_path);

  io::SimulationReport rep{
      cfg.strategy_path.empty()
          ? solve_optimal(inst).strategy
          : io::read_strategy(cfg.strategy_path, inst.size()),
      {}, {}, 0.0};
  rep.estimate =
      simulate(inst, rep.strategy,
               {cfg.rounds, cfg.seed, cfg.replications, cfg.threads});
  for (std::size_t i = 0; i < inst.size(); ++i)
    rep.predicted.push_back(b(inst.rate(i), inst.steal(i), rep.strategy[i]));
  rep.predicted_total = total_rate(inst, rep.strategy);

  emit(cfg, io::render_simulation(rep, parse_format(cfg.format)), out);
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = io::read_instance(cfg.instance_path);
  emit(cfg, io::render_sweep(sweep_core_sizes(inst), parse_format(cfg.format)),
       out);
  return kOk;
}

int cmd_tightness(const RunConfig& cfg, std::ostream& out) {
  if (cfg.ns.empty()) throw UsageError("tightness requires --n");
  if (!cfg.s || !(*cfg.s > 0.0 && *cfg.s < 1.0))
    throw UsageError("tightness requires --s in (0, 1)");
  if (cfg.epsilons.empty()) throw UsageError("tightness requires --epsilon");
  for (double eps : cfg.epsilons) require_epsilon(eps);
  for (std::size_t n : cfg.ns)
    if (n < 1) throw UsageError("--n must be >= 1");
  emit(cfg,
       io::render_tightness(tightness_rows(cfg.ns, *cfg.s, cfg.epsilons),
                            parse_format(cfg.format)),
       out);
  return kOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--output", cfg.output_path,
                  "Write the report here instead of stdout");
}

void add_instance(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--instance", cfg.instance_path, "Instance JSON file")
      ->required();
}

}  // namespace

std::vector<io::SweepRow> sweep_core_sizes(const Instance& inst) {
  const auto ord = order_by_chi(inst);
  const double opt = solve_optimal(inst).value;
  std::vector<io::SweepRow> rows;
  rows.reserve(inst.size());
  for (std::size_t k = 1; k <= inst.size(); ++k) {
    const double value = solve_top_k(ord, k).value;
    rows.push_back({k, value, opt, value / opt});
  }
  return rows;
}

std::vector<io::TightnessRow> tightness_rows(
    const std::vector<std::size_t>& ns, double s,
    const std::vector<double>& epsilons) {
  std::vector<io::TightnessRow> rows;
  for (std::size_t n : ns) {
    const double opt = solve_optimal(tightness_instance(n, s)).value;
    for (double eps : epsilons) {
      io::TightnessRow row;
      row.n = n;
      row.s = s;
      row.epsilon = eps;
      row.k_bound = std::min(n, tightness_core_bound(s, eps));
      row.opt_value = opt;
      // An empty support collects nothing.
      row.core_value = row.k_bound == 0
                           ? 0.0
                           : solve_optimal(tightness_instance(row.k_bound, s))
                                 .value;
      row.ratio = row.core_value / opt;
      row.separated = row.ratio < 1.0 - eps;
      rows.push_back(row);
    }
  }
  return rows;
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Optimal foraging strategies, small cores and Monte Carlo "
               "checks for hungry-bat instances",
               "hungrybat"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  add_instance(validate, cfg);
  add_common(validate, cfg);

  auto* solve = app.add_subcommand("solve", "Compute the optimal strategy");
  add_instance(solve, cfg);
  add_common(solve, cfg);

  auto* core = app.add_subcommand("core", "Build a (1 - epsilon) core");
  add_instance(core, cfg);
  core->add_option("--epsilon", cfg.epsilon, "Allowed loss, in (0, 1)")
      ->required();
  add_common(core, cfg);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of a strategy");
  add_instance(sim, cfg);
  sim->add_option("--strategy", cfg.strategy_path,
                  "Strategy JSON file (default: the optimal strategy)");
  sim->add_option("--rounds", cfg.rounds, "Rounds per replication")->required();
  sim->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  sim->add_option("--replications", cfg.replications, "Independent runs")
      ->capture_default_str();
  sim->add_option("--threads", cfg.threads,
                  "Worker threads (0 = all cores); output does not depend on it")
      ->capture_default_str();
  add_common(sim, cfg);

  auto* sweep = app.add_subcommand("sweep", "Core value for every core size");
  add_instance(sweep, cfg);
  add_common(sweep, cfg);

  auto* tight =
      app.add_subcommand("tightness", "Homogeneous lower-bound family");
  tight->add_option("--n", cfg.ns, "Instance sizes")
      ->delimiter(',')
      ->required();
  tight->add_option("--s", cfg.s, "Stealing probability")->required();
  tight->add_option("--epsilon", cfg.epsilons, "Allowed losses")
      ->delimiter(',')
      ->required();
  add_common(tight, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*validate) return cmd_validate(cfg, out);
    if (*solve) return cmd_solve(cfg, out, err);
    if (*core) return cmd_core(cfg, out, err);
    if (*sim) return cmd_simulate(cfg, out);
    if (*sweep) return cmd_sweep(cfg, out);
    if (*tight) return cmd_tightness(cfg, out);
  } catch (const InternalInconsistency& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  std::vector<const char*> argv{"hungrybat"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hbat::cli
