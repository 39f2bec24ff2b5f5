// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. All thresholds are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hungrybat/cli.hpp"
#include "hungrybat/core.hpp"
#include "hungrybat/simulator.hpp"
#include "hungrybat/solver.hpp"
#include "oracle/grid_search.hpp"
#include "random_instances.hpp"

namespace {

using namespace hbat;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

Strategy random_strategy(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  for (auto& x : w) x = expo(rng);
  w /= w.sum();
  return Strategy(w);
}

// 1. Simulation vs closed form.
Outcome payoff_vs_simulation() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> size(1, 5);
  int agree = 0;
  double worst_z = 0.0;
  for (int cfg = 0; cfg < 20; ++cfg) {
    const Instance inst = testing::random_instance(rng, size(rng));
    const Strategy strat = random_strategy(rng, inst.size());
    const auto est = simulate(inst, strat,
                              {1'000'000, 1000u + std::uint64_t(cfg), 8, 0});
    const double z =
        std::abs(est.total.mean - total_rate(inst, strat)) / est.total.std_error;
    worst_z = std::max(worst_z, z);
    if (z <= 3.0) ++agree;
  }
  const double elapsed = seconds_since(start);
  return {agree >= 18 && elapsed <= 120.0,
          std::to_string(agree) + "/20 within 3 SE (max |z| " + fmt(worst_z, 3) +
              "), " + fmt(elapsed, 3) + " s"};
}

// 2. Straddling-gap law.
Outcome gap_law() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  for (double p : {0.2, 0.5, 0.8}) {
    const auto hist = sample_gap_distribution(p, 2'000'000, 77);
    double tv = 0.0, covered = 0.0;
    for (std::size_t x = 1; x <= hist.pmf.size(); ++x) {
      const double exact = gap_pmf(p, std::int64_t(x));
      covered += exact;
      tv += std::abs(hist.pmf[x - 1] - exact);
    }
    tv = 0.5 * (tv + std::max(0.0, 1.0 - covered));
    ok = ok && hist.samples >= 100'000 && tv < 0.01;
    detail += "p=" + fmt(p, 2) + ": TV " + fmt(tv, 3) + " (" +
              std::to_string(hist.samples) + " samples); ";
  }
  return {ok, detail + fmt(seconds_since(start), 3) + " s"};
}

// 3. Expected amount after a gap.
Outcome gap_amount() {
  const struct { std::int64_t x; double expected; } cases[] = {
      {1, 0.5}, {2, 0.75}, {5, 0.96875}, {30, 1.0 - std::ldexp(1.0, -30)}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto est = estimate_gap_amount(1.0, 0.5, c.x, 1'000'000, 300 + c.x);
    const double z = std::abs(est.mean - c.expected) / est.std_error;
    ok = ok && z <= 3.0 &&
         std::abs(gap_expected_amount(1.0, 0.5, c.x) - c.expected) < 1e-15;
    detail += "x=" + std::to_string(c.x) + ": " + fmt(est.mean, 7) + " (|z| " +
              fmt(z, 3) + "); ";
  }
  return {ok, detail};
}

// 4. Solver vs exhaustive simplex grid.
Outcome solver_optimality() {
  const auto start = Clock::now();
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  int good = 0;
  double worst_gap = -INFINITY;
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = testing::random_instance(rng, size(rng));
    const auto rep = solve_optimal(inst);
    const double step = inst.size() <= 3 ? 1e-3 : 1e-2;
    const auto grid =
        oracle::simplex_search(testing::to_sites(inst), step, 1e-6);
    worst_gap = std::max(worst_gap, grid.value - rep.value);
    if (rep.value >= grid.value - 1e-6 && verify_kkt(inst, rep.strategy, 1e-9).passes())
      ++good;
  }
  const double elapsed = seconds_since(start);
  return {good == 200 && elapsed <= 60.0,
          std::to_string(good) + "/200 optimal with KKT (max oracle excess " +
              fmt(worst_gap, 3) + "), " + fmt(elapsed, 3) + " s"};
}

// 5. Closed-form level vs dense linear system.
Outcome linear_system_agreement() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> size(1, 25);
  int checked = 0, agree = 0;
  double worst = 0.0;
  while (checked < 100) {
    const Instance inst = testing::random_instance(rng, size(rng));
    const auto rep = solve_optimal(inst);
    const auto ord = order_by_chi(inst);
    std::uniform_int_distribution<std::size_t> pick(1, rep.support_size);
    const std::size_t ell = pick(rng);
    const auto lvl = water_level(ord, ell);
    const auto [A, rhs] = build_linear_system(ord, ell);
    const Eigen::VectorXd sol = solve_linear_system(A, rhs);
    const double diff = (sol - lvl.prefix_probs).cwiseAbs().maxCoeff();
    worst = std::max(worst, diff);
    ++checked;
    if (diff <= 1e-10) ++agree;
  }
  return {agree == 100,
          std::to_string(agree) + "/100 prefixes, max diff " + fmt(worst, 3)};
}

// 6. Optimal support is a chi prefix.
Outcome prefix_support() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  int good = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Instance inst = testing::random_instance(rng, size(rng));
    const auto rep = solve_optimal(inst);
    const auto ord = order_by_chi(inst);
    bool prefix = true;
    for (std::size_t j = 0; j < inst.size(); ++j)
      prefix = prefix && ((rep.strategy[ord.perm[j]] > 0.0) == (j < rep.support_size));
    if (prefix) ++good;
  }
  return {good == 500, std::to_string(good) + "/500 prefix supports"};
}

// 7. Core guarantee.
Outcome core_guarantee() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> size(1, 100);
  std::uniform_real_distribution<double> sigma_dist(0.05, 0.95);
  std::uniform_real_distribution<double> rate(0.1, 10.0);
  const double epsilons[] = {0.1, 0.3, 0.5};
  int good = 0;
  double worst_margin = INFINITY;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = size(rng);
    const double sigma = sigma_dist(rng);
    std::uniform_real_distribution<double> steal(sigma, 0.95);
    std::vector<Cactus<double>> cacti;
    for (std::size_t i = 0; i < n; ++i) cacti.push_back({rate(rng), steal(rng)});
    cacti[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)].s = sigma;
    const Instance inst = validate_instance(cacti);
    const double eps = epsilons[trial % 3];

    const auto res = build_core(inst, eps);
    const double bound = std::ceil(core_size_bound(sigma, eps));
    worst_margin = std::min(worst_margin, res.ratio - (1 - eps));
    if (res.ratio >= 1 - eps && double(res.k) <= bound && res.sigma == sigma) ++good;
  }
  return {good == 1000, std::to_string(good) +
                            "/1000 cores meet 1 - eps (min margin " +
                            fmt(worst_margin, 3) + ")"};
}

// 8. Lower-bound family.
Outcome tightness() {
  const double s = 0.5, eps = 0.1;
  const std::size_t k = tightness_core_bound(s, eps);
  const double core_value = solve_optimal(tightness_instance(k, s)).value;
  const double full = solve_optimal(tightness_instance(1000, s)).value;
  const double ratio = core_value / full;
  auto round4 = [](double x) { return std::round(x * 1e4) / 1e4; };
  const bool ok = k == 5 && round4(core_value) == 0.8333 &&
                  std::abs(full - 0.999001) < 5e-7 && round4(ratio) == 0.8342 &&
                  round4(ratio) < 1 - eps;
  return {ok, "k=" + std::to_string(k) + ", core " + fmt(core_value, 6) +
                  ", full " + fmt(full, 7) + ", ratio " + fmt(ratio, 6) +
                  " < 0.9"};
}

// 9. CLI determinism.
Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hungrybat_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string inst = (dir / "inst.json").string();
  std::ofstream(inst) << R"({"cacti": [{"r": 2, "s": 0.3}, {"r": 1, "s": 0.6},
    {"r": 4, "s": 0.8}, {"r": 0.5, "s": 0.1}, {"r": 7, "s": 0.95}]})";

  const std::vector<std::vector<std::string>> commands{
      {"validate", "--instance", inst},
      {"solve", "--instance", inst},
      {"solve", "--instance", inst, "--format", "csv"},
      {"core", "--instance", inst, "--epsilon", "0.3"},
      {"sweep", "--instance", inst, "--format", "csv"},
      {"tightness", "--n", "10,1000", "--s", "0.5", "--epsilon", "0.1,0.2"},
      {"simulate", "--instance", inst, "--rounds", "100000", "--seed", "42",
       "--replications", "8", "--threads", "4"},
      {"simulate", "--instance", inst, "--rounds", "100000", "--seed", "42",
       "--replications", "8", "--threads", "1", "--format", "csv"},
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };

  int identical = 0;
  std::ostringstream sink;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string outputs[2];
    bool ran = true;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / ("out" + std::to_string(c) + "_" +
                                  std::to_string(rep));
      auto args = commands[c];
      args.insert(args.end(), {"--output", out.string()});
      ran = ran && cli::run(args, sink, sink) == 0;
      outputs[rep] = slurp(out);
    }
    if (ran && !outputs[0].empty() && outputs[0] == outputs[1]) ++identical;
  }

  // Thread count must not change the simulation output either.
  std::string by_threads[2];
  const char* threads[] = {"1", "4"};
  for (int t = 0; t < 2; ++t) {
    const fs::path out = dir / ("threads" + std::to_string(t));
    cli::run({"simulate", "--instance", inst, "--rounds", "100000", "--seed",
              "42", "--replications", "8", "--threads", threads[t], "--output",
              out.string()},
             sink, sink);
    by_threads[t] = slurp(out);
  }
  const bool thread_ok = !by_threads[0].empty() && by_threads[0] == by_threads[1];
  fs::remove_all(dir);
  return {identical == int(commands.size()) && thread_ok,
          std::to_string(identical) + "/" + std::to_string(commands.size()) +
              " commands byte-identical; threads 1 vs 4 " +
              (thread_ok ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 closed-form payoff vs simulation", payoff_vs_simulation},
      {"C2 straddling-gap law", gap_law},
      {"C3 expected amount after a gap", gap_amount},
      {"C4 solver optimality vs grid oracle", solver_optimality},
      {"C5 water level vs linear system", linear_system_agreement},
      {"C6 prefix support", prefix_support},
      {"C7 core guarantee", core_guarantee},
      {"C8 tightness reproduction", tightness},
      {"C9 CLI determinism", determinism},
  };

  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << name << ": "
              << out.detail << std::endl;
    if (!out.pass) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size()
            << " acceptance criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
