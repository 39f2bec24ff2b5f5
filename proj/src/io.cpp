#include "hungrybat/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace hbat::io {

namespace {

json load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

double number_field(const json& obj, const char* key, std::size_t index) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number())
    throw ParseError("cactus " + std::to_string(index) + ": field \"" + key +
                     "\" missing or not a number");
  return it->get<double>();
}

// NaN has no JSON literal; it is emitted as null.
json real(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json strategy_array(const Strategy& strat) {
  json arr = json::array();
  for (std::size_t i = 0; i < strat.size(); ++i) arr.push_back(strat[i]);
  return arr;
}

}  // namespace

Instance parse_instance(const json& doc) {
  if (!doc.is_object() || !doc.contains("cacti") || !doc["cacti"].is_array())
    throw ParseError("instance must be an object with a \"cacti\" array");
  std::vector<Cactus<double>> raw;
  std::size_t index = 0;
  for (const auto& c : doc["cacti"]) {
    ++index;
    if (!c.is_object())
      throw ParseError("cactus " + std::to_string(index) + ": not an object");
    raw.push_back({number_field(c, "r", index), number_field(c, "s", index)});
  }
  return validate_instance(std::move(raw));
}

Instance read_instance(const std::filesystem::path& path) {
  return parse_instance(load_file(path));
}

Strategy parse_strategy(const json& doc, std::size_t n) {
  if (!doc.is_object() || !doc.contains("p") || !doc["p"].is_array())
    throw ParseError("strategy must be an object with a \"p\" array");
  const auto& arr = doc["p"];
  if (arr.size() != n) throw LengthMismatch(n, arr.size());
  Eigen::VectorXd p(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!arr[i].is_number())
      throw ParseError("strategy entry " + std::to_string(i + 1) +
                       " is not a number");
    p[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return Strategy(std::move(p), kStrategyFileTolerance);
}

Strategy read_strategy(const std::filesystem::path& path, std::size_t n) {
  return parse_strategy(load_file(path), n);
}

json instance_to_json(const Instance& inst) {
  json cacti = json::array();
  for (const auto& c : inst.cacti()) cacti.push_back({{"r", c.r}, {"s", c.s}});
  return {{"cacti", std::move(cacti)}};
}

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

std::string render_validate(const Instance& inst, Format fmt) {
  const auto ord = order_by_chi(inst);
  const auto rank = ord.inverse();
  if (fmt == Format::kCsv) {
    std::ostringstream os;
    os << "index,r,s,chi,rank\n";
    for (std::size_t i = 0; i < inst.size(); ++i)
      os << i + 1 << ',' << format_real(inst.rate(i)) << ','
         << format_real(inst.steal(i)) << ','
         << format_real(chi(inst.rate(i), inst.steal(i))) << ','
         << rank[i] + 1 << '\n';
    return os.str();
  }
  json cacti = json::array();
  for (std::size_t i = 0; i < inst.size(); ++i)
    cacti.push_back({{"index", i + 1},
                     {"r", inst.rate(i)},
                     {"s", inst.steal(i)},
                     {"chi", chi(inst.rate(i), inst.steal(i))},
                     {"rank", rank[i] + 1}});
  json order = json::array();
  for (std::size_t j : ord.perm) order.push_back(j + 1);
  return dump({{"valid", true},
               {"n", inst.size()},
               {"sigma", inst.min_steal()},
               {"chi_order", std::move(order)},
               {"cacti", std::move(cacti)}});
}

std::string render_solve(const Instance& inst, const SolveReport& rep,
                         Format fmt) {
  std::vector<std::size_t> rank(inst.size());
  for (std::size_t j = 0; j < rep.perm.size(); ++j) rank[rep.perm[j]] = j;

  if (fmt == Format::kCsv) {
    std::ostringstream os;
    os << "index,r,s,chi,rank,p,in_support,b_prime,mu,value,kkt_spread,"
          "kkt_excess\n";
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const double r = inst.rate(i), s = inst.steal(i), p = rep.strategy[i];
      os << i + 1 << ',' << format_real(r) << ',' << format_real(s) << ','
         << format_real(chi(r, s)) << ',' << rank[i] + 1 << ','
         << format_real(p) << ',' << (p > 0.0 ? 1 : 0) << ','
         << format_real(b_prime(r, s, p)) << ',' << format_real(rep.mu) << ','
         << format_real(rep.value) << ','
         << format_real(rep.kkt.max_derivative_spread_on_support) << ','
         << format_real(rep.kkt.max_off_support_excess) << '\n';
    }
    return os.str();
  }

  json cacti = json::array();
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double r = inst.rate(i), s = inst.steal(i), p = rep.strategy[i];
    cacti.push_back({{"index", i + 1},
                     {"r", r},
                     {"s", s},
                     {"chi", chi(r, s)},
                     {"rank", rank[i] + 1},
                     {"p", p},
                     {"in_support", p > 0.0},
                     {"b_prime", b_prime(r, s, p)}});
  }
  return dump(
      {{"n", inst.size()},
       {"support_size", rep.support_size},
       {"mu", rep.mu},
       {"value", rep.value},
       {"kkt",
        {{"max_derivative_spread_on_support",
          rep.kkt.max_derivative_spread_on_support},
         {"max_off_support_excess", rep.kkt.max_off_support_excess},
         {"tolerance", rep.kkt.tolerance},
         {"passes", rep.kkt.passes()}}},
       {"p", strategy_array(rep.strategy)},
       {"cacti", std::move(cacti)}});
}

std::string render_core(const CoreResult& res, Format fmt) {
  const double bound = core_size_bound(res.sigma, res.epsilon);
  if (fmt == Format::kCsv) {
    std::ostringstream os;
    os << "epsilon,sigma,k_bound,k,core,core_value,opt_value,ratio,"
          "guarantee_holds\n";
    os << format_real(res.epsilon) << ',' << format_real(res.sigma) << ','
       << format_real(bound) << ',' << res.k << ',';
    for (std::size_t j = 0; j < res.core.size(); ++j)
      os << (j ? " " : "") << res.core[j] + 1;
    os << ',' << format_real(res.core_value) << ','
       << format_real(res.opt_value) << ',' << format_real(res.ratio) << ','
       << (res.guarantee_holds() ? 1 : 0) << '\n';
    return os.str();
  }
  json core = json::array();
  for (std::size_t i : res.core) core.push_back(i + 1);
  return dump({{"epsilon", res.epsilon},
               {"sigma", res.sigma},
               {"k_bound", bound},
               {"k", res.k},
               {"core", std::move(core)},
               {"core_value", res.core_value},
               {"opt_value", res.opt_value},
               {"ratio", res.ratio},
               {"guarantee_holds", res.guarantee_holds()},
               {"p", strategy_array(res.core_strategy)}});
}

double z_score(double estimate, double predicted, double std_error) {
  const double diff = estimate - predicted;
  if (std_error > 0.0) return diff / std_error;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
}

std::string render_simulation(const SimulationReport& rep, Format fmt) {
  const auto& est = rep.estimate;
  const double z_total =
      z_score(est.total.mean, rep.predicted_total, est.total.std_error);

  if (fmt == Format::kCsv) {
    std::ostringstream os;
    os << "index,p,estimate,std_error,predicted,z,rounds,replications,seed\n";
    auto tail = [&] {
      os << ',' << est.rounds << ',' << est.replications << ',' << est.seed
         << '\n';
    };
    for (std::size_t i = 0; i < est.per_cactus.size(); ++i) {
      const auto& c = est.per_cactus[i];
      os << i + 1 << ',' << format_real(rep.strategy[i]) << ','
         << format_real(c.mean) << ',' << format_real(c.std_error) << ','
         << format_real(rep.predicted[i]) << ','
         << format_real(z_score(c.mean, rep.predicted[i], c.std_error));
      tail();
    }
    os << "total,1," << format_real(est.total.mean) << ','
       << format_real(est.total.std_error) << ','
       << format_real(rep.predicted_total) << ',' << format_real(z_total);
    tail();
    return os.str();
  }

  json cacti = json::array();
  for (std::size_t i = 0; i < est.per_cactus.size(); ++i) {
    const auto& c = est.per_cactus[i];
    cacti.push_back(
        {{"index", i + 1},
         {"p", rep.strategy[i]},
         {"estimate", c.mean},
         {"std_error", c.std_error},
         {"predicted", rep.predicted[i]},
         {"z", real(z_score(c.mean, rep.predicted[i], c.std_error))}});
  }
  return dump({{"rounds", est.rounds},
               {"seed", est.seed},
               {"replications", est.replications},
               {"total",
                {{"estimate", est.total.mean},
                 {"std_error", est.total.std_error},
                 {"predicted", rep.predicted_total},
                 {"z", real(z_total)}}},
               {"p", strategy_array(rep.strategy)},
               {"cacti", std::move(cacti)}});
}

std::string render_sweep(const std::vector<SweepRow>& rows, Format fmt) {
  if (fmt == Format::kCsv) {
    std::ostringstream os;
    os << "k,core_value,opt_value,ratio\n";
    for (const auto& r : rows)
      os << r.k << ',' << format_real(r.core_value) << ','
         << format_real(r.opt_value) << ',' << format_real(r.ratio) << '\n';
    return os.str();
  }
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"k", r.k},
                   {"core_value", r.core_value},
                   {"opt_value", r.opt_value},
                   {"ratio", r.ratio}});
  return dump({{"rows", std::move(arr)}});
}

std::string render_tightness(const std::vector<TightnessRow>& rows,
                             Format fmt) {
  if (fmt == Format::kCsv) {
    std::ostringstream os;
    os << "n,s,epsilon,k_bound,ratio,separated,core_value,opt_value\n";
    for (const auto& r : rows)
      os << r.n << ',' << format_real(r.s) << ',' << format_real(r.epsilon)
         << ',' << r.k_bound << ',' << format_real(r.ratio) << ','
         << (r.separated ? 1 : 0) << ',' << format_real(r.core_value) << ','
         << format_real(r.opt_value) << '\n';
    return os.str();
  }
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"n", r.n},
                   {"s", r.s},
                   {"epsilon", r.epsilon},
                   {"k_bound", r.k_bound},
                   {"ratio", r.ratio},
                   {"separated", r.separated},
                   {"core_value", r.core_value},
                   {"opt_value", r.opt_value}});
  return dump({{"rows", std::move(arr)}});
}

}  // namespace hbat::io
