#pragma once

// JSON/CSV surface of the library.
//
//   instance file:  {"cacti": [{"r": <number>, "s": <number>}, ...]}
//   strategy file:  {"p": [<number>, ...]}
//
// Every report that carries a strategy also has a top-level "p" array, so
// it can be fed back as a strategy file.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hungrybat/core.hpp"
#include "hungrybat/instance.hpp"
#include "hungrybat/simulator.hpp"
#include "hungrybat/solver.hpp"
#include "hungrybat/strategy.hpp"

namespace hbat::io {

using nlohmann::json;

/// Schema violation or unreadable file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Tolerance on |sum(p) - 1| for strategy files.
inline constexpr double kStrategyFileTolerance = 1e-9;

Instance parse_instance(const json& doc);
Instance read_instance(const std::filesystem::path& path);

Strategy parse_strategy(const json& doc, std::size_t n);
Strategy read_strategy(const std::filesystem::path& path, std::size_t n);

json instance_to_json(const Instance& inst);

/// Decimal rendering with 17 significant digits.
std::string format_real(double x);

enum class Format { kJson, kCsv };

// Report renderers. JSON output is pretty-printed with a trailing newline.

std::string render_solve(const Instance& inst, const SolveReport& rep,
                         Format fmt);
std::string render_validate(const Instance& inst, Format fmt);
std::string render_core(const CoreResult& res, Format fmt);

struct SimulationReport {
  Strategy strategy;
  SimEstimate estimate;
  std::vector<double> predicted;  // closed-form b_i(p_i)
  double predicted_total = 0.0;
};

/// (estimate - predicted) / std_error; NaN when the error is 0 and the two
/// differ, 0 when they coincide.
double z_score(double estimate, double predicted, double std_error);

std::string render_simulation(const SimulationReport& rep, Format fmt);

struct SweepRow {
  std::size_t k = 0;
  double core_value = 0.0;
  double opt_value = 0.0;
  double ratio = 0.0;
};

struct TightnessRow {
  std::size_t n = 0;
  double s = 0.0;
  double epsilon = 0.0;
  std::size_t k_bound = 0;
  double ratio = 0.0;
  bool separated = false;
  double core_value = 0.0;
  double opt_value = 0.0;
};

std::string render_sweep(const std::vector<SweepRow>& rows, Format fmt);
std::string render_tightness(const std::vector<TightnessRow>& rows,
                             Format fmt);

}  // namespace hbat::io
