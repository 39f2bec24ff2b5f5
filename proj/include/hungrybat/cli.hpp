#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "hungrybat/instance.hpp"
#include "hungrybat/io.hpp"

namespace hbat::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternalError = 1;
inline constexpr int kUsageError = 2;
inline constexpr int kGuaranteeFailed = 3;

/// Core value and ratio for every core size k = 1..n of `inst`.
std::vector<io::SweepRow> sweep_core_sizes(const Instance& inst);

/// One row per (n, epsilon) of the homogeneous lower-bound family with
/// stealing probability s.
std::vector<io::TightnessRow> tightness_rows(const std::vector<std::size_t>& ns,
                                             double s,
                                             const std::vector<double>& epsilons);

/// Entry point of the `hungrybat` tool. Reports go to `out` unless
/// --output is given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

/// Convenience overload; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace hbat::cli
