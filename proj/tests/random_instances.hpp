#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "hungrybat/instance.hpp"
#include "oracle/grid_search.hpp"

namespace hbat::testing {

struct Ranges {
  double r_lo = 0.1, r_hi = 10.0;
  double s_lo = 0.1, s_hi = 0.9;
};

inline Instance random_instance(std::mt19937_64& rng, std::size_t n,
                                const Ranges& ranges = {}) {
  std::uniform_real_distribution<double> r(ranges.r_lo, ranges.r_hi);
  std::uniform_real_distribution<double> s(ranges.s_lo, ranges.s_hi);
  std::vector<Cactus<double>> cacti;
  for (std::size_t i = 0; i < n; ++i) cacti.push_back({r(rng), s(rng)});
  return validate_instance(std::move(cacti));
}

inline std::vector<oracle::Site> to_sites(const Instance& inst) {
  std::vector<oracle::Site> sites;
  for (const auto& c : inst.cacti()) sites.push_back({c.r, c.s});
  return sites;
}

}  // namespace hbat::testing
