#pragma once

// Monte Carlo model of one bat foraging with a fixed visit distribution.
//
// Every round: each cactus gains r_i, then is emptied independently with
// probability s_i, then the bat picks a cactus from the strategy and takes
// everything it holds.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hungrybat/instance.hpp"
#include "hungrybat/rng.hpp"
#include "hungrybat/strategy.hpp"

namespace hbat {

struct RateEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // across replications; 0 with one replication
};

struct SimEstimate {
  std::vector<RateEstimate> per_cactus;
  RateEstimate total;  // total.mean is the sum of the per-cactus means
  std::int64_t rounds = 0;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
};

struct SimOptions {
  std::int64_t rounds = 1'000'000;
  std::uint64_t seed = 0;
  std::size_t replications = 8;
  // Worker threads for replications; 0 picks hardware concurrency. The
  // estimate does not depend on this.
  std::size_t threads = 1;
};

/// Nectar held by each cactus, advanced one round at a time.
class CactusField {
 public:
  explicit CactusField(const Instance& inst);

  /// Adds r_i to every cactus, then empties each w.p. s_i using one draw
  /// per cactus from `steal_rng` in index order.
  void fill_and_steal(Engine& steal_rng);

  /// Removes and returns the content of cactus i.
  double collect(std::size_t i);

  std::span<const double> content() const { return content_; }

 private:
  std::vector<double> rate_;
  std::vector<double> steal_;
  std::vector<double> content_;
};

/// Inverse-CDF sampler over a strategy; never returns a zero-probability
/// index.
class VisitSampler {
 public:
  explicit VisitSampler(const Strategy& strat);
  std::size_t operator()(Engine& visit_rng) const;

 private:
  std::vector<double> cdf_;
};

/// Per-cactus total collection of one replication, over `rounds` rounds.
std::vector<double> run_replication(const Instance& inst, const Strategy& strat,
                                    std::int64_t rounds, std::uint64_t seed,
                                    std::uint64_t replication);

/// Mean per-round collection per cactus and in total.
SimEstimate simulate(const Instance& inst, const Strategy& strat,
                     const SimOptions& opts);

struct GapHistogram {
  std::vector<double> pmf;  // pmf[x - 1] = empirical Pr(gap = x)
  std::int64_t samples = 0;

  double at(std::int64_t x) const {
    return x >= 1 && static_cast<std::size_t>(x) <= pmf.size()
               ? pmf[static_cast<std::size_t>(x - 1)]
               : 0.0;
  }
};

/// Minimum number of straddled rounds sample_gap_distribution accepts.
inline constexpr std::int64_t kMinGapSamples = 10'000;

/// Empirical law of the visit gap straddling a round, from a Bernoulli(p)
/// visit sequence of `window` rounds. Every round with a visit strictly
/// before it and a visit at or after it inside the window is one sample.
GapHistogram sample_gap_distribution(double p, std::int64_t window,
                                     std::uint64_t seed);

/// Mean content of an initially empty, unvisited cactus after x rounds of
/// fill-then-steal, over `replications` independent runs.
RateEstimate estimate_gap_amount(double r, double s, std::int64_t x,
                                 std::int64_t replications, std::uint64_t seed);

}  // namespace hbat
