#include "hungrybat/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "hungrybat/errors.hpp"

namespace hbat {

namespace {

// Mean and standard error of the mean of `xs`; SE is 0 for a single value.
RateEstimate mean_and_se(std::span<const double> xs) {
  RateEstimate est;
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  est.mean = sum / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - est.mean) * (x - est.mean);
    est.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return est;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

CactusField::CactusField(const Instance& inst)
    : rate_(inst.size()), steal_(inst.size()), content_(inst.size(), 0.0) {
  for (std::size_t i = 0; i < inst.size(); ++i) {
    rate_[i] = inst.rate(i);
    steal_[i] = inst.steal(i);
  }
}

void CactusField::fill_and_steal(Engine& steal_rng) {
  for (std::size_t i = 0; i < content_.size(); ++i) {
    const bool stolen = uniform01(steal_rng) < steal_[i];
    content_[i] = stolen ? 0.0 : content_[i] + rate_[i];
  }
}

double CactusField::collect(std::size_t i) {
  const double taken = content_[i];
  content_[i] = 0.0;
  return taken;
}

VisitSampler::VisitSampler(const Strategy& strat) : cdf_(strat.size()) {
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < strat.size(); ++i) {
    acc += strat[i];
    cdf_[i] = acc;
    if (strat[i] > 0.0) last = i;
  }
  // Close the distribution at the last supported cactus so rounding in the
  // running sum can never leak mass onto trailing zero-probability cacti.
  for (std::size_t i = last; i < cdf_.size(); ++i) cdf_[i] = 1.0;
}

std::size_t VisitSampler::operator()(Engine& visit_rng) const {
  const double u = uniform01(visit_rng);
  return static_cast<std::size_t>(
      std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
}

std::vector<double> run_replication(const Instance& inst, const Strategy& strat,
                                    std::int64_t rounds, std::uint64_t seed,
                                    std::uint64_t replication) {
  if (strat.size() != inst.size())
    throw LengthMismatch(inst.size(), strat.size());
  Engine steal_rng = make_engine(seed, replication, Stream::kSteal);
  Engine visit_rng = make_engine(seed, replication, Stream::kVisit);
  CactusField field(inst);
  const VisitSampler sampler(strat);

  std::vector<double> collected(inst.size(), 0.0);
  for (std::int64_t t = 0; t < rounds; ++t) {
    field.fill_and_steal(steal_rng);
    const std::size_t visited = sampler(visit_rng);
    collected[visited] += field.collect(visited);
  }
  return collected;
}

SimEstimate simulate(const Instance& inst, const Strategy& strat,
                     const SimOptions& opts) {
  if (opts.rounds < 1) throw DomainError("rounds must be >= 1");
  if (opts.replications < 1) throw DomainError("replications must be >= 1");
  if (strat.size() != inst.size())
    throw LengthMismatch(inst.size(), strat.size());

  const std::size_t n = inst.size();
  const std::size_t reps = opts.replications;
  const double T = static_cast<double>(opts.rounds);

  // rate[rep][i], filled independently per replication.
  std::vector<std::vector<double>> rate(reps);
  parallel_for(reps, opts.threads, [&](std::size_t rep) {
    auto totals = run_replication(inst, strat, opts.rounds, opts.seed, rep);
    for (double& x : totals) x /= T;
    rate[rep] = std::move(totals);
  });

  SimEstimate est;
  est.rounds = opts.rounds;
  est.seed = opts.seed;
  est.replications = reps;
  est.per_cactus.resize(n);

  std::vector<double> column(reps);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t rep = 0; rep < reps; ++rep) column[rep] = rate[rep][i];
    est.per_cactus[i] = mean_and_se(column);
  }
  for (std::size_t rep = 0; rep < reps; ++rep) {
    double sum = 0.0;
    for (double x : rate[rep]) sum += x;
    column[rep] = sum;
  }
  est.total = mean_and_se(column);
  est.total.mean = 0.0;
  for (const auto& c : est.per_cactus) est.total.mean += c.mean;
  return est;
}

GapHistogram sample_gap_distribution(double p, std::int64_t window,
                                     std::uint64_t seed) {
  if (!(p > 0.0 && p < 1.0))
    throw DomainError("gap sampling needs visit probability p in (0, 1)");
  if (window < 1) throw DomainError("window must be >= 1");

  Engine rng = make_engine(seed, 0, Stream::kGap);
  std::vector<std::int64_t> counts;
  std::int64_t last_visit = -1;
  for (std::int64_t t = 0; t < window; ++t) {
    if (uniform01(rng) >= p) continue;
    if (last_visit >= 0) {
      // Rounds last_visit+1 .. t all straddle this gap.
      const std::int64_t gap = t - last_visit;
      if (static_cast<std::size_t>(gap) > counts.size())
        counts.resize(static_cast<std::size_t>(gap), 0);
      counts[static_cast<std::size_t>(gap - 1)] += gap;
    }
    last_visit = t;
  }

  GapHistogram hist;
  for (std::int64_t c : counts) hist.samples += c;
  if (hist.samples < kMinGapSamples)
    throw DomainError("window too short: fewer than 10^4 straddled rounds");
  hist.pmf.resize(counts.size());
  const double total = static_cast<double>(hist.samples);
  for (std::size_t x = 0; x < counts.size(); ++x)
    hist.pmf[x] = static_cast<double>(counts[x]) / total;
  return hist;
}

RateEstimate estimate_gap_amount(double r, double s, std::int64_t x,
                                 std::int64_t replications,
                                 std::uint64_t seed) {
  if (x < 1) throw DomainError("gap length x must be >= 1");
  if (replications < 1) throw DomainError("replications must be >= 1");
  detail::require_cactus(r, s);
  const Instance single = validate_instance({{r, s}});

  std::vector<double> amounts(static_cast<std::size_t>(replications));
  Engine rng = make_engine(seed, 0, Stream::kGapAmount);
  for (auto& amount : amounts) {
    CactusField field(single);
    for (std::int64_t t = 0; t < x; ++t) field.fill_and_steal(rng);
    amount = field.collect(0);
  }
  return mean_and_se(amounts);
}

}  // namespace hbat
