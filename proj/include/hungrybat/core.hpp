#pragma once

// Small cores: a top-chi subset S of size at most 2(1 - sigma)/(eps sigma)
// on which the best S-supported strategy keeps a (1 - eps) fraction of the
// unrestricted optimum, sigma = min_i s_i.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hungrybat/errors.hpp"
#include "hungrybat/instance.hpp"
#include "hungrybat/payoff.hpp"
#include "hungrybat/solver.hpp"
#include "hungrybat/strategy.hpp"

namespace hbat {

template <typename Scalar>
struct BasicCoreResult {
  Scalar epsilon{};
  Scalar sigma{};
  std::size_t k = 0;
  std::vector<std::size_t> core;  // 0-based original indices, chi order
  BasicStrategy<Scalar> core_strategy;
  Scalar core_value{};
  Scalar opt_value{};
  Scalar ratio{};

  bool guarantee_holds() const { return ratio >= Scalar(1) - epsilon; }
};

using CoreResult = BasicCoreResult<double>;

namespace detail {

template <typename Scalar>
void require_open_unit(Scalar x, const char* what) {
  if (!(x > Scalar(0) && x < Scalar(1)))
    throw DomainError(std::string(what) + " must lie in (0, 1)");
}

}  // namespace detail

/// Raw bound 2(1 - sigma)/(eps sigma), before rounding.
template <typename Scalar>
Scalar core_size_bound(Scalar sigma, Scalar epsilon) {
  detail::require_open_unit(sigma, "sigma");
  detail::require_open_unit(epsilon, "epsilon");
  return Scalar(2) * (Scalar(1) - sigma) / (epsilon * sigma);
}

/// ceil of the bound, clamped to [1, n]. A bound within 1e-9 (relative) of
/// an integer is snapped to it first so that e.g. sigma = 0.5, eps = 0.1
/// yields exactly 20.
template <typename Scalar>
std::size_t core_size(Scalar sigma, Scalar epsilon, std::size_t n) {
  if (n < 1) throw DomainError("n must be >= 1");
  const Scalar raw = core_size_bound(sigma, epsilon);
  const Scalar nearest = std::round(raw);
  const Scalar snapped =
      std::abs(raw - nearest) <= Scalar(1e-9) * std::max(Scalar(1), nearest)
          ? nearest
          : std::ceil(raw);
  if (!(snapped < Scalar(n))) return n;
  return std::max<std::size_t>(1, static_cast<std::size_t>(snapped));
}

/// Best strategy supported on the `k` highest-chi cacti, embedded in the
/// full instance. Also returns its value.
template <typename Scalar>
BasicSolveReport<Scalar> solve_top_k(const BasicOrderedInstance<Scalar>& ord,
                                     std::size_t k) {
  detail::require_prefix(k, ord.size());
  const std::vector<std::size_t> top(ord.perm.begin(), ord.perm.begin() + k);
  auto sub = solve_optimal(ord.base.subset(top));

  Eigen::VectorX<Scalar> full =
      Eigen::VectorX<Scalar>::Zero(static_cast<Eigen::Index>(ord.size()));
  for (std::size_t j = 0; j < k; ++j)
    full[static_cast<Eigen::Index>(top[j])] = sub.strategy[j];

  BasicSolveReport<Scalar> out;
  out.strategy = BasicStrategy<Scalar>(std::move(full));
  out.support_size = sub.support_size;
  out.mu = sub.mu;
  out.value = total_rate(ord.base, out.strategy);
  out.perm = ord.perm;
  out.kkt = sub.kkt;
  return out;
}

/// Core of the size given by core_size(), re-optimised inside the core.
template <typename Scalar>
BasicCoreResult<Scalar> build_core(const BasicInstance<Scalar>& inst,
                                   Scalar epsilon) {
  detail::require_open_unit(epsilon, "epsilon");
  const auto ord = order_by_chi(inst);

  BasicCoreResult<Scalar> res;
  res.epsilon = epsilon;
  res.sigma = inst.min_steal();
  res.k = core_size(res.sigma, epsilon, inst.size());
  res.core.assign(ord.perm.begin(), ord.perm.begin() + res.k);

  auto restricted = solve_top_k(ord, res.k);
  res.core_strategy = restricted.strategy;
  res.core_value = restricted.value;
  res.opt_value = solve_optimal(inst).value;
  res.ratio = res.core_value / res.opt_value;
  return res;
}

/// n identical cacti with r = 1 and stealing probability s.
template <typename Scalar = double>
BasicInstance<Scalar> tightness_instance(std::size_t n, Scalar s) {
  if (n < 1) throw DomainError("n must be >= 1");
  detail::require_open_unit(s, "s");
  return validate_instance(
      std::vector<Cactus<Scalar>>(n, Cactus<Scalar>{Scalar(1), s}));
}

/// Optimal value on k identical unit-rate cacti: 1 / (1/k + s/(1-s)).
template <typename Scalar>
Scalar homogeneous_prefix_value(std::size_t k, Scalar s) {
  if (k < 1) throw DomainError("k must be >= 1");
  detail::require_open_unit(s, "s");
  return Scalar(1) / (Scalar(1) / Scalar(k) + steal_odds(s));
}

/// Largest core size that the lower-bound family defeats:
/// floor((1 - s)/(2 eps s)), snapped like core_size(). May be 0.
template <typename Scalar>
std::size_t tightness_core_bound(Scalar s, Scalar epsilon) {
  detail::require_open_unit(s, "s");
  detail::require_open_unit(epsilon, "epsilon");
  const Scalar raw = (Scalar(1) - s) / (Scalar(2) * epsilon * s);
  const Scalar nearest = std::round(raw);
  if (std::abs(raw - nearest) <= Scalar(1e-9) * std::max(Scalar(1), nearest))
    return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::floor(raw));
}

}  // namespace hbat
