#pragma once

// Optimal purely-stochastic strategy.
//
// The payoff sum_i b_i(p_i) is strictly concave on the simplex, so the
// optimum is characterised by a common slope mu on the support and slopes
// no larger than mu (i.e. chi_i <= mu) off the support. After sorting by
// chi the support is a prefix; the solver grows that prefix one cactus at a
// time and stops at the first cactus whose chi does not exceed the current
// water level.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "hungrybat/errors.hpp"
#include "hungrybat/instance.hpp"
#include "hungrybat/payoff.hpp"
#include "hungrybat/strategy.hpp"

namespace hbat {

template <typename Scalar>
struct KktCertificate {
  Scalar max_derivative_spread_on_support{};
  Scalar max_off_support_excess{};
  Scalar tolerance{};

  bool passes() const {
    return max_derivative_spread_on_support <= tolerance &&
           max_off_support_excess <= tolerance;
  }
};

template <typename Scalar>
struct WaterLevel {
  Scalar mu;
  Eigen::VectorX<Scalar> prefix_probs;  // in chi rank order, length ell
};

template <typename Scalar>
struct BasicSolveReport {
  BasicStrategy<Scalar> strategy;  // original index order
  std::size_t support_size = 0;
  Scalar mu{};
  Scalar value{};
  std::vector<std::size_t> perm;  // chi order used, 0-based
  KktCertificate<Scalar> kkt;
};

using SolveReport = BasicSolveReport<double>;

inline constexpr double kDefaultKktTolerance = 1e-9;
// Rounding slack below zero tolerated on the final prefix before it is
// treated as a bug.
inline constexpr double kNegativeClamp = 1e-12;

namespace detail {

// Running sums over a chi-ordered prefix: sum a_i and sum sqrt(r_i a_i).
template <typename Scalar>
struct PrefixSums {
  Scalar odds{0};
  Scalar root_weight{0};

  void add(const Cactus<Scalar>& c) {
    const Scalar a = steal_odds(c.s);
    odds += a;
    root_weight += std::sqrt(c.r * a);
  }

  // Setting r_i a_i / (p_i + a_i)^2 = mu and sum p_i = 1 gives
  // 1/sqrt(mu) = (1 + sum a_i) / sum sqrt(r_i a_i).
  Scalar inv_sqrt_mu() const { return (Scalar(1) + odds) / root_weight; }
  Scalar mu() const {
    const Scalar root = root_weight / (Scalar(1) + odds);
    return root * root;
  }
};

template <typename Scalar>
WaterLevel<Scalar> level_for_prefix(const BasicOrderedInstance<Scalar>& ord,
                                    std::size_t ell,
                                    const PrefixSums<Scalar>& sums) {
  const Scalar scale = sums.inv_sqrt_mu();
  Eigen::VectorX<Scalar> p(static_cast<Eigen::Index>(ell));
  for (std::size_t j = 0; j < ell; ++j) {
    const auto& c = ord.ranked(j);
    const Scalar a = steal_odds(c.s);
    p[static_cast<Eigen::Index>(j)] = std::sqrt(c.r * a) * scale - a;
  }
  p /= p.sum();
  return {sums.mu(), std::move(p)};
}

inline void require_prefix(std::size_t ell, std::size_t n) {
  if (ell < 1 || ell > n)
    throw DomainError("prefix length must lie in [1, n]");
}

}  // namespace detail

/// Water level mu and the equal-slope probabilities on the first `ell`
/// cacti of `ord`. Entries are not guaranteed non-negative unless the
/// prefix is solid.
template <typename Scalar>
WaterLevel<Scalar> water_level(const BasicOrderedInstance<Scalar>& ord,
                               std::size_t ell) {
  detail::require_prefix(ell, ord.size());
  detail::PrefixSums<Scalar> sums;
  for (std::size_t j = 0; j < ell; ++j) sums.add(ord.ranked(j));
  return detail::level_for_prefix(ord, ell, sums);
}

/// Equal-slope conditions between consecutive ranks plus sum(p) = 1, as a
/// dense ell x ell system. Row i < ell-1 reads
///   sqrt(r_{i+1} a_{i+1}) p_i - sqrt(r_i a_i) p_{i+1}
///     = a_{i+1} sqrt(r_i a_i) - a_i sqrt(r_{i+1} a_{i+1}).
template <typename Scalar>
std::pair<Eigen::MatrixX<Scalar>, Eigen::VectorX<Scalar>> build_linear_system(
    const BasicOrderedInstance<Scalar>& ord, std::size_t ell) {
  detail::require_prefix(ell, ord.size());
  const auto m = static_cast<Eigen::Index>(ell);
  Eigen::MatrixX<Scalar> A = Eigen::MatrixX<Scalar>::Zero(m, m);
  Eigen::VectorX<Scalar> rhs = Eigen::VectorX<Scalar>::Zero(m);

  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    const auto& lo = ord.ranked(static_cast<std::size_t>(i));
    const auto& hi = ord.ranked(static_cast<std::size_t>(i + 1));
    const Scalar a_lo = steal_odds(lo.s), a_hi = steal_odds(hi.s);
    const Scalar w_lo = std::sqrt(lo.r * a_lo), w_hi = std::sqrt(hi.r * a_hi);
    A(i, i) = w_hi;
    A(i, i + 1) = -w_lo;
    rhs[i] = a_hi * w_lo - a_lo * w_hi;
  }
  A.row(m - 1).setOnes();
  rhs[m - 1] = Scalar(1);
  return {std::move(A), std::move(rhs)};
}

/// Solves the system from build_linear_system. Throws InternalInconsistency
/// if the matrix is numerically rank deficient.
template <typename Scalar>
Eigen::VectorX<Scalar> solve_linear_system(const Eigen::MatrixX<Scalar>& A,
                                           const Eigen::VectorX<Scalar>& rhs) {
  Eigen::FullPivLU<Eigen::MatrixX<Scalar>> lu(A);
  if (lu.rank() != A.rows())
    throw InternalInconsistency("prefix linear system is rank deficient");
  return lu.solve(rhs);
}

/// Checks the optimality conditions for `strat`.
///
/// mu_hat is the largest slope on the support. The spread is mu_hat minus
/// the smallest slope on the support, the excess is the largest slope at 0
/// off the support above mu_hat (clamped at 0). Both are divided by mu_hat
/// when mu_hat > 1.
template <typename Scalar>
KktCertificate<Scalar> verify_kkt(const BasicInstance<Scalar>& inst,
                                  const BasicStrategy<Scalar>& strat,
                                  Scalar tol = Scalar(kDefaultKktTolerance)) {
  if (strat.size() != inst.size())
    throw LengthMismatch(inst.size(), strat.size());

  Scalar hi = -std::numeric_limits<Scalar>::infinity();
  Scalar lo = std::numeric_limits<Scalar>::infinity();
  Scalar off = -std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const Scalar d = b_prime(inst.rate(i), inst.steal(i), strat[i]);
    if (strat.in_support(i)) {
      hi = std::max(hi, d);
      lo = std::min(lo, d);
    } else {
      off = std::max(off, d);
    }
  }

  KktCertificate<Scalar> cert;
  cert.tolerance = tol;
  const Scalar scale = hi > Scalar(1) ? hi : Scalar(1);
  cert.max_derivative_spread_on_support = (hi - lo) / scale;
  cert.max_off_support_excess = std::max(Scalar(0), off - hi) / scale;
  return cert;
}

/// The unique optimal strategy of `inst`.
template <typename Scalar>
BasicSolveReport<Scalar> solve_optimal(const BasicInstance<Scalar>& inst,
                                       Scalar kkt_tol =
                                           Scalar(kDefaultKktTolerance)) {
  const auto ord = order_by_chi(inst);
  const std::size_t n = ord.size();

  detail::PrefixSums<Scalar> sums;
  sums.add(ord.ranked(0));
  std::size_t ell = 1;
  // Grow while the next cactus' slope at zero strictly beats the level.
  while (ell < n && ord.chi[ell] > sums.mu()) {
    sums.add(ord.ranked(ell));
    ++ell;
  }

  auto level = detail::level_for_prefix(ord, ell, sums);
  auto& q = level.prefix_probs;
  if (q.minCoeff() < Scalar(0)) {
    if (q.minCoeff() < -Scalar(kNegativeClamp))
      throw InternalInconsistency("negative probability on a solid prefix");
    q = q.cwiseMax(Scalar(0));
    q /= q.sum();
  }

  Eigen::VectorX<Scalar> full =
      Eigen::VectorX<Scalar>::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < ell; ++j)
    full[static_cast<Eigen::Index>(ord.perm[j])] =
        q[static_cast<Eigen::Index>(j)];

  BasicSolveReport<Scalar> report{
      BasicStrategy<Scalar>(std::move(full)), ell, level.mu, Scalar(0),
      ord.perm, {}};
  report.support_size = report.strategy.support().size();
  report.value = total_rate(inst, report.strategy);
  report.kkt = verify_kkt(inst, report.strategy, kkt_tol);
  return report;
}

}  // namespace hbat
