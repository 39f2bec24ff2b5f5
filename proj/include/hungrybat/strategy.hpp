#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hungrybat/errors.hpp"
#include "hungrybat/instance.hpp"
#include "hungrybat/payoff.hpp"

namespace hbat {

/// A purely-stochastic strategy: visit cactus i with probability p_i in
/// every round, independently across rounds.
template <typename Scalar>
class BasicStrategy {
 public:
  using Vector = Eigen::VectorX<Scalar>;

  /// Default tolerance on |sum(p) - 1| for externally supplied vectors.
  static constexpr double kSumTolerance = 1e-12;

  BasicStrategy() = default;

  /// Validates entries in [0, 1] and sum within `tol` of one.
  explicit BasicStrategy(Vector probs, double tol = kSumTolerance)
      : probs_(std::move(probs)) {
    if (probs_.size() == 0) throw DomainError("strategy is empty");
    for (Eigen::Index i = 0; i < probs_.size(); ++i) {
      const Scalar p = probs_[i];
      if (!(p >= Scalar(0) && p <= Scalar(1)))
        throw DomainError("strategy entry " + std::to_string(i + 1) +
                          " is not a probability");
    }
    const Scalar total = probs_.sum();
    if (!(std::abs(total - Scalar(1)) <= Scalar(tol)))
      throw DomainError("strategy probabilities do not sum to 1");
  }

  /// All mass on cactus `index` (0-based).
  static BasicStrategy point_mass(std::size_t n, std::size_t index) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
    v[static_cast<Eigen::Index>(index)] = Scalar(1);
    return BasicStrategy(std::move(v));
  }

  static BasicStrategy uniform(std::size_t n) {
    return BasicStrategy(
        Vector::Constant(static_cast<Eigen::Index>(n), Scalar(1) / Scalar(n)));
  }

  std::size_t size() const { return static_cast<std::size_t>(probs_.size()); }
  Scalar operator[](std::size_t i) const {
    return probs_[static_cast<Eigen::Index>(i)];
  }
  const Vector& probs() const { return probs_; }

  /// 0-based indices with p_i > 0, ascending.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (Eigen::Index i = 0; i < probs_.size(); ++i)
      if (probs_[i] > Scalar(0)) out.push_back(static_cast<std::size_t>(i));
    return out;
  }

  bool in_support(std::size_t i) const { return (*this)[i] > Scalar(0); }

 private:
  Vector probs_;
};

using Strategy = BasicStrategy<double>;

/// Expected per-round collection of the whole instance: sum_i b_i(p_i).
template <typename Scalar>
Scalar total_rate(const BasicInstance<Scalar>& inst,
                  const BasicStrategy<Scalar>& strat) {
  if (strat.size() != inst.size())
    throw LengthMismatch(inst.size(), strat.size());
  Scalar total(0);
  for (std::size_t i = 0; i < inst.size(); ++i)
    total += b(inst.rate(i), inst.steal(i), strat[i]);
  return total;
}

}  // namespace hbat
