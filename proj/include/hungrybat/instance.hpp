#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hungrybat/errors.hpp"
#include "hungrybat/payoff.hpp"

namespace hbat {

template <typename Scalar>
struct Cactus {
  Scalar r;  // nectar added per round
  Scalar s;  // per-round stealing probability
};

/// A validated hungry-bat instance. Immutable after construction; the only
/// way to obtain one is validate_instance().
template <typename Scalar>
class BasicInstance {
 public:
  using scalar_type = Scalar;

  std::size_t size() const { return cacti_.size(); }
  const Cactus<Scalar>& operator[](std::size_t i) const { return cacti_[i]; }
  std::span<const Cactus<Scalar>> cacti() const { return cacti_; }

  Scalar rate(std::size_t i) const { return cacti_[i].r; }
  Scalar steal(std::size_t i) const { return cacti_[i].s; }

  /// min_i s_i
  Scalar min_steal() const {
    Scalar m = cacti_.front().s;
    for (const auto& c : cacti_) m = std::min(m, c.s);
    return m;
  }

  Eigen::VectorX<Scalar> rates() const {
    Eigen::VectorX<Scalar> v(size());
    for (std::size_t i = 0; i < size(); ++i) v[i] = cacti_[i].r;
    return v;
  }

  Eigen::VectorX<Scalar> steal_probs() const {
    Eigen::VectorX<Scalar> v(size());
    for (std::size_t i = 0; i < size(); ++i) v[i] = cacti_[i].s;
    return v;
  }

  /// Sub-instance made of the given (0-based) cacti, in the given order.
  BasicInstance subset(std::span<const std::size_t> indices) const {
    std::vector<Cactus<Scalar>> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(cacti_.at(i));
    return BasicInstance(std::move(out));
  }

  friend bool operator==(const BasicInstance& a, const BasicInstance& b) {
    return std::equal(a.cacti_.begin(), a.cacti_.end(), b.cacti_.begin(),
                      b.cacti_.end(), [](const auto& x, const auto& y) {
                        return x.r == y.r && x.s == y.s;
                      });
  }

  template <typename S>
  friend BasicInstance<S> validate_instance(std::vector<Cactus<S>> raw);

 private:
  explicit BasicInstance(std::vector<Cactus<Scalar>> cacti)
      : cacti_(std::move(cacti)) {}

  std::vector<Cactus<Scalar>> cacti_;
};

using Instance = BasicInstance<double>;

/// Checks parameter ranges and wraps the cacti, preserving input order.
/// Errors carry the 1-based index of the first offending cactus.
template <typename Scalar>
BasicInstance<Scalar> validate_instance(std::vector<Cactus<Scalar>> raw) {
  if (raw.empty()) throw EmptyInstance();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& c = raw[i];
    if (!(std::isfinite(c.r) && c.r > Scalar(0))) throw InvalidRate(i + 1);
    if (!(std::isfinite(c.s) && c.s > Scalar(0) && c.s < Scalar(1)))
      throw InvalidStealProb(i + 1);
  }
  return BasicInstance<Scalar>(std::move(raw));
}

inline Instance validate_instance(
    std::initializer_list<std::pair<double, double>> raw) {
  std::vector<Cactus<double>> cacti;
  for (auto [r, s] : raw) cacti.push_back({r, s});
  return validate_instance(std::move(cacti));
}

/// An instance together with its chi-descending order.
///
/// perm[j] is the 0-based original index of the cactus at rank j, and
/// chi[j] is that cactus' chi. Ties keep ascending original index.
template <typename Scalar>
struct BasicOrderedInstance {
  BasicInstance<Scalar> base;
  std::vector<std::size_t> perm;
  std::vector<Scalar> chi;

  std::size_t size() const { return perm.size(); }
  const Cactus<Scalar>& ranked(std::size_t j) const { return base[perm[j]]; }

  /// inverse[i] is the rank of original cactus i.
  std::vector<std::size_t> inverse() const {
    std::vector<std::size_t> inv(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) inv[perm[j]] = j;
    return inv;
  }
};

using OrderedInstance = BasicOrderedInstance<double>;

template <typename Scalar>
BasicOrderedInstance<Scalar> order_by_chi(const BasicInstance<Scalar>& inst) {
  const std::size_t n = inst.size();
  std::vector<Scalar> raw_chi(n);
  for (std::size_t i = 0; i < n; ++i)
    raw_chi[i] = hbat::chi(inst.rate(i), inst.steal(i));

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return raw_chi[a] > raw_chi[b];
  });

  std::vector<Scalar> sorted(n);
  for (std::size_t j = 0; j < n; ++j) sorted[j] = raw_chi[perm[j]];
  return {inst, std::move(perm), std::move(sorted)};
}

}  // namespace hbat
