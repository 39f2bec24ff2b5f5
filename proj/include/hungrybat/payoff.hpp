#pragma once

// Closed-form single-cactus quantities. All functions are templated on the
// scalar type so they can be evaluated in long double for cross-checks.

#include <cmath>
#include <cstdint>

#include "hungrybat/errors.hpp"

namespace hbat {

namespace detail {

template <typename Scalar>
void require_cactus(Scalar r, Scalar s) {
  if (!(std::isfinite(r) && r > Scalar(0)))
    throw DomainError("rate r must be finite and > 0");
  if (!(std::isfinite(s) && s > Scalar(0) && s < Scalar(1)))
    throw DomainError("stealing probability s must lie in (0, 1)");
}

template <typename Scalar>
void require_probability(Scalar p) {
  if (!(p >= Scalar(0) && p <= Scalar(1)))
    throw DomainError("visit probability p must lie in [0, 1]");
}

}  // namespace detail

/// Odds of a steal, s / (1 - s). Shows up in every closed form below.
template <typename Scalar>
Scalar steal_odds(Scalar s) {
  return s / (Scalar(1) - s);
}

/// Expected nectar held by a cactus that is never visited, r(1-s)/s.
/// Equal to the payoff slope at p = 0, so it orders the cacti.
template <typename Scalar>
Scalar chi(Scalar r, Scalar s) {
  detail::require_cactus(r, s);
  return r * (Scalar(1) - s) / s;
}

/// Expected amount collected on a visit that follows the previous visit by
/// x rounds: ((1-s)/s)(1 - (1-s)^x) r.
template <typename Scalar>
Scalar gap_expected_amount(Scalar r, Scalar s, std::int64_t x) {
  detail::require_cactus(r, s);
  if (x < 1) throw DomainError("gap length x must be >= 1");
  const Scalar survive = Scalar(1) - s;
  // 1 - (1-s)^x via expm1/log1p keeps precision for small s.
  const Scalar filled = -std::expm1(Scalar(x) * std::log1p(-s));
  return survive / s * filled * r;
}

/// Probability that the visit gap straddling a fixed round has length x
/// when visits are Bernoulli(p): x p^2 (1-p)^(x-1).
template <typename Scalar>
Scalar gap_pmf(Scalar p, std::int64_t x) {
  if (!(p > Scalar(0) && p <= Scalar(1)))
    throw DomainError("gap pmf needs visit probability p in (0, 1]");
  if (x < 1) throw DomainError("gap length x must be >= 1");
  if (p == Scalar(1)) return x == 1 ? Scalar(1) : Scalar(0);
  return Scalar(x) * p * p * std::pow(Scalar(1) - p, Scalar(x - 1));
}

/// Expected per-round collection from one cactus visited w.p. p:
/// r p / (p + s/(1-s)). Concave and increasing in p.
template <typename Scalar>
Scalar b(Scalar r, Scalar s, Scalar p) {
  detail::require_cactus(r, s);
  detail::require_probability(p);
  return r * p / (p + steal_odds(s));
}

/// d b / d p = r a / (p + a)^2 with a = s/(1-s).
template <typename Scalar>
Scalar b_prime(Scalar r, Scalar s, Scalar p) {
  detail::require_cactus(r, s);
  detail::require_probability(p);
  if (p == Scalar(0)) return chi(r, s);
  const Scalar a = steal_odds(s);
  const Scalar d = p + a;
  return r * a / (d * d);
}

/// d^2 b / d p^2 = -2 r a / (p + a)^3.
template <typename Scalar>
Scalar b_second(Scalar r, Scalar s, Scalar p) {
  detail::require_cactus(r, s);
  detail::require_probability(p);
  const Scalar a = steal_odds(s);
  const Scalar d = p + a;
  return Scalar(-2) * r * a / (d * d * d);
}

}  // namespace hbat
