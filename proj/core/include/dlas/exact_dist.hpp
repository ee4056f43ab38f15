#pragma once

#include <functional>
#include <vector>

#include "dlas/exact.hpp"

namespace dlas {

/// Finitely supported law on integers with exact rational masses. Laws with
/// unbounded support (extinction-time statistics) carry an explicit
/// enumeration cap and the exactly-computed mass beyond it.
struct ExactDistribution {
    std::vector<long long> values; // sorted, unique
    std::vector<Rational> probs;
    Rational overflow{0};  // mass of outcomes beyond the cap
    long long cap = -1;    // meaningful when overflow > 0

    void add(long long v, const Rational& p);
    void finalize(); // sort, merge duplicates, drop zeros, check total <= 1

    Rational total() const;
    bool normalized() const { return total() + overflow == 1; }
    Rational prob_of(long long v) const;
    /// P(X >= a); requires overflow-free or a <= cap (tail counts as >= a).
    Rational prob_geq(long long a) const;
    /// E max(X - a, 0); requires overflow == 0.
    Rational stop_loss(const Rational& a) const;
    Rational mean() const; // requires overflow == 0
    Rational expect(const std::function<Rational(long long)>& phi) const;

    bool operator==(const ExactDistribution& other) const;
};

} // namespace dlas
