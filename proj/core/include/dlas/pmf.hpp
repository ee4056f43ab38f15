#pragma once

#include <cstdint>
#include <vector>

#include "dlas/exact.hpp"

namespace dlas {

/// Finite probability mass function on signed integers with exact rational
/// weights. All sampling is counter-based: a pmf draw consumes one uniform.
class Pmf {
public:
    Pmf() = default;

    /// Entries need not be sorted; values must be unique, weights positive
    /// and summing to exactly 1.
    static Pmf from_entries(std::vector<std::pair<long long, Rational>> entries);

    static Pmf delta(long long v);

    const std::vector<long long>& values() const { return values_; }
    const std::vector<Rational>& probs() const { return probs_; }
    std::size_t size() const { return values_.size(); }

    Rational mean() const;
    Rational prob_of(long long v) const;
    long long min_value() const { return values_.front(); }
    long long max_value() const { return values_.back(); }

    /// Inverse-CDF draw from a uniform in [0,1).
    long long sample(double u) const;

private:
    std::vector<long long> values_;   // sorted
    std::vector<Rational> probs_;
    std::vector<double> cdf_;         // cumulative, cdf_.back() == 1
};

} // namespace dlas
