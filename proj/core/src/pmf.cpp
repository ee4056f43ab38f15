#include "dlas/pmf.hpp"

#include <algorithm>
#include <cmath>

namespace dlas {

Pmf Pmf::from_entries(std::vector<std::pair<long long, Rational>> entries) {
    if (entries.empty()) throw ConfigError("pmf needs at least one entry");
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Pmf p;
    Rational sum = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i > 0 && entries[i].first == entries[i - 1].first)
            throw ConfigError("duplicate pmf support value");
        if (entries[i].second <= 0)
            throw ConfigError("pmf weights must be positive");
        p.values_.push_back(entries[i].first);
        p.probs_.push_back(entries[i].second);
        sum += entries[i].second;
    }
    if (sum != 1) throw ConfigError("pmf weights must sum to 1, got " + rational_to_string(sum));
    double acc = 0.0;
    for (const auto& q : p.probs_) {
        acc += to_double(q);
        p.cdf_.push_back(acc);
    }
    p.cdf_.back() = 1.0;
    return p;
}

Pmf Pmf::delta(long long v) {
    return from_entries({{v, Rational(1)}});
}

Rational Pmf::mean() const {
    Rational m = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) m += Rational(values_[i]) * probs_[i];
    return m;
}

Rational Pmf::prob_of(long long v) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), v);
    if (it == values_.end() || *it != v) return 0;
    return probs_[static_cast<std::size_t>(it - values_.begin())];
}

long long Pmf::sample(double u) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return values_[static_cast<std::size_t>(it - cdf_.begin())];
}

} // namespace dlas
