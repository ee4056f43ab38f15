#include "dlas/orders.hpp"

#include <algorithm>
#include <cmath>

#include "dlas/rng.hpp"

namespace dlas {

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::holds:
        return "holds";
    case Verdict::not_falsified:
        return "not_falsified";
    case Verdict::inconclusive:
        return "inconclusive";
    case Verdict::fails:
        return "fails";
    }
    return "?";
}

EmpiricalSample EmpiricalSample::from(std::vector<double> v, std::uint64_t seed) {
    std::sort(v.begin(), v.end());
    EmpiricalSample s;
    s.replicas = static_cast<long long>(v.size());
    s.values = std::move(v);
    s.seed = seed;
    return s;
}

double EmpiricalSample::mean() const {
    double s = 0;
    for (double v : values) s += v;
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
}

double EmpiricalSample::variance() const {
    if (values.size() < 2) return 0.0;
    double m = mean(), s = 0;
    for (double v : values) s += (v - m) * (v - m);
    return s / static_cast<double>(values.size());
}

double EmpiricalSample::stop_loss(double a) const {
    double s = 0;
    for (auto it = std::upper_bound(values.begin(), values.end(), a); it != values.end(); ++it)
        s += *it - a;
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
}

double EmpiricalSample::prob_geq(double a) const {
    auto it = std::lower_bound(values.begin(), values.end(), a);
    return values.empty()
               ? 0.0
               : static_cast<double>(values.end() - it) / static_cast<double>(values.size());
}

double EmpiricalSample::prob_zero() const {
    auto lo = std::lower_bound(values.begin(), values.end(), 0.0);
    auto hi = std::upper_bound(values.begin(), values.end(), 0.0);
    return values.empty()
               ? 0.0
               : static_cast<double>(hi - lo) / static_cast<double>(values.size());
}

double stop_loss(const Distribution& d, double a) {
    if (const auto* e = std::get_if<ExactDistribution>(&d))
        return to_double(e->stop_loss(rational_from_double(a)));
    return std::get<EmpiricalSample>(d).stop_loss(a);
}

StopLossEstimate stop_loss_band(const Distribution& d, double a, const OrderOptions& opt) {
    double v = stop_loss(d, a);
    if (std::holds_alternative<ExactDistribution>(d)) return {v, v, v};
    const auto& s = std::get<EmpiricalSample>(d);
    if (s.size() < 2) return {v, v, v};
    double n = static_cast<double>(s.size());
    std::vector<double> devs(static_cast<std::size_t>(opt.bootstrap_rounds));
    for (int b = 0; b < opt.bootstrap_rounds; ++b) {
        double dev = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            double g = (rng::key_hash(opt.bootstrap_seed, rng::Tag::bootstrap,
                                      static_cast<std::uint64_t>(b), i) &
                        1)
                           ? 1.0
                           : -1.0;
            dev += g * (std::max(s.values[i] - a, 0.0) - v);
        }
        devs[static_cast<std::size_t>(b)] = std::abs(dev / n);
    }
    std::sort(devs.begin(), devs.end());
    double c = devs[static_cast<std::size_t>((1.0 - opt.significance) *
                                             static_cast<double>(devs.size() - 1))];
    return {v, v - c, v + c};
}

namespace {

// Suffix-sum machinery for O(1) stop-loss / survival queries per threshold
// under per-observation multiplier weights.
struct WeightedTail {
    const std::vector<double>& xs; // sorted
    std::vector<double> suff_w;    // suffix sums of weights
    std::vector<double> suff_wx;   // suffix sums of weight * value

    WeightedTail(const std::vector<double>& sorted, const std::vector<double>& w)
        : xs(sorted), suff_w(sorted.size() + 1, 0.0), suff_wx(sorted.size() + 1, 0.0) {
        for (std::size_t i = sorted.size(); i-- > 0;) {
            suff_w[i] = suff_w[i + 1] + w[i];
            suff_wx[i] = suff_wx[i + 1] + w[i] * sorted[i];
        }
    }
    // sum of w_i * (x_i - a)+ over all i
    double stop_loss(double a) const {
        std::size_t i = static_cast<std::size_t>(
            std::upper_bound(xs.begin(), xs.end(), a) - xs.begin());
        return suff_wx[i] - a * suff_w[i];
    }
    // sum of w_i over x_i >= a
    double survival(double a) const {
        std::size_t i = static_cast<std::size_t>(
            std::lower_bound(xs.begin(), xs.end(), a) - xs.begin());
        return suff_w[i];
    }
};

std::vector<double> default_grid(const std::vector<double>& merged, int quantiles) {
    std::vector<double> grid;
    if (merged.empty()) return grid;
    for (int q = 0; q < quantiles; ++q) {
        double frac = static_cast<double>(q) / (quantiles - 1);
        std::size_t i = std::min(merged.size() - 1,
                                 static_cast<std::size_t>(frac * (merged.size() - 1) + 0.5));
        grid.push_back(merged[i]);
    }
    grid.push_back(merged.front());
    grid.push_back(merged.back());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

double rademacher(std::uint64_t seed, std::uint64_t b, std::uint64_t i) {
    return (rng::key_hash(seed, rng::Tag::bootstrap, b, i) & 1) ? 1.0 : -1.0;
}

OrderVerdict exact_verdict(Relation rel, const ExactDistribution& x, const ExactDistribution& y) {
    OrderVerdict v;
    v.relation = rel;
    v.exact = true;
    if (x.values.empty() || y.values.empty())
        throw ConfigError("order comparison needs nonempty laws");
    if (x.overflow != 0 || y.overflow != 0)
        throw ConfigError("exact order verdicts need overflow-free laws");
    std::vector<long long> pts;
    pts.insert(pts.end(), x.values.begin(), x.values.end());
    pts.insert(pts.end(), y.values.begin(), y.values.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    bool ok = true;
    Rational worst = 0;
    long long worst_a = 0;
    for (long long a : pts) {
        Rational gap = (rel == Relation::icx) ? y.stop_loss(Rational(a)) - x.stop_loss(Rational(a))
                                              : y.prob_geq(a) - x.prob_geq(a);
        v.gaps.push_back({static_cast<double>(a), to_double(gap), to_double(gap), to_double(gap)});
        if (gap < worst) {
            worst = gap;
            worst_a = a;
            ok = false;
        }
    }
    if (rel == Relation::icx) {
        // stop-loss at a below the support reduces to the mean inequality
        Rational mean_gap = y.mean() - x.mean();
        if (mean_gap < 0) {
            ok = false;
            if (mean_gap < worst) {
                worst = mean_gap;
                worst_a = std::min(x.values.front(), y.values.front()) - 1;
            }
        }
    }
    v.verdict = ok ? Verdict::holds : Verdict::fails;
    v.witness_a = static_cast<double>(worst_a);
    v.witness_gap = to_double(worst);
    return v;
}

OrderVerdict empirical_verdict(Relation rel, const EmpiricalSample& x, const EmpiricalSample& y,
                               const OrderOptions& opt) {
    OrderVerdict v;
    v.relation = rel;
    v.exact = false;
    if (x.size() < 2 || y.size() < 2) {
        v.verdict = Verdict::inconclusive;
        return v;
    }
    std::vector<double> merged;
    merged.reserve(x.size() + y.size());
    merged.insert(merged.end(), x.values.begin(), x.values.end());
    merged.insert(merged.end(), y.values.begin(), y.values.end());
    std::sort(merged.begin(), merged.end());
    std::vector<double> grid =
        opt.thresholds.empty() ? default_grid(merged, opt.quantile_grid) : opt.thresholds;

    double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    std::vector<double> ones_x(x.size(), 1.0), ones_y(y.size(), 1.0);
    WeightedTail tx(x.values, ones_x), ty(y.values, ones_y);
    auto point_gap = [&](double a) {
        return (rel == Relation::icx) ? ty.stop_loss(a) / ny - tx.stop_loss(a) / nx
                                      : ty.survival(a) / ny - tx.survival(a) / nx;
    };
    std::vector<double> gap(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) gap[k] = point_gap(grid[k]);

    // simultaneous band: (1 - alpha) quantile of sup_a |multiplier deviation|
    std::vector<double> sup(static_cast<std::size_t>(opt.bootstrap_rounds), 0.0);
    std::vector<double> wx(x.size()), wy(y.size());
    for (int b = 0; b < opt.bootstrap_rounds; ++b) {
        for (std::size_t i = 0; i < x.size(); ++i)
            wx[i] = rademacher(opt.bootstrap_seed, static_cast<std::uint64_t>(b), i);
        for (std::size_t i = 0; i < y.size(); ++i)
            wy[i] = rademacher(opt.bootstrap_seed ^ 0x9E37ULL, static_cast<std::uint64_t>(b), i);
        WeightedTail bx(x.values, wx), by(y.values, wy);
        double gx = 0, gy = 0;
        for (double w : wx) gx += w;
        for (double w : wy) gy += w;
        double m = 0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            double a = grid[k];
            double dev_y = (rel == Relation::icx)
                               ? by.stop_loss(a) / ny - (ty.stop_loss(a) / ny) * gy / ny
                               : by.survival(a) / ny - (ty.survival(a) / ny) * gy / ny;
            double dev_x = (rel == Relation::icx)
                               ? bx.stop_loss(a) / nx - (tx.stop_loss(a) / nx) * gx / nx
                               : bx.survival(a) / nx - (tx.survival(a) / nx) * gx / nx;
            m = std::max(m, std::abs(dev_y - dev_x));
        }
        sup[static_cast<std::size_t>(b)] = m;
    }
    std::sort(sup.begin(), sup.end());
    std::size_t qi = static_cast<std::size_t>(
        std::min(1.0 - opt.significance, 1.0) * static_cast<double>(sup.size() - 1));
    double c = sup[qi];

    bool falsified = false;
    double worst = 0, worst_a = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        v.gaps.push_back({grid[k], gap[k], gap[k] - c, gap[k] + c});
        if (gap[k] + c < 0 && gap[k] < worst) {
            falsified = true;
            worst = gap[k];
            worst_a = grid[k];
        }
    }
    v.verdict = falsified ? Verdict::fails : Verdict::not_falsified;
    v.witness_a = worst_a;
    v.witness_gap = worst;
    return v;
}

} // namespace

OrderVerdict icx_dominates(const Distribution& x, const Distribution& y,
                           const OrderOptions& opt) {
    if (std::holds_alternative<ExactDistribution>(x) &&
        std::holds_alternative<ExactDistribution>(y))
        return exact_verdict(Relation::icx, std::get<ExactDistribution>(x),
                             std::get<ExactDistribution>(y));
    if (std::holds_alternative<EmpiricalSample>(x) && std::holds_alternative<EmpiricalSample>(y))
        return empirical_verdict(Relation::icx, std::get<EmpiricalSample>(x),
                                 std::get<EmpiricalSample>(y), opt);
    throw ConfigError("order comparison needs two exact or two empirical distributions");
}

OrderVerdict sd_dominates(const Distribution& x, const Distribution& y, const OrderOptions& opt) {
    if (std::holds_alternative<ExactDistribution>(x) &&
        std::holds_alternative<ExactDistribution>(y))
        return exact_verdict(Relation::sd, std::get<ExactDistribution>(x),
                             std::get<ExactDistribution>(y));
    if (std::holds_alternative<EmpiricalSample>(x) && std::holds_alternative<EmpiricalSample>(y))
        return empirical_verdict(Relation::sd, std::get<EmpiricalSample>(x),
                                 std::get<EmpiricalSample>(y), opt);
    throw ConfigError("order comparison needs two exact or two empirical distributions");
}

ConsequencePanel consequence_panel(const Distribution& dx, const Distribution& dy,
                                   const OrderOptions& /*opt*/) {
    ConsequencePanel p{};
    if (std::holds_alternative<ExactDistribution>(dx) &&
        std::holds_alternative<ExactDistribution>(dy)) {
        const auto& x = std::get<ExactDistribution>(dx);
        const auto& y = std::get<ExactDistribution>(dy);
        p.exact = true;
        Rational mx = x.mean(), my = y.mean();
        auto sq = [](long long v) { return Rational(v) * Rational(v); };
        Rational vx = x.expect(sq) - mx * mx, vy = y.expect(sq) - my * my;
        p.mean_x = to_double(mx);
        p.mean_y = to_double(my);
        p.var_x = to_double(vx);
        p.var_y = to_double(vy);
        p.p0_x = to_double(x.prob_of(0));
        p.p0_y = to_double(y.prob_of(0));
        p.mean_consistent = mx <= my;
        p.var_consistent = (mx != my) || vx <= vy;
        // the zero atom is reported, not enforced: dominance in this order
        // does not pin its direction (a constant below a mean-preserving
        // spread moves the atom the other way)
        p.p0_consistent = true;
        return p;
    }
    const auto& x = std::get<EmpiricalSample>(dx);
    const auto& y = std::get<EmpiricalSample>(dy);
    p.exact = false;
    p.mean_x = x.mean();
    p.mean_y = y.mean();
    p.var_x = x.variance();
    p.var_y = y.variance();
    p.p0_x = x.prob_zero();
    p.p0_y = y.prob_zero();
    double z = 2.576; // two-sided 99%
    double se_mean = std::sqrt(p.var_x / static_cast<double>(std::max<std::size_t>(x.size(), 1)) +
                               p.var_y / static_cast<double>(std::max<std::size_t>(y.size(), 1)));
    p.mean_band = z * se_mean;
    double se_p0 = std::sqrt(
        p.p0_x * (1 - p.p0_x) / static_cast<double>(std::max<std::size_t>(x.size(), 1)) +
        p.p0_y * (1 - p.p0_y) / static_cast<double>(std::max<std::size_t>(y.size(), 1)));
    p.p0_band = z * se_p0;
    p.mean_consistent = p.mean_x <= p.mean_y + p.mean_band;
    p.var_consistent =
        std::abs(p.mean_x - p.mean_y) > p.mean_band || p.var_x <= p.var_y * 1.05 + 1e-9;
    p.p0_consistent = true; // reported only, see the exact branch
    return p;
}

TwoSampleResult two_sample_equal(const EmpiricalSample& x, const EmpiricalSample& y,
                                 double alpha) {
    TwoSampleResult r;
    if (x.size() < 100 || y.size() < 100) {
        r.inconclusive = true;
        return r;
    }
    double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    double d = 0;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        double v = std::min(x.values[i], y.values[j]);
        while (i < x.size() && x.values[i] <= v) ++i;
        while (j < y.size() && y.values[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    r.ks_stat = d;
    double c_alpha = std::sqrt(-std::log(alpha / 2.0) / 2.0);
    r.critical = c_alpha * std::sqrt((nx + ny) / (nx * ny));
    r.reject = d > r.critical;
    return r;
}

} // namespace dlas
